"""C4.5-style decision tree: induction, pessimistic pruning, prediction,
and stratified k-fold cross-validation with confusion accounting.

All features are numeric; every split is binary on a midpoint threshold
(left branch takes values <= threshold). Pruning is bottom-up subtree
replacement using the exact binomial upper confidence bound on the leaf
error rate. All randomness flows through the caller-supplied seed.
"""

import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field

from .dataset import Dataset
from .errors import EvaluationError
from .featsel import entropy
from .metrics import METRIC_NAMES

_GAIN_EPS = 1e-12


@dataclass
class TreeNode:
    # Leaf: label set, children None. Internal: metric_id/threshold set.
    label: str | None = None
    metric_id: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    training_counts: Counter = field(default_factory=Counter)

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def node_count(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + self.left.node_count() + self.right.node_count()


@dataclass
class TrainParams:
    min_leaf_instances: int = 2
    confidence_factor: float = 0.25
    seed: int = 0


@dataclass
class EvaluationReport:
    dataset_id: str
    accuracy: float  # percentage
    per_class: dict[str, tuple[int, int]]  # label -> (correct, incorrect)
    folds: list[list[str]]  # build_ids per test fold
    k: int
    requested_k: int
    seed: int
    tree: TreeNode | None = None

    @property
    def accuracy_text(self) -> str:
        return f"{self.accuracy:.4f}%"


def accuracy_percent(correct: int, total: int) -> float:
    return 100.0 * correct / total


def _majority(counts: Counter, global_counts: Counter) -> str:
    """Majority label; ties go to the globally more frequent class, then
    to 'failed'."""
    best = max(counts.values())
    tied = [label for label, c in counts.items() if c == best]
    if len(tied) == 1:
        return tied[0]
    gbest = max(global_counts.get(label, 0) for label in tied)
    gtied = [label for label in tied if global_counts.get(label, 0) == gbest]
    if len(gtied) == 1:
        return gtied[0]
    return "failed" if "failed" in gtied else sorted(gtied)[0]


def _leaf(counts: Counter, global_counts: Counter) -> TreeNode:
    return TreeNode(label=_majority(counts, global_counts), training_counts=Counter(counts))


def _best_split_for_feature(values, labels, min_leaf):
    """Best (gain, threshold, split_info) for one feature, or None."""
    n = len(labels)
    order = sorted(range(n), key=lambda i: values[i])
    h_total = entropy(labels)
    best = None
    left_counts: Counter = Counter()
    right_counts = Counter(labels)
    for pos in range(1, n):
        i = order[pos - 1]
        left_counts[labels[i]] += 1
        right_counts[labels[i]] -= 1
        if right_counts[labels[i]] == 0:
            del right_counts[labels[i]]
        v_prev = values[order[pos - 1]]
        v_next = values[order[pos]]
        if v_prev == v_next:
            continue
        if pos < min_leaf or n - pos < min_leaf:
            continue
        h_left = -sum((c / pos) * math.log2(c / pos) for c in left_counts.values())
        h_right = -sum(
            (c / (n - pos)) * math.log2(c / (n - pos)) for c in right_counts.values()
        )
        gain = h_total - (pos / n) * h_left - ((n - pos) / n) * h_right
        if gain <= _GAIN_EPS:
            continue
        split_info = -(pos / n) * math.log2(pos / n) - ((n - pos) / n) * math.log2(
            (n - pos) / n
        )
        threshold = (v_prev + v_next) / 2.0
        if best is None or gain > best[0] + _GAIN_EPS:
            best = (gain, threshold, split_info)
    return best


def train(dataset: Dataset, params: TrainParams | None = None) -> TreeNode:
    """Grow an unpruned tree by gain ratio over binary numeric splits.

    At each node the best split per feature is found by information gain;
    among features whose gain reaches the mean positive gain, the one with
    the highest gain ratio wins (ties: ascending metric ID).
    """
    params = params or TrainParams()
    labels = dataset.labels()
    if not labels:
        raise EvaluationError("cannot train on an empty dataset")
    global_counts = Counter(labels)
    columns = {mid: dataset.column(mid) for mid in dataset.feature_ids}

    def grow(indices: list[int]) -> TreeNode:
        node_labels = [labels[i] for i in indices]
        counts = Counter(node_labels)
        if len(counts) == 1 or len(indices) < 2 * params.min_leaf_instances:
            return _leaf(counts, global_counts)
        candidates = []
        for mid in dataset.feature_ids:
            vals = [columns[mid][i] for i in indices]
            best = _best_split_for_feature(vals, node_labels, params.min_leaf_instances)
            if best is not None:
                candidates.append((mid,) + best)
        if not candidates:
            return _leaf(counts, global_counts)
        mean_gain = sum(c[1] for c in candidates) / len(candidates)
        eligible = [c for c in candidates if c[1] >= mean_gain - _GAIN_EPS]
        eligible.sort(key=lambda c: (-(c[1] / c[3]), c[0]))
        mid, gain, threshold, _ = eligible[0]
        left_idx = [i for i in indices if columns[mid][i] <= threshold]
        right_idx = [i for i in indices if columns[mid][i] > threshold]
        node = TreeNode(
            metric_id=mid,
            threshold=threshold,
            left=grow(left_idx),
            right=grow(right_idx),
            training_counts=Counter(counts),
        )
        return node

    return grow(list(range(len(labels))))


def _binomial_upper_bound(errors: int, n: int, cf: float) -> float:
    """Upper confidence limit on the error rate: the p with
    P(Binomial(n, p) <= errors) = cf, found by bisection."""
    if n == 0:
        return 1.0
    if errors >= n:
        return 1.0

    def cdf(p: float) -> float:
        q = 1.0 - p
        total = 0.0
        for i in range(errors + 1):
            total += math.comb(n, i) * (p**i) * (q ** (n - i))
        return total

    lo, hi = errors / n, 1.0
    for _ in range(100):
        mid = (lo + hi) / 2.0
        if cdf(mid) > cf:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _pessimistic_errors(counts: Counter, cf: float) -> float:
    n = sum(counts.values())
    errors = n - max(counts.values()) if counts else 0
    return n * _binomial_upper_bound(errors, n, cf)


def _subtree_error_estimate(node: TreeNode, cf: float) -> float:
    if node.is_leaf:
        return _pessimistic_errors(node.training_counts, cf)
    return _subtree_error_estimate(node.left, cf) + _subtree_error_estimate(node.right, cf)


def prune(tree: TreeNode, confidence_factor: float = 0.25) -> TreeNode:
    """Bottom-up subtree replacement by a majority leaf whenever the leaf's
    pessimistic error estimate does not exceed the subtree's."""
    if tree.is_leaf:
        return tree
    tree.left = prune(tree.left, confidence_factor)
    tree.right = prune(tree.right, confidence_factor)
    leaf_estimate = _pessimistic_errors(tree.training_counts, confidence_factor)
    subtree_estimate = _subtree_error_estimate(tree, confidence_factor)
    if leaf_estimate <= subtree_estimate:
        counts = tree.training_counts
        return TreeNode(
            label=_majority(counts, counts), training_counts=Counter(counts)
        )
    return tree


def predict(tree: TreeNode, features: dict[int, float]) -> str:
    """Descend the tree (left on value <= threshold) to a leaf label."""
    node = tree
    while not node.is_leaf:
        if node.metric_id not in features:
            raise EvaluationError(f"instance is missing metric {node.metric_id}")
        node = node.left if features[node.metric_id] <= node.threshold else node.right
    return node.label


def stratified_folds(labels: list[str], k: int, seed: int) -> list[int]:
    """Fold assignment per row: seeded shuffle within each class, dealt
    round-robin with a rolling offset so fold sizes stay within one."""
    rng = random.Random(seed)
    assignment = [0] * len(labels)
    offset = 0
    for label in sorted(set(labels)):
        idx = [i for i, lab in enumerate(labels) if lab == label]
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            assignment[i] = (j + offset) % k
        offset = (offset + len(idx)) % k
    return assignment


def cross_validate(dataset: Dataset, k: int = 10, params: TrainParams | None = None) -> EvaluationReport:
    """Stratified k-fold cross-validation with summed confusion counts.

    If the minority class has fewer than k instances, k is reduced to that
    count (recorded via requested_k on the report).
    """
    params = params or TrainParams()
    labels = dataset.labels()
    class_counts = Counter(labels)
    if len(class_counts) < 2:
        raise EvaluationError("cross-validation needs at least two classes")
    requested_k = k
    k = min(k, min(class_counts.values()))
    if k < 2:
        raise EvaluationError("minority class too small for cross-validation")
    assignment = stratified_folds(labels, k, params.seed)

    correct: Counter = Counter()
    incorrect: Counter = Counter()
    folds: list[list[str]] = [[] for _ in range(k)]
    for fold in range(k):
        train_rows = [row for i, row in enumerate(dataset.rows) if assignment[i] != fold]
        test_rows = [row for i, row in enumerate(dataset.rows) if assignment[i] == fold]
        sub = Dataset(
            feature_ids=list(dataset.feature_ids),
            rows=train_rows,
            strategy=dataset.strategy,
            filter_tag=dataset.filter_tag,
        )
        model = prune(train(sub, params), params.confidence_factor)
        for bid, label, values in test_rows:
            folds[fold].append(bid)
            features = dict(zip(dataset.feature_ids, values))
            if predict(model, features) == label:
                correct[label] += 1
            else:
                incorrect[label] += 1

    total = sum(correct.values()) + sum(incorrect.values())
    acc = accuracy_percent(sum(correct.values()), total)
    full_tree = prune(train(dataset, params), params.confidence_factor)
    per_class = {
        label: (correct.get(label, 0), incorrect.get(label, 0))
        for label in sorted(class_counts)
    }
    return EvaluationReport(
        dataset_id=dataset.dataset_id,
        accuracy=acc,
        per_class=per_class,
        folds=folds,
        k=k,
        requested_k=requested_k,
        seed=params.seed,
        tree=full_tree,
    )


def _fmt_threshold(v: float) -> str:
    if v == int(v):
        return str(int(v))
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return s if s else "0"


def render_tree(tree: TreeNode) -> str:
    """Indented text rendering; branch lines carry the metric's name."""
    lines: list[str] = []

    def leaf_line(node: TreeNode) -> str:
        total = sum(node.training_counts.values())
        right = node.training_counts.get(node.label, 0)
        return f"{node.label} ({right}/{total - right})"

    def walk(node: TreeNode, indent: int):
        pad = "    " * indent
        if node.is_leaf:
            lines.append(pad + leaf_line(node))
            return
        name = METRIC_NAMES.get(node.metric_id, "")
        thr = _fmt_threshold(node.threshold)
        lines.append(pad + f"m{node.metric_id} <= {thr} ({name})")
        walk(node.left, indent + 1)
        lines.append(pad + f"m{node.metric_id} > {thr} ({name})")
        walk(node.right, indent + 1)

    walk(tree, 0)
    return "\n".join(lines) + "\n"


def report_table(report: EvaluationReport) -> str:
    """One-row text table mirroring the confusion summary layout."""
    header = (
        "ID, Accuracy, # Failed Builds Correct(Incorrect), "
        "# Successful Builds Correct(Incorrect)"
    )
    fc, fi = report.per_class.get("failed", (0, 0))
    sc, si = report.per_class.get("success", (0, 0))
    row = f"{report.dataset_id}, {report.accuracy_text}, {fc}({fi}), {sc}({si})"
    return header + "\n" + row + "\n"


def report_json(report: EvaluationReport) -> str:
    doc = {
        "dataset_id": report.dataset_id,
        "accuracy": report.accuracy_text,
        "per_class": {
            label: {"correct": c, "incorrect": i}
            for label, (c, i) in sorted(report.per_class.items())
        },
        "folds": report.folds,
        "k": report.k,
        "requested_k": report.requested_k,
        "seed": report.seed,
        "tree": render_tree(report.tree).splitlines() if report.tree else [],
    }
    return json.dumps(doc, indent=2, sort_keys=True)
