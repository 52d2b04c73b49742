import math

import pytest
from hypothesis import given, settings, strategies as st

from buildmetrics.errors import ModelError
from buildmetrics.javaparse import parse_source
from buildmetrics.metrics import (
    HalsteadCounts,
    METRIC_IDS,
    compute_file_metrics,
    cyclomatic,
    depth_of_inheritance,
    format_value,
    halstead_suite,
    lcom_suite,
    maintainability_index,
    martin_suite,
    metrics_csv,
    parse_metrics_csv,
)
from buildmetrics.model import build_code_model

from conftest import CORPUS
from oracle_metrics import OracleCorpus

INTEGRAL_IDS = {1, 8, 10, 11, 12, 13, 14, 15, 16, 17, 19, 20, 26, 30, 31, 32, 33, 38, 40}


def _model(*sources):
    return build_code_model([parse_source(text, path) for path, text in sources])


# -- halstead ------------------------------------------------------------


def test_halstead_all_zero():
    values = halstead_suite(HalsteadCounts(0, 0, 0, 0))
    assert all(v == 0 for v in values.values())
    assert set(values) == set(range(30, 42))


def test_halstead_unit_counts():
    v = halstead_suite(HalsteadCounts(N1=1, N2=1, n1=1, n2=1))
    assert v[38] == 2 and v[40] == 2
    assert v[41] == 2.0  # V = 2*log2(2)
    assert v[35] == 0.5
    assert v[39] == 1.0  # L = min(1, 1/0.5)
    assert v[36] == 1.0
    assert v[37] == pytest.approx(1 / 18)
    assert v[34] == pytest.approx(2 / 3000)


def test_halstead_hand_counted_snippet():
    # `a = b + b;` -> operators {=,+}, operands {a, b, b}
    v = halstead_suite(HalsteadCounts(N1=2, N2=3, n1=2, n2=2))
    assert v[38] == 5 and v[40] == 4
    assert v[41] == pytest.approx(10.0)
    assert v[35] == pytest.approx(1.5)
    assert v[36] == pytest.approx(15.0)


@given(
    st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)
)
def test_halstead_identities(n1_distinct, n2_distinct, extra1, extra2):
    counts = HalsteadCounts(
        N1=n1_distinct + extra1 if n1_distinct else 0,
        N2=n2_distinct + extra2 if n2_distinct else 0,
        n1=n1_distinct,
        n2=n2_distinct,
    )
    v = halstead_suite(counts)
    assert v[38] == v[30] + v[31]
    assert v[40] == v[32] + v[33]
    if v[40] > 0:
        assert v[41] == pytest.approx(v[38] * math.log2(v[40]), abs=1e-12)
    assert v[36] == pytest.approx(v[35] * v[41], abs=1e-9)
    assert v[37] == pytest.approx(v[36] / 18, abs=1e-9)
    assert 0 <= v[39] <= 1


# -- cyclomatic ----------------------------------------------------------


def test_cyclomatic_examples():
    unit = parse_source(
        "class A { void s() { x = 1; } void b(int a, int c) { if (a > 0 && c > 0) { x = 1; } } void n(); }",
        "A.java",
    )
    by_name = {m.name: m for m in unit.types[0].methods}
    assert cyclomatic(by_name["s"]) == 1
    assert cyclomatic(by_name["b"]) == 3
    assert cyclomatic(by_name["n"]) == 1


# -- lcom ----------------------------------------------------------------


def test_lcom_perfect_cohesion():
    src = "class A { int x; int y; void m() { x = y; } void n() { y = x; } }"
    decl = parse_source(src, "A.java").types[0]
    assert lcom_suite(decl) == (0.0, 0.0, 0.0)


def test_lcom_disjoint_methods():
    src = "class A { int x; int y; void m() { x = 1; } void n() { y = 2; } }"
    decl = parse_source(src, "A.java").types[0]
    l1, l2, l3 = lcom_suite(decl)
    assert l1 == 1.0
    assert l2 == pytest.approx(0.5)
    assert l3 == pytest.approx(1.0)


def test_lcom_single_method():
    src = "class A { int x; void m() { x = 1; } }"
    decl = parse_source(src, "A.java").types[0]
    assert lcom_suite(decl)[2] == 0.0


def test_lcom_counts_constructor_access():
    src = "class A { int x; A() { x = 0; } void m() { x = 1; } }"
    decl = parse_source(src, "A.java").types[0]
    # Both members touch x: fully cohesive.
    assert lcom_suite(decl) == (0.0, 0.0, 0.0)


# -- martin --------------------------------------------------------------


def test_martin_isolated_concrete_package():
    model = _model(("p/A.java", "package p; class A { }"))
    assert martin_suite(model, "p") == (0.0, 0, 0, 0.0, 1.0)


def test_martin_stable_abstraction():
    model = _model(
        ("api/I.java", "package api; interface I { }"),
        ("impl/C.java", "package impl; class C implements api.I { }"),
    )
    a, ca, ce, i, dn = martin_suite(model, "api")
    assert (a, ca, ce, i, dn) == (1.0, 1, 0, 0.0, 0.0)


def test_martin_balanced_package():
    model = _model(
        ("mid/A.java", "package mid; interface A { }"),
        ("mid/B.java", "package mid; class B extends ext.Base { }"),
        ("ext/Base.java", "package ext; class Base { }"),
        ("top/User.java", "package top; class User implements mid.A { }"),
    )
    a, ca, ce, i, dn = martin_suite(model, "mid")
    assert a == pytest.approx(0.5)
    assert (ca, ce) == (1, 1)
    assert i == pytest.approx(0.5)
    assert dn == pytest.approx(0.0)


def test_martin_unknown_package():
    model = _model(("p/A.java", "package p; class A { }"))
    with pytest.raises(ModelError):
        martin_suite(model, "nope")


# -- maintainability index -----------------------------------------------


def test_mi_vanishing_logs():
    assert maintainability_index(1.0, 0.0, 1.0) == 171.0


def test_mi_hand_arithmetic():
    expected = 171 - 5.2 * math.log(100) - 0.23 * 10 - 16.2 * math.log(20)
    assert maintainability_index(100.0, 10.0, 20.0) == pytest.approx(expected)
    assert maintainability_index(100.0, 10.0, 20.0) == pytest.approx(96.22, abs=0.01)


def test_mi_zero_method_file():
    model = _model(("p/A.java", "package p; class A { int x; }"))
    assert compute_file_metrics(model, "p/A.java").values[25] == 171.0


# -- depth of inheritance ------------------------------------------------


def test_dit_examples():
    model = _model(
        ("p/Root.java", "package p; class Root { }"),
        ("p/A.java", "package p; class A extends Root { }"),
        ("p/Ext.java", "package p; class Ext extends External { }"),
    )
    assert depth_of_inheritance(model, "p.Root") == 0
    assert depth_of_inheritance(model, "p.A") == 1
    assert depth_of_inheritance(model, "p.Ext") == 1


def test_dit_cycle_error():
    model = _model(
        ("p/A.java", "package p; class A extends B { }"),
        ("p/B.java", "package p; class B extends A { }"),
    )
    with pytest.raises(ModelError):
        depth_of_inheritance(model, "p.A")


# -- compute_file_metrics ------------------------------------------------


def test_hand_counted_file():
    src = """package p;
import q.Other;
// one
/* two */
// three
class A {
    int f1;
    int f2;
    A() { f1 = 0; }
    void m1() { f1 = 1; }
    void m2(int a) { f2 = a; }
}
"""
    model = _model(("p/A.java", src))
    v = compute_file_metrics(model, "p/A.java").values
    assert v[1] == 2 and v[2] == 2
    assert v[3] == 1 and v[10] == 1
    assert v[11] == 1 and v[12] == 0
    assert v[14] == 3 and v[15] == 2
    assert v[16] == 1 and v[7] == pytest.approx(0.5)


def test_comment_free_file_ratio():
    body = "\n".join(f"    int f{i};" for i in range(37))
    src = f"package p;\nclass A {{\n{body}\n}}\n"
    model = _model(("p/A.java", src))
    v = compute_file_metrics(model, "p/A.java").values
    assert v[13] == 40
    assert v[9] == 40.0


def test_typeless_file_incomplete():
    model = _model(("p/Doc.java", "// documentation only\n"))
    vec = compute_file_metrics(model, "p/Doc.java")
    assert not vec.complete
    assert vec.values == {}


# -- corpus-wide properties ----------------------------------------------


def test_vectors_complete(corpus_vectors):
    assert len(corpus_vectors) == 11
    for vec in corpus_vectors.values():
        assert vec.complete


def test_range_invariants(corpus_vectors):
    for vec in corpus_vectors.values():
        v = vec.values
        for mid in (18, 21, 22, 27, 28, 39):
            assert 0.0 <= v[mid] <= 1.0, (vec.file_path, mid)
        assert 0.0 <= v[29] <= 2.0
        assert v[22] == pytest.approx(abs(v[18] + v[21] - 1.0), abs=1e-12)
        for mid in INTEGRAL_IDS:
            assert v[mid] >= 0 and v[mid] == int(v[mid]), (vec.file_path, mid)


def test_halstead_identities_on_corpus(corpus_vectors):
    for vec in corpus_vectors.values():
        v = vec.values
        assert v[38] == v[30] + v[31]
        assert v[40] == v[32] + v[33]
        if v[40] > 0:
            assert v[41] == pytest.approx(v[38] * math.log2(v[40]), abs=1e-9)
        assert v[36] == pytest.approx(v[35] * v[41], abs=1e-9)
        assert v[37] == pytest.approx(v[36] / 18, abs=1e-9)


def test_cyclomatic_at_least_method_count(corpus_model, corpus_vectors):
    for unit in corpus_model.units:
        n_methods = sum(len(t.methods) for t in unit.types)
        assert corpus_vectors[unit.file_path].values[26] >= n_methods


def test_monotone_under_extra_if():
    base = "package p; class A { int x; void m() { x = 1; } }"
    extra = "package p; class A { int x; void m() { x = 1; if (x > 0) { x = 2; } } }"
    v0 = compute_file_metrics(_model(("p/A.java", base)), "p/A.java").values
    v1 = compute_file_metrics(_model(("p/A.java", extra)), "p/A.java").values
    for mid in (13, 26, 31):
        assert v1[mid] >= v0[mid]


# -- oracle comparison (criterion 3 backbone) ------------------------------


def test_all_metrics_match_oracle(corpus_vectors):
    oracle = OracleCorpus(CORPUS).all_metrics()
    assert set(oracle) == set(corpus_vectors)
    for path, expected in oracle.items():
        actual = corpus_vectors[path].values
        for mid in METRIC_IDS:
            if mid in INTEGRAL_IDS:
                assert actual[mid] == expected[mid], (path, mid)
            else:
                assert actual[mid] == pytest.approx(expected[mid], abs=1e-9), (path, mid)


# -- CSV ------------------------------------------------------------------


def test_format_value():
    assert format_value(3.0) == "3"
    assert format_value(0.5) == "0.5"
    assert format_value(1 / 3) == "0.333333"
    assert format_value(0.0) == "0"


def test_metrics_csv_round_trip(corpus_vectors):
    text = metrics_csv(list(corpus_vectors.values()))
    parsed = parse_metrics_csv(text)
    assert set(parsed) == set(corpus_vectors)
    for path, vec in parsed.items():
        for mid in METRIC_IDS:
            assert vec.values[mid] == pytest.approx(
                corpus_vectors[path].values[mid], abs=5e-7
            )


def test_metrics_csv_rejects_bad_header():
    with pytest.raises(ModelError):
        parse_metrics_csv("file,m1\nx,1\n")
