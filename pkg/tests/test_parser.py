from collections import Counter

import pytest

from buildmetrics.errors import ParseError
from buildmetrics.javaparse import classify_halstead, parse_source
from buildmetrics.lexer import tokenize


def test_simple_class_with_if():
    unit = parse_source("class A { void m() { if (x) { y(); } } }", "A.java")
    assert [t.name for t in unit.types] == ["A"]
    (method,) = unit.types[0].methods
    assert method.decision_points == 1
    assert sorted(method.block_depths) == [1, 2]
    assert method.max_block_depth == 2


def test_interface_method_without_body():
    unit = parse_source("interface I { void f(int a, int b); }", "I.java")
    decl = unit.types[0]
    assert decl.kind == "interface"
    assert decl.is_abstract
    (method,) = decl.methods
    assert method.parameter_count == 2
    assert method.body_lines == 0
    assert not method.has_body


def test_comments_only_file():
    unit = parse_source("// a\n/* b */\n", "C.java")
    assert unit.types == []
    assert len(unit.comments) == 2
    assert unit.code_lines == 0


def test_constructor_not_counted_as_method():
    src = "class A { A() { } void m() { } }"
    decl = parse_source(src, "A.java").types[0]
    assert [c.name for c in decl.constructors] == ["A"]
    assert [m.name for m in decl.methods] == ["m"]


def test_multi_declarator_field():
    decl = parse_source("class C { int width, height; }", "C.java").types[0]
    assert [f.name for f in decl.fields_] == ["width", "height"]


def test_field_access_through_this():
    src = """
    class A {
        int x;
        void direct() { x = 1; }
        void via_this() { this.x = 2; }
        void other(B b) { b.x = 3; }
    }
    """
    decl = parse_source(src, "A.java").types[0]
    by_name = {m.name: m.accessed_field_names for m in decl.methods}
    assert by_name["direct"] == {"x"}
    assert by_name["via_this"] == {"x"}
    assert by_name["other"] == set()


def test_decision_point_inventory():
    src = """
    class A {
        void m(int a, int b) {
            if (a > 0 && b > 0) { a = 1; }
            for (int i = 0; i < a; i = i + 1) { b = b + 1; }
            while (b > 0) { b = b - 1; }
            do { a = a - 1; } while (a > 0);
            switch (a) { case 1: break; case 2: break; }
            int c = a > b ? a : b;
            try { m(a, b); } catch (Exception e) { }
            boolean d = a > 0 || b > 0;
        }
    }
    """
    (method,) = parse_source(src, "A.java").types[0].methods
    # if, &&, for, while, do + its trailing while, case, case, ?, catch, ||
    assert method.decision_points == 11


def test_nested_type_captured():
    src = "class Outer { int a; class Inner { int b; } }"
    unit = parse_source(src, "O.java")
    assert sorted(t.name for t in unit.types) == ["Inner", "Outer"]


def test_extends_and_implements():
    src = "class A extends B implements C, D { }"
    decl = parse_source(src, "A.java").types[0]
    assert decl.extends_names == ["B"]
    assert decl.supertype_names == ["B", "C", "D"]
    assert {"B", "C", "D"} <= decl.referenced_type_names


def test_generics_and_annotations_tolerated():
    src = """
    @Deprecated
    public class Box<T> {
        private java.util.List<T> items;
        @Override
        public T get(int i) { return items.get(i); }
    }
    """
    unit = parse_source(src, "Box.java")
    assert [t.name for t in unit.types] == ["Box"]
    assert [m.name for m in unit.types[0].methods] == ["get"]


def test_enum_skimmed_without_failure():
    src = "enum Color { RED, GREEN } class A { void m() { } }"
    unit = parse_source(src, "A.java")
    assert [t.name for t in unit.types] == ["A"]


def test_unbalanced_braces_error():
    with pytest.raises(ParseError):
        parse_source("class A { void m() { ", "A.java")


def test_identifier_multiset_preserved():
    src = """
    package p;
    class A {
        int total;
        void add(int amount) { total = total + amount; }
    }
    """
    tokens = tokenize(src)
    unit = parse_source(src, "A.java")
    before = Counter(t.text for t in tokens if t.kind == "identifier")
    decl = unit.types[0]
    after = Counter()
    after[unit.package_name] += 1
    after[decl.name] += 1
    for f in decl.fields_:
        after[f.name] += 1
    for m in decl.methods:
        after[m.name] += 1
        after.update(t.text for t in m.body_tokens if t.kind == "identifier")
        after["amount"] += 1  # the parameter name
    assert after == before


def test_block_depth_invariant_over_corpus():
    from conftest import load_corpus_units

    for unit in load_corpus_units():
        for decl in unit.types:
            for method in decl.constructors + decl.methods:
                assert (len(method.block_depths) >= 1) == method.has_body
                if method.has_body:
                    assert method.max_block_depth == max(method.block_depths)
                assert method.decision_points >= 0


def test_code_lines_at_most_physical_lines():
    from conftest import load_corpus_units

    for unit in load_corpus_units():
        assert unit.code_lines <= unit.physical_lines


def test_classify_halstead_hand_count():
    tokens = tokenize("a = b + b;")
    operators, operands = classify_halstead(tokens)
    assert operators == Counter({"=": 1, "+": 1})
    assert operands == Counter({"a": 1, "b": 2})


def test_classify_halstead_calls_and_ternary():
    tokens = tokenize("x = f(a) ? g(b) : c;")
    operators, operands = classify_halstead(tokens)
    assert operators["f"] == 1 and operators["g"] == 1
    assert operators["?:"] == 1
    assert ":" not in operators
    assert operands == Counter({"x": 1, "a": 1, "b": 1, "c": 1})
