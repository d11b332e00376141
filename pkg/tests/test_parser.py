import random

import pytest

from rmove.errors import (
    DuplicateClass,
    DuplicateMethodSignature,
    SourceSyntaxError,
)
from rmove.frontend import parse_source, pretty_print_corpus
from rmove.frontend.ast_nodes import iter_leaves

from helpers import parse_single_method, random_class_source

TERNARY_METHOD = "int pick(int a, int b) { return b > 0 ? a : -1; }"

CALL_TRIPLE = """
class Worker {
    int m1(int x) { return m2(x) + m3(); }
    int m2(int x) { return m3() + x; }
    int m3() { return 1; }
}
"""


def test_ternary_ast_shape():
    ast = parse_single_method(TERNARY_METHOD)
    assert ast.node_type == "MethodDeclaration"
    body = ast.children[-1]
    (ret,) = body.children
    assert ret.node_type == "ReturnStatement"
    (cond,) = ret.children
    assert cond.node_type == "ConditionalExpression"
    comparison, then_value, else_value = cond.children
    assert comparison.node_type == "BinaryExpression"
    assert [c.token for c in comparison.children] == ["b", ">", "0"]
    assert then_value.token == "a"
    assert else_value.token == "-1"


def test_call_triple_raw_calls():
    corpus = parse_source([("worker.src", CALL_TRIPLE)])
    short = {m: m.rsplit("::", 1)[1].split("(")[0] for m in corpus.methods}
    calls = {(short[s], short[d]) for s, d in corpus.raw_calls}
    assert calls == {("m1", "m2"), ("m1", "m3"), ("m2", "m3")}


def test_empty_class():
    corpus = parse_source([("a.src", "class A {}")])
    assert len(corpus.classes) == 1
    assert corpus.classes[0].methods == ()
    assert corpus.raw_calls == []


def test_syntax_error_carries_location():
    with pytest.raises(SourceSyntaxError) as excinfo:
        parse_source([("bad.src", "class A {\n  int f( { }\n}")])
    err = excinfo.value
    assert err.path == "bad.src"
    assert err.line == 2


def test_duplicate_class_rejected():
    files = [("a.src", "class A {}"), ("b.src", "class A {}")]
    with pytest.raises(DuplicateClass):
        parse_source(files)


def test_duplicate_method_signature_rejected():
    source = "class A { int f(int x) { return 1; } long f(int y) { return 2; } }"
    with pytest.raises(DuplicateMethodSignature):
        parse_source([("a.src", source)])


def test_overloads_are_distinct_methods():
    source = "class A { int f(int x) { return 1; } int f(int x, int y) { return 2; } }"
    corpus = parse_source([("a.src", source)])
    assert len(corpus.methods) == 2


def test_file_order_never_matters():
    files = [
        ("b.src", "class B { int g() { return h(); } int h() { return 2; } }"),
        ("a.src", "class A { int f() { return g(); } }"),
    ]
    first = parse_source(files)
    second = parse_source(list(reversed(files)))
    assert first.method_ids() == second.method_ids()
    assert first.raw_calls == second.raw_calls


def test_unqualified_call_prefers_enclosing_class():
    source = """
    class A { int f() { return go(); } int go() { return 1; } }
    class B { int go() { return 2; } }
    """
    corpus = parse_source([("s.src", source)])
    assert corpus.raw_calls == [("main::A::f()", "main::A::go()")]


def test_ambiguous_cross_class_call_dropped():
    source = """
    class A { int f() { return other.go(); } }
    class B { int go() { return 2; } }
    class C { int go() { return 3; } }
    """
    corpus = parse_source([("s.src", source)])
    assert corpus.raw_calls == []
    assert corpus.diagnostics["calls_ambiguous"] == 1


def test_unresolved_call_counted():
    source = "class A { int f() { return missing(1, 2); } }"
    corpus = parse_source([("s.src", source)])
    assert corpus.raw_calls == []
    assert corpus.diagnostics["calls_unresolved"] == 1


def test_arity_distinguishes_targets():
    source = """
    class A { int f() { return go(1); } }
    class B { int go(int x) { return x; } int go() { return 0; } }
    """
    corpus = parse_source([("s.src", source)])
    assert corpus.raw_calls == [("main::A::f()", "main::B::go(int)")]


def _leaf_stream(corpus):
    return [
        [leaf.token for leaf in iter_leaves(corpus.ast_of(m))]
        for m in corpus.method_ids()
    ]


def test_pretty_print_round_trip_handwritten():
    source = """
    class Calc {
        int scale = 3;
        int apply(int v) {
            int acc = 0;
            while (acc < v) { acc = acc + helper(acc, v); }
            if (acc == v) { return acc; } else { return v > 0 ? acc : -7; }
        }
        int helper(int a, int b) { result.total = a * (b + 2); return a % b; }
        void ping() { return; }
        void empty() {}
    }
    """
    corpus = parse_source([("calc.src", source)])
    printed = pretty_print_corpus(corpus)
    reparsed = parse_source([("calc.src", printed)])
    assert [corpus.ast_of(m) for m in corpus.method_ids()] == [
        reparsed.ast_of(m) for m in reparsed.method_ids()
    ]
    assert corpus.raw_calls == reparsed.raw_calls


def test_pretty_print_round_trip_random():
    rnd = random.Random(2024)
    for trial in range(30):
        source = random_class_source(rnd, "Gen", rnd.randint(1, 4))
        corpus = parse_source([("gen.src", source)])
        reparsed = parse_source([("gen.src", pretty_print_corpus(corpus))])
        assert _leaf_stream(corpus) == _leaf_stream(reparsed)
        assert [corpus.ast_of(m) for m in corpus.method_ids()] == [
            reparsed.ast_of(m) for m in reparsed.method_ids()
        ]


def test_parse_is_deterministic():
    rnd = random.Random(5)
    source = random_class_source(rnd, "Gen", 3)
    first = parse_source([("g.src", source)])
    second = parse_source([("g.src", source)])
    assert [first.ast_of(m) for m in first.method_ids()] == [
        second.ast_of(m) for m in second.method_ids()
    ]
    assert first.raw_calls == second.raw_calls
