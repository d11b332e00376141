import random
from collections import Counter

import pytest

from rmove.config import Config
from rmove.errors import NotAMethodAst
from rmove.frontend.ast_nodes import leaf
from rmove.paths import PathContext, extract_paths, subtokenize
from rmove.rng import seeded_rng

from helpers import oracle_paths, parse_single_method, random_method_source

TERNARY_METHOD = "int pick() { return b > 0 ? a : -1; }"
GOLDEN = PathContext("b", ("BinaryExpression↑", "ConditionalExpression↓"), "a")


def test_golden_ternary_path():
    ast = parse_single_method(TERNARY_METHOD)
    paths = extract_paths(ast, Config(), "m")
    hits = [c for c in paths.contexts if {c.start_token, c.end_token} == {"a", "b"}]
    assert len(hits) == 1
    ctx = hits[0]
    oriented_from_b = ctx if ctx.start_token == "b" else ctx.flipped()
    assert oriented_from_b == GOLDEN
    # canonical storage puts the smaller (token, preorder) endpoint first
    assert ctx.start_token == "a"


def test_golden_path_present_with_parameters():
    ast = parse_single_method("int pick(int a, int b) { return b > 0 ? a : -1; }")
    contexts = extract_paths(ast, Config(), "m").contexts
    oriented = {c.flipped() for c in contexts} | set(contexts)
    assert GOLDEN in oriented


def test_single_leaf_body_yields_no_contexts():
    ast = parse_single_method("void ping() { return; }")
    paths = extract_paths(ast, Config(), "m")
    assert paths.contexts == ()
    assert not paths.truncated


def test_direction_sequence_flips_once():
    rnd = random.Random(31)
    for _ in range(40):
        ast = parse_single_method(random_method_source(rnd))
        for ctx in extract_paths(ast, Config(), "m").contexts:
            marks = [t[-1] for t in ctx.node_types]
            downs_started = False
            for mark in marks:
                if mark == "↓":
                    downs_started = True
                else:
                    assert not downs_started, f"direction flips twice: {marks}"
            assert downs_started, "a path always descends through its LCA"


def test_matches_brute_force_oracle():
    rnd = random.Random(99)
    cfg = Config(max_contexts=1_000_000)
    for _ in range(60):
        ast = parse_single_method(random_method_source(rnd))
        got = Counter(extract_paths(ast, cfg, "m").contexts)
        want = oracle_paths(ast, cfg.max_path_length, cfg.max_path_width)
        assert got == want


def test_oracle_agreement_with_tight_limits():
    rnd = random.Random(7)
    cfg = Config(max_path_length=4, max_path_width=3, max_contexts=10_000)
    for _ in range(40):
        ast = parse_single_method(random_method_source(rnd))
        got = Counter(extract_paths(ast, cfg, "m").contexts)
        want = oracle_paths(ast, cfg.max_path_length, cfg.max_path_width)
        assert got == want


def test_no_double_orientation():
    rnd = random.Random(13)
    for _ in range(20):
        ast = parse_single_method(random_method_source(rnd))
        contexts = extract_paths(ast, Config(), "m").contexts
        seen = set(contexts)
        for ctx in contexts:
            flipped = ctx.flipped()
            if flipped != ctx:
                assert flipped not in seen


def test_deterministic_without_truncation():
    ast = parse_single_method(TERNARY_METHOD)
    a = extract_paths(ast, Config(), "m")
    b = extract_paths(ast, Config(), "m")
    assert a == b


def test_truncation_subsamples_uniformly():
    body = " ".join(f"int v{i} = {i} + {i * 2};" for i in range(30))
    ast = parse_single_method(f"void big() {{ {body} }}")
    cfg = Config(max_contexts=25)
    full = extract_paths(ast, cfg.replace(max_contexts=100_000), "m")
    assert len(full.contexts) > 25

    first = extract_paths(ast, cfg, "m", rng=seeded_rng(5).split("paths"))
    second = extract_paths(ast, cfg, "m", rng=seeded_rng(5).split("paths"))
    assert first == second
    assert first.truncated
    assert len(first.contexts) == 25
    assert set(first.contexts) <= set(full.contexts)

    other = extract_paths(ast, cfg, "m", rng=seeded_rng(6).split("paths"))
    assert other.contexts != first.contexts


def test_rejects_non_method_root():
    with pytest.raises(NotAMethodAst):
        extract_paths(leaf("Identifier", "x"), Config(), "m")


def test_width_limits_leaf_gap():
    body = " ".join(f"int v{i} = {i};" for i in range(10))
    ast = parse_single_method(f"void wide() {{ {body} }}")
    cfg = Config(max_path_width=1, max_path_length=100, max_contexts=100_000)
    got = Counter(extract_paths(ast, cfg, "m").contexts)
    assert got == oracle_paths(ast, 100, 1)


# --- subtokenize ---------------------------------------------------------------

def test_subtokenize_camel_case():
    assert subtokenize("validateLiteralPresence") == ["validate", "literal", "presence"]


def test_subtokenize_atomic():
    assert subtokenize("x") == ["x"]


def test_subtokenize_mixed_conventions():
    assert subtokenize("parse_HTTP2Frame") == ["parse", "http", "2", "frame"]


@pytest.mark.parametrize("token,expected", [
    ("getX", ["get", "x"]),
    ("HTTPResponse", ["http", "response"]),
    ("snake_case_name", ["snake", "case", "name"]),
    ("value2", ["value", "2"]),
    ("X", ["x"]),
    ("-17", ["17"]),
    (">", [">"]),
    ("{}", ["{}"]),
])
def test_subtokenize_cases(token, expected):
    assert subtokenize(token) == expected


def test_subtokenize_properties():
    rnd = random.Random(3)
    alphabet = "abcXYZ_019"
    for _ in range(200):
        token = "".join(rnd.choice(alphabet) for _ in range(rnd.randint(1, 12)))
        parts = subtokenize(token)
        assert parts, token
        assert all(parts), token
        assert all(p == p.lower() for p in parts)
        # order preserved: subtokens appear left-to-right in the original
        cursor = 0
        lowered = token.lower()
        for part in parts:
            found = lowered.find(part, cursor)
            assert found >= 0, (token, parts)
            cursor = found + len(part)
