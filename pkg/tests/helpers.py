"""Shared test utilities: random subset-grammar sources and independent oracles."""

from __future__ import annotations

import random
from collections import Counter

from rmove.frontend.ast_nodes import AstNode
from rmove.paths import DOWN, UP, PathContext

_IDENTS = ["alpha", "beta", "gamma", "delta", "total", "count", "value", "item",
           "buf", "idx", "acc", "tmp", "size", "flag", "result"]
_TYPES = ["int", "long", "boolean", "String", "double"]
_BIN_OPS = ["+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&", "||"]


def random_expression(rnd: random.Random, depth: int) -> str:
    if depth <= 0:
        return rnd.choice(
            [rnd.choice(_IDENTS), str(rnd.randint(0, 99)), "true", "false",
             f"{rnd.choice(_IDENTS)}.{rnd.choice(_IDENTS)}"]
        )
    kind = rnd.randrange(6)
    if kind == 0:
        return random_expression(rnd, 0)
    if kind == 1:
        left = random_expression(rnd, depth - 1)
        right = random_expression(rnd, depth - 1)
        return f"({left} {rnd.choice(_BIN_OPS)} {right})"
    if kind == 2:
        cond = random_expression(rnd, depth - 1)
        a = random_expression(rnd, depth - 1)
        b = random_expression(rnd, depth - 1)
        return f"(({cond}) ? {a} : {b})"
    if kind == 3:
        args = ", ".join(random_expression(rnd, depth - 1)
                         for _ in range(rnd.randint(0, 2)))
        return f"{rnd.choice(_IDENTS)}({args})"
    if kind == 4:
        return f"{rnd.choice(_IDENTS)}.{rnd.choice(_IDENTS)}({random_expression(rnd, depth - 1)})"
    return str(-rnd.randint(1, 50))


def random_statement(rnd: random.Random, depth: int) -> str:
    kind = rnd.randrange(7)
    if kind == 0:
        return f"{rnd.choice(_TYPES)} {rnd.choice(_IDENTS)} = {random_expression(rnd, depth)};"
    if kind == 1:
        return f"{rnd.choice(_IDENTS)} = {random_expression(rnd, depth)};"
    if kind == 2:
        return f"return {random_expression(rnd, depth)};"
    if kind == 3 and depth > 0:
        inner = random_statement(rnd, depth - 1)
        return f"if ({random_expression(rnd, depth - 1)}) {{ {inner} }}"
    if kind == 4 and depth > 0:
        inner = random_statement(rnd, depth - 1)
        return f"while ({random_expression(rnd, depth - 1)}) {{ {inner} }}"
    if kind == 5:
        return "return;"
    return f"{random_expression(rnd, depth)};"


def random_method_source(rnd: random.Random, name: str = "probe") -> str:
    params = ", ".join(f"{rnd.choice(_TYPES)} p{i}" for i in range(rnd.randint(0, 2)))
    body = " ".join(random_statement(rnd, rnd.randint(0, 2))
                    for _ in range(rnd.randint(1, 4)))
    return f"{rnd.choice(_TYPES)} {name}({params}) {{ {body} }}"


def random_class_source(rnd: random.Random, class_name: str, n_methods: int) -> str:
    methods = "\n".join(random_method_source(rnd, f"m{i}") for i in range(n_methods))
    return f"class {class_name} {{\n{methods}\n}}\n"


def parse_single_method(source_fragment: str):
    """Parse one method wrapped in a throwaway class; return its AST."""
    from rmove.frontend import parse_source

    corpus = parse_source([("probe.src", f"class Probe {{ {source_fragment} }}")])
    (method_id,) = corpus.method_ids()
    return corpus.ast_of(method_id)


# --- independent all-pairs path oracle ----------------------------------------

def oracle_paths(ast: AstNode, max_length: int, max_width: int) -> Counter:
    """O(L^2) reference extraction via ancestor-chain prefixes.

    Collects every leaf with its full root-to-parent ancestor list, then
    for each pair finds the LCA as the last common prefix element and
    renders the context directly in canonical orientation.
    """
    leaves: list[tuple[str, list[AstNode]]] = []

    def walk(node: AstNode, ancestors: list[AstNode]):
        if node.is_leaf:
            leaves.append((node.token, list(ancestors)))
        else:
            for child in node.children:
                walk(child, ancestors + [node])

    walk(ast, [])

    def render(anc_from: list[AstNode], anc_to: list[AstNode], prefix: int) -> list[str]:
        lca = anc_from[prefix - 1]
        ups = anc_from[prefix:][::-1]
        downs = anc_to[prefix:]
        return ([f"{n.node_type}{UP}" for n in ups]
                + [f"{lca.node_type}{DOWN}"]
                + [f"{n.node_type}{DOWN}" for n in downs])

    result: Counter = Counter()
    for i in range(len(leaves)):
        for j in range(i + 1, min(len(leaves), i + max_width + 1)):
            token_i, anc_i = leaves[i]
            token_j, anc_j = leaves[j]
            prefix = 0
            while (prefix < len(anc_i) and prefix < len(anc_j)
                   and anc_i[prefix] is anc_j[prefix]):
                prefix += 1
            if token_j < token_i:
                types = render(anc_j, anc_i, prefix)
                ctx = PathContext(token_j, tuple(types), token_i)
            else:
                types = render(anc_i, anc_j, prefix)
                ctx = PathContext(token_i, tuple(types), token_j)
            if len(types) <= max_length:
                result[ctx] += 1
    return result
