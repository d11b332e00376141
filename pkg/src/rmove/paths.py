"""Leaf-to-leaf AST path contexts per method.

A context records the two endpoint tokens and the intermediate node
types between them, each tagged with the direction the path leaves it
(``↑`` toward a parent, ``↓`` toward a child); the tag flips exactly
once, at the lowest common ancestor.  Contexts are stored in canonical
orientation: the endpoint with the lexicographically smaller
(token, preorder-index) pair comes first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .config import Config
from .errors import NotAMethodAst
from .rng import RandomStream, seeded_rng

if TYPE_CHECKING:  # the tree is duck-typed here; avoids a frontend cycle
    from .frontend.ast_nodes import AstNode

UP = "↑"
DOWN = "↓"

_SUBTOKEN_RE = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z]+|[a-z]+|[0-9]+")


@dataclass(frozen=True)
class PathContext:
    start_token: str
    node_types: tuple[str, ...]  # e.g. ("BinaryExpression↑", "ConditionalExpression↓")
    end_token: str

    def __post_init__(self):
        if not self.node_types:
            raise ValueError("a path context must cross at least one node")

    def flipped(self) -> "PathContext":
        """The same path read from the other endpoint."""
        labels = [t[:-1] for t in self.node_types]
        marks = [t[-1] for t in self.node_types]
        preceding = [UP] + marks[:-1]
        flipped_marks = [DOWN if m == UP else UP for m in reversed(preceding)]
        new_types = tuple(
            f"{label}{mark}" for label, mark in zip(reversed(labels), flipped_marks)
        )
        return PathContext(self.end_token, new_types, self.start_token)

    def path_symbol(self) -> str:
        """Whole-path token used where the node sequence is hashed away."""
        return "|".join(self.node_types)


@dataclass(frozen=True)
class PathSet:
    method: str
    contexts: tuple[PathContext, ...]
    truncated: bool = False


class _IndexedTree:
    """Preorder-indexed view of an AST for constant-ish LCA walks."""

    def __init__(self, root: "AstNode"):
        self.nodes: list[AstNode] = []
        self.parent: list[int] = []
        self.depth: list[int] = []
        self.leaves: list[int] = []
        stack = [(root, -1, 0)]
        while stack:
            current, parent_idx, depth = stack.pop()
            idx = len(self.nodes)
            self.nodes.append(current)
            self.parent.append(parent_idx)
            self.depth.append(depth)
            if current.is_leaf:
                self.leaves.append(idx)
            else:
                for child in reversed(current.children):
                    stack.append((child, idx, depth + 1))

    def path_between(self, a: int, b: int) -> tuple[str, ...]:
        """Intermediate node types (direction-tagged) from leaf a to leaf b."""
        up_a, up_b = [], []
        x, y = self.parent[a], self.parent[b]
        while self.depth[x] > self.depth[y]:
            up_a.append(x)
            x = self.parent[x]
        while self.depth[y] > self.depth[x]:
            up_b.append(y)
            y = self.parent[y]
        while x != y:
            up_a.append(x)
            up_b.append(y)
            x = self.parent[x]
            y = self.parent[y]
        lca = x
        parts = [f"{self.nodes[i].node_type}{UP}" for i in up_a]
        parts.append(f"{self.nodes[lca].node_type}{DOWN}")
        parts.extend(f"{self.nodes[i].node_type}{DOWN}" for i in reversed(up_b))
        return tuple(parts)


def extract_paths(
    ast: "AstNode",
    limits: Config,
    method: str = "",
    rng: RandomStream | None = None,
) -> PathSet:
    """All leaf-pair contexts passing the length and width limits.

    When more than ``max_contexts`` survive, a uniform subsample is drawn
    from ``rng`` (falling back to a stream derived from the configured
    seed and the method id) and ``truncated`` is set.
    """
    if ast.node_type != "MethodDeclaration":
        raise NotAMethodAst(f"expected a MethodDeclaration root, got {ast.node_type}")
    tree = _IndexedTree(ast)
    leaves = tree.leaves
    contexts: list[PathContext] = []
    for i in range(len(leaves)):
        max_j = min(len(leaves), i + limits.max_path_width + 1)
        for j in range(i + 1, max_j):
            node_types = tree.path_between(leaves[i], leaves[j])
            if len(node_types) > limits.max_path_length:
                continue
            start = tree.nodes[leaves[i]].token
            end = tree.nodes[leaves[j]].token
            context = PathContext(start, node_types, end)
            # canonical orientation: smaller (token, preorder-index) first;
            # leaf i precedes leaf j in preorder, so ties need no flip
            if end < start:
                context = context.flipped()
            contexts.append(context)

    truncated = False
    if len(contexts) > limits.max_contexts:
        if rng is None:
            rng = seeded_rng(limits.seed).split("paths").split(method)
        keep = rng.choice(len(contexts), size=limits.max_contexts, replace=False)
        contexts = [contexts[k] for k in sorted(keep)]
        truncated = True
    return PathSet(method=method, contexts=tuple(contexts), truncated=truncated)


def mine_paths(corpus, limits: Config, rng: RandomStream | None = None) -> dict[str, PathSet]:
    """One PathSet per corpus method.

    Methods ingested with pre-extracted contexts keep them verbatim;
    methods with neither an AST nor imported contexts get an empty set.
    """
    if rng is None:
        rng = seeded_rng(limits.seed).split("paths")
    out: dict[str, PathSet] = {}
    for method_id in corpus.method_ids():
        imported = corpus.imported_contexts.get(method_id)
        if imported is not None:
            out[method_id] = PathSet(method=method_id, contexts=tuple(imported))
            continue
        ast = corpus.ast_of(method_id)
        if ast is None:
            out[method_id] = PathSet(method=method_id, contexts=())
            continue
        out[method_id] = extract_paths(ast, limits, method_id, rng.split(method_id))
    return out


def subtokenize(token: str) -> list[str]:
    """Lowercased subtokens split at case boundaries, digits, underscores.

    Tokens with no alphanumeric runs (operator lexemes) come back whole.
    """
    parts = _SUBTOKEN_RE.findall(token)
    if not parts:
        return [token.lower()]
    return [p.lower() for p in parts]
