"""Method dependency graph: methods as nodes, call relations as edges.

Node indices are dense and assigned in sorted method-id order, so the
same corpus always yields the same graph.  An edge (i, j) exists iff the
corpus resolved at least one call i -> j; duplicates collapse and
self-calls are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ArtifactError


@dataclass(frozen=True)
class MethodDependencyGraph:
    nodes: tuple[str, ...]                 # sorted method ids
    edges: tuple[tuple[int, int], ...]     # sorted (src_index, dst_index)
    directed: bool = True
    index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {m: i for i, m in enumerate(self.nodes)})

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def out_neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for src, dst in self.edges:
            adj[src].append(dst)
        return adj


def build_mdg(corpus) -> MethodDependencyGraph:
    nodes = tuple(sorted(corpus.methods))
    index = {m: i for i, m in enumerate(nodes)}
    edge_set = set()
    for src, dst in corpus.raw_calls:
        si, di = index[src], index[dst]
        if si != di:
            edge_set.add((si, di))
    return MethodDependencyGraph(nodes=nodes, edges=tuple(sorted(edge_set)))


def undirected_view(graph: MethodDependencyGraph) -> list[list[int]]:
    """Symmetric adjacency lists: deduplicated in+out neighbors, sorted."""
    neighbor_sets: list[set[int]] = [set() for _ in graph.nodes]
    for src, dst in graph.edges:
        neighbor_sets[src].add(dst)
        neighbor_sets[dst].add(src)
    return [sorted(s) for s in neighbor_sets]


def undirected_edges(graph: MethodDependencyGraph) -> list[tuple[int, int]]:
    edge_set = {(min(s, d), max(s, d)) for s, d in graph.edges}
    return sorted(edge_set)


def save_edge_list(graph: MethodDependencyGraph, path) -> None:
    """Header line with |V|, one line per node id, then src<TAB>dst lines."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{graph.node_count}\n")
        for node in graph.nodes:
            fh.write(f"{node}\n")
        for src, dst in graph.edges:
            fh.write(f"{graph.nodes[src]}\t{graph.nodes[dst]}\n")


def load_edge_list(path) -> MethodDependencyGraph:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ArtifactError(f"{path}: empty edge-list file")
    try:
        count = int(lines[0])
    except ValueError:
        raise ArtifactError(f"{path}: bad node count header {lines[0]!r}") from None
    nodes = tuple(lines[1:1 + count])
    if len(nodes) != count or any("\t" in n for n in nodes):
        raise ArtifactError(f"{path}: node section does not match header")
    index = {m: i for i, m in enumerate(nodes)}
    edges = []
    for line in lines[1 + count:]:
        src, _, dst = line.partition("\t")
        if src not in index or dst not in index:
            raise ArtifactError(f"{path}: edge references unknown node")
        edges.append((index[src], index[dst]))
    return MethodDependencyGraph(nodes=nodes, edges=tuple(sorted(edges)))
