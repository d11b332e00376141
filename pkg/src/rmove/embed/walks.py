"""Random walk sampling over the undirected call graph.

Second-order walks follow the return/in-out bias rule: an unnormalized
weight of 1/p for stepping back to the previous node, 1 for a node at
distance one from it, and 1/q for a node at distance two.  With
p = q = 1 this degenerates to uniform first-order walks, and the
sampler takes the cheap path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import MethodDependencyGraph, undirected_view
from ..rng import RandomStream


@dataclass
class WalkCorpus:
    walks: list[np.ndarray]      # node-index sequences
    walk_length: int
    walks_per_node: int
    n_nodes: int

    def node_frequencies(self) -> np.ndarray:
        counts = np.zeros(self.n_nodes, dtype=np.int64)
        for walk in self.walks:
            np.add.at(counts, walk, 1)
        return counts


def sample_walks(
    graph: MethodDependencyGraph,
    length: int,
    per_node: int,
    p: float = 1.0,
    q: float = 1.0,
    rng: RandomStream = None,
) -> WalkCorpus:
    if rng is None:
        raise ValueError("sample_walks needs an explicit random stream")
    if length < 1 or per_node < 1:
        raise ValueError("walk length and walks per node must be >= 1")
    if p <= 0 or q <= 0:
        raise ValueError("p and q must be positive")
    adjacency = undirected_view(graph)
    neighbor_sets = [set(neighbors) for neighbors in adjacency]
    n = graph.node_count
    uniform = (p == 1.0 and q == 1.0)
    walks: list[np.ndarray] = []
    for _ in range(per_node):
        order = rng.permutation(n)
        for start in order:
            walk = [int(start)]
            while len(walk) < length:
                current = walk[-1]
                neighbors = adjacency[current]
                if not neighbors:
                    break
                if uniform or len(walk) == 1:
                    step = neighbors[int(rng.integers(len(neighbors)))]
                else:
                    previous = walk[-2]
                    weights = np.empty(len(neighbors))
                    prev_neighbors = neighbor_sets[previous]
                    for k, candidate in enumerate(neighbors):
                        if candidate == previous:
                            weights[k] = 1.0 / p
                        elif candidate in prev_neighbors:
                            weights[k] = 1.0
                        else:
                            weights[k] = 1.0 / q
                    cumulative = np.cumsum(weights)
                    draw = rng.random() * cumulative[-1]
                    step = neighbors[int(np.searchsorted(cumulative, draw, side="right"))]
                walk.append(int(step))
            walks.append(np.asarray(walk, dtype=np.int64))
    return WalkCorpus(walks=walks, walk_length=length, walks_per_node=per_node, n_nodes=n)


def skip_corpus(corpus: WalkCorpus, scale: int) -> WalkCorpus:
    """Keep every `scale`-th node of each walk, once per starting offset.

    Scale 1 returns sequences identical to the originals.
    """
    if scale < 1:
        raise ValueError("scale must be >= 1")
    if scale == 1:
        return corpus
    walks: list[np.ndarray] = []
    for walk in corpus.walks:
        for offset in range(min(scale, len(walk))):
            walks.append(walk[offset::scale])
    return WalkCorpus(
        walks=walks,
        walk_length=corpus.walk_length,
        walks_per_node=corpus.walks_per_node,
        n_nodes=corpus.n_nodes,
    )
