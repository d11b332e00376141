import numpy as np
import pytest

from rmove.embed.skipgram import (
    sg_batch_loss_and_grads,
    skipgram_train,
    window_pairs,
)
from rmove.embed.walks import WalkCorpus, sample_walks
from rmove.errors import EmptyWalkCorpus
from rmove.rng import seeded_rng

from embed_helpers import (
    TWIN_TRIANGLE_GROUPS,
    finite_difference,
    relative_error,
    separation,
    twin_triangles,
)


def _walks(graph, seed, length=20, per_node=10):
    return sample_walks(graph, length, per_node, rng=seeded_rng(seed).split("walks"))


def test_window_pairs_counts():
    corpus = WalkCorpus(walks=[np.array([0, 1, 2, 3])], walk_length=4,
                        walks_per_node=1, n_nodes=4)
    pairs = window_pairs(corpus, window=1)
    as_set = {tuple(p) for p in pairs}
    assert as_set == {(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)}
    assert len(pairs) == 6


def test_twin_triangle_separation():
    graph = twin_triangles()
    vectors, meta = skipgram_train(
        _walks(graph, 1), dim=3, window=3, negatives=3, epochs=8, lr=1.0,
        rng=seeded_rng(1).split("train"), batch=64)
    intra, inter = separation(vectors, TWIN_TRIANGLE_GROUPS)
    assert intra > inter


def test_heldout_loss_decreases():
    graph = twin_triangles()
    _, meta = skipgram_train(
        _walks(graph, 2), dim=3, window=3, negatives=3, epochs=8, lr=1.0,
        rng=seeded_rng(2).split("train"), batch=64)
    assert meta["heldout_loss_last"] < meta["heldout_loss_first"]


def test_single_node_corpus():
    corpus = WalkCorpus(walks=[np.array([0])], walk_length=1,
                        walks_per_node=1, n_nodes=1)
    vectors, meta = skipgram_train(corpus, dim=4, window=2, negatives=2,
                                   epochs=2, lr=1.0,
                                   rng=seeded_rng(3), batch=8)
    assert vectors.shape == (1, 4)
    assert np.all(np.isfinite(vectors))
    assert meta["pairs"] == 0


def test_empty_corpus_rejected():
    corpus = WalkCorpus(walks=[], walk_length=1, walks_per_node=1, n_nodes=0)
    with pytest.raises(EmptyWalkCorpus):
        skipgram_train(corpus, 4, 2, 2, 1, 0.05, seeded_rng(0))


def test_bit_identical_with_same_seed():
    graph = twin_triangles()
    runs = []
    for _ in range(2):
        vectors, _ = skipgram_train(
            _walks(graph, 9), dim=3, window=2, negatives=2, epochs=3, lr=1.0,
            rng=seeded_rng(9).split("train"), batch=32)
        runs.append(vectors)
    assert np.array_equal(runs[0], runs[1])


def test_gradients_match_finite_differences():
    rng = seeded_rng(4)
    n, dim = 5, 4
    params = {
        "w_in": rng.normal(size=(n, dim)) * 0.3,
        "w_out": rng.normal(size=(n, dim)) * 0.3,
    }
    centers = np.array([0, 1, 2, 3])
    contexts = np.array([1, 2, 3, 4])
    negatives = np.array([[2, 4], [0, 3], [1, 0], [2, 2]])

    def loss_fn():
        loss, _, _ = sg_batch_loss_and_grads(
            params["w_in"], params["w_out"], centers, contexts, negatives)
        return loss

    _, grad_in, grad_out = sg_batch_loss_and_grads(
        params["w_in"], params["w_out"], centers, contexts, negatives)
    numeric = finite_difference(loss_fn, params)
    assert relative_error(grad_in, numeric["w_in"]) <= 1e-4
    assert relative_error(grad_out, numeric["w_out"]) <= 1e-4
