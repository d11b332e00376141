import warnings

import numpy as np
import pytest

from rmove.embed import (
    DeepWalk,
    GraRep,
    Line,
    Node2Vec,
    ProNE,
    Sdne,
    Walklets,
    effective_graph_dim,
    sample_walks,
    skipgram_train,
)
from rmove.embed.grarep import log_shifted, svd_factor, transition_matrix
from rmove.embed.line import line_batch_loss_and_grads
from rmove.embed.prone import chebyshev_propagate, randomized_tsvd, sparse_log_transition
from rmove.embed.sdne import (
    init_params as sdne_init,
    laplacian_penalty,
    sdne_loss_and_grads,
    weighted_reconstruction,
)
from rmove.errors import DimNotDivisibleByKstep, DimNotDivisibleByScales, RmoveError
from rmove.rng import seeded_rng

from embed_helpers import (
    barbell,
    finite_difference,
    make_graph,
    relative_error,
    separation,
    twin_triangles,
)

SMALL = dict(epochs=8, lr=1.0, batch=64)


def _embedders_for_six_nodes():
    return [
        DeepWalk(dim=3, num_walks=10, walk_length=20, window=3, negatives=3, **SMALL),
        Node2Vec(dim=3, p=0.25, q=0.25, num_walks=10, walk_length=20, window=3,
                 negatives=3, **SMALL),
        Walklets(dim=3, scales=3, num_walks=10, walk_length=20, negatives=3, **SMALL),
        GraRep(dim=3, kstep=3),
        Line(dim=2, order=3, negative_ratio=3, epochs=40, lr=1.0, batch=64),
        ProNE(dim=3, step=5, theta=0.5, mu=0.2),
        Sdne(dim=3, beta=5.0, alpha=1e-4, nu1=1e-6, nu2=1e-5, batch=6,
             epochs=80, lr=3.0, hidden=16),
    ]


@pytest.mark.parametrize("embedder", _embedders_for_six_nodes(),
                         ids=lambda e: e.technique)
def test_twin_triangle_separation(embedder):
    graph = twin_triangles()
    emb = embedder.fit_embedding(graph, rng=seeded_rng(17).split(embedder.technique))
    assert emb.vectors.shape[0] == 6
    assert np.all(np.isfinite(emb.vectors))
    intra, inter = separation(emb.vectors)
    assert intra > inter, f"{embedder.technique}: {intra} <= {inter}"


@pytest.mark.parametrize("embedder", _embedders_for_six_nodes(),
                         ids=lambda e: e.technique)
def test_deterministic_given_seed(embedder):
    graph = twin_triangles()
    first = embedder.fit_embedding(graph, rng=seeded_rng(3).split("x")).vectors
    second = embedder.fit_embedding(graph, rng=seeded_rng(3).split("x")).vectors
    assert np.array_equal(first, second)


def test_every_node_covered_including_isolated():
    graph = make_graph(6, [(0, 1), (1, 2)])  # nodes 3..5 isolated
    for embedder in (DeepWalk(dim=3, num_walks=4, walk_length=10, window=2,
                              negatives=2, **SMALL),
                     GraRep(dim=3, kstep=1), ProNE(dim=3, step=3)):
        emb = embedder.fit_embedding(graph, rng=seeded_rng(1).split("c"))
        assert emb.vectors.shape == (6, 3)
        assert np.all(np.isfinite(emb.vectors))


def test_effective_dim_rules():
    assert effective_graph_dim(128, 80) == 40
    assert effective_graph_dim(130, 80, unit=5) == 40
    assert effective_graph_dim(128, 80, unit=4) == 40
    assert effective_graph_dim(128, 1000) == 128
    assert effective_graph_dim(128, 3) == 128      # tiny graphs are exempt
    assert effective_graph_dim(6, 100, unit=3) == 6
    with pytest.raises(RmoveError):
        effective_graph_dim(7, 100, unit=3)        # not divisible
    with pytest.raises(RmoveError):
        effective_graph_dim(6, 8, unit=6)          # blocks cannot fit


def test_isolated_nodes_keep_initialization_vector():
    graph = make_graph(5, [(0, 1), (1, 2), (2, 0)])  # 3, 4 isolated
    rng = seeded_rng(5).split("deepwalk")
    dw = DeepWalk(dim=2, num_walks=5, walk_length=10, window=2, negatives=2, **SMALL)
    emb = dw.fit_embedding(graph, rng=rng)
    # reproduce the initialization: same derived stream, same draw shape
    rng2 = seeded_rng(5).split("deepwalk")
    rng2.split("walks")  # corpus stream consumed separately
    init = (seeded_rng(5).split("deepwalk").split("train").random((5, 2)) - 0.5) / 2
    assert np.allclose(emb.vectors[3], init[3])
    assert np.allclose(emb.vectors[4], init[4])
    assert not np.allclose(emb.vectors[0], init[0])  # trained node moved


# --- walklets -------------------------------------------------------------------

def test_walklets_dim_split_arithmetic():
    graph = make_graph(300, [(i, (i + 1) % 300) for i in range(300)]
                       + [(i, (i + 7) % 300) for i in range(300)])
    wl = Walklets(dim=130, scales=5, num_walks=1, walk_length=10, negatives=2,
                  epochs=1, lr=0.5, batch=256)
    emb = wl.fit_embedding(graph, rng=seeded_rng(2).split("w"))
    assert emb.dim == 130
    assert emb.params["per_scale_dim"] == 26


def test_walklets_rejects_indivisible_dim():
    with pytest.raises(DimNotDivisibleByScales):
        Walklets(dim=128, scales=5).fit(twin_triangles(), rng=seeded_rng(0))


def test_walklets_scale_one_equals_plain_skipgram():
    graph = twin_triangles()
    root = seeded_rng(21).split("probe")
    wl = Walklets(dim=2, scales=1, num_walks=6, walk_length=12, negatives=2,
                  epochs=3, lr=0.5, batch=32)
    emb = wl.fit_embedding(graph, rng=root)

    replayed = seeded_rng(21).split("probe")
    corpus = sample_walks(graph, 12, 6, rng=replayed.split("walks"))
    vectors, _ = skipgram_train(corpus, 2, 1, 2, 3, 0.5,
                                replayed.split("scale-1"), batch=32)
    assert np.array_equal(emb.vectors, vectors)


# --- grarep ---------------------------------------------------------------------

def _rank_r_oracle_error(matrix, rank):
    s = np.linalg.svd(matrix, compute_uv=False)
    return float(np.sqrt(np.sum(s[rank:] ** 2)))


@pytest.mark.parametrize("n,rank,seed", [(4, 4, 0), (6, 2, 1), (8, 3, 2), (8, 5, 3)])
def test_grarep_factor_is_frobenius_optimal(n, rank, seed):
    rnd = np.random.default_rng(seed)
    edges = {(int(a), int(b)) for a, b in rnd.integers(0, n, size=(2 * n, 2))
             if a != b}
    graph = make_graph(n, sorted(edges))
    shifted = log_shifted(transition_matrix(graph), n)
    factor = svd_factor(shifted, rank)
    q, _ = np.linalg.qr(factor[:, :min(rank, n)])
    projection_error = float(np.linalg.norm(shifted - q @ (q.T @ shifted)))
    assert abs(projection_error - _rank_r_oracle_error(shifted, rank)) <= 1e-8


def test_grarep_four_node_cycle_full_rank_reconstructs():
    graph = make_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    shifted = log_shifted(transition_matrix(graph), 4)
    factor = svd_factor(shifted, 4)
    q, _ = np.linalg.qr(factor)
    assert np.linalg.norm(shifted - q @ (q.T @ shifted)) <= 1e-8


def test_grarep_table_dim_arithmetic():
    graph = make_graph(260, [(i, (i + 1) % 260) for i in range(260)]
                       + [(i, (i + 3) % 260) for i in range(260)])
    emb = GraRep(dim=128, kstep=4).fit_embedding(graph, rng=seeded_rng(0))
    assert emb.dim == 128
    assert emb.params["per_step_dim"] == 32


def test_grarep_rejects_indivisible_dim():
    with pytest.raises(DimNotDivisibleByKstep):
        GraRep(dim=10, kstep=4).fit(twin_triangles())


def test_grarep_single_node_zero_vector():
    emb = GraRep(dim=2, kstep=1).fit_embedding(make_graph(1, []))
    assert np.allclose(emb.vectors, 0.0)


# --- line -----------------------------------------------------------------------

def test_line_order3_concatenates_halves():
    graph = twin_triangles()
    line = Line(dim=2, order=3, negative_ratio=2, epochs=5, lr=0.5, batch=16)
    emb = line.fit_embedding(graph, rng=seeded_rng(4).split("l"))
    assert emb.dim == 2
    half = Line(dim=1, order=1, negative_ratio=2, epochs=5, lr=0.5, batch=16)
    first_half = half.fit_embedding(graph, rng=seeded_rng(4).split("l"))
    assert np.array_equal(emb.vectors[:, :1], first_half.vectors)


def test_line_negative_ratio_contract():
    rng = seeded_rng(6)
    vertex = rng.normal(size=(4, 3)) * 0.2
    sources = np.array([0, 1])
    targets = np.array([1, 2])
    negatives = np.array([[2, 3, 0, 3, 2], [0, 3, 0, 1, 3]])  # exactly 5 per edge
    loss, _, _ = line_batch_loss_and_grads(vertex, None, sources, targets, negatives)
    manual = 0.0
    for b in range(2):
        pos = 1 / (1 + np.exp(-vertex[sources[b]] @ vertex[targets[b]]))
        manual -= np.log(pos + 1e-12)
        for k in range(5):
            neg = 1 / (1 + np.exp(-vertex[sources[b]] @ vertex[negatives[b, k]]))
            manual -= np.log(1 - neg + 1e-12)
    assert abs(loss - manual) < 1e-9


def test_line_empty_edge_set_warns_and_zero_fills():
    graph = make_graph(3, [])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        emb = Line(dim=2, order=1).fit_embedding(graph, rng=seeded_rng(0))
    assert any("edge-less" in str(w.message) for w in caught)
    assert np.allclose(emb.vectors, 0.0)
    assert emb.params["empty_edge_set"]


def test_line_heldout_objective_decreases():
    rnd = np.random.default_rng(11)
    n = 30
    edges = {(int(a), int(b)) for a, b in rnd.integers(0, n, size=(120, 2)) if a != b}
    graph = make_graph(n, sorted(edges))
    line = Line(dim=4, order=2, negative_ratio=3, epochs=40, lr=1.0, batch=16)
    emb = line.fit_embedding(graph, rng=seeded_rng(12).split("l"))
    assert emb.params["heldout_loss_last"] < emb.params["heldout_loss_first"]


def test_line_gradients_match_finite_differences():
    rng = seeded_rng(13)
    params = {
        "vertex": rng.normal(size=(5, 3)) * 0.3,
        "context": rng.normal(size=(5, 3)) * 0.3,
    }
    sources = np.array([0, 1, 2, 4])
    targets = np.array([1, 2, 3, 0])
    negatives = np.array([[3, 0], [4, 4], [0, 1], [2, 3]])

    def loss_first():
        return line_batch_loss_and_grads(
            params["vertex"], None, sources, targets, negatives)[0]

    analytic, _ = line_batch_loss_and_grads(
        params["vertex"], None, sources, targets, negatives)[1], None
    numeric = finite_difference(loss_first, {"vertex": params["vertex"]})
    assert relative_error(analytic, numeric["vertex"]) <= 1e-4

    def loss_second():
        return line_batch_loss_and_grads(
            params["vertex"], params["context"], sources, targets, negatives)[0]

    _, g_vertex, g_context = line_batch_loss_and_grads(
        params["vertex"], params["context"], sources, targets, negatives)
    numeric = finite_difference(loss_second, params)
    assert relative_error(g_vertex, numeric["vertex"]) <= 1e-4
    assert relative_error(g_context, numeric["context"]) <= 1e-4


# --- prone ----------------------------------------------------------------------

def test_prone_step_zero_is_identity():
    graph = twin_triangles()
    base = ProNE(dim=3, step=0).fit_embedding(graph, rng=seeded_rng(7).split("p"))
    log_m = sparse_log_transition(graph)
    u, s = randomized_tsvd(log_m, 3, seeded_rng(7).split("p").split("tsvd"))
    init = u * np.sqrt(s)
    assert np.array_equal(base.vectors, init)


def test_prone_propagation_changes_and_stays_finite():
    graph = twin_triangles()
    init = ProNE(dim=3, step=0).fit_embedding(graph, rng=seeded_rng(8).split("p"))
    brewed = ProNE(dim=3, step=10).fit_embedding(graph, rng=seeded_rng(8).split("p"))
    assert not np.allclose(init.vectors, brewed.vectors)
    assert np.all(np.isfinite(brewed.vectors))


def test_prone_metadata_records_band_parameters():
    emb = ProNE(dim=3, step=10, theta=0.5, mu=0.2).fit_embedding(
        twin_triangles(), rng=seeded_rng(9))
    assert emb.params["step"] == 10
    assert emb.params["theta"] == 0.5
    assert emb.params["mu"] == 0.2


def test_chebyshev_step_one_returns_input():
    import scipy.sparse as sp
    init = np.arange(12.0).reshape(6, 2)
    out = chebyshev_propagate(sp.eye(6, format="csr"), init, 1, 0.5, 0.2)
    assert out is init


# --- sdne -----------------------------------------------------------------------

def test_sdne_beta_weights_gradient_ratio():
    x = np.array([[1.0, 0.0]])
    reconstruction = np.array([[0.75, -0.25]])  # equal residual on both entries
    _, grad = weighted_reconstruction(x, reconstruction, beta=5.0)
    assert grad[0, 0] / grad[0, 1] == 5.0
    assert abs(grad[0, 0]) == 5.0 * abs(grad[0, 1])


def test_sdne_laplacian_prefers_connected_nodes_close():
    adjacency = np.array([[0.0, 1.0], [1.0, 0.0]])
    near = np.array([[0.0, 0.0], [0.1, 0.0]])
    far = np.array([[0.0, 0.0], [5.0, 0.0]])
    loss_near, _ = laplacian_penalty(near, adjacency, alpha=1.0)
    loss_far, _ = laplacian_penalty(far, adjacency, alpha=1.0)
    assert loss_far > loss_near
    disconnected = np.zeros((2, 2))
    loss_nothing, _ = laplacian_penalty(far, disconnected, alpha=1.0)
    assert loss_nothing == 0.0


def test_sdne_barbell_learns():
    graph = barbell()
    sdne = Sdne(dim=2, beta=5.0, alpha=1e-4, nu1=1e-6, nu2=1e-5,
                batch=6, epochs=150, lr=3.0, hidden=16)
    emb = sdne.fit_embedding(graph, rng=seeded_rng(10).split("s"))
    assert emb.params["epoch_loss_last"] < emb.params["epoch_loss_first"]
    intra, inter = separation(emb.vectors)
    assert intra > inter


def test_sdne_gradients_match_finite_differences():
    rng = seeded_rng(14)
    n, dim = 5, 2
    params = sdne_init(n, dim, rng.split("init"), hidden=4)
    adjacency = np.zeros((n, n))
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]:
        adjacency[a, b] = adjacency[b, a] = 1.0
    x = adjacency.copy()
    kwargs = dict(beta=5.0, alpha=1e-2, nu1=1e-4, nu2=1e-3)

    def loss_fn():
        return sdne_loss_and_grads(params, x, adjacency, **kwargs)[0]

    _, analytic = sdne_loss_and_grads(params, x, adjacency, **kwargs)
    numeric = finite_difference(loss_fn, params)
    for key in params:
        assert relative_error(analytic[key], numeric[key]) <= 1e-4, key
