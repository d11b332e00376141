import numpy as np
import pytest

from rmove.embed import Code2SeqEncoder, Code2VecEncoder, build_vocab
from rmove.embed.code2seq import (
    c2s_loss_and_grads,
    gru_forward,
    index_contexts as c2s_index,
    init_params as c2s_init,
)
from rmove.embed.code2seq import encode_method as c2s_encode
from rmove.embed.code2vec import (
    c2v_loss_and_grads,
    encode_method as c2v_encode,
    index_contexts as c2v_index,
    init_params as c2v_init,
)
from rmove.embed.vocab import PAD, UNK, target_label
from rmove.errors import EmptyCorpus
from rmove.paths import PathContext, PathSet
from rmove.rng import seeded_rng

from embed_helpers import finite_difference, relative_error


def ctx(start, nodes, end):
    return PathContext(start, tuple(nodes), end)


def simple_pathsets():
    return {
        "p::A::getTotal()": PathSet("p::A::getTotal()", (
            ctx("total", ["LocalDeclaration↑", "Block↓"], "sum"),
            ctx("sum", ["BinaryExpression↓"], "one"),
        )),
        "p::A::setTotal(int)": PathSet("p::A::setTotal(int)", (
            ctx("total", ["Assignment↓"], "value"),
        )),
    }


def planted_pathsets(n_labels=6, methods_per_label=8):
    """Each name label co-occurs with one unique path shape and token theme."""
    pathsets = {}
    names = [f"do{chr(ord('A') + k)}Task" for k in range(n_labels)]
    for label_index, name in enumerate(names):
        for clone in range(methods_per_label):
            method_id = f"p::K{clone}::{name}()"
            signal = ctx(f"sig{label_index}key", [f"Marker{label_index}↑", "Block↓"],
                         f"sig{label_index}val")
            extra = ctx(f"sig{label_index}val", [f"Marker{label_index}↑", "Block↓"],
                        f"sig{label_index}key")
            noise = ctx("shared", ["ExpressionStatement↑", "Block↓"], "plumbing")
            pathsets[method_id] = PathSet(method_id, (signal, extra, noise))
    return pathsets


# --- vocabulary ----------------------------------------------------------------

def test_vocab_indexes_everything_at_min_count_one():
    vocab = build_vocab(list(simple_pathsets().values()), min_count=1)
    assert vocab.token("total") > 1
    assert vocab.token("value") > 1
    assert vocab.path("Assignment↓") > 1
    assert vocab.node_type("Block↓") > 1
    assert vocab.target("get|total") > 1
    assert vocab.target("set|total") > 1


def test_vocab_min_count_maps_rare_to_unk():
    vocab = build_vocab(list(simple_pathsets().values()), min_count=2)
    # "total" appears in two contexts, "one" only once
    assert vocab.token("total") != UNK
    assert vocab.token("one") == UNK
    assert vocab.token("never-seen") == UNK


def test_vocab_reserved_indices_and_determinism():
    sets = list(simple_pathsets().values())
    first = build_vocab(sets, 1)
    second = build_vocab(sets, 1)
    assert first == second
    used = set(first.token_to_index.values())
    assert UNK not in used and PAD not in used
    assert min(used) == 2
    assert sorted(used) == list(range(2, 2 + len(used)))


def test_vocab_rejects_empty():
    with pytest.raises(EmptyCorpus):
        build_vocab([], 1)


def test_target_label_is_subtokenized_name():
    assert target_label("p::A::getTotal()") == "get|total"
    assert target_label("p::A::parse_HTTP2Frame(int)") == "parse|http|2|frame"


# --- code2vec -------------------------------------------------------------------

def _c2v_setup(dim=4):
    pathsets = simple_pathsets()
    vocab = build_vocab(list(pathsets.values()), 1)
    params = c2v_init(vocab, token_dim=3, path_dim=3, dim=dim,
                      rng=seeded_rng(1).split("init"))
    return pathsets, vocab, params


def test_c2v_single_context_attention_weight_is_one():
    pathsets, vocab, params = _c2v_setup()
    starts, paths, ends = c2v_index(pathsets["p::A::setTotal(int)"], vocab)
    weights, _ = c2v_encode(params, starts, paths, ends)
    assert weights.shape == (1,)
    assert weights[0] == 1.0


def test_c2v_attention_weights_sum_to_one():
    pathsets, vocab, params = _c2v_setup()
    starts, paths, ends = c2v_index(pathsets["p::A::getTotal()"], vocab)
    weights, _ = c2v_encode(params, starts, paths, ends)
    assert abs(weights.sum() - 1.0) <= 1e-6
    assert np.all(weights > 0)


def test_c2v_context_order_invariance():
    pathsets, vocab, params = _c2v_setup()
    pathset = pathsets["p::A::getTotal()"]
    starts, paths, ends = c2v_index(pathset, vocab)
    weights_a, pooled_a = c2v_encode(params, starts, paths, ends)
    perm = np.array([1, 0])
    weights_b, pooled_b = c2v_encode(params, starts[perm], paths[perm], ends[perm])
    assert np.allclose(sorted(weights_a), sorted(weights_b), atol=1e-10)
    assert np.allclose(pooled_a, pooled_b, atol=1e-10)


def test_c2v_gradients_match_finite_differences():
    pathsets, vocab, params = _c2v_setup()
    starts, paths, ends = c2v_index(pathsets["p::A::getTotal()"], vocab)
    target = vocab.target("get|total")

    def loss_fn():
        return c2v_loss_and_grads(params, starts, paths, ends, target)[0]

    _, analytic = c2v_loss_and_grads(params, starts, paths, ends, target)
    numeric = finite_difference(loss_fn, params)
    for key in params:
        assert relative_error(analytic[key], numeric[key]) <= 1e-4, key


def test_c2v_zero_context_methods_flagged():
    pathsets = simple_pathsets()
    pathsets["p::A::empty()"] = PathSet("p::A::empty()", ())
    vocab = build_vocab(list(pathsets.values()), 1)
    encoder = Code2VecEncoder(dim=4, token_dim=3, path_dim=3, epochs=2,
                              batch=4, lr=0.05)
    emb = encoder.fit_embedding(pathsets, vocab, rng=seeded_rng(2).split("e"))
    row = emb.ids.index("p::A::empty()")
    assert np.allclose(emb.vectors[row], 0.0)
    assert emb.flags["p::A::empty()"] == "no_contexts"
    assert len(emb.ids) == 3


def test_c2v_deterministic():
    pathsets = simple_pathsets()
    vocab = build_vocab(list(pathsets.values()), 1)
    def run():
        enc = Code2VecEncoder(dim=4, token_dim=3, path_dim=3, epochs=3,
                              batch=4, lr=0.05)
        return enc.fit_embedding(pathsets, vocab, rng=seeded_rng(5).split("e")).vectors
    assert np.array_equal(run(), run())


def test_c2v_planted_signal_heldout_accuracy():
    pathsets = planted_pathsets()
    vocab = build_vocab(list(pathsets.values()), 1)
    encoder = Code2VecEncoder(dim=12, token_dim=8, path_dim=8, epochs=30,
                              batch=8, lr=1.0)
    emb = encoder.fit_embedding(pathsets, vocab, rng=seeded_rng(7).split("c2v"))
    assert emb.params["heldout_methods"] >= 4
    assert emb.params["heldout_acc_last"] >= 0.9
    assert emb.params["heldout_loss_last"] < emb.params["heldout_loss_first"]


# --- code2seq -------------------------------------------------------------------

def _c2s_setup(dim=4):
    pathsets = simple_pathsets()
    vocab = build_vocab(list(pathsets.values()), 1)
    params = c2s_init(vocab, token_dim=3, node_dim=3, dim=dim,
                      rng=seeded_rng(3).split("init"))
    return pathsets, vocab, params


def test_c2s_reversed_path_changes_embedding():
    pathsets, vocab, params = _c2s_setup()
    forward = PathSet("p::A::probe()", (
        ctx("a", ["LocalDeclaration↑", "Block↓", "ReturnStatement↓"], "b"),))
    backward = PathSet("p::A::probe()", (
        ctx("a", ["ReturnStatement↑", "Block↓", "LocalDeclaration↓"], "b"),))
    idx_f = c2s_index(forward, vocab)
    idx_b = c2s_index(backward, vocab)
    state_f, _ = gru_forward(params, idx_f[0], idx_f[1])
    state_b, _ = gru_forward(params, idx_b[0], idx_b[1])
    assert np.max(np.abs(state_f - state_b)) > 1e-6


def test_c2s_degenerate_single_node_path():
    pathsets, vocab, params = _c2s_setup()
    degenerate = PathSet("p::A::tiny()", (ctx("x", ["Block↓"], "x"),))
    weights, pooled = c2s_encode(params, c2s_index(degenerate, vocab))
    assert weights[0] == 1.0
    assert np.all(np.isfinite(pooled))


def test_c2s_attention_weights_sum_to_one():
    pathsets, vocab, params = _c2s_setup()
    weights, _ = c2s_encode(params, c2s_index(pathsets["p::A::getTotal()"], vocab))
    assert abs(weights.sum() - 1.0) <= 1e-6


def test_c2s_context_order_invariance():
    pathsets, vocab, params = _c2s_setup()
    pathset = pathsets["p::A::getTotal()"]
    permuted = PathSet(pathset.method, (pathset.contexts[1], pathset.contexts[0]))
    weights_a, pooled_a = c2s_encode(params, c2s_index(pathset, vocab))
    weights_b, pooled_b = c2s_encode(params, c2s_index(permuted, vocab))
    assert np.allclose(sorted(weights_a), sorted(weights_b), atol=1e-10)
    assert np.allclose(pooled_a, pooled_b, atol=1e-10)


def test_c2s_gradients_match_finite_differences():
    pathsets, vocab, params = _c2s_setup(dim=3)
    total_indexed = [
        (c2s_index(pathsets["p::A::getTotal()"], vocab),
         vocab.target("get|total")),
        (c2s_index(pathsets["p::A::setTotal(int)"], vocab),
         vocab.target("set|total")),
    ]

    def loss_fn():
        return sum(c2s_loss_and_grads(params, idx, tgt)[0]
                   for idx, tgt in total_indexed)

    analytic = {key: np.zeros_like(value) for key, value in params.items()}
    for idx, tgt in total_indexed:
        c2s_loss_and_grads(params, idx, tgt, analytic)
    numeric = finite_difference(loss_fn, params)
    for key in params:
        assert relative_error(analytic[key], numeric[key]) <= 1e-4, key


def test_c2s_deterministic():
    pathsets = simple_pathsets()
    vocab = build_vocab(list(pathsets.values()), 1)
    def run():
        enc = Code2SeqEncoder(dim=4, token_dim=3, node_dim=3, epochs=3,
                              batch=4, lr=0.05)
        return enc.fit_embedding(pathsets, vocab, rng=seeded_rng(6).split("e")).vectors
    assert np.array_equal(run(), run())


def test_c2s_planted_signal_heldout_accuracy():
    pathsets = planted_pathsets()
    vocab = build_vocab(list(pathsets.values()), 1)
    encoder = Code2SeqEncoder(dim=12, token_dim=8, node_dim=8, epochs=35,
                              batch=8, lr=1.0)
    emb = encoder.fit_embedding(pathsets, vocab, rng=seeded_rng(8).split("c2s"))
    assert emb.params["heldout_methods"] >= 4
    assert emb.params["heldout_acc_last"] >= 0.9
    assert emb.params["heldout_loss_last"] < emb.params["heldout_loss_first"]


def test_methods_appear_exactly_once():
    pathsets = planted_pathsets(n_labels=3, methods_per_label=3)
    vocab = build_vocab(list(pathsets.values()), 1)
    enc = Code2VecEncoder(dim=6, token_dim=4, path_dim=4, epochs=2, batch=8, lr=0.05)
    emb = enc.fit_embedding(pathsets, vocab, rng=seeded_rng(9).split("x"))
    assert sorted(emb.ids) == sorted(pathsets)
    assert len(set(emb.ids)) == len(emb.ids)
