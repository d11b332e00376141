import dataclasses

import pytest

from rmove.config import Config
from rmove.errors import ConfigError


def test_defaults():
    cfg = Config()
    assert cfg.alpha == 0.5
    assert cfg.dims == 128
    assert cfg.tau == 0.5
    assert cfg.top_k == 1
    assert cfg.max_path_length == 9
    assert cfg.max_contexts == 200
    assert cfg.deepwalk_num_walks == 10
    assert cfg.deepwalk_walk_length == 80
    assert cfg.deepwalk_window == 10
    assert cfg.node2vec_p == 0.25
    assert cfg.node2vec_q == 0.25
    assert cfg.grarep_kstep == 4
    assert cfg.line_order == 3
    assert cfg.line_negative_ratio == 5
    assert cfg.prone_step == 10
    assert cfg.prone_theta == 0.5
    assert cfg.prone_mu == 0.2
    assert cfg.sdne_alpha == 1e-6
    assert cfg.sdne_beta == 5.0
    assert cfg.sdne_nu1 == 1e-5
    assert cfg.sdne_nu2 == 1e-4
    assert cfg.sdne_batch == 200
    assert cfg.sdne_epochs == 100
    assert cfg.walklets_scales == 5
    assert cfg.walklets_num_walks == 5
    assert cfg.walklets_walk_length == 80
    assert cfg.code2vec_epochs == 20
    assert cfg.code2vec_token_dim == 128
    assert cfg.code2vec_path_dim == 128


def test_round_trip_identity():
    cfg = Config(seed=99, alpha=0.25, dims=64, node2vec_p=1.5, compare_source=False)
    reparsed = Config.from_text(cfg.to_text())
    assert reparsed == cfg


def test_serialization_is_stable():
    cfg = Config(seed=7)
    text = cfg.to_text()
    assert Config.from_text(text).to_text() == text


def test_every_field_survives_round_trip():
    cfg = Config()
    reparsed = Config.from_text(cfg.to_text())
    for f in dataclasses.fields(Config):
        assert getattr(reparsed, f.name) == getattr(cfg, f.name)


def test_comments_and_blank_lines_ignored():
    text = "# a comment\n\nalpha = 0.75   # trailing\nseed = 5\n"
    cfg = Config.from_text(text)
    assert cfg.alpha == 0.75
    assert cfg.seed == 5


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        Config.from_text("no_such_key = 1\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError):
        Config.from_text("alpha = 0.5\nalpha = 0.6\n")


def test_bad_value_rejected():
    with pytest.raises(ConfigError):
        Config.from_text("dims = many\n")


def test_alpha_range_enforced():
    with pytest.raises(ConfigError):
        Config(alpha=1.5)
    with pytest.raises(ConfigError):
        Config(alpha=-0.1)


def test_tau_open_interval():
    with pytest.raises(ConfigError):
        Config(tau=1.0)


def test_dim_for_override():
    cfg = Config(dims=64, grarep_dim=32)
    assert cfg.dim_for("grarep") == 32
    assert cfg.dim_for("deepwalk") == 64
    assert cfg.dim_for("walklets") == 130  # own default, divisible by 5 scales


def test_content_hash_changes_with_fields():
    assert Config(seed=1).content_hash() != Config(seed=2).content_hash()
