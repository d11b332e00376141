"""Structural (call-graph) and semantic (AST-path) embedding techniques."""

from .base import GraphEmbedding, effective_graph_dim
from .walks import WalkCorpus, sample_walks
from .skipgram import skipgram_train, sg_batch_loss_and_grads
from .walkers import DeepWalk, Node2Vec, Walklets
from .grarep import GraRep
from .line import Line
from .prone import ProNE
from .sdne import Sdne
from .vocab import Vocabulary, build_vocab
from .code2vec import Code2VecEncoder
from .code2seq import Code2SeqEncoder

GRAPH_TECHNIQUES = {
    "deepwalk": DeepWalk,
    "node2vec": Node2Vec,
    "walklets": Walklets,
    "grarep": GraRep,
    "line": Line,
    "prone": ProNE,
    "sdne": Sdne,
}

CODE_ENCODERS = {
    "code2vec": Code2VecEncoder,
    "code2seq": Code2SeqEncoder,
}


def graph_embedder_from_config(technique: str, cfg):
    """Instantiate a graph embedder with the configured hyper-parameters."""
    dim = cfg.dim_for(technique)
    if technique == "deepwalk":
        return DeepWalk(dim=dim, num_walks=cfg.deepwalk_num_walks,
                        walk_length=cfg.deepwalk_walk_length,
                        window=cfg.deepwalk_window,
                        negatives=cfg.deepwalk_negatives,
                        epochs=cfg.deepwalk_epochs, lr=cfg.sg_lr,
                        batch=cfg.sg_batch)
    if technique == "node2vec":
        return Node2Vec(dim=dim, p=cfg.node2vec_p, q=cfg.node2vec_q,
                        num_walks=cfg.node2vec_num_walks,
                        walk_length=cfg.node2vec_walk_length,
                        window=cfg.node2vec_window,
                        negatives=cfg.node2vec_negatives,
                        epochs=cfg.node2vec_epochs, lr=cfg.sg_lr,
                        batch=cfg.sg_batch)
    if technique == "walklets":
        return Walklets(dim=dim, scales=cfg.walklets_scales,
                        num_walks=cfg.walklets_num_walks,
                        walk_length=cfg.walklets_walk_length,
                        negatives=cfg.walklets_negatives,
                        epochs=cfg.walklets_epochs, lr=cfg.sg_lr,
                        batch=cfg.sg_batch)
    if technique == "grarep":
        return GraRep(dim=dim, kstep=cfg.grarep_kstep)
    if technique == "line":
        return Line(dim=dim, order=cfg.line_order,
                    negative_ratio=cfg.line_negative_ratio,
                    epochs=cfg.line_epochs, lr=cfg.line_lr, batch=cfg.sg_batch)
    if technique == "prone":
        return ProNE(dim=dim, step=cfg.prone_step, theta=cfg.prone_theta,
                     mu=cfg.prone_mu)
    if technique == "sdne":
        return Sdne(dim=dim, alpha=cfg.sdne_alpha, beta=cfg.sdne_beta,
                    nu1=cfg.sdne_nu1, nu2=cfg.sdne_nu2, batch=cfg.sdne_batch,
                    epochs=cfg.sdne_epochs, lr=cfg.sdne_lr)
    raise ValueError(f"unknown graph technique {technique!r}; "
                     f"choose from {sorted(GRAPH_TECHNIQUES)}")


def code_encoder_from_config(encoder: str, cfg):
    if encoder == "code2vec":
        return Code2VecEncoder(dim=cfg.dim_for("code2vec"),
                               token_dim=cfg.code2vec_token_dim,
                               path_dim=cfg.code2vec_path_dim,
                               epochs=cfg.code2vec_epochs,
                               batch=cfg.code2vec_batch, lr=cfg.code2vec_lr)
    if encoder == "code2seq":
        return Code2SeqEncoder(dim=cfg.dim_for("code2seq"),
                               token_dim=cfg.code2seq_token_dim,
                               node_dim=cfg.code2seq_node_dim,
                               epochs=cfg.code2seq_epochs,
                               batch=cfg.code2seq_batch, lr=cfg.code2seq_lr)
    raise ValueError(f"unknown code encoder {encoder!r}; "
                     f"choose from {sorted(CODE_ENCODERS)}")

__all__ = [
    "GraphEmbedding",
    "effective_graph_dim",
    "WalkCorpus",
    "sample_walks",
    "skipgram_train",
    "sg_batch_loss_and_grads",
    "DeepWalk",
    "Node2Vec",
    "Walklets",
    "GraRep",
    "Line",
    "ProNE",
    "Sdne",
    "Vocabulary",
    "build_vocab",
    "Code2VecEncoder",
    "Code2SeqEncoder",
    "GRAPH_TECHNIQUES",
    "CODE_ENCODERS",
]
