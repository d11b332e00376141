"""Command-line pipeline over persisted workspace artifacts.

Stages run in order: synth (optional) -> extract -> embed-graph ->
embed-code -> fuse -> gen-data -> train -> recommend -> evaluate; bench
sweeps embedding/classifier combinations.  Every stage records its input
and output hashes in the workspace manifest and refuses to consume a
file that changed since it was produced (override with --force).

Exit codes: 0 success, 2 usage, 3 input/hash error, 4 data error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import Config
from .embed import (
    CODE_ENCODERS,
    GRAPH_TECHNIQUES,
    code_encoder_from_config,
    graph_embedder_from_config,
)
from .embed.base import CodeEmbedding, GraphEmbedding
from .embed.vocab import build_vocab, save_vocab
from .errors import ArtifactError, ConfigError, RmoveError
from .evaluation import (
    benchmark_rows_to_csv,
    benchmark_table,
    compute_metrics,
)
from .frontend import corpus_stats, ingest_facts, parse_source
from .frontend.corpus import filter_methods, looks_like_accessor
from .fusion import HybridSpace, fuse, load_hybrids, save_hybrids
from .graph import build_mdg, save_edge_list
from .manifest import Manifest, file_hash
from .parallel import worker_count
from .paths import mine_paths
from .recommend import parse_json_lines, recommend_moves, render_json_lines, render_table
from .rng import seeded_rng
from .storage import load_embedding, load_samples, save_embedding, save_samples
from .synth import SmellInjectionSpec, generate_smelly_corpus
from .training import (
    cross_validate,
    generate_training_data,
    grid_search,
    load_model,
    samples_to_arrays,
    save_model,
    train_classifier,
)
from .triples import load_triples, save_triples

import json

FACTS_FILE = "corpus.facts.jsonl"
MDG_FILE = "mdg.tsv"
SAMPLES_FILE = "samples.bin"
MODEL_FILE = "model.bin"
RECS_FILE = "recommendations.jsonl"
EVAL_FILE = "eval.json"
TRUTH_FILE = "ground_truth.jsonl"
HYBRID_DIR = "hybrid"


class _Stage:
    """Workspace + config + manifest plumbing shared by every handler."""

    def __init__(self, args):
        self.workspace = Path(getattr(args, "workspace", "."))
        if args.config:
            self.cfg = Config.load(args.config)
        else:
            self.cfg = Config()
        if getattr(args, "seed", None) is not None:
            self.cfg = self.cfg.replace(seed=args.seed)
        self.deterministic = bool(getattr(args, "deterministic", False))
        self.force = bool(getattr(args, "force", False))
        self.manifest = Manifest(self.workspace)
        self.rng = seeded_rng(self.cfg.seed)
        self.workers = worker_count(self.deterministic)

    def path(self, name) -> Path:
        return self.workspace / name

    def need(self, *names) -> list[Path]:
        paths = [self.path(n) for n in names]
        self.manifest.verify_inputs(paths, force=self.force)
        return paths

    def record(self, stage, inputs, outputs):
        self.manifest.record(stage, inputs, outputs,
                             self.cfg.content_hash(), self.cfg.seed)

    def load_corpus(self):
        with open(self.path(FACTS_FILE), encoding="utf-8") as fh:
            return ingest_facts(fh.read())

    def pathsets(self, corpus):
        return mine_paths(corpus, self.cfg, self.rng.split("paths"))


def _say(message):
    print(message)


def _warn(message):
    print(message, file=sys.stderr)


# --- handlers --------------------------------------------------------------------


def cmd_synth(args) -> int:
    stage = _Stage(args)
    spec = SmellInjectionSpec(
        classes=args.classes, methods_per_class=args.methods_per_class,
        calls_per_method=args.calls_per_method, injected_moves=args.moves,
        seed=stage.cfg.seed)
    files, truth = generate_smelly_corpus(spec)
    src_dir = stage.path("src")
    src_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for name, text in files:
        target = src_dir / name
        target.write_text(text, encoding="utf-8")
        outputs.append(target)
    truth_path = stage.path(TRUTH_FILE)
    save_triples(truth, truth_path)
    outputs.append(truth_path)
    stage.record("synth", [], outputs)
    _say(f"wrote {len(files)} source files and {len(truth)} ground-truth "
         f"triples to {stage.workspace}")
    return 0


def cmd_extract(args) -> int:
    stage = _Stage(args)
    if bool(args.source) == bool(args.facts):
        raise ConfigError("pass exactly one of --source or --facts")
    inputs = []
    if args.source:
        source_dir = Path(args.source)
        files = sorted(p for p in source_dir.rglob("*") if p.is_file())
        if not files:
            raise ArtifactError(f"no source files under {source_dir}")
        inputs.extend(files)
        stage.manifest.verify_inputs(inputs, force=stage.force)
        corpus = parse_source(
            [(str(p.relative_to(source_dir)), p.read_text(encoding="utf-8"))
             for p in files],
            project=args.project)
    else:
        facts_path = Path(args.facts)
        inputs.append(facts_path)
        stage.manifest.verify_inputs(inputs, force=stage.force)
        corpus = ingest_facts(facts_path.read_text(encoding="utf-8"))
    if args.exclude_accessors:
        corpus = filter_methods(corpus, lambda rec: not looks_like_accessor(rec))

    pathsets = stage.pathsets(corpus)
    from .frontend import export_facts
    facts_out = stage.path(FACTS_FILE)
    facts_out.write_text(export_facts(corpus, pathsets), encoding="utf-8")
    mdg = build_mdg(corpus)
    mdg_out = stage.path(MDG_FILE)
    save_edge_list(mdg, mdg_out)
    stage.record("extract", inputs, [facts_out, mdg_out])

    stats = corpus_stats(corpus)
    stats["path_contexts"] = sum(len(p.contexts) for p in pathsets.values())
    stats["mdg_edges"] = len(mdg.edges)
    _say(json.dumps(stats, sort_keys=True))
    for key in ("calls_unresolved", "calls_ambiguous"):
        if stats.get(key):
            _warn(f"diagnostics: {key} = {stats[key]}")
    return 0


def cmd_embed_graph(args) -> int:
    stage = _Stage(args)
    (facts_in,) = stage.need(FACTS_FILE)
    corpus = stage.load_corpus()
    mdg = build_mdg(corpus)
    embedder = graph_embedder_from_config(args.technique, stage.cfg)
    embedding = embedder.fit_embedding(
        mdg, rng=stage.rng.split(f"graph-{args.technique}"))
    out = stage.path(f"graph_{args.technique}.emb")
    save_embedding(out, args.technique, list(embedding.nodes),
                   embedding.vectors, embedding.params)
    stage.record(f"embed-graph:{args.technique}", [facts_in],
                 [out, Path(str(out) + ".json")])
    _say(f"embedded {embedding.vectors.shape[0]} methods at "
         f"dim {embedding.dim} with {args.technique}")
    return 0


def cmd_embed_code(args) -> int:
    stage = _Stage(args)
    (facts_in,) = stage.need(FACTS_FILE)
    corpus = stage.load_corpus()
    pathsets = stage.pathsets(corpus)
    vocab = build_vocab(list(pathsets.values()), stage.cfg.min_count)
    encoder = code_encoder_from_config(args.encoder, stage.cfg)
    embedding = encoder.fit_embedding(
        pathsets, vocab, rng=stage.rng.split(f"code-{args.encoder}"))
    out = stage.path(f"code_{args.encoder}.emb")
    save_embedding(out, args.encoder, list(embedding.ids), embedding.vectors,
                   {**embedding.params, "flags": embedding.flags})
    vocab_out = stage.path(f"vocab_{args.encoder}.json")
    save_vocab(vocab, vocab_out)
    stage.record(f"embed-code:{args.encoder}", [facts_in],
                 [out, Path(str(out) + ".json"), vocab_out])
    flagged = len(embedding.flags)
    _say(f"encoded {len(embedding.ids)} methods at dim {embedding.dim} "
         f"with {args.encoder} ({flagged} zero-context)")
    if flagged:
        _warn(f"diagnostics: {flagged} methods had no path contexts")
    return 0


def _load_code_embedding(path) -> CodeEmbedding:
    tag, ids, matrix, params = load_embedding(path)
    flags = params.pop("flags", {})
    return CodeEmbedding(encoder=tag, dim=matrix.shape[1], ids=tuple(ids),
                         vectors=matrix.astype(np.float64), flags=flags,
                         params=params)


def _load_graph_embedding(path) -> GraphEmbedding:
    tag, ids, matrix, params = load_embedding(path)
    return GraphEmbedding(technique=tag, dim=matrix.shape[1], nodes=tuple(ids),
                          vectors=matrix.astype(np.float64), params=params)


def cmd_fuse(args) -> int:
    stage = _Stage(args)
    code_file = f"code_{args.code}.emb"
    graph_file = f"graph_{args.graph}.emb"
    facts_in, code_in, graph_in = stage.need(FACTS_FILE, code_file, graph_file)
    corpus = stage.load_corpus()
    code = _load_code_embedding(code_in)
    graph = _load_graph_embedding(graph_in)
    space = fuse(corpus, code, graph, stage.cfg.alpha)
    out_dir = stage.path(HYBRID_DIR)
    save_hybrids(space, out_dir)
    outputs = [out_dir / "methods.emb", out_dir / "methods.emb.json",
               out_dir / "classes.emb", out_dir / "classes.emb.json",
               out_dir / "normalizers.json"]
    stage.record("fuse", [facts_in, code_in, graph_in], outputs)
    _say(f"fused {len(space.method_ids)} methods and {len(space.class_ids)} "
         f"classes (alpha={space.alpha}, width={space.width}); "
         f"{len(space.empty_classes)} empty classes flagged")
    return 0


def cmd_gen_data(args) -> int:
    stage = _Stage(args)
    truth_path = Path(args.truth) if args.truth else stage.path(TRUTH_FILE)
    inputs = stage.need(HYBRID_DIR + "/methods.emb", HYBRID_DIR + "/classes.emb")
    stage.manifest.verify_inputs([truth_path], force=stage.force)
    triples = load_triples(truth_path)
    space = load_hybrids(stage.path(HYBRID_DIR))
    samples = generate_training_data(triples, space)
    X, y = samples_to_arrays(samples)
    out = stage.path(SAMPLES_FILE)
    save_samples(out, X, y,
                 [{"method": s.provenance[0], "class": s.provenance[1],
                   "triple": s.provenance[2], "label": bool(s.label)}
                  for s in samples])
    stage.record("gen-data", inputs + [truth_path], [out])
    _say(f"generated {len(samples)} samples "
         f"({int(y.sum())} positive, {int((~y).sum())} negative) "
         f"from {len(triples)} triples")
    return 0


def cmd_train(args) -> int:
    stage = _Stage(args)
    (samples_in,) = stage.need(SAMPLES_FILE)
    X, y, _ = load_samples(stage.path(SAMPLES_FILE))
    X = X.astype(np.float64)
    rng = stage.rng.split(f"train-{args.kind}")
    report = {"kind": args.kind, "samples": int(len(y))}

    hyperparams = json.loads(args.params) if args.params else None
    if args.grid:
        best, model = grid_search(args.kind, X, y, folds=args.folds,
                                  rng=rng.split("grid"))
        report["grid_best"] = best
        hyperparams = best
    else:
        model = train_classifier(args.kind, X, y, hyperparams,
                                 rng.split("fit"))
    if args.cv:
        repeats, _, folds = args.cv.partition("x")
        result = cross_validate(args.kind, X, y, int(folds), int(repeats),
                                rng.split("cv"), hyperparams)
        report["cv_mean"] = result["mean"]
        report["cv_rows"] = len(result["rows"])

    normalizers = stage.path(HYBRID_DIR) / "normalizers.json"
    model.normalizer_ref = file_hash(normalizers) if normalizers.exists() else ""
    model.config_snapshot = {"config_hash": stage.cfg.content_hash(),
                             "seed": stage.cfg.seed}
    out = stage.path(MODEL_FILE)
    save_model(model, out)
    report_path = stage.path("train_report.json")
    report_path.write_text(json.dumps(report, sort_keys=True, default=str) + "\n",
                           encoding="utf-8")
    stage.record("train", [samples_in], [out, report_path])
    _say(json.dumps(report, sort_keys=True, default=str))
    return 0


def cmd_recommend(args) -> int:
    stage = _Stage(args)
    facts_in, model_in = stage.need(FACTS_FILE, MODEL_FILE)
    stage.need(HYBRID_DIR + "/methods.emb", HYBRID_DIR + "/classes.emb")
    corpus = stage.load_corpus()
    space = load_hybrids(stage.path(HYBRID_DIR))
    normalizers = stage.path(HYBRID_DIR) / "normalizers.json"
    model = load_model(
        model_in, expected_dim=2 * space.width,
        expected_normalizer_ref=file_hash(normalizers))
    mdg = build_mdg(corpus) if args.linked_only else None
    pathsets = stage.pathsets(corpus) if args.linked_only else None
    started = time.perf_counter()
    recommendations = recommend_moves(
        model, corpus, space, stage.cfg, linked_only=args.linked_only,
        mdg=mdg, pathsets=pathsets, workers=stage.workers)
    elapsed = time.perf_counter() - started
    out = stage.path(args.output or RECS_FILE)
    out.write_text(render_json_lines(recommendations), encoding="utf-8")
    stage.record("recommend", [facts_in, model_in], [out])
    _say(render_table(recommendations))
    _warn(f"scored {len(recommendations)} methods in {elapsed:.3f}s "
          f"({stage.workers} workers)")
    return 0


def cmd_evaluate(args) -> int:
    stage = _Stage(args)
    truth_path = Path(args.truth) if args.truth else stage.path(TRUTH_FILE)
    recs_path = stage.path(args.recommendations or RECS_FILE)
    stage.manifest.verify_inputs([recs_path, truth_path], force=stage.force)
    recommendations = parse_json_lines(recs_path.read_text(encoding="utf-8"))
    truth = load_triples(truth_path)
    result = compute_metrics(recommendations, truth)
    out = stage.path(EVAL_FILE)
    out.write_text(result.to_json() + "\n", encoding="utf-8")
    stage.record("evaluate", [recs_path, truth_path], [out])
    _say(result.to_json())
    return 0


def cmd_bench(args) -> int:
    stage = _Stage(args)
    (facts_in,) = stage.need(FACTS_FILE)
    truth_path = Path(args.truth) if args.truth else stage.path(TRUTH_FILE)
    corpus = stage.load_corpus()
    triples = load_triples(truth_path)
    pathsets = stage.pathsets(corpus)
    mdg = build_mdg(corpus)
    vocab = build_vocab(list(pathsets.values()), stage.cfg.min_count)

    techniques = args.techniques.split(",")
    encoders = args.encoders.split(",")
    classifiers = args.classifiers.split(",")
    graph_cache = {}
    code_cache = {}
    rows = []
    for technique in techniques:
        if technique not in graph_cache:
            embedder = graph_embedder_from_config(technique, stage.cfg)
            graph_cache[technique] = embedder.fit_embedding(
                mdg, rng=stage.rng.split(f"graph-{technique}"))
        for encoder in encoders:
            if encoder not in code_cache:
                enc = code_encoder_from_config(encoder, stage.cfg)
                code_cache[encoder] = enc.fit_embedding(
                    pathsets, vocab, rng=stage.rng.split(f"code-{encoder}"))
            space = fuse(corpus, code_cache[encoder], graph_cache[technique],
                         stage.cfg.alpha)
            samples = generate_training_data(triples, space)
            X, y = samples_to_arrays(samples)
            combo = f"{encoder}+{technique}"
            for kind in classifiers:
                cv = cross_validate(
                    kind, X, y, args.folds, args.repeats,
                    stage.rng.split(f"cv-{combo}-{kind}"))
                model = train_classifier(
                    kind, X, y, None, stage.rng.split(f"fit-{combo}-{kind}"))
                started = time.perf_counter()
                recommend_moves(model, corpus, space, stage.cfg,
                                workers=stage.workers)
                per_method_ms = ((time.perf_counter() - started)
                                 / max(1, len(corpus.methods)) * 1000.0)
                rows.append({
                    "combo": combo, "classifier": kind,
                    "precision": cv["mean"]["precision"],
                    "recall": cv["mean"]["recall"],
                    "f1": cv["mean"]["f1"],
                    "infer_ms_per_method": per_method_ms,
                    "seed": stage.cfg.seed,
                })
    csv_text = benchmark_rows_to_csv(rows)
    out = stage.path("bench.csv")
    out.write_text(csv_text, encoding="utf-8")
    stage.record("bench", [facts_in, truth_path], [out])
    _say(benchmark_table(rows))
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmove",
        description="Move Method refactoring recommender: fuses call-graph "
                    "and AST-path embeddings and ranks target classes.")
    parser.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-w", "--workspace", default=".",
                        help="artifact directory (default: current)")
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--deterministic", action="store_true",
                        help="single-threaded bit-reproducible mode")
    common.add_argument("--force", action="store_true",
                        help="run even when manifest input hashes mismatch")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common],
                       help="generate a synthetic corpus with injected smells")
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--methods-per-class", type=int, required=True)
    p.add_argument("--calls-per-method", type=int, default=2)
    p.add_argument("--moves", type=int, default=0)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("extract", parents=[common],
                       help="parse sources or ingest facts; mine paths and calls")
    p.add_argument("--source", help="directory of subset-grammar source files")
    p.add_argument("--facts", help="facts JSONL file")
    p.add_argument("--project", default="main")
    p.add_argument("--exclude-accessors", action="store_true",
                   help="drop getter/setter-named methods")
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("embed-graph", parents=[common],
                       help="embed the method dependency graph")
    p.add_argument("--technique", required=True,
                   choices=sorted(GRAPH_TECHNIQUES))
    p.set_defaults(handler=cmd_embed_graph)

    p = sub.add_parser("embed-code", parents=[common],
                       help="embed methods from AST path contexts")
    p.add_argument("--encoder", required=True, choices=sorted(CODE_ENCODERS))
    p.set_defaults(handler=cmd_embed_code)

    p = sub.add_parser("fuse", parents=[common],
                       help="normalize and fuse code and graph embeddings")
    p.add_argument("--code", required=True, choices=sorted(CODE_ENCODERS))
    p.add_argument("--graph", required=True, choices=sorted(GRAPH_TECHNIQUES))
    p.set_defaults(handler=cmd_fuse)

    p = sub.add_parser("gen-data", parents=[common],
                       help="build labeled samples from refactoring triples")
    p.add_argument("--truth", help="ground-truth triples JSONL "
                                   "(default: workspace ground_truth.jsonl)")
    p.set_defaults(handler=cmd_gen_data)

    p = sub.add_parser("train", parents=[common], help="fit a classifier")
    p.add_argument("--kind", required=True,
                   choices=["dt", "nb", "svm", "lr", "rf", "gbt", "xgb"])
    p.add_argument("--grid", action="store_true",
                   help="tune with the default grid before fitting")
    p.add_argument("--params", help="hyper-parameter overrides as JSON")
    p.add_argument("--cv", help="repeats x folds, e.g. 10x10")
    p.add_argument("--folds", type=int, default=5,
                   help="folds for grid search scoring")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("recommend", parents=[common],
                       help="rank target classes for every method")
    p.add_argument("--linked-only", action="store_true",
                   help="restrict candidates to call- or token-linked classes")
    p.add_argument("-o", "--output", help="recommendations file name")
    p.set_defaults(handler=cmd_recommend)

    p = sub.add_parser("evaluate", parents=[common],
                       help="score recommendations against ground truth")
    p.add_argument("--truth", help="ground-truth triples JSONL")
    p.add_argument("--recommendations", help="recommendations JSONL")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("bench", parents=[common],
                       help="sweep embedding combos and classifiers")
    p.add_argument("--techniques", default="deepwalk",
                   help="comma-separated graph techniques")
    p.add_argument("--encoders", default="code2vec",
                   help="comma-separated code encoders")
    p.add_argument("--classifiers", default="rf",
                   help="comma-separated classifier kinds")
    p.add_argument("--truth", help="ground-truth triples JSONL")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--repeats", type=int, default=2)
    p.set_defaults(handler=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ArtifactError, ConfigError, FileNotFoundError) as exc:
        _warn(f"error: {exc}")
        return 3
    except RmoveError as exc:
        _warn(f"error: {exc}")
        return 4


if __name__ == "__main__":
    sys.exit(main())
