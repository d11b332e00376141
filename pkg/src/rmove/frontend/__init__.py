"""Source ingestion: subset-grammar parsing and neutral facts files.

Both routes produce a :class:`~rmove.frontend.corpus.Corpus`; downstream
stages never care which route built it.
"""

from .ast_nodes import AstNode, NODE_TYPES, iter_leaves, pretty_print_method
from .corpus import (
    ClassRecord,
    Corpus,
    MethodRecord,
    corpus_stats,
    parse_source,
    pretty_print_corpus,
)
from .facts import ingest_facts, export_facts

__all__ = [
    "AstNode",
    "NODE_TYPES",
    "iter_leaves",
    "pretty_print_method",
    "ClassRecord",
    "Corpus",
    "MethodRecord",
    "corpus_stats",
    "parse_source",
    "pretty_print_corpus",
    "ingest_facts",
    "export_facts",
]
