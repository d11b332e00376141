"""Corpus assembly: classes, methods, ASTs, and resolved call edges.

Call resolution is deliberately conservative: a call site resolves by
callee name and arity only.  Unqualified (or ``this``-qualified) calls
prefer a method of the enclosing class; everything else resolves only if
exactly one corpus method matches.  Dropped calls are counted in the
diagnostics, never silently ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DuplicateClass, DuplicateMethodSignature, MixedModes
from ..identifiers import make_class_id, make_method_id, make_signature
from .ast_nodes import AstNode, pretty_print_method
from .parser import ParsedClass, ParsedMethod, parse_file


@dataclass(frozen=True)
class MethodRecord:
    id: str
    owner: str
    name: str
    param_types: tuple[str, ...]
    body_present: bool
    return_type: str = "void"


@dataclass(frozen=True)
class ClassRecord:
    id: str
    project: str
    methods: tuple[str, ...]  # sorted method ids


@dataclass
class Corpus:
    project: str
    classes: list[ClassRecord]
    methods: dict[str, tuple[MethodRecord, AstNode | None]]
    raw_calls: list[tuple[str, str]]
    imported_contexts: dict[str, tuple] = field(default_factory=dict)
    diagnostics: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for method_id in self.imported_contexts:
            record_ast = self.methods.get(method_id)
            if record_ast is not None and record_ast[1] is not None:
                raise MixedModes(
                    f"{method_id} has both an AST and imported path contexts"
                )

    def class_by_id(self, class_id: str) -> ClassRecord:
        for record in self.classes:
            if record.id == class_id:
                return record
        raise KeyError(class_id)

    def method_ids(self) -> list[str]:
        return sorted(self.methods)

    def ast_of(self, method_id: str) -> AstNode | None:
        return self.methods[method_id][1]

    def record_of(self, method_id: str) -> MethodRecord:
        return self.methods[method_id][0]


@dataclass(frozen=True)
class _CallSite:
    caller: str      # method id
    name: str
    arity: int
    qualified: bool  # receiver other than nothing / this


def _collect_call_sites(caller_id: str, ast: AstNode) -> list[_CallSite]:
    sites = []
    stack = [ast]
    while stack:
        current = stack.pop()
        if current.node_type == "MethodCall":
            callee = current.children[0]
            if callee.node_type == "Identifier":
                name, qualified = callee.token, False
            else:  # FieldAccess chain; the method name is the last member
                name = callee.children[1].token
                receiver = callee.children[0]
                while receiver.node_type == "FieldAccess":
                    receiver = receiver.children[0]
                qualified = not (
                    receiver.node_type == "Identifier" and receiver.token == "this"
                )
            sites.append(_CallSite(caller_id, name, len(current.children) - 1, qualified))
        stack.extend(current.children)
    # deterministic order regardless of traversal details
    sites.sort(key=lambda s: (s.caller, s.name, s.arity, s.qualified))
    return sites


def resolve_calls(
    sites: list[_CallSite],
    methods: dict[str, MethodRecord],
) -> tuple[list[tuple[str, str]], dict[str, int]]:
    by_name_arity: dict[tuple[str, int], list[str]] = {}
    for method_id, record in methods.items():
        by_name_arity.setdefault((record.name, len(record.param_types)), []).append(method_id)
    for candidates in by_name_arity.values():
        candidates.sort()

    calls: list[tuple[str, str]] = []
    unresolved = 0
    ambiguous = 0
    for site in sites:
        candidates = by_name_arity.get((site.name, site.arity), [])
        target = None
        if not site.qualified:
            owner = methods[site.caller].owner
            local = [c for c in candidates if methods[c].owner == owner]
            if len(local) == 1:
                target = local[0]
        if target is None:
            if len(candidates) == 1:
                target = candidates[0]
            elif len(candidates) > 1:
                ambiguous += 1
                continue
            else:
                unresolved += 1
                continue
        calls.append((site.caller, target))
    return calls, {"calls_unresolved": unresolved, "calls_ambiguous": ambiguous}


def _assemble(
    project: str,
    parsed: list[tuple[str, ParsedClass]],
) -> Corpus:
    class_names: dict[str, str] = {}
    methods: dict[str, tuple[MethodRecord, AstNode | None]] = {}
    class_members: dict[str, list[str]] = {}
    field_count = 0

    for path, cls in parsed:
        if cls.name in class_names:
            raise DuplicateClass(
                f"class {cls.name!r} defined in both {class_names[cls.name]} and {path}"
            )
        class_names[cls.name] = path
        class_id = make_class_id(project, cls.name)
        class_members[class_id] = []
        field_count += cls.field_count
        seen_signatures = set()
        for method in cls.methods:
            signature = make_signature(method.name, list(method.param_types))
            if signature in seen_signatures:
                raise DuplicateMethodSignature(f"{cls.name}.{signature}")
            seen_signatures.add(signature)
            method_id = make_method_id(project, cls.name, signature)
            record = MethodRecord(
                id=method_id,
                owner=class_id,
                name=method.name,
                param_types=method.param_types,
                body_present=True,
                return_type=method.return_type,
            )
            methods[method_id] = (record, method.ast)
            class_members[class_id].append(method_id)

    sites: list[_CallSite] = []
    for method_id in sorted(methods):
        record, ast = methods[method_id]
        sites.extend(_collect_call_sites(method_id, ast))
    records_only = {mid: rec for mid, (rec, _) in methods.items()}
    calls, call_diag = resolve_calls(sites, records_only)
    calls.sort()

    classes = [
        ClassRecord(id=class_id, project=project, methods=tuple(sorted(member_ids)))
        for class_id, member_ids in sorted(class_members.items())
    ]
    diagnostics = {"fields_parsed": field_count, **call_diag}
    return Corpus(
        project=project,
        classes=classes,
        methods=methods,
        raw_calls=calls,
        diagnostics=diagnostics,
    )


def parse_source(files: list[tuple[str, str]], project: str = "main") -> Corpus:
    """Parse (path, text) pairs into one corpus; file order never matters."""
    parsed: list[tuple[str, ParsedClass]] = []
    loc = 0
    for path, text in sorted(files, key=lambda item: item[0]):
        loc += text.count("\n") + (1 if text and not text.endswith("\n") else 0)
        for cls in parse_file(path, text):
            parsed.append((path, cls))
    corpus = _assemble(project, parsed)
    corpus.diagnostics["loc"] = loc
    return corpus


def filter_methods(corpus: Corpus, keep) -> Corpus:
    """Corpus restricted to methods where keep(record) is true.

    Calls touching a dropped method are dropped too (and counted).
    """
    kept = {m for m, (rec, _) in corpus.methods.items() if keep(rec)}
    dropped_calls = sum(1 for s, d in corpus.raw_calls
                        if s not in kept or d not in kept)
    diagnostics = dict(corpus.diagnostics)
    diagnostics["methods_excluded"] = len(corpus.methods) - len(kept)
    diagnostics["calls_excluded"] = dropped_calls
    return Corpus(
        project=corpus.project,
        classes=[ClassRecord(id=c.id, project=c.project,
                             methods=tuple(m for m in c.methods if m in kept))
                 for c in corpus.classes],
        methods={m: v for m, v in corpus.methods.items() if m in kept},
        raw_calls=[(s, d) for s, d in corpus.raw_calls
                   if s in kept and d in kept],
        imported_contexts={m: v for m, v in corpus.imported_contexts.items()
                           if m in kept},
        diagnostics=diagnostics,
    )


def looks_like_accessor(record: MethodRecord) -> bool:
    name = record.name
    if name.startswith(("get", "set")) and len(name) > 3:
        return name[3].isupper()
    return name.startswith("is") and len(name) > 2 and name[2].isupper()


def corpus_stats(corpus: Corpus) -> dict:
    """Counts in a stable key order, plus pass-through diagnostics."""
    context_count = sum(len(v) for v in corpus.imported_contexts.values())
    stats = {
        "project": corpus.project,
        "classes": len(corpus.classes),
        "methods": len(corpus.methods),
        "calls": len(corpus.raw_calls),
        "path_contexts": context_count,
    }
    stats.update(sorted(corpus.diagnostics.items()))
    return stats


def pretty_print_corpus(corpus: Corpus) -> str:
    """Render every class back to subset-grammar source (fields are not
    part of the corpus model and are omitted)."""
    chunks = []
    for cls in corpus.classes:
        _, class_name = cls.id.split("::", 1)
        lines = [f"class {class_name} {{"]
        for method_id in cls.methods:
            record, ast = corpus.methods[method_id]
            if ast is None:
                continue
            lines.append(pretty_print_method(ast, record.name, record.return_type, indent=1))
        lines.append("}")
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"
