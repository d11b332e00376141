"""Synthetic corpus generator with injected misplaced methods.

Every class gets its own identifier theme and a cohesive intra-class
call ring; an injected method is declared inside a wrong class while its
identifiers and call targets keep pointing at its original class, making
it both structurally and semantically envious.  The original class is
recorded as the ground-truth move target.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpecInfeasible
from .identifiers import make_class_id, make_method_id
from .rng import seeded_rng
from .triples import MoveMethodTriple

PROJECT = "main"

_THEME_POOL = (
    "order", "invoice", "ledger", "parcel", "route", "sensor", "render",
    "cache", "token", "signal", "metric", "buffer", "widget", "policy",
    "quota", "tensor", "schema", "billing", "payload", "session",
)


@dataclass(frozen=True)
class SmellInjectionSpec:
    classes: int
    methods_per_class: int
    calls_per_method: int = 2
    injected_moves: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.classes < 1 or self.methods_per_class < 1:
            raise SpecInfeasible("need at least one class and one method each")
        if self.calls_per_method < 0:
            raise SpecInfeasible("calls_per_method must be >= 0")
        if self.injected_moves > self.classes * self.methods_per_class:
            raise SpecInfeasible("cannot inject more moves than methods exist")
        if self.injected_moves > 0 and self.classes < 2:
            raise SpecInfeasible("injection needs a second class to host")


def _theme(index: int) -> str:
    base = _THEME_POOL[index % len(_THEME_POOL)]
    round_no = index // len(_THEME_POOL)
    return base if round_no == 0 else f"{base}{round_no}"


def _class_name(theme: str) -> str:
    return theme.capitalize() + "Service"


def _method_name(theme: str, index: int) -> str:
    return f"{theme}Step{index}"


def _method_source(theme: str, index: int, siblings: int, calls: int,
                   rng) -> str:
    name = _method_name(theme, index)
    acc = f"{theme}Acc{index}"
    tmp = f"{theme}Tmp{index}"
    c1, c2, c3 = (int(rng.integers(2, 9)) for _ in range(3))
    lines = [
        f"    int {name}(int {theme}Input) {{",
        f"        int {acc} = {theme}Input + {c1};",
        f"        int {tmp} = {acc} * {c2};",
    ]
    callees = [(index + k) % siblings for k in range(1, calls + 1)
               if siblings > 1 and (index + k) % siblings != index]
    if callees:
        summed = " + ".join(f"{_method_name(theme, k)}({acc})" for k in callees)
        lines.append(f"        if ({acc} > {c3}) {{ {tmp} = {summed}; }}")
    lines.append(f"        return {tmp} > 0 ? {tmp} : -1;")
    lines.append("    }")
    return "\n".join(lines)


def generate_smelly_corpus(
    spec: SmellInjectionSpec,
) -> tuple[list[tuple[str, str]], list[MoveMethodTriple]]:
    """(source files, ground-truth triples), byte-identical per spec."""
    rng = seeded_rng(spec.seed).split("synth")
    themes = [_theme(i) for i in range(spec.classes)]
    bodies: dict[int, list[str]] = {}
    for class_index in range(spec.classes):
        body_rng = rng.split(f"class-{class_index}")
        bodies[class_index] = [
            _method_source(themes[class_index], j, spec.methods_per_class,
                           spec.calls_per_method, body_rng)
            for j in range(spec.methods_per_class)
        ]

    inject_rng = rng.split("inject")
    placement: dict[int, list[tuple[int, int]]] = {i: [] for i in range(spec.classes)}
    ground_truth: list[MoveMethodTriple] = []
    moved = set()
    # spread homes round-robin so sibling call chains stay intact: while
    # injections <= classes, no two methods leave the same class
    home_order = [int(c) for c in inject_rng.permutation(spec.classes)]
    for i in range(spec.injected_moves):
        home = home_order[i % spec.classes]
        available = [j for j in range(spec.methods_per_class)
                     if (home, j) not in moved]
        method_index = available[int(inject_rng.integers(len(available)))]
        host = int(inject_rng.integers(spec.classes - 1))
        if host >= home:
            host += 1
        placement[host].append((home, method_index))
        moved.add((home, method_index))
        method_id = make_method_id(
            PROJECT, _class_name(themes[host]),
            f"{_method_name(themes[home], method_index)}(int)")
        ground_truth.append(MoveMethodTriple(
            method=method_id,
            source_class=make_class_id(PROJECT, _class_name(themes[host])),
            target_class=make_class_id(PROJECT, _class_name(themes[home])),
        ))

    files: list[tuple[str, str]] = []
    for class_index in range(spec.classes):
        theme = themes[class_index]
        class_name = _class_name(theme)
        parts = [f"class {class_name} {{"]
        for j in range(spec.methods_per_class):
            if (class_index, j) in moved:
                continue
            parts.append(bodies[class_index][j])
        for home, method_index in sorted(placement[class_index]):
            parts.append(bodies[home][method_index])
        parts.append("}")
        files.append((f"{class_name}.code", "\n".join(parts) + "\n"))

    files.sort(key=lambda item: item[0])
    ground_truth.sort(key=lambda t: t.method)
    return files, ground_truth
