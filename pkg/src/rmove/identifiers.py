"""Stable string identifiers for projects, classes, and methods.

A method id has the form ``project::package.Class::signature``; a class id
is ``project::package.Class``.  Identifiers are plain strings at module
boundaries so artifacts stay diff-able; dense integer indices are assigned
per corpus where math needs them.
"""

from __future__ import annotations

from .errors import ComponentContainsSeparator, EmptyComponent

SEPARATOR = "::"


def _check_component(name: str, value: str) -> None:
    if not value:
        raise EmptyComponent(f"{name} must be non-empty")
    if SEPARATOR in value:
        raise ComponentContainsSeparator(f"{name} {value!r} contains {SEPARATOR!r}")


def make_class_id(project: str, class_path: str) -> str:
    _check_component("project", project)
    _check_component("class_path", class_path)
    return f"{project}{SEPARATOR}{class_path}"


def make_method_id(project: str, class_path: str, signature: str) -> str:
    _check_component("project", project)
    _check_component("class_path", class_path)
    _check_component("signature", signature)
    return f"{project}{SEPARATOR}{class_path}{SEPARATOR}{signature}"


def parse_method_id(method_id: str) -> tuple[str, str, str]:
    """Recover (project, class_path, signature) from a method id."""
    parts = method_id.split(SEPARATOR)
    if len(parts) != 3 or not all(parts):
        raise EmptyComponent(f"malformed method id {method_id!r}")
    return parts[0], parts[1], parts[2]


def parse_class_id(class_id: str) -> tuple[str, str]:
    parts = class_id.split(SEPARATOR)
    if len(parts) != 2 or not all(parts):
        raise EmptyComponent(f"malformed class id {class_id!r}")
    return parts[0], parts[1]


def owner_class_id(method_id: str) -> str:
    project, class_path, _ = parse_method_id(method_id)
    return make_class_id(project, class_path)


def make_signature(name: str, param_types: list[str]) -> str:
    return f"{name}({','.join(param_types)})"
