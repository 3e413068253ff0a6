"""Project-wide class index standing in for the subject build path."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import jsonschema

from core.errors import (
    AmbiguousFocalMethod,
    CyclicHierarchy,
    DuplicateType,
    FocalMethodNotFound,
    SchemaError,
    UnknownHierarchy,
    UnresolvedType,
)

from .lexer import PRIMITIVE_TYPES
from .source_unit import MethodDecl, SourceUnit, TypeDecl

logger = logging.getLogger(__name__)

DEFAULT_KNOWN_TYPES = Path(__file__).resolve().parent / "known_types.json"
THROWABLE = "java.lang.Throwable"
PRIMITIVES = PRIMITIVE_TYPES | {"void"}
DOTTED_NAME_REGEX = re.compile(r"^[A-Za-z_$][\w$]*(?:\.[A-Za-z_$][\w$]*)*$")
GENERIC_ARGS_REGEX = re.compile(r"<[^<>]*>")

KNOWN_TYPES_SCHEMA = {
    "type": "object",
    "required": ["types"],
    "additionalProperties": False,
    "properties": {
        "types": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "supertypes"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "pattern": DOTTED_NAME_REGEX.pattern},
                    "supertypes": {
                        "type": "array",
                        "items": {"type": "string", "pattern": DOTTED_NAME_REGEX.pattern},
                    },
                },
            },
        }
    },
}


@dataclass(frozen=True)
class FocalSignature:
    class_name: str
    method_name: str
    param_types: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.class_name}.{self.method_name}({', '.join(self.param_types)})"


@dataclass(frozen=True)
class TypeEntry:
    name: str
    super_types: Tuple[str, ...]
    kind: str  # "project" | "known"

    @property
    def simple_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]


class ClassIndex:
    """Read-only map from qualified names to type summaries."""

    def __init__(
        self,
        entries: Mapping[str, TypeEntry],
        known_types: Iterable[TypeEntry],
        project_types: Mapping[str, TypeDecl],
        units: Mapping[str, SourceUnit],
    ):
        self._entries = dict(entries)
        self._project_types = dict(project_types)
        self._units = dict(units)
        self.known_types: Tuple[TypeEntry, ...] = tuple(known_types)

    @property
    def by_qualified_name(self) -> Mapping[str, TypeEntry]:
        return MappingProxyType(self._entries)

    def __contains__(self, qualified: str) -> bool:
        return qualified in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, qualified: str) -> Optional[TypeEntry]:
        return self._entries.get(qualified)

    def project_type(self, qualified: str) -> Optional[TypeDecl]:
        return self._project_types.get(qualified)

    def unit_for(self, qualified: str) -> Optional[SourceUnit]:
        return self._units.get(qualified)


def load_known_types(content: str, location: str = "known types") -> List[TypeEntry]:
    """Parse and validate a known-types JSON document."""
    try:
        data = json.loads(content)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})", location=location) from exc
    try:
        jsonschema.validate(data, KNOWN_TYPES_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{exc.json_path}: {exc.message}", location=location) from exc
    return [TypeEntry(name=item["name"], super_types=tuple(item["supertypes"]), kind="known") for item in data["types"]]


def default_known_types_text() -> str:
    return DEFAULT_KNOWN_TYPES.read_text(encoding="utf-8")


def resolve_type(
    name: str,
    context_package: str,
    index: ClassIndex,
    imports: Optional[Mapping[str, str]] = None,
) -> str:
    """Resolve a written type name to a qualified name present in the index.

    Dotted names must match an entry verbatim. Simple names are tried against
    the explicit `imports` map (when given), then the context package, then
    `java.lang`.
    """
    if not DOTTED_NAME_REGEX.match(name):
        raise UnresolvedType(f"{name!r} is not a type name")
    if "." in name:
        if name in index:
            return name
        raise UnresolvedType(f"type {name!r} is not in the class index")

    candidates: List[str] = []
    if imports and name in imports:
        candidates.append(imports[name])
    candidates.append(f"{context_package}.{name}" if context_package else name)
    candidates.append(f"java.lang.{name}")
    for candidate in candidates:
        if candidate in index:
            return candidate
    raise UnresolvedType(f"type {name!r} does not resolve in package {context_package or '<default>'!r} or java.lang")


def throwable_closure(qualified: str, index: ClassIndex) -> Tuple[bool, List[str]]:
    """Walk the supertype closure; return (reaches Throwable, missing supertypes)."""
    seen = set()
    queue = [qualified]
    missing: List[str] = []
    while queue:
        name = queue.pop(0)
        if name in seen:
            continue
        seen.add(name)
        if name == THROWABLE:
            return True, []
        entry = index.get(name)
        if entry is None:
            missing.append(name)
            continue
        queue.extend(entry.super_types)
    return False, missing


def is_throwable(qualified: str, index: ClassIndex, lenient: bool = False) -> bool:
    found, missing = throwable_closure(qualified, index)
    if found:
        return True
    if missing:
        message = f"supertype chain of {qualified!r} leaves the class index at {', '.join(missing)}"
        if not lenient:
            raise UnknownHierarchy(message)
        logger.warning("%s; treating it as non-throwable", message)
    return False


def _check_cycles(entries: Mapping[str, TypeEntry]) -> None:
    visiting, done = set(), set()

    def visit(name: str, path: List[str]) -> None:
        if name in done:
            return
        if name in visiting:
            cycle = path[path.index(name) :]
            raise CyclicHierarchy(f"supertype cycle: {' -> '.join(cycle)}")
        visiting.add(name)
        for sup in entries[name].super_types:
            if sup in entries and entries[sup].kind == "project":
                visit(sup, path + [sup])
        visiting.discard(name)
        done.add(name)

    for name in sorted(entries):
        if entries[name].kind == "project":
            visit(name, [name])


def build_class_index(units: Iterable[SourceUnit], known: Optional[str] = None) -> ClassIndex:
    """Index all project types plus the known types; project entries win on clashes."""
    known_entries = load_known_types(known if known is not None else default_known_types_text())
    entries: Dict[str, TypeEntry] = {entry.name: entry for entry in known_entries}

    project_types: Dict[str, TypeDecl] = {}
    owners: Dict[str, SourceUnit] = {}
    for unit in units:
        for decl in unit.all_types():
            if decl.qualified_name in project_types:
                first = owners[decl.qualified_name].path
                raise DuplicateType(f"{decl.qualified_name} is declared in both {first} and {unit.path}")
            project_types[decl.qualified_name] = decl
            owners[decl.qualified_name] = unit

    for name in project_types:
        # placeholder entries so supertypes can resolve against project types
        entries[name] = TypeEntry(name=name, super_types=(), kind="project")
    shallow = ClassIndex(entries, known_entries, project_types, owners)

    for name, decl in project_types.items():
        unit = owners[name]
        imports = unit.single_type_imports()
        supers: List[str] = []
        for written in decl.super_types:
            try:
                supers.append(resolve_type(written, unit.package_name, shallow, imports))
            except UnresolvedType:
                supers.append(imports.get(written, written))
        entries[name] = TypeEntry(name=name, super_types=tuple(supers), kind="project")

    _check_cycles(entries)
    logger.info("Indexed %d project types and %d known types", len(project_types), len(known_entries))
    return ClassIndex(entries, known_entries, project_types, owners)


def erase_type(written: str) -> Tuple[str, str]:
    """Split a written parameter type into (base name, array dims) without generics."""
    text = re.sub(r"\s+", "", written)
    while GENERIC_ARGS_REGEX.search(text):
        text = GENERIC_ARGS_REGEX.sub("", text)
    text = text.replace("...", "[]")
    dims = ""
    while text.endswith("[]"):
        dims += "[]"
        text = text[:-2]
    return text, dims


def _normalize_param(written: str, package: str, index: ClassIndex, imports: Mapping[str, str]) -> str:
    base, dims = erase_type(written)
    if base in PRIMITIVES:
        return base + dims
    try:
        return resolve_type(base, package, index, imports) + dims
    except UnresolvedType:
        return imports.get(base, base) + dims


def find_focal_method(signature: FocalSignature, index: ClassIndex) -> MethodDecl:
    """Find the unique method of a project class matching name, arity and parameter types."""
    decl = index.project_type(signature.class_name)
    unit = index.unit_for(signature.class_name)
    if decl is None or unit is None:
        raise FocalMethodNotFound(f"{signature.class_name} is not a project type")

    package = unit.package_name
    imports = unit.single_type_imports()
    wanted = [_normalize_param(p, package, index, imports) for p in signature.param_types]
    matches = []
    for method in decl.methods:
        if method.name != signature.method_name or len(method.param_types) != len(wanted):
            continue
        if method.name == decl.simple_name and not method.is_constructor:
            continue
        written = [_normalize_param(p, package, index, imports) for p in method.param_types]
        if written == wanted:
            matches.append(method)

    if not matches:
        raise FocalMethodNotFound(f"no method matches {signature}")
    if len(matches) > 1:
        raise AmbiguousFocalMethod(f"{len(matches)} methods match {signature}")
    return matches[0]
