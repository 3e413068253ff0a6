"""Load the template catalog from annotated subject-language files."""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from core.errors import (
    BadPlaceholderType,
    DScribeError,
    DuplicateTemplateName,
    MalformedAnnotation,
    MalformedDescription,
    MissingTypesAnnotation,
    UnusedPlaceholder,
)
from parsing.source_unit import MethodDecl, SourceUnit

from .description import FragmentTemplate, parse_description
from .placeholders import PLACEHOLDER_TYPES, PREDEFINED, is_identifier, scan_placeholders

logger = logging.getLogger(__name__)

TEMPLATE_ANNOTATIONS = ("Template", "Types", "TestClass")
DEFAULT_TEST_CLASS = "$class$DScribeTest"
STRING_ARG_REGEX = re.compile(r'^(?:value\s*=\s*)?"((?:[^"\\]|\\.)*)"$')
TYPES_ENTRY_REGEX = re.compile(r"^\$([^$\s]*)\$\s*=\s*([A-Za-z_]+)$")


@dataclass(frozen=True)
class Placeholder:
    name: str
    ptype: str


@dataclass(frozen=True)
class Template:
    name: str
    placeholders: Tuple[Placeholder, ...]
    test_text: str
    description: FragmentTemplate
    test_class_pattern: str
    source_path: str
    imports: Tuple[str, ...] = ()

    @property
    def declared_names(self) -> Tuple[str, ...]:
        return tuple(p.name for p in self.placeholders)

    def used_names(self) -> set:
        used = scan_placeholders(self.test_text) | scan_placeholders(self.test_class_pattern)
        for text in self.description.texts():
            used |= scan_placeholders(text)
        return used


class Catalog:
    """Templates sorted by name, with lookup."""

    def __init__(self, templates: Iterable[Template]):
        self.templates: Tuple[Template, ...] = tuple(sorted(templates, key=lambda t: t.name))
        self._by_name = {t.name: t for t in self.templates}

    def get(self, name: str) -> Optional[Template]:
        return self._by_name.get(name)

    def __iter__(self):
        return iter(self.templates)

    def __len__(self) -> int:
        return len(self.templates)


def _unescape(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text)


def _string_argument(method: MethodDecl, annotation: str, where: str) -> Optional[str]:
    ann = method.annotation(annotation)
    if ann is None:
        return None
    match = STRING_ARG_REGEX.match(ann.arguments or "")
    if not match:
        raise MalformedAnnotation(f"@{annotation} takes one string literal", location=where)
    return _unescape(match.group(1))


def parse_types_annotation(arguments: str, where: str) -> Tuple[Placeholder, ...]:
    """Parse `$p$=PTYPE, ...` into placeholders."""
    body = arguments.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    placeholders: List[Placeholder] = []
    seen = set()
    for entry in (part.strip() for part in body.split(",")):
        if not entry:
            continue
        match = TYPES_ENTRY_REGEX.match(entry)
        if not match:
            raise MalformedAnnotation(f"@Types entry {entry!r} is not of the form $name$=TYPE", location=where)
        name, ptype = match.group(1), match.group(2)
        if not is_identifier(name):
            raise MalformedAnnotation(f"placeholder name {name!r} is not a legal identifier", location=where)
        if name in PREDEFINED:
            raise MalformedAnnotation(f"${name}$ is predefined and cannot be declared", location=where)
        if ptype not in PLACEHOLDER_TYPES:
            raise BadPlaceholderType(
                f"unknown placeholder type {ptype!r} for ${name}$ (expected one of {', '.join(PLACEHOLDER_TYPES)})",
                location=where,
            )
        if name in seen:
            raise MalformedAnnotation(f"${name}$ is declared twice", location=where)
        seen.add(name)
        placeholders.append(Placeholder(name=name, ptype=ptype))
    return tuple(placeholders)


def _strip_template_annotations(unit: SourceUnit, method: MethodDecl) -> str:
    text = unit.raw_text
    cuts = []
    for ann in method.annotations:
        if ann.name.rsplit(".", 1)[-1] in TEMPLATE_ANNOTATIONS:
            end = ann.span.end
            while end < len(text) and text[end] in " \t\r\n":
                end += 1
            cuts.append((ann.span.start, end))
    pieces = []
    pos = method.span.start
    for start, end in sorted(cuts):
        pieces.append(text[pos:start])
        pos = end
    pieces.append(text[pos : method.span.end])
    return "".join(pieces)


def template_from_method(unit: SourceUnit, method: MethodDecl) -> Template:
    """Turn one `@Template` method into a validated Template."""
    where = f"{unit.path}:{method.name}"
    name = _string_argument(method, "Template", where)
    if not name:
        raise MalformedAnnotation("@Template needs a non-empty name", location=where)
    where = f"{unit.path}:{name}"

    types_ann = method.annotation("Types")
    placeholders = parse_types_annotation(types_ann.arguments or "", where) if types_ann else ()
    test_class = _string_argument(method, "TestClass", where) or DEFAULT_TEST_CLASS

    if method.header_comment is None:
        raise MalformedDescription("template has no header comment to describe it", location=where)
    try:
        description = parse_description(method.header_comment.texts())
    except MalformedDescription as exc:
        exc.location = where
        raise

    test_text = _strip_template_annotations(unit, method)
    template = Template(
        name=name,
        placeholders=placeholders,
        test_text=test_text,
        description=description,
        test_class_pattern=test_class,
        source_path=unit.path,
        imports=unit.imports,
    )

    used = template.used_names()
    declared = set(template.declared_names)
    undeclared = sorted(used - declared - set(PREDEFINED))
    if undeclared:
        names = ", ".join(f"${n}$" for n in undeclared)
        raise MissingTypesAnnotation(f"placeholders used without a @Types declaration: {names}", location=where)
    unused = sorted(declared - used)
    if unused:
        names = ", ".join(f"${n}$" for n in unused)
        raise UnusedPlaceholder(f"declared placeholders never used: {names}", location=where)
    return template


def collect_catalog(files: Iterable[SourceUnit]) -> Tuple[Catalog, List[DScribeError]]:
    """Load every template, returning the valid ones and the errors found."""
    found: Dict[str, List[Template]] = defaultdict(list)
    errors: List[DScribeError] = []
    for unit in sorted(files, key=lambda u: u.path):
        for _, method in unit.all_methods():
            if method.annotation("Template") is None:
                continue
            try:
                template = template_from_method(unit, method)
            except DScribeError as exc:
                errors.append(exc)
                continue
            found[template.name].append(template)

    templates: List[Template] = []
    for name in sorted(found):
        group = found[name]
        if len(group) > 1:
            paths = ", ".join(t.source_path for t in group)
            errors.append(DuplicateTemplateName(f"template {name!r} is defined in {paths}", location=name))
            continue
        templates.append(group[0])
    logger.info("Loaded %d templates (%d errors)", len(templates), len(errors))
    return Catalog(templates), errors


def load_catalog(files: Iterable[SourceUnit]) -> Catalog:
    """Load the catalog, raising the first error found."""
    catalog, errors = collect_catalog(files)
    if errors:
        raise errors[0]
    return catalog
