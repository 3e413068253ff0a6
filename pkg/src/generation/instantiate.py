"""Instantiate test methods from invocation contexts and group them into files."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Tuple

from catalog.placeholders import is_identifier, scan_placeholders, substitute
from core.diagnostics import Diagnostic
from core.errors import DScribeError, ResyntaxError
from invocations.context import InvocationContext
from parsing.class_index import FocalSignature
from parsing.source_unit import parse_unit

from .printer import INDENT, canonical_lines

logger = logging.getLogger(__name__)

PROVENANCE_PREFIX = "// dscribe: "
BANNER = "// Generated by factgen from template invocations. Do not edit: regenerated on every run."
TEMPLATE_ANNOTATION_IMPORTS = ("Template", "Types", "TestClass")
WRAPPER_OPEN = "class __FactgenCheck {\n"


@dataclass(frozen=True)
class GeneratedTest:
    package_name: str
    class_name: str
    method_name: str
    method_text: str
    origin: Tuple[str, FocalSignature]
    values: Tuple[Tuple[str, str], ...] = ()
    imports: Tuple[str, ...] = ()

    @property
    def provenance(self) -> str:
        template, signature = self.origin
        return f"{template}#{signature}"

    def sort_key(self) -> Tuple:
        return (self.package_name, self.class_name, self.method_name, self.provenance, self.values)

    def renamed(self, new_name: str) -> "GeneratedTest":
        lines = self.method_text.split("\n")
        for idx, line in enumerate(lines):
            marker = f" {self.method_name}("
            if marker in line and not line.lstrip().startswith(("//", "@")):
                lines[idx] = line.replace(marker, f" {new_name}(", 1)
                break
        return replace(self, method_name=new_name, method_text="\n".join(lines))


def _test_class(pattern: str, ctx: InvocationContext) -> Tuple[str, str]:
    name = substitute(pattern, ctx.bindings, sanitize_in_identifiers=True)
    package, _, simple = name.rpartition(".")
    if not package:
        package = ctx.package_name
    if not is_identifier(simple) or not all(is_identifier(part) for part in package.split(".") if package):
        raise ResyntaxError(f"test class pattern {pattern!r} gives the illegal name {name!r}")
    return package, simple


def _template_imports(imports: Iterable[str]) -> Tuple[str, ...]:
    kept = [imp for imp in imports if imp.rsplit(".", 1)[-1] not in TEMPLATE_ANNOTATION_IMPORTS]
    return tuple(sorted(set(kept)))


def instantiate_test(ctx: InvocationContext) -> GeneratedTest:
    template = ctx.template
    where = ctx.invocation.describe()
    leftover = scan_placeholders(template.test_text) - set(ctx.bindings)
    if leftover:
        names = ", ".join(f"${n}$" for n in sorted(leftover))
        raise ResyntaxError(f"template placeholders without a value: {names}", location=where)
    text = substitute(template.test_text, ctx.bindings, sanitize_in_identifiers=True)

    try:
        unit = parse_unit(WRAPPER_OPEN + text + "\n}\n", path=where)
    except DScribeError as exc:
        raise ResyntaxError(f"instantiated test does not parse: {exc.message}", location=where) from exc
    methods = [method for _, method in unit.all_methods()]
    if len(unit.types) != 1 or len(methods) != 1 or unit.types[0].nested:
        raise ResyntaxError("instantiated test is not exactly one method declaration", location=where)

    package, class_name = _test_class(template.test_class_pattern, ctx)
    lines = [INDENT + PROVENANCE_PREFIX + f"{template.name}#{ctx.signature}"]
    lines.extend(canonical_lines(text))
    return GeneratedTest(
        package_name=package,
        class_name=class_name,
        method_name=methods[0].name,
        method_text="\n".join(lines),
        origin=(template.name, ctx.signature),
        values=ctx.invocation.values,
        imports=_template_imports(template.imports),
    )


def resolve_collisions(tests: Iterable[GeneratedTest]) -> Tuple[List[GeneratedTest], List[Diagnostic]]:
    """Give every test a unique name within its class by appending `_2`, `_3`, ..."""
    by_class: Dict[Tuple[str, str], List[GeneratedTest]] = defaultdict(list)
    for test in tests:
        by_class[(test.package_name, test.class_name)].append(test)

    resolved: List[GeneratedTest] = []
    warnings: List[Diagnostic] = []
    for key in sorted(by_class):
        group = sorted(by_class[key], key=GeneratedTest.sort_key)
        taken = {test.method_name for test in group}
        seen = set()
        for test in group:
            if test.method_name not in seen:
                seen.add(test.method_name)
                resolved.append(test)
                continue
            suffix = 2
            while f"{test.method_name}_{suffix}" in taken:
                suffix += 1
            new_name = f"{test.method_name}_{suffix}"
            taken.add(new_name)
            seen.add(new_name)
            message = f"{'.'.join(filter(None, key))}.{test.method_name} already exists; renamed to {new_name}"
            logger.warning("%s (%s)", message, test.provenance)
            warnings.append(Diagnostic.warning(test.provenance, "IdentifierCollision", message))
            resolved.append(test.renamed(new_name))
    return resolved, warnings


def _render_file(package: str, class_name: str, tests: List[GeneratedTest]) -> str:
    parts = [BANNER]
    if package:
        parts.append(f"package {package};")
    imports = sorted({imp for test in tests for imp in test.imports})
    if imports:
        parts.append("\n".join(f"import {imp};" for imp in imports))
    members = "\n\n".join(test.method_text for test in sorted(tests, key=lambda t: (t.method_name, t.provenance)))
    parts.append(f"public class {class_name} {{\n\n{members}\n}}")
    return "\n\n".join(parts) + "\n"


def group_tests(tests: Iterable[GeneratedTest]) -> Dict[str, str]:
    """Map relative output paths (`pkg/dirs/Class.java`) to file contents."""
    by_class: Dict[Tuple[str, str], List[GeneratedTest]] = defaultdict(list)
    for test in tests:
        by_class[(test.package_name, test.class_name)].append(test)

    files: Dict[str, str] = {}
    for (package, class_name) in sorted(by_class):
        directory = package.replace(".", "/")
        path = f"{directory}/{class_name}.java" if directory else f"{class_name}.java"
        files[path] = _render_file(package, class_name, by_class[(package, class_name)])
    return files
