"""The validate / generate / integrate pipeline behind each command."""

from __future__ import annotations

import logging
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from catalog.templates import Catalog, collect_catalog
from core.diagnostics import ERROR, Diagnostic
from core.errors import DScribeError
from generation.doc_integration import integrate_unit
from generation.folder import check_guard, write_generated_folder
from generation.fragments import Fragment, instantiate_fragment, render_all
from generation.instantiate import GeneratedTest, group_tests, instantiate_test, resolve_collisions
from invocations.context import InvocationContext, resolve_context
from invocations.store import Invocation, dedupe_invocations, load_invocations
from parsing.class_index import ClassIndex, build_class_index
from parsing.comments import Span
from parsing.source_unit import SourceUnit, find_java_files, read_unit

from .config import ProjectConfig

logger = logging.getLogger(__name__)


@dataclass
class RunCounts:
    loaded: int = 0
    valid: int = 0
    invalid: int = 0
    tests_written: int = 0
    doc_lines_written: int = 0
    files_touched: int = 0


@dataclass
class RunReport:
    command: str
    counts: RunCounts = field(default_factory=RunCounts)
    diagnostics: List[Diagnostic] = field(default_factory=list)
    changed_files: List[str] = field(default_factory=list)
    dry_run: bool = False

    @property
    def errors(self) -> List[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == ERROR]

    @property
    def exit_code(self) -> int:
        return 1 if self.errors else 0

    def add_error(self, exc: DScribeError, location: Optional[str] = None) -> None:
        diagnostic = Diagnostic.from_error(exc, location=location)
        logger.debug("%s", diagnostic.format())
        self.diagnostics.append(diagnostic)

    def summary(self) -> Dict[str, object]:
        c = self.counts
        return {
            "command": self.command,
            "loaded": c.loaded,
            "valid": c.valid,
            "invalid": c.invalid,
            "tests_written": c.tests_written,
            "doc_lines_written": c.doc_lines_written,
            "files_touched": c.files_touched,
            "errors": len(self.errors),
            "warnings": len(self.diagnostics) - len(self.errors),
            "dry_run": self.dry_run,
        }


@dataclass
class ProjectState:
    units: List[SourceUnit]
    index: Optional[ClassIndex] = None
    catalog: Optional[Catalog] = None
    contexts: List[InvocationContext] = field(default_factory=list)


def _progress(items: Sequence, desc: str):
    return tqdm(items, desc=desc, disable=not sys.stderr.isatty(), leave=False)


def parse_sources(config: ProjectConfig, report: RunReport) -> List[SourceUnit]:
    paths: List[Path] = []
    for root in config.source_roots:
        paths.extend(find_java_files(root))
    units: List[SourceUnit] = []
    for path in _progress(paths, "Parsing sources"):
        try:
            units.append(read_unit(path))
        except DScribeError as exc:
            report.add_error(exc, location=str(path))
    logger.info("Parsed %d of %d source files", len(units), len(paths))
    return units


def load_index(config: ProjectConfig, units: List[SourceUnit], report: RunReport) -> Optional[ClassIndex]:
    known: Optional[str] = None
    try:
        if config.known_types_path is not None:
            known = config.known_types_path.read_text(encoding="utf-8")
        return build_class_index(units, known)
    except OSError as exc:
        report.add_error(DScribeError(f"cannot read known types: {exc}"), location=str(config.known_types_path))
    except DScribeError as exc:
        report.add_error(exc, location=exc.location or "class index")
    return None


def load_templates(config: ProjectConfig, report: RunReport) -> Catalog:
    units: List[SourceUnit] = []
    for path in find_java_files(config.templates_dir):
        try:
            units.append(read_unit(path))
        except DScribeError as exc:
            report.add_error(exc, location=str(path))
    catalog, errors = collect_catalog(units)
    for exc in errors:
        report.add_error(exc)
    return catalog


def load_invocation_files(config: ProjectConfig, report: RunReport) -> List[Tuple[str, Invocation]]:
    found: List[Tuple[str, Invocation]] = []
    for path in config.invocation_files():
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as exc:
            report.add_error(DScribeError(f"cannot read invocation file: {exc.strerror}"), location=str(path))
            continue
        try:
            invocations = load_invocations(content, location=str(path))
        except DScribeError as exc:
            report.add_error(exc)
            continue
        found.extend((f"{path}#{i}", inv) for i, inv in enumerate(invocations))
    kept, warnings = dedupe_invocations(found)
    report.diagnostics.extend(warnings)
    return kept


def run_check(config: ProjectConfig, report: RunReport) -> Optional[ProjectState]:
    """Parse, index, load the catalog and resolve every invocation."""
    units = parse_sources(config, report)
    index = load_index(config, units, report)
    if index is None:
        return None
    state = ProjectState(units=units, index=index, catalog=load_templates(config, report))

    invocations = load_invocation_files(config, report)
    report.counts.loaded = len(invocations)
    for where, inv in _progress(invocations, "Resolving invocations"):
        try:
            ctx = resolve_context(inv, state.catalog, index, lenient=config.lenient)
        except DScribeError as exc:
            report.counts.invalid += 1
            report.add_error(exc, location=where)
            continue
        report.counts.valid += 1
        for warning in ctx.warnings:
            report.diagnostics.append(Diagnostic.warning(where, "LenientCheck", warning))
        state.contexts.append(ctx)
    return state


def cmd_check(config: ProjectConfig) -> RunReport:
    report = RunReport(command="check")
    run_check(config, report)
    return report


def _write_sources(units: List[SourceUnit], updates: Dict[str, Dict[Span, List[str]]], report: RunReport) -> None:
    for unit in units:
        new_text = integrate_unit(unit, updates.get(unit.path, {}))
        if new_text == unit.raw_text:
            continue
        report.changed_files.append(unit.path)
        if not report.dry_run:
            Path(unit.path).write_bytes(new_text.encode("utf-8"))


def _write_folder(files: Dict[str, str], config: ProjectConfig, report: RunReport) -> bool:
    try:
        folder = write_generated_folder(files, config.gen_tests_dir, dry_run=report.dry_run)
    except DScribeError as exc:
        report.add_error(exc, location=str(config.gen_tests_dir))
        return False
    except OSError as exc:
        report.add_error(DScribeError(f"cannot write generated tests: {exc}"), location=str(config.gen_tests_dir))
        return False
    report.changed_files.extend(str(config.gen_tests_dir / rel) for rel in folder.written + folder.removed)
    return True


def _guarded(config: ProjectConfig, report: RunReport) -> bool:
    try:
        check_guard(config.gen_tests_dir)
    except DScribeError as exc:
        report.add_error(exc, location=str(config.gen_tests_dir))
        return False
    return True


def cmd_generate(config: ProjectConfig, dry_run: bool = False) -> RunReport:
    report = RunReport(command="generate", dry_run=dry_run)
    if not _guarded(config, report):
        return report
    state = run_check(config, report)
    if state is None:
        return report

    tests: List[GeneratedTest] = []
    fragments: Dict[Tuple[str, Span], List[Fragment]] = defaultdict(list)
    for ctx in state.contexts:
        where = ctx.invocation.describe()
        try:
            tests.append(instantiate_test(ctx))
        except DScribeError as exc:
            report.add_error(exc, location=exc.location or where)
            continue
        unit = state.index.unit_for(ctx.signature.class_name)
        fragments[(unit.path, ctx.focal.span)].append(instantiate_fragment(ctx))

    tests, warnings = resolve_collisions(tests)
    report.diagnostics.extend(warnings)
    report.counts.tests_written = len(tests)

    if not _write_folder(group_tests(tests), config, report):
        return report

    updates: Dict[str, Dict[Span, List[str]]] = defaultdict(dict)
    for (path, span), group in sorted(fragments.items(), key=lambda item: (item[0][0], item[0][1].start)):
        lines = render_all(group)
        updates[path][span] = lines
        report.counts.doc_lines_written += len(lines)
    try:
        _write_sources(state.units, updates, report)
    except OSError as exc:
        report.add_error(DScribeError(f"cannot rewrite source file: {exc}"), location=exc.filename)
    report.counts.files_touched = len(report.changed_files)
    return report


def cmd_clean(config: ProjectConfig, dry_run: bool = False) -> RunReport:
    """Remove generated tests and every `@dscribe` line; templates are not loaded."""
    report = RunReport(command="clean", dry_run=dry_run)
    if not _guarded(config, report):
        return report
    units = parse_sources(config, report)
    if not _write_folder({}, config, report):
        return report
    try:
        _write_sources(units, {}, report)
    except OSError as exc:
        report.add_error(DScribeError(f"cannot rewrite source file: {exc}"), location=exc.filename)
    report.counts.files_touched = len(report.changed_files)
    return report


def format_catalog(catalog: Catalog) -> List[str]:
    lines: List[str] = []
    for template in catalog:
        typed = ", ".join(f"{p.name}:{p.ptype}" for p in template.placeholders) or "no placeholders"
        lines.append(f"{template.name} — {typed}")
        lines.append(f"    {template.description.describe()}")
    count = len(catalog)
    lines.append(f"{count} template{'' if count == 1 else 's'}")
    return lines


def cmd_list(config: ProjectConfig) -> Tuple[RunReport, List[str]]:
    report = RunReport(command="list")
    catalog = load_templates(config, report)
    return report, format_catalog(catalog)
