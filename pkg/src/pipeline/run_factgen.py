"""Command-line entry point: check, generate, clean, list and init."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from core.diagnostics import Diagnostic
from core.errors import ConfigError

from .commands import RunReport, cmd_check, cmd_clean, cmd_generate, cmd_list
from .config import find_config, read_project_config
from .init_project import init_project

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Path to dscribe.json (default: ./dscribe.json, then ./dscribe.yaml)")
    common.add_argument("--lenient", action="store_true", help="Downgrade unknown hierarchies and unchecked expressions to warnings")
    common.add_argument("--format", choices=["text", "json"], default="text", help="Diagnostic output format")
    common.add_argument("--gen-tests-dir", default=None, help="Override the generated-tests folder from the config")
    common.add_argument("--verbose", action="store_true", help="Log progress at INFO level")

    parser = argparse.ArgumentParser(
        prog="factgen",
        description="Generate unit tests and @dscribe documentation from template invocations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="Validate templates and invocations without writing")
    generate = sub.add_parser("generate", parents=[common], help="Write generated tests and documentation")
    generate.add_argument("--dry-run", action="store_true", help="Report the files that would change")
    clean = sub.add_parser("clean", parents=[common], help="Remove generated tests and @dscribe lines")
    clean.add_argument("--dry-run", action="store_true", help="Report the files that would change")
    sub.add_parser("list", parents=[common], help="Print the template catalog")
    init = sub.add_parser("init", help="Create a starter project without overwriting files")
    init.add_argument("--base-dir", default=".", help="Project root (default: current directory)")
    return parser


def print_report(report: RunReport, fmt: str) -> None:
    if fmt == "json":
        for diagnostic in report.diagnostics:
            print(json.dumps(diagnostic.to_dict(), sort_keys=True))
        print(json.dumps({"summary": report.summary()}, sort_keys=True))
        return
    for diagnostic in report.diagnostics:
        print(diagnostic.format())
    c = report.counts
    if report.command in ("check", "generate"):
        print(f"invocations: {c.loaded} loaded, {c.valid} valid, {c.invalid} invalid")
    if report.command == "generate":
        print(f"tests written: {c.tests_written}")
        print(f"doc lines written: {c.doc_lines_written}")
    if report.command in ("generate", "clean"):
        verb = "would touch" if report.dry_run else "files touched"
        print(f"{verb}: {c.files_touched}")
        for path in report.changed_files:
            print(f"  {path}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if args.command == "init":
        init_project(args.base_dir)
        return EXIT_OK

    try:
        config = read_project_config(find_config(args.config))
        config = config.with_overrides(lenient=args.lenient, gen_tests_dir=args.gen_tests_dir)
    except ConfigError as exc:
        report = RunReport(command=args.command, diagnostics=[Diagnostic.from_error(exc)])
        print_report(report, args.format)
        return EXIT_USAGE

    if args.command == "check":
        report = cmd_check(config)
    elif args.command == "generate":
        report = cmd_generate(config, dry_run=args.dry_run)
    elif args.command == "clean":
        report = cmd_clean(config, dry_run=args.dry_run)
    else:
        report, lines = cmd_list(config)
        if args.format == "text":
            for line in lines:
                print(line)
        else:
            print(json.dumps({"listing": lines}, ensure_ascii=False))
    print_report(report, args.format)
    return EXIT_ERRORS if report.errors else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
