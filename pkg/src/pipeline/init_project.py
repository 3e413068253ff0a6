"""Scaffold a project for factgen without overwriting existing files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Iterable, List

from generation.folder import MARKER_NAME, MARKER_TEXT
from invocations.store import serialize_invocations

EXAMPLE_TEMPLATE = """\
package templates;

import static org.junit.Assert.fail;

import dscribe.annotations.Template;
import dscribe.annotations.Types;
import org.junit.Test;

public class ExampleTemplates {

    /** $method$ throws an exception of type $ex$
     *  when $state$.
     */
    @Template("Example")
    @Types($ex$=EXCEPTION, $state$=EXPR, $factory$=METHOD)
    @Test
    public void test$method$_$state$() {
        $class$ instance = $factory$();
        try {
            instance.$method$();
            fail();
        } catch ($ex$ e) {}
    }
}
"""

DEFAULT_PROJECT_CONFIG = {
    "source_roots": ["src/main/java"],
    "templates_dir": "templates",
    "invocations": ["invocations/*.json"],
    "gen_tests_dir": "src/test-gen/java",
    "known_types_path": None,
    "lenient": False,
}


def ensure_directories(base: Path, dirs: Iterable[Path]) -> List[Path]:
    """Create each directory if it does not already exist."""
    created = []
    for d in dirs:
        full = base / d
        if not full.is_dir():
            full.mkdir(parents=True, exist_ok=True)
            print(f"created dir: {full}")
            created.append(full)
    return created


def write_file_if_missing(path: Path, content: str) -> bool:
    """Write `content` only when the file is absent to avoid overwriting."""
    if path.exists():
        print(f"skip existing file: {path}")
        return False
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    print(f"wrote file: {path}")
    return True


def init_project(base_dir: str = ".") -> List[Path]:
    """Create config, example template, empty invocations and the marked output folder."""
    base = Path(base_dir)
    config = DEFAULT_PROJECT_CONFIG
    ensure_directories(base, [Path(p) for p in config["source_roots"]] + [Path(config["templates_dir"])])

    files: Dict[Path, str] = {
        Path("dscribe.json"): json.dumps(config, indent=2) + "\n",
        Path(config["templates_dir"]) / "ExampleTemplates.java": EXAMPLE_TEMPLATE,
        Path("invocations") / "invocations.json": serialize_invocations([]),
    }
    gen_root = base / config["gen_tests_dir"]
    if not gen_root.exists() or not any(gen_root.iterdir()):
        files[Path(config["gen_tests_dir"]) / MARKER_NAME] = MARKER_TEXT

    written = []
    for rel_path, content in files.items():
        if write_file_if_missing(base / rel_path, content):
            written.append(base / rel_path)
    return written
