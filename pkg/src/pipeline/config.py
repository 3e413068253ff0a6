"""Project configuration: `dscribe.json` (or `dscribe.yaml`) at the project root."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import jsonschema
import yaml

from core.errors import ConfigError

DEFAULT_CONFIG = Path("dscribe.json")
FALLBACK_CONFIG = Path("dscribe.yaml")

CONFIG_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["source_roots", "templates_dir", "invocations", "gen_tests_dir"],
    "additionalProperties": False,
    "properties": {
        "source_roots": {"type": "array", "minItems": 1, "items": {"type": "string", "minLength": 1}},
        "templates_dir": {"type": "string", "minLength": 1},
        "invocations": {
            "oneOf": [
                {"type": "string", "minLength": 1},
                {"type": "array", "items": {"type": "string", "minLength": 1}},
            ]
        },
        "gen_tests_dir": {"type": "string", "minLength": 1},
        "known_types_path": {"type": ["string", "null"]},
        "lenient": {"type": "boolean"},
    },
}


@dataclass(frozen=True)
class ProjectConfig:
    root: Path
    source_roots: Tuple[Path, ...]
    templates_dir: Path
    invocations: Tuple[str, ...]
    gen_tests_dir: Path
    known_types_path: Optional[Path] = None
    lenient: bool = False

    def invocation_files(self) -> List[Path]:
        """Expand the invocation entries (plain paths or glob patterns) in sorted order."""
        found: List[Path] = []
        for entry in self.invocations:
            if any(ch in entry for ch in "*?["):
                found.extend(sorted(p for p in self.root.glob(entry) if p.is_file()))
            else:
                found.append(self.root / entry)
        unique: List[Path] = []
        for path in found:
            if path not in unique:
                unique.append(path)
        return unique

    def with_overrides(self, lenient: Optional[bool] = None, gen_tests_dir: Optional[str] = None) -> "ProjectConfig":
        updated = self
        if lenient:
            updated = replace(updated, lenient=True)
        if gen_tests_dir:
            updated = replace(updated, gen_tests_dir=(Path.cwd() / gen_tests_dir).resolve())
        check_disjoint(updated)
        return updated


def load_config(config_path: Path) -> dict:
    with open(config_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


def _is_within(path: Path, root: Path) -> bool:
    try:
        path.relative_to(root)
    except ValueError:
        return False
    return True


def check_disjoint(config: ProjectConfig) -> None:
    gen = config.gen_tests_dir
    for source_root in config.source_roots:
        if _is_within(gen, source_root) or _is_within(source_root, gen):
            raise ConfigError(f"gen_tests_dir {gen} overlaps source root {source_root}")


def find_config(explicit: Optional[str] = None) -> Path:
    if explicit:
        return Path(explicit)
    if not DEFAULT_CONFIG.exists() and FALLBACK_CONFIG.exists():
        return FALLBACK_CONFIG
    return DEFAULT_CONFIG


def read_project_config(config_path: Path) -> ProjectConfig:
    """Load, validate and resolve a project config; paths are relative to its folder."""
    config_path = Path(config_path)
    if not config_path.is_file():
        raise ConfigError(f"config file {config_path} does not exist", location=str(config_path))
    try:
        raw = load_config(config_path)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config: {exc}", location=str(config_path)) from exc
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"{exc.json_path}: {exc.message}", location=str(config_path)) from exc

    root = config_path.resolve().parent
    invocations = raw["invocations"]
    known = raw.get("known_types_path")
    config = ProjectConfig(
        root=root,
        source_roots=tuple((root / p).resolve() for p in raw["source_roots"]),
        templates_dir=(root / raw["templates_dir"]).resolve(),
        invocations=(invocations,) if isinstance(invocations, str) else tuple(invocations),
        gen_tests_dir=(root / raw["gen_tests_dir"]).resolve(),
        known_types_path=(root / known).resolve() if known else None,
        lenient=bool(raw.get("lenient", False)),
    )
    check_disjoint(config)
    return config
