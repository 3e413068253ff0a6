"""Replace the generated-tests folder as a whole."""

from __future__ import annotations

import logging
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping

from core.errors import GuardError

logger = logging.getLogger(__name__)

MARKER_NAME = ".dscribe-generated"
MARKER_TEXT = "This folder is owned by factgen. Its contents are replaced on every run.\n"


@dataclass
class WriteReport:
    gen_root: Path
    written: List[str] = field(default_factory=list)
    removed: List[str] = field(default_factory=list)
    marker_created: bool = False
    dry_run: bool = False

    @property
    def files_touched(self) -> int:
        return len(self.written) + len(self.removed)


def read_tree(root: Path) -> Dict[str, bytes]:
    """Relative posix path -> bytes for every file under root except the marker."""
    contents: Dict[str, bytes] = {}
    if not root.is_dir():
        return contents
    for path in sorted(root.rglob("*")):
        if path.is_file():
            rel = path.relative_to(root).as_posix()
            if rel != MARKER_NAME:
                contents[rel] = path.read_bytes()
    return contents


def check_guard(gen_root: Path) -> None:
    """Refuse to manage a folder that exists, is non-empty and lacks the marker."""
    if gen_root.exists() and not gen_root.is_dir():
        raise GuardError(f"{gen_root} exists and is not a directory")
    if gen_root.is_dir() and any(gen_root.iterdir()) and not (gen_root / MARKER_NAME).is_file():
        raise GuardError(f"{gen_root} is not empty and has no {MARKER_NAME} marker; refusing to replace it")


def write_generated_folder(files: Mapping[str, str], gen_root: Path, dry_run: bool = False) -> WriteReport:
    """Make `gen_root` hold exactly `files` plus the marker.

    The new tree is built next to the old one and swapped in, so stale files
    from earlier runs never survive. A folder that already matches is left
    untouched.
    """
    gen_root = Path(gen_root)
    staging = gen_root.parent / f".{gen_root.name}.staging"
    backup = gen_root.parent / f".{gen_root.name}.previous"
    if not dry_run and backup.is_dir() and not gen_root.exists():
        logger.warning("Restoring %s from an interrupted swap", gen_root)
        backup.rename(gen_root)
    check_guard(gen_root)

    desired = {rel: text.encode("utf-8") for rel, text in files.items()}
    current = read_tree(gen_root)
    report = WriteReport(gen_root=gen_root, dry_run=dry_run)
    report.written = sorted(rel for rel, data in desired.items() if current.get(rel) != data)
    report.removed = sorted(rel for rel in current if rel not in desired)
    report.marker_created = not (gen_root / MARKER_NAME).is_file()

    if dry_run or (report.files_touched == 0 and not report.marker_created):
        return report

    for leftover in (staging, backup):
        if leftover.exists():
            shutil.rmtree(leftover)

    try:
        staging.mkdir(parents=True)
        (staging / MARKER_NAME).write_text(MARKER_TEXT, encoding="utf-8")
        for rel, data in sorted(desired.items()):
            target = staging / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(data)
        if gen_root.exists():
            gen_root.rename(backup)
        try:
            staging.rename(gen_root)
        except OSError:
            if backup.exists() and not gen_root.exists():
                backup.rename(gen_root)
            raise
    finally:
        if staging.exists():
            shutil.rmtree(staging, ignore_errors=True)
    if backup.exists():
        shutil.rmtree(backup)

    logger.info("Wrote %d and removed %d generated files under %s", len(report.written), len(report.removed), gen_root)
    return report
