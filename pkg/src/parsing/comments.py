"""Header comment model that re-emits untouched lines byte for byte."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple

OPENER_REGEX = re.compile(r"/\*\*+(?!/)[ \t]?")
GUTTER_REGEX = re.compile(r"[ \t]*(?:\*(?!/)[ \t]?)?")
CLOSER_REGEX = re.compile(r"[ \t]*\*+/$")
NEWLINE_REGEX = re.compile(r"\r\n|\n|\r")


@dataclass(frozen=True)
class Span:
    start: int
    end: int

    def slice(self, text: str) -> str:
        return text[self.start : self.end]

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True)
class CommentLine:
    """One physical comment line split into gutter, content and closer."""

    prefix: str
    content: str
    suffix: str
    newline: str

    def render(self) -> str:
        return f"{self.prefix}{self.content}{self.suffix}{self.newline}"

    @property
    def text(self) -> str:
        return self.content.strip()


@dataclass(frozen=True)
class CommentBlock:
    lines: Tuple[CommentLine, ...]
    span: Span

    def render(self) -> str:
        return "".join(line.render() for line in self.lines)

    def texts(self) -> List[str]:
        return [line.text for line in self.lines]

    @property
    def newline(self) -> str:
        for line in self.lines:
            if line.newline:
                return line.newline
        return "\n"


def is_doc_comment(text: str) -> bool:
    return text.startswith("/**") and text != "/**/"


def _split_physical_lines(text: str) -> List[Tuple[str, str]]:
    lines: List[Tuple[str, str]] = []
    pos = 0
    for match in NEWLINE_REGEX.finditer(text):
        lines.append((text[pos : match.start()], match.group(0)))
        pos = match.end()
    lines.append((text[pos:], ""))
    return lines


def parse_comment(text: str, start: int) -> CommentBlock:
    """Split a `/** ... */` comment into gutter-aware lines."""
    physical = _split_physical_lines(text)
    lines: List[CommentLine] = []
    last = len(physical) - 1
    for idx, (body, newline) in enumerate(physical):
        if idx == 0:
            prefix_match = OPENER_REGEX.match(body)
        else:
            prefix_match = GUTTER_REGEX.match(body)
        prefix = prefix_match.group(0) if prefix_match else ""
        rest = body[len(prefix) :]
        suffix = ""
        if idx == last:
            closer = CLOSER_REGEX.search(rest)
            if closer:
                suffix = closer.group(0)
                rest = rest[: closer.start()]
        lines.append(CommentLine(prefix=prefix, content=rest, suffix=suffix, newline=newline))
    return CommentBlock(lines=tuple(lines), span=Span(start, start + len(text)))
