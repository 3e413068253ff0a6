"""Template descriptions: the condition/consequence micro-syntax of header comments.

A description is either whole free form (a comment without tagged lines) or
a pair of statements given by

    @cond <subject> | <relation> | <object>
    @conseq <subject> | <relation> | <object>

where either statement may instead be free form as `@cond text:<free text>`.
A literal bar inside a part is written `\\|`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Union

from core.errors import MalformedDescription

TAG_REGEX = re.compile(r"^@(cond|conseq)\b\s*(.*)$")
UNESCAPED_BAR_REGEX = re.compile(r"(?<!\\)\|")
FREEFORM_PREFIX = "text:"


def normalize_space(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class StatementTemplate:
    subject: str
    relation: str
    object: str

    def parts(self) -> List[str]:
        return [self.subject, self.relation, self.object]


StatementPart = Union[StatementTemplate, str]


@dataclass(frozen=True)
class FragmentTemplate:
    condition: Optional[StatementPart] = None
    consequence: Optional[StatementPart] = None
    whole_freeform: Optional[str] = None

    def __post_init__(self) -> None:
        paired = self.condition is not None and self.consequence is not None
        if paired == (self.whole_freeform is not None) or (self.condition is None) != (self.consequence is None):
            raise MalformedDescription("a description is either a condition/consequence pair or whole free form")

    def texts(self) -> List[str]:
        """Every text part, for placeholder scanning."""
        if self.whole_freeform is not None:
            return [self.whole_freeform]
        out: List[str] = []
        for statement in (self.condition, self.consequence):
            out.extend(statement.parts() if isinstance(statement, StatementTemplate) else [statement])
        return out

    def describe(self) -> str:
        """Human-readable form with placeholders left in place."""
        if self.whole_freeform is not None:
            return self.whole_freeform

        def show(statement: StatementPart) -> str:
            if isinstance(statement, StatementTemplate):
                return " ".join(statement.parts())
            return statement

        return f"If {show(self.condition)}, then {show(self.consequence)}."


def _parse_statement(tag: str, body: str) -> StatementPart:
    if body.startswith(FREEFORM_PREFIX):
        text = normalize_space(body[len(FREEFORM_PREFIX) :])
        if not text:
            raise MalformedDescription(f"@{tag} free-form text is empty")
        return text
    parts = [normalize_space(part.replace("\\|", "|")) for part in UNESCAPED_BAR_REGEX.split(body)]
    if len(parts) != 3:
        raise MalformedDescription(f"@{tag} needs subject | relation | object, found {len(parts)} part(s)")
    if not all(parts):
        raise MalformedDescription(f"@{tag} has an empty part")
    return StatementTemplate(*parts)


def parse_description(lines: Iterable[str]) -> FragmentTemplate:
    """Build a FragmentTemplate from the content lines of a header comment."""
    tagged = {}
    untagged: List[str] = []
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        match = TAG_REGEX.match(line)
        if not match:
            untagged.append(line)
            continue
        tag, body = match.group(1), match.group(2)
        if tag in tagged:
            raise MalformedDescription(f"@{tag} appears more than once")
        tagged[tag] = _parse_statement(tag, body.strip())

    if not tagged:
        text = normalize_space(" ".join(untagged))
        if not text:
            raise MalformedDescription("template has no description")
        return FragmentTemplate(whole_freeform=text)
    if untagged:
        raise MalformedDescription(f"untagged text next to @cond/@conseq: {untagged[0]!r}")
    for tag in ("cond", "conseq"):
        if tag not in tagged:
            raise MalformedDescription(f"missing @{tag} line")
    return FragmentTemplate(condition=tagged["cond"], consequence=tagged["conseq"])
