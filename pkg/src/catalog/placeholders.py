"""Placeholder lexical rules: `$name$` tokens scanned before any parsing."""

from __future__ import annotations

import re
from typing import Callable, Iterable, Mapping, Set, Union

from parsing.lexer import JAVA_KEYWORDS, Token, TokenTree

PLACEHOLDER_REGEX = re.compile(r"\$([A-Za-z_][A-Za-z0-9_]*)\$")
IDENTIFIER_REGEX = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
IDENTIFIER_CHAR_REGEX = re.compile(r"[A-Za-z0-9_$]")

PREDEFINED = ("method", "class", "package")
PLACEHOLDER_TYPES = ("TYPE", "EXCEPTION", "METHOD", "FIELD", "EXPR", "EXPR_LIST")


def is_identifier(text: str) -> bool:
    return bool(IDENTIFIER_REGEX.match(text)) and text not in JAVA_KEYWORDS


def scan_placeholders(source: Union[str, TokenTree, Iterable[Token]]) -> Set[str]:
    """Return the names of every `$identifier$` token in text or tokens."""
    if isinstance(source, str):
        return {match.group(1) for match in PLACEHOLDER_REGEX.finditer(source)}
    tokens = source.flatten() if isinstance(source, TokenTree) else source
    names: Set[str] = set()
    for tok in tokens:
        names |= scan_placeholders(tok.text)
    return names


def sanitize_identifier(value: str) -> str:
    """Reduce a value to identifier characters for splicing inside a name."""
    cleaned = re.sub(r"[^A-Za-z0-9_]", "", value)
    cleaned = re.sub(r"_+", "_", cleaned)
    return cleaned or "v"


def substitute(
    text: str,
    bindings: Mapping[str, str],
    sanitize_in_identifiers: bool = False,
    on_missing: Callable[[str], str] = lambda name: f"${name}$",
) -> str:
    """Replace each placeholder with its binding.

    With `sanitize_in_identifiers`, a value spliced next to identifier
    characters is reduced by `sanitize_identifier` so the surrounding name
    stays legal.
    """

    def replace(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            return on_missing(name)
        value = bindings[name]
        if sanitize_in_identifiers:
            before = text[match.start() - 1] if match.start() > 0 else ""
            after = text[match.end()] if match.end() < len(text) else ""
            if IDENTIFIER_CHAR_REGEX.match(before or " ") or IDENTIFIER_CHAR_REGEX.match(after or " "):
                value = sanitize_identifier(value)
        return value

    return PLACEHOLDER_REGEX.sub(replace, text)
