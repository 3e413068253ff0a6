"""Canonical re-indentation of generated method text."""

from __future__ import annotations

from typing import List

from parsing.lexer import tokenize

INDENT = "    "


def canonical_lines(text: str, base_depth: int = 1) -> List[str]:
    """Re-indent `text` at four spaces per brace depth, starting at `base_depth`.

    Lines are stripped first. Continuation lines of block comments keep a
    single space before their `*` gutter; text-block continuation lines are
    kept verbatim. Leading and trailing blank lines are dropped.
    """
    tokens = tokenize(text, keep_trivia=True)
    out: List[str] = []
    depth = 0
    idx = 0
    pos = 0
    for raw_line in text.split("\n"):
        line_start, line_end = pos, pos + len(raw_line)
        pos = line_end + 1
        while idx < len(tokens) and tokens[idx].end <= line_start:
            tok = tokens[idx]
            if tok.is_op("{"):
                depth += 1
            elif tok.is_op("}"):
                depth -= 1
            idx += 1

        stripped = raw_line.strip()
        if not stripped:
            out.append("")
            continue

        current = tokens[idx] if idx < len(tokens) else None
        if current is not None and current.start < line_start and current.kind in ("comment", "string"):
            if current.kind == "string":
                out.append(raw_line.rstrip("\r"))
            else:
                gutter = " " if stripped.startswith("*") else ""
                out.append(INDENT * (base_depth + depth) + gutter + stripped)
            continue

        leading_closers = 0
        probe = idx
        while probe < len(tokens) and tokens[probe].start < line_end:
            tok = tokens[probe]
            if tok.kind == "ws" or tok.start < line_start:
                probe += 1
                continue
            if not tok.is_op("}"):
                break
            leading_closers += 1
            probe += 1
        out.append(INDENT * (base_depth + max(depth - leading_closers, 0)) + stripped)

    while out and not out[0]:
        out.pop(0)
    while out and not out[-1]:
        out.pop()
    return out
