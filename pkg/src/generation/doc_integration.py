"""Splice `@dscribe` lines into header comments, leaving every other byte alone."""

from __future__ import annotations

from typing import List, Mapping, Optional, Sequence, Tuple

from parsing.comments import CommentBlock, Span
from parsing.source_unit import MethodDecl, SourceUnit

from .fragments import TAG

Edit = Tuple[int, int, str]


def is_tag_line(content: str) -> bool:
    text = content.strip()
    return text == TAG or (text.startswith(TAG) and text[len(TAG)].isspace())


def has_tags(comment: Optional[CommentBlock]) -> bool:
    return comment is not None and any(is_tag_line(line.content) for line in comment.lines)


def _indent_before(text: str, offset: int) -> str:
    line_start = text.rfind("\n", 0, offset) + 1
    prefix = text[line_start:offset]
    return prefix if not prefix.strip() else ""


def _newline_of(text: str) -> str:
    return "\r\n" if "\r\n" in text else "\n"


def _escape(line: str) -> str:
    return line.replace("*/", "*&#47;")


def _rewrite_comment(block: CommentBlock, indent: str, newline: str, new_lines: Sequence[str]) -> Optional[str]:
    """Return the rewritten comment, or None when it should disappear."""
    added = [f"{indent} * {_escape(line)}{newline}" for line in new_lines]
    closer = f"{indent} */"
    lines = block.lines

    if len(lines) == 1:
        only = lines[0]
        tagged = is_tag_line(only.content)
        if not tagged and not new_lines:
            return block.render()
        body = [] if tagged or not only.text else [f"{indent} * {only.text}{newline}"]
        if not body and not new_lines:
            return None
        return "/**" + newline + "".join(body) + "".join(added) + closer

    first, middle, last = lines[0], lines[1:-1], lines[-1]
    removed = 0
    out: List[str] = []
    content_left = False

    if is_tag_line(first.content):
        removed += 1
        out.append(first.prefix.rstrip(" \t") + first.newline)
    else:
        out.append(first.render())
        content_left = content_left or bool(first.text)

    for line in middle:
        if is_tag_line(line.content):
            removed += 1
            continue
        out.append(line.render())
        content_left = content_left or bool(line.text)

    if is_tag_line(last.content):
        removed += 1
        tail = closer
    elif last.text and new_lines:
        out.append(f"{last.prefix}{last.content.rstrip()}{newline}")
        tail = closer
        content_left = True
    else:
        tail = last.render()
        content_left = content_left or bool(last.text)

    if removed and not content_left and not new_lines:
        return None
    if not removed and not new_lines:
        return block.render()
    return "".join(out) + "".join(added) + tail


def doc_edit(text: str, method: MethodDecl, lines: Sequence[str]) -> Optional[Edit]:
    """Compute the (start, end, replacement) edit for one method, or None."""
    comment = method.header_comment
    newline = _newline_of(text)
    if comment is None:
        if not lines:
            return None
        indent = _indent_before(text, method.span.start)
        added = "".join(f"{indent} * {_escape(line)}{newline}" for line in lines)
        created = f"/**{newline}{added}{indent} */{newline}{indent}"
        return method.span.start, method.span.start, created

    indent = _indent_before(text, comment.span.start)
    rewritten = _rewrite_comment(comment, indent, newline, lines)
    if rewritten is None:
        return comment.span.start, method.span.start, ""
    if rewritten == comment.render():
        return None
    return comment.span.start, comment.span.end, rewritten


def apply_edits(text: str, edits: Sequence[Edit]) -> str:
    for start, end, replacement in sorted(edits, key=lambda e: e[0], reverse=True):
        text = text[:start] + replacement + text[end:]
    return text


def integrate_doc(unit: SourceUnit, focal: MethodDecl, lines: Sequence[str]) -> str:
    """Replace the `@dscribe` lines of one method's header comment with `lines`."""
    edit = doc_edit(unit.raw_text, focal, lines)
    return apply_edits(unit.raw_text, [edit] if edit else [])


def integrate_unit(unit: SourceUnit, updates: Mapping[Span, Sequence[str]]) -> str:
    """Rewrite every method of the unit in one pass.

    Methods in `updates` (keyed by method span) get their new lines; every
    other method loses its stale `@dscribe` lines.
    """
    edits: List[Edit] = []
    for _, method in unit.all_methods():
        lines = updates.get(method.span, ())
        if not lines and not has_tags(method.header_comment):
            continue
        edit = doc_edit(unit.raw_text, method, lines)
        if edit is not None:
            edits.append(edit)
    return apply_edits(unit.raw_text, edits)
