"""Per-type checks for placeholder values."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

from catalog.placeholders import is_identifier
from core.errors import BadIdentifier, BadPlaceholderType, ExprSyntaxError, NotThrowable
from parsing.class_index import PRIMITIVES, ClassIndex, is_throwable, resolve_type

from .expressions import check_expression, is_balanced, split_balanced, split_expression_list

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TypedValue:
    ptype: str
    raw: str
    substitution_text: str
    resolved: Optional[str] = None
    elements: Tuple[str, ...] = ()
    warnings: Tuple[str, ...] = field(default_factory=tuple)


def _check_type(raw: str, focal_package: str, index: ClassIndex) -> str:
    text = raw.strip()
    base = text
    while base.endswith("[]"):
        base = base[:-2].rstrip()
    if base in PRIMITIVES:
        return text
    return resolve_type(base, focal_package, index)


def _check_exception(raw: str, focal_package: str, index: ClassIndex, lenient: bool) -> str:
    resolved = resolve_type(raw.strip(), focal_package, index)
    if not is_throwable(resolved, index, lenient):
        raise NotThrowable(f"{resolved} does not inherit from java.lang.Throwable")
    return resolved


def _check_expr(raw: str, lenient: bool) -> Tuple[str, ...]:
    try:
        check_expression(raw)
    except ExprSyntaxError as exc:
        if lenient and raw.strip() and is_balanced(raw):
            message = f"expression outside the checked grammar: {exc.message}"
            logger.warning("%s", message)
            return (message,)
        raise
    return ()


def check_value(
    ptype: str,
    raw: str,
    focal_package: str,
    index: ClassIndex,
    lenient: bool = False,
) -> TypedValue:
    """Check `raw` against the rules of `ptype`.

    Only TYPE and EXCEPTION values consult the class index; the others are
    checked syntactically. Substitution text is always the value as written.
    """
    if ptype == "TYPE":
        resolved = _check_type(raw, focal_package, index)
        return TypedValue(ptype, raw, raw.strip(), resolved=resolved)

    if ptype == "EXCEPTION":
        resolved = _check_exception(raw, focal_package, index, lenient)
        return TypedValue(ptype, raw, raw.strip(), resolved=resolved)

    if ptype in ("METHOD", "FIELD"):
        if not is_identifier(raw):
            kind = "method" if ptype == "METHOD" else "field"
            raise BadIdentifier(f"{raw!r} is not a bare {kind} identifier")
        return TypedValue(ptype, raw, raw)

    if ptype == "EXPR":
        warnings = _check_expr(raw, lenient)
        return TypedValue(ptype, raw, raw.strip(), warnings=warnings)

    if ptype == "EXPR_LIST":
        if not raw.strip():
            return TypedValue(ptype, raw, "")
        try:
            elements = tuple(split_expression_list(raw))
            warnings: Tuple[str, ...] = ()
        except ExprSyntaxError as exc:
            if not (lenient and is_balanced(raw)):
                raise
            elements = tuple(split_balanced(raw))
            warnings = (f"expression list outside the checked grammar: {exc.message}",)
            logger.warning("%s", warnings[0])
        return TypedValue(ptype, raw, raw.strip(), elements=elements, warnings=warnings)

    raise BadPlaceholderType(f"unknown placeholder type {ptype!r}")
