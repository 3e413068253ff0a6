"""Invocation files: strict JSON loading and canonical serialization."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Tuple

import jsonschema

from core.diagnostics import Diagnostic
from core.errors import SchemaError, UnsupportedVersion
from parsing.class_index import FocalSignature

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
IDENTIFIER_PATTERN = r"^[A-Za-z_$][A-Za-z0-9_$]*$"
QUALIFIED_PATTERN = r"^[A-Za-z_$][A-Za-z0-9_$]*(\.[A-Za-z_$][A-Za-z0-9_$]*)+$"
PARAM_PATTERN = r"^[A-Za-z_$][A-Za-z0-9_$]*(\.[A-Za-z_$][A-Za-z0-9_$]*)*(\[\])*$"

INVOCATION_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["version", "invocations"],
    "additionalProperties": False,
    "properties": {
        "version": {"type": "integer"},
        "invocations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["template", "class", "method", "params", "values"],
                "additionalProperties": False,
                "properties": {
                    "template": {"type": "string", "minLength": 1},
                    "class": {"type": "string", "pattern": QUALIFIED_PATTERN},
                    "method": {"type": "string", "pattern": IDENTIFIER_PATTERN},
                    "params": {"type": "array", "items": {"type": "string", "pattern": PARAM_PATTERN}},
                    "values": {
                        "type": "object",
                        "propertyNames": {
                            "pattern": r"^[A-Za-z_][A-Za-z0-9_]*$",
                            "not": {"enum": ["method", "class", "package"]},
                        },
                        "additionalProperties": {"type": "string"},
                    },
                },
            },
        },
    },
}


@dataclass(frozen=True)
class Invocation:
    template_name: str
    signature: FocalSignature
    values: Tuple[Tuple[str, str], ...] = field(default_factory=tuple)

    @classmethod
    def create(cls, template_name: str, signature: FocalSignature, values: Mapping[str, str]) -> "Invocation":
        return cls(template_name=template_name, signature=signature, values=tuple(sorted(values.items())))

    @property
    def value_map(self) -> Dict[str, str]:
        return dict(self.values)

    def describe(self) -> str:
        return f"{self.template_name}#{self.signature}"


def _reject_duplicate_keys(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise SchemaError(f"duplicate key {key!r}")
        out[key] = value
    return out


def load_invocations(content: str, location: str = "invocations") -> List[Invocation]:
    """Parse an invocation file, keeping file order."""
    try:
        data = json.loads(content, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"$: invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", location=location) from exc
    except SchemaError as exc:
        exc.location = location
        raise

    if isinstance(data, dict) and "version" in data and data["version"] != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"invocation format version {data['version']!r} is not supported (expected {FORMAT_VERSION})",
            location=location,
        )
    try:
        jsonschema.validate(data, INVOCATION_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{exc.json_path}: {exc.message}", location=location) from exc

    return [
        Invocation.create(
            template_name=item["template"],
            signature=FocalSignature(
                class_name=item["class"],
                method_name=item["method"],
                param_types=tuple(item["params"]),
            ),
            values=item["values"],
        )
        for item in data["invocations"]
    ]


def serialize_invocations(invocations: Iterable[Invocation]) -> str:
    """Canonical form: fixed key order, sorted values, 2-space indent, trailing newline."""
    document = {
        "version": FORMAT_VERSION,
        "invocations": [
            {
                "template": inv.template_name,
                "class": inv.signature.class_name,
                "method": inv.signature.method_name,
                "params": list(inv.signature.param_types),
                "values": {key: value for key, value in sorted(inv.values)},
            }
            for inv in invocations
        ],
    }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def dedupe_invocations(
    invocations: Iterable[Tuple[str, Invocation]],
) -> Tuple[List[Tuple[str, Invocation]], List[Diagnostic]]:
    """Collapse identical invocations, keeping the first location of each."""
    seen: Dict[Invocation, str] = {}
    kept: List[Tuple[str, Invocation]] = []
    warnings: List[Diagnostic] = []
    for where, inv in invocations:
        if inv in seen:
            message = f"duplicate of {seen[inv]} ({inv.describe()}); collapsed"
            logger.warning("%s: %s", where, message)
            warnings.append(Diagnostic.warning(where, "DuplicateInvocation", message))
            continue
        seen[inv] = where
        kept.append((where, inv))
    return kept, warnings
