"""Resolve an invocation into a fully bound, type-checked context."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List

from catalog.placeholders import PREDEFINED
from catalog.templates import Catalog, Template
from core.errors import DScribeError, ExtraPlaceholderValue, MissingPlaceholderValue, UnknownTemplate
from parsing.class_index import ClassIndex, FocalSignature, find_focal_method
from parsing.source_unit import MethodDecl, TypeDecl
from typecheck.values import TypedValue, check_value

from .store import Invocation

__all__ = ["FocalSignature", "InvocationContext", "resolve_context"]


@dataclass(frozen=True)
class InvocationContext:
    invocation: Invocation
    template: Template
    focal: MethodDecl
    declaring_type: TypeDecl
    package_name: str
    bindings: Dict[str, str]
    typed: Dict[str, TypedValue]

    @property
    def signature(self) -> FocalSignature:
        return self.invocation.signature

    @property
    def warnings(self) -> List[str]:
        return [f"${name}$: {w}" for name, value in sorted(self.typed.items()) for w in value.warnings]


def resolve_context(
    inv: Invocation,
    catalog: Catalog,
    index: ClassIndex,
    lenient: bool = False,
) -> InvocationContext:
    template = catalog.get(inv.template_name)
    if template is None:
        raise UnknownTemplate(f"no template named {inv.template_name!r}")

    focal = find_focal_method(inv.signature, index)
    declaring = index.project_type(inv.signature.class_name)
    unit = index.unit_for(inv.signature.class_name)
    package = unit.package_name if unit is not None else ""

    values = inv.value_map
    declared = set(template.declared_names)
    for name in template.declared_names:
        if name not in values:
            raise MissingPlaceholderValue(f"invocation gives no value for ${name}$", placeholder=name)
    extra = sorted(set(values) - declared)
    if extra:
        raise ExtraPlaceholderValue(
            f"template {template.name!r} declares no placeholder ${extra[0]}$", placeholder=extra[0]
        )

    bindings: Dict[str, str] = dict(zip(PREDEFINED, (focal.name, declaring.simple_name, package)))
    typed: Dict[str, TypedValue] = {}
    for placeholder in template.placeholders:
        try:
            value = check_value(placeholder.ptype, values[placeholder.name], package, index, lenient=lenient)
        except DScribeError as exc:
            exc.placeholder = placeholder.name
            raise
        typed[placeholder.name] = value
        bindings[placeholder.name] = value.substitution_text

    return InvocationContext(
        invocation=inv,
        template=template,
        focal=focal,
        declaring_type=declaring,
        package_name=package,
        bindings=bindings,
        typed=typed,
    )
