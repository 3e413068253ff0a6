"""Documentation fragments: instantiation, aggregation and `@dscribe` rendering."""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from catalog.description import StatementTemplate, normalize_space
from catalog.placeholders import substitute
from invocations.context import InvocationContext
from parsing.class_index import FocalSignature

TAG = "@dscribe"
STRUCTURED = "structured"
FREEFORM = "freeform"


@dataclass(frozen=True)
class Statement:
    kind: str
    subject: str = ""
    relation: str = ""
    object: str = ""
    text: str = ""

    @classmethod
    def structured(cls, subject: str, relation: str, obj: str) -> "Statement":
        return cls(STRUCTURED, normalize_space(subject), normalize_space(relation), normalize_space(obj))

    @classmethod
    def freeform(cls, text: str) -> "Statement":
        return cls(FREEFORM, text=normalize_space(text))

    @property
    def is_structured(self) -> bool:
        return self.kind == STRUCTURED

    def render(self) -> str:
        if self.is_structured:
            return f"{self.subject} {self.relation} {self.object}"
        return self.text

    def key(self) -> Tuple[str, ...]:
        return (self.kind, self.subject, self.relation, self.object, self.text)


@dataclass(frozen=True)
class Fragment:
    condition: Optional[Statement]
    consequence: Optional[Statement]
    focal: FocalSignature
    origin: str = ""
    whole_freeform: Optional[str] = None

    @property
    def is_structured(self) -> bool:
        return (
            self.whole_freeform is None
            and self.condition is not None
            and self.consequence is not None
            and self.condition.is_structured
            and self.consequence.is_structured
        )

    def key(self) -> Tuple:
        if self.whole_freeform is not None:
            return ("whole", self.whole_freeform)
        return ("pair",) + self.condition.key() + self.consequence.key()


@dataclass(frozen=True)
class AggregatedFragment:
    conditions: Tuple[Statement, ...]
    consequences: Tuple[Statement, ...]
    freeform_lines: Tuple[str, ...]
    focal: FocalSignature

    def pairs(self) -> List[Tuple[Statement, Statement]]:
        """Expand back into (condition, consequence) pairs."""
        return [(cond, conseq) for cond in self.conditions for conseq in self.consequences]


def _instantiate_statement(part, bindings: Dict[str, str]) -> Statement:
    if isinstance(part, StatementTemplate):
        return Statement.structured(*(substitute(text, bindings) for text in part.parts()))
    return Statement.freeform(substitute(part, bindings))


def instantiate_fragment(ctx: InvocationContext) -> Fragment:
    description = ctx.template.description
    origin = ctx.template.name
    if description.whole_freeform is not None:
        text = normalize_space(substitute(description.whole_freeform, ctx.bindings))
        return Fragment(None, None, ctx.signature, origin, whole_freeform=text)
    return Fragment(
        condition=_instantiate_statement(description.condition, ctx.bindings),
        consequence=_instantiate_statement(description.consequence, ctx.bindings),
        focal=ctx.signature,
        origin=origin,
    )


def _single(fragment: Fragment) -> AggregatedFragment:
    if fragment.whole_freeform is not None:
        return AggregatedFragment((), (), (fragment.whole_freeform,), fragment.focal)
    return AggregatedFragment((fragment.condition,), (fragment.consequence,), (), fragment.focal)


def _join(statements: Sequence[Statement], conjunction: str) -> str:
    if len(statements) == 1:
        return statements[0].render()
    glue = f" {conjunction} "
    if all(s.is_structured for s in statements):
        first = statements[0]
        if all(s.subject == first.subject and s.relation == first.relation for s in statements):
            return f"{first.subject} {first.relation} " + glue.join(s.object for s in statements)
        if all(s.relation == first.relation and s.object == first.object for s in statements):
            return glue.join(s.subject for s in statements) + f" {first.relation} {first.object}"
    return "; ".join(s.render() for s in statements)


def render(agg: AggregatedFragment) -> str:
    """Render one aggregated fragment as a `@dscribe` line."""
    if agg.freeform_lines:
        return f"{TAG} " + " ".join(agg.freeform_lines)
    conditions = _join(agg.conditions, "or")
    consequences = _join(agg.consequences, "and").rstrip(".")
    return f"{TAG} If {conditions}, then {consequences}."


def _canonical_key(fragment: Fragment) -> Tuple:
    return (render(_single(fragment)), fragment.key())


def aggregate(fragments: Iterable[Fragment]) -> List[AggregatedFragment]:
    """Merge fragments sharing a consequence, then those sharing a condition.

    Only fully structured fragments merge. The result does not depend on the
    input order.
    """
    unique: Dict[Tuple, Fragment] = {}
    for fragment in sorted(fragments, key=_canonical_key):
        unique.setdefault(fragment.key(), fragment)
    ordered = list(unique.values())

    result: List[AggregatedFragment] = [_single(f) for f in ordered if not f.is_structured]
    structured = [f for f in ordered if f.is_structured]

    by_consequence: "OrderedDict[Statement, List[Fragment]]" = OrderedDict()
    for fragment in structured:
        by_consequence.setdefault(fragment.consequence, []).append(fragment)
    singletons: List[Fragment] = []
    for consequence, group in by_consequence.items():
        if len(group) < 2:
            singletons.extend(group)
            continue
        conditions = tuple(OrderedDict.fromkeys(f.condition for f in group))
        result.append(AggregatedFragment(conditions, (consequence,), (), group[0].focal))

    by_condition: "OrderedDict[Statement, List[Fragment]]" = OrderedDict()
    for fragment in singletons:
        by_condition.setdefault(fragment.condition, []).append(fragment)
    for condition, group in by_condition.items():
        if len(group) < 2:
            result.append(_single(group[0]))
            continue
        consequences = tuple(OrderedDict.fromkeys(f.consequence for f in group))
        result.append(AggregatedFragment((condition,), consequences, (), group[0].focal))

    return sorted(result, key=lambda agg: (render(agg), _aggregate_key(agg)))


def _aggregate_key(agg: AggregatedFragment) -> Tuple:
    return (
        tuple(s.key() for s in agg.conditions),
        tuple(s.key() for s in agg.consequences),
        agg.freeform_lines,
    )


def render_all(fragments: Iterable[Fragment]) -> List[str]:
    """Aggregate and render, in canonical line order without repeats."""
    lines: List[str] = []
    for agg in aggregate(fragments):
        line = render(agg)
        if line not in lines:
            lines.append(line)
    return lines
