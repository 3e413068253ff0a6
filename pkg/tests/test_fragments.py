# Run tests: pytest -q
from pathlib import Path
import itertools
import random
import sys

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from catalog.templates import load_catalog  # noqa: E402
from generation.fragments import (  # noqa: E402
    Fragment,
    Statement,
    aggregate,
    instantiate_fragment,
    render,
    render_all,
)
from invocations.context import FocalSignature, resolve_context  # noqa: E402
from invocations.store import Invocation  # noqa: E402
from parsing.class_index import build_class_index  # noqa: E402
from parsing.source_unit import find_java_files, read_unit  # noqa: E402

DATA = Path(__file__).resolve().parent / "data" / "project"
FOCAL = FocalSignature("com.ex.MathUtil", "log", ("double",))
S = Statement.structured


def pair(cond, conseq):
    return Fragment(S(*cond), S(*conseq), FOCAL, "T")


@pytest.fixture(scope="module")
def resolved():
    index = build_class_index([read_unit(p) for p in find_java_files(DATA / "src")])
    catalog = load_catalog([read_unit(p) for p in find_java_files(DATA / "templates")])

    def fragment(template, signature, values):
        return instantiate_fragment(resolve_context(Invocation.create(template, signature, values), catalog, index))

    return fragment


def test_fig2_fragment_is_whole_free_form(resolved):
    values = {"ex": "java.lang.IllegalStateException", "state": "isEmpty()", "factory": "createEmpty"}
    fragment = resolved("Example", FocalSignature("com.ex.Buffer", "pop"), values)
    assert not fragment.is_structured
    assert render_all([fragment]) == [
        "@dscribe pop throws an exception of type java.lang.IllegalStateException when isEmpty()."
    ]


def test_log_fragments_merge_on_shared_consequence(resolved):
    nan = resolved("NaNArgument", FOCAL, {"a": "a"})
    negative = resolved("NegativeArgument", FOCAL, {"a": "a", "value": "-1.0"})
    assert nan.condition == S("a", "is", "NaN")
    assert render_all([nan, negative]) == ["@dscribe If a is NaN or negative, then the result is NaN."]
    assert render_all([negative, nan, nan]) == ["@dscribe If a is NaN or negative, then the result is NaN."]


@pytest.mark.parametrize(
    "fragments,expected",
    [
        (
            [pair(("x", "is", "null"), ("it", "returns", "0"))],
            ["@dscribe If x is null, then it returns 0."],
        ),
        (
            [pair(("x", "is", "null"), ("it", "returns", "0")), pair(("y", "is", "null"), ("it", "returns", "0"))],
            ["@dscribe If x or y is null, then it returns 0."],
        ),
        (
            [pair(("x", "is", "null"), ("it", "returns", "0")), pair(("y", "is", "empty"), ("it", "returns", "0"))],
            ["@dscribe If x is null; y is empty, then it returns 0."],
        ),
        (
            [pair(("x", "is", "null"), ("it", "throws", "A")), pair(("x", "is", "null"), ("it", "throws", "B"))],
            ["@dscribe If x is null, then it throws A and B."],
        ),
        (
            [pair(("x", "is", "null"), ("it", "throws", "A")), pair(("x", "is", "null"), ("log", "is", "written"))],
            ["@dscribe If x is null, then it throws A; log is written."],
        ),
    ],
)
def test_render_examples(fragments, expected):
    assert render_all(fragments) == expected


def test_freeform_parts_render_and_strip_trailing_period():
    fragment = Fragment(Statement.freeform("the list is empty"), Statement.freeform("it returns 0."), FOCAL, "T")
    assert render_all([fragment]) == ["@dscribe If the list is empty, then it returns 0."]


def test_freeform_fragments_never_merge():
    whole = Fragment(None, None, FOCAL, "T", whole_freeform="Always returns a value.")
    half = Fragment(S("x", "is", "null"), Statement.freeform("nothing happens"), FOCAL, "T")
    full = pair(("y", "is", "null"), ("nothing", "happens", "at all"))
    other = pair(("x", "is", "null"), ("nothing", "happens", "at all"))
    aggregated = aggregate([whole, half, full, other])
    assert len(aggregated) == 3
    lines = [render(agg) for agg in aggregated]
    assert "@dscribe Always returns a value." in lines
    assert "@dscribe If x is null, then nothing happens." in lines
    assert "@dscribe If x or y is null, then nothing happens at all." in lines
    assert lines == sorted(lines)


SUBJECTS = ["a", "b", "c"]
RELATIONS = ["is", "equals"]
OBJECTS = ["x", "y", "z"]
ALPHABET = list(itertools.product(SUBJECTS, RELATIONS, OBJECTS))
CONDITIONS = [("a", "is", "x"), ("b", "is", "x"), ("a", "is", "y"), ("a", "equals", "z"), ("c", "equals", "x")]
CONSEQUENCES = [("a", "is", "y"), ("b", "equals", "y"), ("b", "equals", "z"), ("c", "is", "x")]
# full condition x consequence grid
POOL = [pair(cond, conseq) for cond, conseq in itertools.product(CONDITIONS, CONSEQUENCES)]


def _check_round_trip(fragments):
    aggregated = aggregate(fragments)
    expected = {(f.condition, f.consequence) for f in fragments}
    pairs = [p for agg in aggregated for p in agg.pairs()]
    assert len(pairs) == len(set(pairs))
    assert set(pairs) == expected
    return aggregated


def test_aggregation_preserves_pairs_for_every_subset_up_to_six():
    rng = random.Random(5)
    for size in range(1, 7):
        for subset in itertools.combinations(POOL, size):
            aggregated = _check_round_trip(list(subset))
            shuffled = list(subset)
            rng.shuffle(shuffled)
            assert aggregate(shuffled) == aggregated


def test_aggregation_preserves_pairs_over_the_whole_alphabet():
    rng = random.Random(11)
    for _ in range(2000):
        subset = [pair(rng.choice(ALPHABET), rng.choice(ALPHABET)) for _ in range(rng.randint(2, 8))]
        subset += rng.sample(subset, rng.randint(0, 2))
        aggregated = _check_round_trip(subset)
        shuffled = list(subset)
        rng.shuffle(shuffled)
        assert aggregate(shuffled) == aggregated
        assert render_all(shuffled) == render_all(subset)


def test_duplicate_fragments_collapse():
    fragment = pair(("x", "is", "null"), ("it", "returns", "0"))
    assert len(aggregate([fragment, fragment, fragment])) == 1
