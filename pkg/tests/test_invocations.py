# Run tests: pytest -q
from pathlib import Path
import json
import random
import string
import sys

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from catalog.templates import load_catalog  # noqa: E402
from core.errors import (  # noqa: E402
    ExtraPlaceholderValue,
    FocalMethodNotFound,
    MissingPlaceholderValue,
    NotThrowable,
    SchemaError,
    UnknownTemplate,
    UnsupportedVersion,
)
from invocations.context import FocalSignature, resolve_context  # noqa: E402
from invocations.store import Invocation, dedupe_invocations, load_invocations, serialize_invocations  # noqa: E402
from parsing.class_index import build_class_index  # noqa: E402
from parsing.source_unit import find_java_files, read_unit  # noqa: E402

DATA = Path(__file__).resolve().parent / "data" / "project"
POP = FocalSignature("com.ex.Buffer", "pop")
FIG2_VALUES = {"ex": "java.lang.IllegalStateException", "state": "isEmpty()", "factory": "createEmpty"}


@pytest.fixture(scope="module")
def project():
    index = build_class_index([read_unit(p) for p in find_java_files(DATA / "src")])
    catalog = load_catalog([read_unit(p) for p in find_java_files(DATA / "templates")])
    return catalog, index


def test_load_fixture_file():
    invocations = load_invocations((DATA / "invocations" / "buffer.json").read_text(encoding="utf-8"))
    assert invocations == [Invocation.create("Example", POP, FIG2_VALUES)]
    assert invocations[0].describe() == "Example#com.ex.Buffer.pop()"


def test_serialized_fixture_is_already_canonical():
    for path in sorted((DATA / "invocations").glob("*.json")):
        text = path.read_text(encoding="utf-8")
        assert serialize_invocations(load_invocations(text)) == text


def test_value_order_does_not_matter():
    doc = {
        "version": 1,
        "invocations": [
            {"template": "Example", "class": "com.ex.Buffer", "method": "pop", "params": [], "values": values}
            for values in (FIG2_VALUES, dict(reversed(list(FIG2_VALUES.items()))))
        ],
    }
    first, second = load_invocations(json.dumps(doc))
    assert first == second
    assert serialize_invocations([first]) == serialize_invocations([second])


def _random_word(rng, size):
    return rng.choice(string.ascii_letters) + "".join(rng.choice(string.ascii_letters + string.digits + "_") for _ in range(size))


def _random_invocation(rng):
    values = {
        _random_word(rng, rng.randint(0, 6)): "".join(rng.choice(string.printable + "λ→") for _ in range(rng.randint(0, 12)))
        for _ in range(rng.randint(0, 4))
    }
    for predefined in ("method", "class", "package"):
        values.pop(predefined, None)
    params = tuple(rng.choice(["int", "double[]", "java.lang.String", "Foo[][]"]) for _ in range(rng.randint(0, 3)))
    signature = FocalSignature(
        f"com.{_random_word(rng, 3)}.{_random_word(rng, 5)}",
        _random_word(rng, rng.randint(0, 8)),
        params,
    )
    return Invocation.create(_random_word(rng, 6), signature, values)


def test_random_lists_survive_serialization():
    rng = random.Random(7)
    for _ in range(500):
        invocations = [_random_invocation(rng) for _ in range(rng.randint(0, 5))]
        text = serialize_invocations(invocations)
        assert load_invocations(text) == invocations
        assert serialize_invocations(load_invocations(text)) == text


@pytest.mark.parametrize(
    "document,needle",
    [
        ({"invocations": []}, "version"),
        ({"version": 1}, "invocations"),
        ({"version": 1, "invocations": [{"template": "T"}]}, "$.invocations[0]"),
        (
            {
                "version": 1,
                "invocations": [
                    {"template": "T", "class": "Buffer", "method": "pop", "params": [], "values": {}},
                ],
            },
            "$.invocations[0].class",
        ),
        (
            {
                "version": 1,
                "invocations": [
                    {"template": "T", "class": "a.B", "method": "m", "params": [], "values": {"method": "x"}},
                ],
            },
            "$.invocations[0].values",
        ),
        (
            {
                "version": 1,
                "invocations": [
                    {"template": "T", "class": "a.B", "method": "m", "params": [], "values": {"v": 3}},
                ],
            },
            "$.invocations[0].values.v",
        ),
        ({"version": 1, "invocations": [], "extra": True}, "extra"),
    ],
)
def test_schema_errors_name_the_offending_path(document, needle):
    with pytest.raises(SchemaError) as info:
        load_invocations(json.dumps(document), location="inv.json")
    assert needle in str(info.value)
    assert info.value.location == "inv.json"


def test_invalid_json_and_duplicate_keys():
    with pytest.raises(SchemaError):
        load_invocations("{")
    with pytest.raises(SchemaError) as info:
        load_invocations('{"version": 1, "version": 1, "invocations": []}')
    assert "duplicate key" in str(info.value)


def test_unsupported_version():
    with pytest.raises(UnsupportedVersion):
        load_invocations('{"version": 2, "invocations": []}')


def test_empty_list_is_valid():
    assert load_invocations('{"version": 1, "invocations": []}') == []


def test_dedupe_keeps_first_and_warns():
    inv = Invocation.create("Example", POP, FIG2_VALUES)
    other = Invocation.create("Example", POP, dict(FIG2_VALUES, state="true"))
    kept, warnings = dedupe_invocations([("a.json#0", inv), ("a.json#1", other), ("b.json#0", inv)])
    assert kept == [("a.json#0", inv), ("a.json#1", other)]
    assert len(warnings) == 1
    assert warnings[0].code == "DuplicateInvocation"
    assert warnings[0].location == "b.json#0"
    assert "a.json#0" in warnings[0].message


def test_resolve_context_binds_predefined_and_declared_values(project):
    catalog, index = project
    ctx = resolve_context(Invocation.create("Example", POP, FIG2_VALUES), catalog, index)
    assert ctx.bindings == {
        "method": "pop",
        "class": "Buffer",
        "package": "com.ex",
        "ex": "java.lang.IllegalStateException",
        "state": "isEmpty()",
        "factory": "createEmpty",
    }
    assert ctx.focal.name == "pop"
    assert ctx.declaring_type.qualified_name == "com.ex.Buffer"
    assert ctx.warnings == []


def test_resolve_context_errors(project):
    catalog, index = project
    with pytest.raises(UnknownTemplate):
        resolve_context(Invocation.create("Nope", POP, FIG2_VALUES), catalog, index)

    missing = {k: v for k, v in FIG2_VALUES.items() if k != "factory"}
    with pytest.raises(MissingPlaceholderValue) as info:
        resolve_context(Invocation.create("Example", POP, missing), catalog, index)
    assert info.value.placeholder == "factory"

    with pytest.raises(ExtraPlaceholderValue) as info:
        resolve_context(Invocation.create("Example", POP, dict(FIG2_VALUES, zz="1")), catalog, index)
    assert info.value.placeholder == "zz"

    with pytest.raises(FocalMethodNotFound):
        resolve_context(Invocation.create("Example", FocalSignature("com.ex.Buffer", "peek"), FIG2_VALUES), catalog, index)

    with pytest.raises(NotThrowable) as info:
        resolve_context(Invocation.create("Example", POP, dict(FIG2_VALUES, ex="String")), catalog, index)
    assert info.value.placeholder == "ex"
    assert "$ex$" in str(info.value)
