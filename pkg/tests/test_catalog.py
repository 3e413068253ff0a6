# Run tests: pytest -q
from pathlib import Path
import sys

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from catalog.description import FragmentTemplate, StatementTemplate, parse_description  # noqa: E402
from catalog.placeholders import sanitize_identifier, scan_placeholders, substitute  # noqa: E402
from catalog.templates import DEFAULT_TEST_CLASS, collect_catalog, load_catalog, parse_types_annotation  # noqa: E402
from core.errors import (  # noqa: E402
    BadPlaceholderType,
    DuplicateTemplateName,
    MalformedAnnotation,
    MalformedDescription,
    MissingTypesAnnotation,
    UnusedPlaceholder,
)
from parsing.lexer import tokenize  # noqa: E402
from parsing.source_unit import find_java_files, parse_unit, read_unit  # noqa: E402

TEMPLATES = Path(__file__).resolve().parent / "data" / "project" / "templates"


def template_unit(body: str, path: str = "T.java"):
    text = "package t;\nimport org.junit.Test;\npublic class T {\n" + body + "\n}\n"
    return parse_unit(text, path)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("test$method$_$state$", {"method", "state"}),
        ("price$", set()),
        ("$a$$b$", {"a", "b"}),
        ("$1x$ and $ok_2$", {"ok_2"}),
    ],
)
def test_scan_placeholders(text, expected):
    assert scan_placeholders(text) == expected


def test_scan_placeholders_over_tokens():
    assert scan_placeholders(tokenize("void test$method$() { $class$ x = $factory$(); }")) == {
        "method",
        "class",
        "factory",
    }


def test_substitute_sanitizes_only_inside_identifiers():
    bindings = {"method": "pop", "state": "isEmpty()"}
    assert substitute("test$method$_$state$", bindings, sanitize_in_identifiers=True) == "testpop_isEmpty"
    assert substitute("if ($state$)", bindings, sanitize_in_identifiers=True) == "if (isEmpty())"
    assert substitute("$other$", bindings) == "$other$"
    assert sanitize_identifier("-1.0") == "10"
    assert sanitize_identifier("()") == "v"


def test_fig2_catalog():
    catalog = load_catalog([read_unit(TEMPLATES / "ExampleTemplates.java")])
    assert len(catalog) == 1
    template = catalog.get("Example")
    assert [(p.name, p.ptype) for p in template.placeholders] == [
        ("ex", "EXCEPTION"),
        ("state", "EXPR"),
        ("factory", "METHOD"),
    ]
    assert template.description.whole_freeform == "$method$ throws an exception of type $ex$ when $state$."
    assert template.test_class_pattern == DEFAULT_TEST_CLASS
    assert "@Template" not in template.test_text and "@Types" not in template.test_text
    assert template.test_text.startswith("@Test")
    assert template.test_text.rstrip().endswith("}")


def test_fixture_catalog_is_sorted_by_name():
    catalog = load_catalog([read_unit(p) for p in find_java_files(TEMPLATES)])
    assert [t.name for t in catalog] == ["Example", "NaNArgument", "NegativeArgument"]
    nan = catalog.get("NaNArgument")
    assert nan.test_class_pattern == "$class$Facts"
    assert nan.description.condition == StatementTemplate("$a$", "is", "NaN")
    assert nan.description.consequence == StatementTemplate("the result", "is", "NaN")
    assert catalog.get("Nope") is None


def test_parse_types_annotation():
    placeholders = parse_types_annotation("{$x$=TYPE, $ys$ = EXPR_LIST}", "w")
    assert [(p.name, p.ptype) for p in placeholders] == [("x", "TYPE"), ("ys", "EXPR_LIST")]
    assert parse_types_annotation("", "w") == ()


@pytest.mark.parametrize(
    "arguments,error",
    [
        ("$x$=WIDGET", BadPlaceholderType),
        ("$method$=METHOD", MalformedAnnotation),
        ("$x$=TYPE, $x$=EXPR", MalformedAnnotation),
        ("$for$=EXPR", MalformedAnnotation),
        ("x=EXPR", MalformedAnnotation),
    ],
)
def test_parse_types_annotation_errors(arguments, error):
    with pytest.raises(error):
        parse_types_annotation(arguments, "w")


def test_missing_types_declaration():
    unit = template_unit(
        """
    /** $method$ works with $x$. */
    @Template("NoTypes")
    @Test
    public void test$method$() { int v = $x$; }
"""
    )
    with pytest.raises(MissingTypesAnnotation) as info:
        load_catalog([unit])
    assert "$x$" in str(info.value)


def test_unused_placeholder():
    unit = template_unit(
        """
    /** $method$ works. */
    @Template("Unused")
    @Types($x$=EXPR)
    @Test
    public void test$method$() { }
"""
    )
    with pytest.raises(UnusedPlaceholder):
        load_catalog([unit])


def test_placeholder_used_only_in_description_counts_as_used():
    unit = template_unit(
        """
    /** $method$ returns $x$. */
    @Template("DocOnly")
    @Types($x$=EXPR)
    @Test
    public void test$method$() { }
"""
    )
    assert load_catalog([unit]).get("DocOnly") is not None


def test_duplicate_names_drop_every_copy_and_keep_the_rest():
    body = """
    /** $method$ works. */
    @Template("Same")
    @Test
    public void test$method$() { }
"""
    other = template_unit(body.replace("Same", "Other"), "c.java")
    catalog, errors = collect_catalog([template_unit(body, "a.java"), template_unit(body, "b.java"), other])
    assert [t.name for t in catalog] == ["Other"]
    assert len(errors) == 1 and isinstance(errors[0], DuplicateTemplateName)
    assert "a.java" in str(errors[0]) and "b.java" in str(errors[0])


def test_template_errors_carry_the_template_location():
    unit = template_unit(
        """
    @Template("NoDoc")
    @Test
    public void test$method$() { }
"""
    )
    catalog, errors = collect_catalog([unit])
    assert len(catalog) == 0
    assert isinstance(errors[0], MalformedDescription)
    assert errors[0].location == "T.java:NoDoc"


def test_template_name_must_be_a_string():
    unit = template_unit(
        """
    /** x */
    @Template(42)
    public void t() { }
"""
    )
    with pytest.raises(MalformedAnnotation):
        load_catalog([unit])


def test_parse_description_structured_and_freeform():
    fragment = parse_description(["@cond $a$ | is | NaN", "@conseq text: the call  returns NaN", ""])
    assert fragment.condition == StatementTemplate("$a$", "is", "NaN")
    assert fragment.consequence == "the call returns NaN"
    assert fragment.describe() == "If $a$ is NaN, then the call returns NaN."

    escaped = parse_description(["@cond $a$ | matches | x \\| y", "@conseq it | is | ok"])
    assert escaped.condition.object == "x | y"

    whole = parse_description(["Pops", "  the  stack."])
    assert whole == FragmentTemplate(whole_freeform="Pops the stack.")


@pytest.mark.parametrize(
    "lines",
    [
        [],
        ["@cond a | b"],
        ["@cond a | b | c"],
        ["@cond a | b | c", "@conseq d | e | f", "loose text"],
        ["@cond a | b | c", "@cond a | b | c", "@conseq d | e | f"],
        ["@cond a |  | c", "@conseq d | e | f"],
        ["@cond text:", "@conseq d | e | f"],
    ],
)
def test_parse_description_errors(lines):
    with pytest.raises(MalformedDescription):
        parse_description(lines)
