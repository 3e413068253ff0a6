# Run tests: pytest -q
from pathlib import Path
import sys

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from core.errors import SourceSyntaxError  # noqa: E402
from parsing.lexer import build_token_tree, join_tokens, line_col, match_delimiters, tokenize  # noqa: E402


def test_tokenize_drops_trivia_by_default():
    tokens = tokenize("int x = 1; // note\n/* block */ y")
    assert [t.text for t in tokens] == ["int", "x", "=", "1", ";", "y"]
    assert [t.kind for t in tokens[:4]] == ["ident", "ident", "op", "number"]


def test_tokenize_keeps_trivia_and_offsets_cover_text():
    text = "a  /** doc */\n\tb"
    tokens = tokenize(text, keep_trivia=True)
    assert "".join(t.text for t in tokens) == text
    for tok in tokens:
        assert text[tok.start : tok.end] == tok.text


def test_placeholder_names_are_single_identifier_tokens():
    tokens = tokenize("test$method$_$state$() $class$")
    assert tokens[0].text == "test$method$_$state$"
    assert tokens[-1].text == "$class$"


def test_closing_angles_stay_separate():
    tokens = tokenize("List<List<T>> a >>= b")
    assert [t.text for t in tokens].count(">") == 4


def test_string_and_char_literals():
    tokens = tokenize('"a, (b" \'c\' \'\\n\'')
    assert [t.kind for t in tokens] == ["string", "char", "char"]


def test_unexpected_character_reports_line_and_column():
    with pytest.raises(SourceSyntaxError) as info:
        tokenize("a\n  #", location="X.java")
    assert info.value.line == 2 and info.value.column == 3
    assert "X.java" in str(info.value)


def test_match_delimiters_pairs_nested_groups():
    tokens = tokenize("f(a[1], {b})")
    pairs = match_delimiters(tokens, "f(a[1], {b})")
    assert tokens[pairs[1]].text == ")"
    assert tokens[pairs[3]].text == "]"
    tree = build_token_tree(tokens, 1, pairs)
    assert tree.open.text == "(" and tree.close.text == ")"
    assert [t.text for t in tree.flatten()] == [t.text for t in tokens[1:]]


@pytest.mark.parametrize("text", ["(a", "a)", "(a]", "{[}]"])
def test_match_delimiters_rejects_unbalanced(text):
    with pytest.raises(SourceSyntaxError):
        match_delimiters(tokenize(text), text)


def test_join_tokens_spaces_only_between_words():
    assert join_tokens(tokenize("static org . junit . Assert . fail")) == "static org.junit.Assert.fail"
    assert join_tokens(tokenize("Map < String , int [ ] >")) == "Map<String,int[]>"


def test_line_col():
    assert line_col("ab\ncd", 4) == (2, 2)
    assert line_col("ab", 0) == (1, 1)
