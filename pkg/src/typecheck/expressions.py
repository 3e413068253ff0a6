"""Recursive-descent checker for the placeholder expression grammar.

The grammar is documented in `expression.ebnf` next to this module. The
checker only decides membership: identifiers are never resolved and no tree
is kept.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from core.errors import ExprSyntaxError, SourceSyntaxError
from parsing.lexer import JAVA_KEYWORDS, PRIMITIVE_TYPES, Token, match_delimiters, tokenize

BINARY_PRECEDENCE: Dict[str, int] = {
    "||": 1,
    "&&": 2,
    "|": 3,
    "^": 4,
    "&": 5,
    "==": 6,
    "!=": 6,
    "<": 7,
    ">": 7,
    "<=": 7,
    ">=": 7,
    "instanceof": 7,
    "<<": 8,
    ">>": 8,
    ">>>": 8,
    "+": 9,
    "-": 9,
    "*": 10,
    "/": 10,
    "%": 10,
}
PREFIX_OPERATORS = {"+", "-", "!", "~", "++", "--"}
LITERAL_WORDS = {"true", "false", "null"}
# keywords that may start or continue a primary expression
EXPRESSION_KEYWORDS = LITERAL_WORDS | {"this", "super", "new", "void"} | PRIMITIVE_TYPES


class _Backtrack(Exception):
    pass


class _ExpressionParser:
    def __init__(self, text: str):
        self.text = text
        try:
            self.tokens: List[Token] = tokenize(text)
            match_delimiters(self.tokens, text)
        except SourceSyntaxError as exc:
            raise ExprSyntaxError(exc.message.split(" (line")[0], offset=self._offset_of(exc)) from exc
        self.pos = 0

    def _offset_of(self, exc: SourceSyntaxError) -> int:
        lines = self.text.split("\n")
        return sum(len(line) + 1 for line in lines[: max(exc.line - 1, 0)]) + max(exc.column - 1, 0)

    # cursor helpers
    def peek(self, offset: int = 0) -> Optional[Token]:
        idx = self.pos + offset
        return self.tokens[idx] if idx < len(self.tokens) else None

    def at_op(self, *texts: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_op(*texts)

    def at_word(self, *texts: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_word(*texts)

    def fail(self, message: str) -> ExprSyntaxError:
        tok = self.peek()
        offset = tok.start if tok is not None else len(self.text)
        found = repr(tok.text) if tok is not None else "end of input"
        return ExprSyntaxError(f"{message}, found {found}", offset=offset)

    def expect_op(self, text: str) -> Token:
        if not self.at_op(text):
            raise self.fail(f"expected {text!r}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_name(self) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "ident" or tok.text in JAVA_KEYWORDS:
            raise self.fail("expected identifier")
        self.pos += 1
        return tok

    def adjacent(self, offset: int) -> bool:
        first, second = self.peek(offset), self.peek(offset + 1)
        return first is not None and second is not None and first.end == second.start

    # entry points
    def parse_single(self) -> None:
        if not self.tokens:
            raise ExprSyntaxError("empty expression", offset=0)
        self.parse_expression()
        if self.peek() is not None:
            raise self.fail("unexpected token after expression")

    def parse_list(self) -> List[Tuple[int, int]]:
        """Parse a comma-separated list; return the (start, end) offsets of each element."""
        spans: List[Tuple[int, int]] = []
        if not self.tokens:
            return spans
        while True:
            first = self.pos
            self.parse_expression()
            spans.append((self.tokens[first].start, self.tokens[self.pos - 1].end))
            if self.peek() is None:
                return spans
            self.expect_op(",")

    # grammar
    def parse_expression(self) -> None:
        if self.try_lambda():
            return
        self.parse_conditional()

    def try_lambda(self) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        if tok.kind == "ident" and tok.text not in JAVA_KEYWORDS and self.peek(1) is not None and self.peek(1).is_op("->"):
            self.pos += 2
            self.parse_lambda_body()
            return True
        if not tok.is_op("("):
            return False
        save = self.pos
        try:
            self.parse_lambda_params()
            self.expect_op("->")
        except (ExprSyntaxError, _Backtrack):
            self.pos = save
            return False
        self.parse_lambda_body()
        return True

    def parse_lambda_params(self) -> None:
        self.expect_op("(")
        if self.at_op(")"):
            self.pos += 1
            return
        while True:
            save = self.pos
            self.expect_name()
            if not self.at_op(",", ")"):
                # typed parameter: `Type name`
                self.pos = save
                self.parse_type()
                self.expect_name()
            if self.at_op(")"):
                self.pos += 1
                return
            self.expect_op(",")

    def parse_lambda_body(self) -> None:
        if self.at_op("{"):
            self.skip_block()
        else:
            self.parse_expression()

    def skip_block(self) -> None:
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                raise self.fail("unclosed block")
            self.pos += 1
            if tok.is_op("{"):
                depth += 1
            elif tok.is_op("}"):
                depth -= 1
                if depth == 0:
                    return

    def parse_conditional(self) -> None:
        self.parse_binary(1)
        if self.at_op("?"):
            self.pos += 1
            self.parse_expression()
            self.expect_op(":")
            self.parse_expression()

    def peek_binary(self) -> Optional[Tuple[str, int]]:
        """Return (operator, token count) for a binary operator at the cursor."""
        tok = self.peek()
        if tok is None:
            return None
        if tok.is_word("instanceof"):
            return "instanceof", 1
        if tok.kind != "op":
            return None
        if tok.text == ">":
            count = 1
            while count < 3 and self.adjacent(count - 1) and self.peek(count).is_op(">"):
                count += 1
            if self.adjacent(count - 1) and self.peek(count) is not None and self.peek(count).is_op("=", "=="):
                if count == 1 and self.peek(count).is_op("="):
                    return ">=", 2
                return None
            return ">" * count, count
        if tok.text in BINARY_PRECEDENCE:
            return tok.text, 1
        return None

    def parse_binary(self, min_precedence: int) -> None:
        self.parse_unary()
        while True:
            found = self.peek_binary()
            if found is None:
                return
            op, count = found
            precedence = BINARY_PRECEDENCE[op]
            if precedence < min_precedence:
                return
            self.pos += count
            if op == "instanceof":
                self.parse_type()
                tok = self.peek()
                if tok is not None and tok.kind == "ident" and tok.text not in JAVA_KEYWORDS:
                    self.pos += 1
                continue
            self.parse_binary(precedence + 1)

    def parse_unary(self) -> None:
        tok = self.peek()
        if tok is None:
            raise self.fail("expected expression")
        if tok.kind == "op" and tok.text in PREFIX_OPERATORS:
            self.pos += 1
            self.parse_unary()
            return
        if tok.is_op("(") and self.try_cast():
            return
        self.parse_postfix()

    def try_cast(self) -> bool:
        save = self.pos
        try:
            self.pos += 1
            primitive = self.at_word(*PRIMITIVE_TYPES)
            self.parse_type()
            self.expect_op(")")
        except (ExprSyntaxError, _Backtrack):
            self.pos = save
            return False
        nxt = self.peek()
        if nxt is None:
            self.pos = save
            return False
        if primitive:
            self.parse_unary()
            return True
        starts_operand = (
            nxt.kind in ("ident", "number", "string", "char")
            and (nxt.kind != "ident" or nxt.text not in JAVA_KEYWORDS or nxt.text in EXPRESSION_KEYWORDS)
        ) or nxt.is_op("(", "!", "~")
        if not starts_operand:
            self.pos = save
            return False
        self.parse_unary()
        return True

    def parse_type(self) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            raise _Backtrack()
        if tok.text in PRIMITIVE_TYPES:
            self.pos += 1
        else:
            self.expect_name()
            self.parse_type_arguments()
            while self.at_op(".") and self.peek(1) is not None and self.peek(1).kind == "ident" and self.peek(1).text not in JAVA_KEYWORDS:
                self.pos += 2
                self.parse_type_arguments()
        while self.at_op("[") and self.peek(1) is not None and self.peek(1).is_op("]"):
            self.pos += 2

    def parse_type_arguments(self, allow_diamond: bool = False) -> None:
        if not self.at_op("<"):
            return
        self.pos += 1
        if allow_diamond and self.at_op(">"):
            self.pos += 1
            return
        while True:
            if self.at_op("?"):
                self.pos += 1
                if self.at_word("extends", "super"):
                    self.pos += 1
                    self.parse_type()
            else:
                self.parse_type()
            if self.at_op(">"):
                self.pos += 1
                return
            if not self.at_op(","):
                raise _Backtrack()
            self.pos += 1

    def parse_arguments(self) -> None:
        self.expect_op("(")
        if self.at_op(")"):
            self.pos += 1
            return
        while True:
            self.parse_expression()
            if self.at_op(")"):
                self.pos += 1
                return
            self.expect_op(",")

    def parse_primary(self) -> None:
        tok = self.peek()
        if tok is None:
            raise self.fail("expected expression")
        if tok.kind in ("number", "string", "char"):
            self.pos += 1
            return
        if tok.is_op("("):
            self.pos += 1
            self.parse_expression()
            self.expect_op(")")
            return
        if tok.kind != "ident":
            raise self.fail("expected expression")
        if tok.text in LITERAL_WORDS:
            self.pos += 1
            return
        if tok.text == "new":
            self.pos += 1
            self.parse_creator()
            return
        if tok.text == "this":
            self.pos += 1
            if self.at_op("("):
                raise self.fail("explicit constructor call is not an expression")
            return
        if tok.text == "super":
            self.pos += 1
            if not self.at_op("."):
                raise self.fail("expected '.' after super")
            return
        if tok.text in PRIMITIVE_TYPES or tok.text == "void":
            # only `int.class` / `int[].class`
            self.pos += 1
            while self.at_op("[") and self.peek(1) is not None and self.peek(1).is_op("]"):
                self.pos += 2
            self.expect_op(".")
            if not self.at_word("class"):
                raise self.fail("expected 'class'")
            self.pos += 1
            return
        self.expect_name()
        if self.at_op("("):
            self.parse_arguments()

    def parse_postfix(self) -> None:
        self.parse_primary()
        while True:
            if self.at_op("."):
                self.pos += 1
                if self.at_word("class", "this"):
                    self.pos += 1
                    continue
                if self.at_word("new"):
                    self.pos += 1
                    self.parse_creator()
                    continue
                self.expect_name()
                if self.at_op("("):
                    self.parse_arguments()
                continue
            if self.at_op("["):
                if self.peek(1) is not None and self.peek(1).is_op("]"):
                    # `Type[].class`
                    while self.at_op("[") and self.peek(1) is not None and self.peek(1).is_op("]"):
                        self.pos += 2
                    self.expect_op(".")
                    if not self.at_word("class"):
                        raise self.fail("expected 'class'")
                    self.pos += 1
                    continue
                self.pos += 1
                self.parse_expression()
                self.expect_op("]")
                continue
            if self.at_op("++", "--"):
                self.pos += 1
                return
            return

    def parse_creator(self) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            raise self.fail("expected type after 'new'")
        primitive = tok.text in PRIMITIVE_TYPES
        if primitive:
            self.pos += 1
        else:
            self.expect_name()
            self.parse_creator_type_arguments()
            while self.at_op(".") and self.peek(1) is not None and self.peek(1).kind == "ident":
                self.pos += 1
                self.expect_name()
                self.parse_creator_type_arguments()

        if self.at_op("["):
            self.parse_array_dims()
            return
        if primitive:
            raise self.fail("expected '[' after primitive type in array creation")
        self.parse_arguments()
        if self.at_op("{"):
            self.skip_block()

    def parse_creator_type_arguments(self) -> None:
        save = self.pos
        try:
            self.parse_type_arguments(allow_diamond=True)
        except _Backtrack:
            self.pos = save
            raise self.fail("malformed type arguments")

    def parse_array_dims(self) -> None:
        sized = 0
        while self.at_op("[") and self.peek(1) is not None and not self.peek(1).is_op("]"):
            self.pos += 1
            self.parse_expression()
            self.expect_op("]")
            sized += 1
        empty = 0
        while self.at_op("[") and self.peek(1) is not None and self.peek(1).is_op("]"):
            self.pos += 2
            empty += 1
        if sized == 0 and empty == 0:
            raise self.fail("expected array dimension")
        if sized == 0:
            if not self.at_op("{"):
                raise self.fail("array creation without dimension needs an initializer")
            self.parse_array_initializer()

    def parse_array_initializer(self) -> None:
        self.expect_op("{")
        while not self.at_op("}"):
            if self.at_op("{"):
                self.parse_array_initializer()
            else:
                self.parse_expression()
            if self.at_op(","):
                self.pos += 1
                continue
            if not self.at_op("}"):
                raise self.fail("expected ',' or '}' in array initializer")
        self.pos += 1


def is_balanced(text: str) -> bool:
    try:
        match_delimiters(tokenize(text), text)
    except SourceSyntaxError:
        return False
    return True


def check_expression(text: str) -> None:
    """Raise ExprSyntaxError unless `text` is one expression of the grammar."""
    parser = _ExpressionParser(text)
    try:
        parser.parse_single()
    except _Backtrack:
        raise parser.fail("malformed type") from None


def split_expression_list(text: str) -> List[str]:
    """Return the elements of a comma-separated expression list (empty text is an empty list)."""
    parser = _ExpressionParser(text)
    try:
        spans = parser.parse_list()
    except _Backtrack:
        raise parser.fail("malformed type") from None
    return [text[start:end] for start, end in spans]


def split_balanced(text: str) -> List[str]:
    """Split on top-level commas, honoring (), [], {} nesting and literals."""
    if not text.strip():
        return []
    tokens = tokenize(text)
    pieces: List[str] = []
    depth = 0
    start = 0
    for tok in tokens:
        if tok.is_op("(", "[", "{"):
            depth += 1
        elif tok.is_op(")", "]", "}"):
            depth -= 1
        elif tok.is_op(",") and depth == 0:
            pieces.append(text[start : tok.start].strip())
            start = tok.end
    pieces.append(text[start:].strip())
    return pieces
