"""Tokenizer for the subject language and balanced token trees."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from core.errors import SourceSyntaxError

# `>` is always a single token so that `List<List<T>>` closes two type argument
# lists; expression parsing re-joins adjacent `>` tokens into shift operators.
OPERATORS = [
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "<<",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "?", ":", "&", "|", "^",
    "@", ".", ",", ";", "(", ")", "[", "]", "{", "}",
]

TOKEN_REGEX = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\r\n]*|/\*[\s\S]*?\*/)
  | (?P<string>\"\"\"[\s\S]*?\"\"\"|"(?:[^"\\\r\n]|\\.)*")
  | (?P<char>'(?:[^'\\\r\n]|\\(?:u+[0-9a-fA-F]{4}|[0-7]{1,3}|.))')
  | (?P<number>
        0[xX][0-9a-fA-F_]*[0-9a-fA-F][lL]?
      | 0[bB][01_]*[01][lL]?
      | (?:\d[\d_]*)?\.\d(?:[\d_]*\d)?(?:[eE][+-]?\d+)?[fFdD]?
      | \d(?:[\d_]*\d)?\.(?:\d(?:[\d_]*\d)?)?(?:[eE][+-]?\d+)?[fFdD]?
      | \d(?:[\d_]*\d)?[eE][+-]?\d+[fFdD]?
      | \d(?:[\d_]*\d)?[fFdDlL]?
    )
  | (?P<ident>(?:[^\W\d]|\$)(?:\w|\$)*)
  | (?P<op>"""
    + "|".join(re.escape(op) for op in OPERATORS)
    + r""")
    """,
    flags=re.VERBOSE,
)

JAVA_KEYWORDS = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "true", "false", "null", "_",
}
PRIMITIVE_TYPES = {"boolean", "byte", "char", "short", "int", "long", "float", "double"}

OPENERS = {"(": ")", "[": "]", "{": "}"}
CLOSERS = {v: k for k, v in OPENERS.items()}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int

    def is_op(self, *texts: str) -> bool:
        return self.kind == "op" and self.text in texts

    def is_word(self, *texts: str) -> bool:
        return self.kind == "ident" and self.text in texts


@dataclass(frozen=True)
class TokenTree:
    """A delimited group: opening token, nested children, closing token."""

    open: Token
    children: Tuple[Union[Token, "TokenTree"], ...] = field(default_factory=tuple)
    close: Optional[Token] = None

    @property
    def start(self) -> int:
        return self.open.start

    @property
    def end(self) -> int:
        return self.close.end if self.close else self.open.end

    def flatten(self) -> Iterator[Token]:
        yield self.open
        for child in self.children:
            if isinstance(child, TokenTree):
                yield from child.flatten()
            else:
                yield child
        if self.close is not None:
            yield self.close


def line_col(text: str, offset: int) -> Tuple[int, int]:
    """Return the 1-based (line, column) of `offset` in `text`."""
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def tokenize(text: str, keep_trivia: bool = False, location: Optional[str] = None) -> List[Token]:
    """Split `text` into tokens; whitespace and comments are dropped unless `keep_trivia`."""
    tokens: List[Token] = []
    pos = 0
    length = len(text)
    while pos < length:
        match = TOKEN_REGEX.match(text, pos)
        if not match or match.end() == pos:
            line, column = line_col(text, pos)
            raise SourceSyntaxError(f"unexpected character {text[pos]!r}", line, column, location=location)
        kind = match.lastgroup or "op"
        if keep_trivia or kind not in ("ws", "comment"):
            tokens.append(Token(kind, match.group(0), pos, match.end()))
        pos = match.end()
    return tokens


def match_delimiters(tokens: List[Token], text: str = "", location: Optional[str] = None) -> Dict[int, int]:
    """Map the index of every opening delimiter to the index of its closer."""
    stack: List[int] = []
    pairs: Dict[int, int] = {}
    for idx, tok in enumerate(tokens):
        if tok.kind != "op":
            continue
        if tok.text in OPENERS:
            stack.append(idx)
        elif tok.text in CLOSERS:
            if not stack or tokens[stack[-1]].text != CLOSERS[tok.text]:
                line, column = line_col(text, tok.start)
                raise SourceSyntaxError(f"unbalanced {tok.text!r}", line, column, location=location)
            pairs[stack.pop()] = idx
    if stack:
        tok = tokens[stack[-1]]
        line, column = line_col(text, tok.start)
        raise SourceSyntaxError(f"unclosed {tok.text!r}", line, column, location=location)
    return pairs


def build_token_tree(tokens: List[Token], open_index: int, pairs: Dict[int, int]) -> TokenTree:
    """Build the tree for the delimited group opening at `open_index`."""
    close_index = pairs[open_index]
    children: List[Union[Token, TokenTree]] = []
    idx = open_index + 1
    while idx < close_index:
        if idx in pairs:
            children.append(build_token_tree(tokens, idx, pairs))
            idx = pairs[idx] + 1
        else:
            children.append(tokens[idx])
            idx += 1
    return TokenTree(open=tokens[open_index], children=tuple(children), close=tokens[close_index])


def join_tokens(tokens: List[Token]) -> str:
    """Join tokens compactly, keeping a space only between adjacent words."""
    out: List[str] = []
    prev: Optional[Token] = None
    for tok in tokens:
        if prev is not None and prev.kind in ("ident", "number") and tok.kind in ("ident", "number"):
            out.append(" ")
        out.append(tok.text)
        prev = tok
    return "".join(out)
