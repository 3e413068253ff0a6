"""Parse subject-language files into a lightweight structural model.

Only the declaration skeleton is recognized: package, imports, type
declarations (including nested ones) and method/constructor headers with their
annotations and doc comments. Method bodies are kept as balanced token trees.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from core.errors import SourceSyntaxError

from .comments import CommentBlock, Span, is_doc_comment, parse_comment
from .lexer import Token, TokenTree, build_token_tree, join_tokens, line_col, match_delimiters, tokenize

logger = logging.getLogger(__name__)

TYPE_KEYWORDS = {"class", "interface", "enum", "record"}
MODIFIERS = {
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
}


@dataclass(frozen=True)
class Annotation:
    name: str
    arguments: Optional[str]
    span: Span


@dataclass(frozen=True)
class MethodDecl:
    name: str
    param_types: Tuple[str, ...]
    is_static: bool
    is_constructor: bool
    annotations: Tuple[Annotation, ...]
    header_comment: Optional[CommentBlock]
    body_tokens: Optional[TokenTree]
    span: Span
    name_span: Span
    declaring_type: str = ""

    def annotation(self, name: str) -> Optional[Annotation]:
        """Return the annotation called `name`, matched on its simple name."""
        for ann in self.annotations:
            if ann.name == name or ann.name.rsplit(".", 1)[-1] == name:
                return ann
        return None


@dataclass(frozen=True)
class TypeDecl:
    simple_name: str
    qualified_name: str
    kind: str
    super_types: Tuple[str, ...]
    methods: Tuple[MethodDecl, ...]
    span: Span
    nested: Tuple["TypeDecl", ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class SourceUnit:
    path: str
    package_name: str
    imports: Tuple[str, ...]
    types: Tuple[TypeDecl, ...]
    raw_text: str

    def render(self) -> str:
        return self.raw_text

    def all_types(self) -> Iterator[TypeDecl]:
        stack = list(reversed(self.types))
        while stack:
            decl = stack.pop()
            yield decl
            stack.extend(reversed(decl.nested))

    def all_methods(self) -> Iterator[Tuple[TypeDecl, MethodDecl]]:
        for decl in self.all_types():
            for method in decl.methods:
                yield decl, method

    def single_type_imports(self) -> Dict[str, str]:
        """Map simple names to qualified names for non-static, non-wildcard imports."""
        mapping: Dict[str, str] = {}
        for imp in self.imports:
            if imp.startswith("static ") or imp.endswith(".*"):
                continue
            mapping[imp.rsplit(".", 1)[-1]] = imp
        return mapping


class _DeclarationParser:
    def __init__(self, text: str, path: str):
        self.text = text
        self.path = path
        all_tokens = tokenize(text, keep_trivia=True, location=path)
        self.doc_comments: Dict[int, Token] = {
            tok.end: tok for tok in all_tokens if tok.kind == "comment" and is_doc_comment(tok.text)
        }
        self.tokens = [tok for tok in all_tokens if tok.kind not in ("ws", "comment")]
        self.pairs = match_delimiters(self.tokens, text, location=path)
        self.pos = 0

    # token helpers
    def peek(self, offset: int = 0) -> Optional[Token]:
        idx = self.pos + offset
        return self.tokens[idx] if idx < len(self.tokens) else None

    def error(self, message: str, tok: Optional[Token] = None) -> SourceSyntaxError:
        offset = tok.start if tok is not None else len(self.text)
        line, column = line_col(self.text, offset)
        return SourceSyntaxError(message, line, column, location=self.path)

    def expect_op(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or not tok.is_op(text):
            found = tok.text if tok else "end of file"
            raise self.error(f"expected {text!r}, found {found!r}", tok)
        self.pos += 1
        return tok

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            found = tok.text if tok else "end of file"
            raise self.error(f"expected identifier, found {found!r}", tok)
        self.pos += 1
        return tok

    def qualified_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.peek() is not None and self.peek().is_op(".") and self.peek(1) is not None and self.peek(1).kind == "ident":
            self.pos += 1
            parts.append(self.expect_ident().text)
        return ".".join(parts)

    def skip_group(self) -> int:
        """Skip a delimited group at the cursor; return the index of its closer."""
        close = self.pairs[self.pos]
        self.pos = close + 1
        return close

    def skip_angles(self) -> None:
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("unclosed '<'")
            if tok.is_op("<"):
                depth += 1
            elif tok.is_op(">"):
                depth -= 1
            elif tok.is_op("(", "[", "{"):
                self.skip_group()
                continue
            self.pos += 1
            if depth == 0:
                return

    def skip_to_semicolon(self) -> None:
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("expected ';'")
            if tok.is_op("(", "[", "{"):
                self.skip_group()
                continue
            self.pos += 1
            if tok.is_op(";"):
                return

    def header_comment(self, decl_start: int) -> Optional[CommentBlock]:
        idx = decl_start
        while idx > 0 and self.text[idx - 1] in " \t\r\n":
            idx -= 1
        tok = self.doc_comments.get(idx)
        if tok is None:
            return None
        return parse_comment(tok.text, tok.start)

    # grammar
    def parse_unit(self) -> Tuple[str, Tuple[str, ...], Tuple[TypeDecl, ...]]:
        package = ""
        save = self.pos
        self.parse_modifiers()
        tok = self.peek()
        if tok is not None and tok.is_word("package"):
            self.pos += 1
            package = self.qualified_name()
            self.expect_op(";")
        else:
            self.pos = save

        imports: List[str] = []
        while self.peek() is not None and self.peek().is_word("import"):
            start = self.pos + 1
            self.skip_to_semicolon()
            imports.append(join_tokens(self.tokens[start : self.pos - 1]))

        types: List[TypeDecl] = []
        while self.peek() is not None:
            if self.peek().is_op(";"):
                self.pos += 1
                continue
            types.append(self.parse_type_decl(package, ""))
        return package, tuple(imports), tuple(types)

    def parse_modifiers(self) -> Tuple[Tuple[Annotation, ...], bool]:
        annotations: List[Annotation] = []
        is_static = False
        while True:
            tok = self.peek()
            if tok is None:
                break
            nxt = self.peek(1)
            if tok.is_op("@") and nxt is not None and nxt.kind == "ident" and nxt.text != "interface":
                self.pos += 1
                name = self.qualified_name()
                arguments = None
                end = self.tokens[self.pos - 1].end
                if self.peek() is not None and self.peek().is_op("("):
                    open_tok = self.peek()
                    close = self.skip_group()
                    close_tok = self.tokens[close]
                    arguments = self.text[open_tok.end : close_tok.start].strip()
                    end = close_tok.end
                annotations.append(Annotation(name=name, arguments=arguments, span=Span(tok.start, end)))
                continue
            if tok.kind == "ident" and tok.text in MODIFIERS:
                is_static = is_static or tok.text == "static"
                self.pos += 1
                continue
            if tok.is_word("non") and nxt is not None and nxt.is_op("-"):
                self.pos += 3
                continue
            break
        return tuple(annotations), is_static

    def parse_type_list(self, stop_words: Tuple[str, ...]) -> List[str]:
        names: List[str] = []
        current: List[str] = []
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("unexpected end of file in type header")
            if tok.is_op("{") or tok.is_word(*stop_words):
                break
            if tok.is_op("<"):
                self.skip_angles()
                continue
            if tok.is_op("@"):
                self.parse_modifiers()
                continue
            if tok.is_op(","):
                names.append("".join(current))
                current = []
            else:
                current.append(tok.text)
            self.pos += 1
        if current:
            names.append("".join(current))
        return [name for name in names if name]

    def parse_type_decl(self, package: str, outer: str) -> TypeDecl:
        start_tok = self.peek()
        self.parse_modifiers()
        tok = self.peek()
        if tok is not None and tok.is_op("@") and self.peek(1) is not None and self.peek(1).is_word("interface"):
            kind = "annotation"
            self.pos += 2
        elif tok is not None and tok.kind == "ident" and tok.text in TYPE_KEYWORDS:
            kind = tok.text
            self.pos += 1
        else:
            raise self.error(f"expected type declaration, found {tok.text if tok else 'end of file'!r}", tok)

        simple_name = self.expect_ident().text
        if outer:
            qualified = f"{outer}.{simple_name}"
        elif package:
            qualified = f"{package}.{simple_name}"
        else:
            qualified = simple_name

        super_types: List[str] = []
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("unexpected end of file in type header")
            if tok.is_op("{"):
                break
            if tok.is_op("<"):
                self.skip_angles()
            elif tok.is_op("("):
                self.skip_group()
            elif tok.is_word("extends", "implements"):
                self.pos += 1
                super_types.extend(self.parse_type_list(("implements", "permits", "extends")))
            elif tok.is_word("permits"):
                self.pos += 1
                self.parse_type_list(("implements", "extends"))
            else:
                raise self.error(f"unexpected {tok.text!r} in type header", tok)

        open_index = self.pos
        close_index = self.pairs[open_index]
        self.pos += 1
        methods, nested = self.parse_type_body(package, qualified, simple_name, kind, close_index)
        self.pos = close_index + 1
        span = Span(start_tok.start, self.tokens[close_index].end)
        return TypeDecl(
            simple_name=simple_name,
            qualified_name=qualified,
            kind=kind,
            super_types=tuple(super_types),
            methods=tuple(methods),
            span=span,
            nested=tuple(nested),
        )

    def skip_enum_constants(self, close_index: int) -> None:
        while self.pos < close_index:
            tok = self.peek()
            if tok.is_op("(", "[", "{"):
                self.skip_group()
                continue
            self.pos += 1
            if tok.is_op(";"):
                return

    def parse_type_body(
        self, package: str, qualified: str, simple_name: str, kind: str, close_index: int
    ) -> Tuple[List[MethodDecl], List[TypeDecl]]:
        methods: List[MethodDecl] = []
        nested: List[TypeDecl] = []
        if kind == "enum":
            self.skip_enum_constants(close_index)

        while self.pos < close_index:
            tok = self.peek()
            if tok.is_op(";"):
                self.pos += 1
                continue
            if tok.is_op("{"):
                self.skip_group()
                continue
            if tok.is_word("static") and self.peek(1) is not None and self.peek(1).is_op("{"):
                self.pos += 1
                self.skip_group()
                continue

            member_index = self.pos
            annotations, is_static = self.parse_modifiers()
            tok = self.peek()
            if tok is None:
                raise self.error("unexpected end of file in type body")
            if (tok.kind == "ident" and tok.text in TYPE_KEYWORDS and self.peek(1) is not None and self.peek(1).kind == "ident") or (
                tok.is_op("@") and self.peek(1) is not None and self.peek(1).is_word("interface")
            ):
                self.pos = member_index
                nested.append(self.parse_type_decl(package, qualified))
                continue
            if tok.is_op("<"):
                self.skip_angles()
                tok = self.peek()

            nxt = self.peek(1)
            if tok.kind == "ident" and tok.text == simple_name and nxt is not None and nxt.is_op("("):
                name_tok = self.expect_ident()
                methods.append(self.parse_method(member_index, name_tok, annotations, is_static, True, qualified))
                continue
            if tok.kind == "ident" and tok.text == simple_name and nxt is not None and nxt.is_op("{"):
                # compact record constructor
                self.pos += 1
                self.skip_group()
                continue

            self.skip_type()
            name_tok = self.expect_ident()
            if self.peek() is not None and self.peek().is_op("("):
                methods.append(self.parse_method(member_index, name_tok, annotations, is_static, False, qualified))
            else:
                self.skip_to_semicolon()
        return methods, nested

    def skip_type(self) -> None:
        self.parse_modifiers()
        self.expect_ident()
        while True:
            tok = self.peek()
            if tok is None:
                return
            if tok.is_op("<"):
                self.skip_angles()
            elif tok.is_op(".") and self.peek(1) is not None and self.peek(1).kind == "ident":
                self.pos += 2
            elif tok.is_op("[") and self.peek(1) is not None and self.peek(1).is_op("]"):
                self.pos += 2
            elif tok.is_op("@"):
                self.parse_modifiers()
            else:
                return

    def parse_params(self, open_index: int, close_index: int) -> Tuple[str, ...]:
        params: List[List[Token]] = [[]]
        angle = 0
        idx = open_index + 1
        while idx < close_index:
            tok = self.tokens[idx]
            if idx in self.pairs:
                params[-1].extend(self.tokens[idx : self.pairs[idx] + 1])
                idx = self.pairs[idx] + 1
                continue
            if tok.is_op("<"):
                angle += 1
            elif tok.is_op(">"):
                angle -= 1
            if tok.is_op(",") and angle == 0:
                params.append([])
            else:
                params[-1].append(tok)
            idx += 1

        types: List[str] = []
        for param in params:
            if not param:
                continue
            param = self._strip_param_modifiers(param)
            dims = ""
            while len(param) >= 2 and param[-1].is_op("]") and param[-2].is_op("["):
                dims += "[]"
                param = param[:-2]
            if len(param) < 2 or param[-1].kind != "ident":
                raise self.error("malformed parameter", param[0] if param else None)
            if param[-1].text == "this":
                continue
            types.append(self.text[param[0].start : param[-2].end] + dims)
        return tuple(types)

    @staticmethod
    def _strip_param_modifiers(param: List[Token]) -> List[Token]:
        out: List[Token] = []
        idx = 0
        while idx < len(param):
            tok = param[idx]
            if tok.is_op("@") and idx + 1 < len(param) and param[idx + 1].kind == "ident":
                idx += 2
                while idx + 1 < len(param) and param[idx].is_op(".") and param[idx + 1].kind == "ident":
                    idx += 2
                if idx < len(param) and param[idx].is_op("("):
                    depth = 0
                    while idx < len(param):
                        if param[idx].is_op("("):
                            depth += 1
                        elif param[idx].is_op(")"):
                            depth -= 1
                        idx += 1
                        if depth == 0:
                            break
                continue
            if tok.is_word("final"):
                idx += 1
                continue
            out.append(tok)
            idx += 1
        return out

    def parse_method(
        self,
        member_index: int,
        name_tok: Token,
        annotations: Tuple[Annotation, ...],
        is_static: bool,
        is_constructor: bool,
        declaring_type: str,
    ) -> MethodDecl:
        open_index = self.pos
        self.expect_op("(")
        close_index = self.pairs[open_index]
        param_types = self.parse_params(open_index, close_index)
        self.pos = close_index + 1

        body: Optional[TokenTree] = None
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error(f"unexpected end of file in method {name_tok.text!r}")
            if tok.is_op("{"):
                body = build_token_tree(self.tokens, self.pos, self.pairs)
                self.skip_group()
                end = body.end
                break
            if tok.is_op(";"):
                self.pos += 1
                end = tok.end
                break
            if tok.is_word("default"):
                self.skip_to_semicolon()
                end = self.tokens[self.pos - 1].end
                break
            if tok.is_op("(", "["):
                self.skip_group()
                continue
            self.pos += 1

        start = self.tokens[member_index].start
        return MethodDecl(
            name=name_tok.text,
            param_types=param_types,
            is_static=is_static,
            is_constructor=is_constructor,
            annotations=annotations,
            header_comment=self.header_comment(start),
            body_tokens=body,
            span=Span(start, end),
            name_span=Span(name_tok.start, name_tok.end),
            declaring_type=declaring_type,
        )


def parse_unit(text: str, path: str = "<memory>") -> SourceUnit:
    """Parse `text` into a SourceUnit whose raw_text is the input itself."""
    parser = _DeclarationParser(text, path)
    package, imports, types = parser.parse_unit()
    return SourceUnit(path=path, package_name=package, imports=imports, types=types, raw_text=text)


def read_unit(path: Path) -> SourceUnit:
    """Read and parse a file, decoding bytes as UTF-8 without newline translation."""
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SourceSyntaxError(f"file is not valid UTF-8: {exc.reason}", location=str(path)) from exc
    return parse_unit(text, str(path))


def find_java_files(root: Path) -> List[Path]:
    return sorted(p for p in Path(root).rglob("*.java") if p.is_file())
