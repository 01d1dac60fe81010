"""Text format for series specs.

Grammar::

    spec     := [prefix] cycle [bound]
    prefix   := "prefix" "[" natlist "]"
    cycle    := "periodic" "[" natlist "]"
    bound    := "bound" "=" nat
    natlist  := nat ("," nat)*

``#`` starts a comment running to end of line. Files conventionally use the
``.chi`` extension.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .series import ChiSpec

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<nat>[0-9]+)|(?P<word>[A-Za-z_]+)|(?P<punct>[\[\],=])"
)


class SpecSyntaxError(ValueError):
    """Parse failure carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # "nat", "word", "punct", "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


def _describe(tok: _Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, expected: str) -> SpecSyntaxError:
        tok = self.tok
        return SpecSyntaxError(
            f"expected {expected}, found {_describe(tok)}", tok.line, tok.column
        )

    def at_word(self, word: str) -> bool:
        return self.tok.kind == "word" and self.tok.text == word

    def expect_punct(self, p: str) -> _Token:
        if self.tok.kind == "punct" and self.tok.text == p:
            tok = self.tok
            self.i += 1
            return tok
        raise self.fail(repr(p))

    def nat(self) -> tuple[int, _Token]:
        tok = self.tok
        if tok.kind != "nat":
            raise self.fail("a natural number")
        self.i += 1
        return int(tok.text), tok

    def natlist(self, what: str) -> list[tuple[int, _Token]]:
        open_tok = self.expect_punct("[")
        if self.tok.kind == "punct" and self.tok.text == "]":
            if what == "cycle":
                raise SpecSyntaxError("cycle must be nonempty", open_tok.line, open_tok.column)
            raise self.fail("a natural number")
        items = [self.nat()]
        while self.tok.kind == "punct" and self.tok.text == ",":
            self.i += 1
            items.append(self.nat())
        if not (self.tok.kind == "punct" and self.tok.text == "]"):
            raise self.fail("',' or ']'")
        self.i += 1
        return items

    def spec(self) -> ChiSpec:
        prefix: list[tuple[int, _Token]] = []
        if self.at_word("prefix"):
            self.i += 1
            prefix = self.natlist("prefix")
            if not self.at_word("periodic"):
                raise self.fail("'periodic'")
        if not self.at_word("periodic"):
            raise self.fail("'prefix' or 'periodic'")
        self.i += 1
        cycle = self.natlist("cycle")

        bound: Optional[int] = None
        if self.at_word("bound"):
            self.i += 1
            self.expect_punct("=")
            bound, bound_tok = self.nat()
            if bound < 1:
                raise SpecSyntaxError(
                    f"bound must be at least 1, got {bound}", bound_tok.line, bound_tok.column
                )
            for value, tok in prefix + cycle:
                if value > bound:
                    raise SpecSyntaxError(
                        f"value {value} exceeds bound {bound}", tok.line, tok.column
                    )
        if self.tok.kind != "eof":
            raise self.fail("'bound' or end of input" if bound is None else "end of input")
        return ChiSpec(
            prefix=tuple(v for v, _ in prefix),
            cycle=tuple(v for v, _ in cycle),
            declared_bound=bound,
        )


def parse_spec(text: str) -> ChiSpec:
    """Parse DSL text into a ChiSpec. Never evaluates the series."""
    return _Parser(text).spec()


def render_spec(spec: ChiSpec) -> str:
    parts = []
    if spec.prefix:
        parts.append("prefix[" + ",".join(map(str, spec.prefix)) + "]")
    parts.append("periodic[" + ",".join(map(str, spec.cycle)) + "]")
    if spec.declared_bound is not None:
        parts.append(f"bound={spec.declared_bound}")
    return " ".join(parts)
