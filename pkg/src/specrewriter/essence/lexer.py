"""Tokeniser shared by the specification and parameter-file parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset({
    "given", "letting", "be", "domain", "find", "such", "that", "language",
    "forAll", "sum", "in", "intersect", "of", "toInt", "defined",
    "int", "relation", "set", "function", "tuple",
})

# Full-Essence words outside the subset; rejected with a targeted message.
UNSUPPORTED = frozenset({
    "mset", "partition", "matrix", "sequence", "bool", "true", "false",
    "minimising", "maximising", "exists", "where", "branching", "heuristic",
    "union", "subset", "subsetEq", "supset", "supsetEq", "max", "min",
    "image", "preImage", "inverse", "range", "together", "apart", "party", "parts",
})

_TOKEN_SPEC = [
    ("COMMENT", r"\$[^\n]*"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r\f\v]+"),
    ("INT", r"\d+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"-->|->|\.\.|!=|/\\|[()\[\]{},.:*+\-=!]"),
    ("BAD", r"<=|>=|\\/|[<>%/|^&#@?'\"~`;]|."),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, KW, OP, EOF
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


def tokenize(text: str) -> tuple[list[Token], list[tuple[int, str]]]:
    """Return (tokens ending in EOF, comments as (line, text))."""
    tokens: list[Token] = []
    comments: list[tuple[int, str]] = []
    line, line_start = 1, 0
    for m in _MASTER.finditer(text):
        kind, value = m.lastgroup, m.group()
        col = m.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = m.end()
        elif kind == "SKIP":
            continue
        elif kind == "COMMENT":
            comments.append((line, value[1:].strip()))
        elif kind == "BAD":
            raise ParseError(f"unsupported character or operator {value!r}", line, col)
        elif kind == "IDENT":
            if value in UNSUPPORTED:
                raise ParseError(f"unsupported construct {value!r}: outside the implemented Essence subset", line, col)
            tokens.append(Token("KW" if value in KEYWORDS else "IDENT", value, line, col))
        else:
            tokens.append(Token(kind, value, line, col))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens, comments


class TokenStream:
    def __init__(self, text: str):
        self.tokens, self.comments = tokenize(text)
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def peek_at(self, offset: int) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, *texts: str) -> bool:
        tok = self.peek
        return tok.kind in ("OP", "KW") and tok.text in texts

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.next()
        self.fail({repr(text)})

    def expect_ident(self) -> str:
        tok = self.peek
        if tok.kind == "IDENT":
            self.next()
            return tok.text
        self.fail({"identifier"})

    def expect_int(self) -> int:
        tok = self.peek
        if tok.kind == "INT":
            self.next()
            return int(tok.text)
        self.fail({"integer"})

    def fail(self, expected: set[str], message: str | None = None):
        tok = self.peek
        raise ParseError(message or f"unexpected {tok.describe()}", tok.line, tok.col, frozenset(expected))
