"""Tokenizer and s-expression reader for SUO-KIF source text.

The reader keeps enough position information (file, line, column) for
downstream passes to report errors against the original source.  Atoms are
classified lexically: plain constants, ``?X`` variables, ``@ROW`` row
variables, signed decimal numerals, and double-quoted strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

ATOM_CONSTANT = "constant"
ATOM_VARIABLE = "variable"
ATOM_ROWVAR = "rowvariable"
ATOM_NUMERAL = "numeral"
ATOM_STRING = "string"

_NUMERAL_RE = re.compile(r"[+-]?[0-9]+(\.[0-9]+)?\Z")
_DELIMS = "()\";"


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class KifSyntaxError(Exception):
    """Base class for reader and lowering errors, carrying a source span."""

    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


class UnbalancedParens(KifSyntaxError):
    pass


class BadToken(KifSyntaxError):
    pass


@dataclass(frozen=True)
class Atom:
    lexeme: str
    kind: str
    span: Span


@dataclass(frozen=True)
class SList:
    items: tuple
    span: Span


def _classify(lexeme: str, span: Span) -> Atom:
    if lexeme.startswith("?"):
        name = lexeme[1:]
        if not name:
            raise BadToken("empty variable name", span)
        return Atom(name, ATOM_VARIABLE, span)
    if lexeme.startswith("@"):
        name = lexeme[1:]
        if not name:
            raise BadToken("empty row variable name", span)
        return Atom(name, ATOM_ROWVAR, span)
    first = lexeme[0]
    if first.isdigit() or (first in "+-" and len(lexeme) > 1 and lexeme[1].isdigit()):
        if not _NUMERAL_RE.match(lexeme):
            raise BadToken(f"malformed numeral {lexeme!r}", span)
        return Atom(lexeme, ATOM_NUMERAL, span)
    return Atom(lexeme, ATOM_CONSTANT, span)


def tokenize(source: str, file: str = "<kif>"):
    """Yield ``("(", span)``, ``(")", span)``, and classified Atom tokens."""
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == ";":
            while i < n and source[i] != "\n":
                i += 1
            continue
        span = Span(file, line, col)
        if ch == "(" or ch == ")":
            yield ch, span
            col += 1
            i += 1
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while j < n and source[j] != '"':
                if source[j] == "\\" and j + 1 < n:
                    buf.append(source[j + 1])
                    j += 2
                else:
                    buf.append(source[j])
                    j += 1
            if j >= n:
                raise BadToken("unterminated string", span)
            text = "".join(buf)
            consumed = j + 1 - i
            newlines = source[i : j + 1].count("\n")
            if newlines:
                line += newlines
                col = len(source[i : j + 1].rsplit("\n", 1)[1]) + 1
            else:
                col += consumed
            i = j + 1
            yield Atom(text, ATOM_STRING, span), span
            continue
        j = i
        while j < n and not source[j].isspace() and source[j] not in _DELIMS:
            j += 1
        lexeme = source[i:j]
        yield _classify(lexeme, span), span
        col += j - i
        i = j


def parse_forms(source: str, file: str = "<kif>") -> list:
    """Read all top-level forms from ``source``.

    Empty input yields an empty list.  Unbalanced parentheses raise
    UnbalancedParens with the offending span.
    """
    top: list = []
    stack: list = []
    for tok, span in tokenize(source, file):
        if tok == "(":
            stack.append(([], span))
        elif tok == ")":
            if not stack:
                raise UnbalancedParens("unmatched ')'", span)
            items, open_span = stack.pop()
            node = SList(tuple(items), open_span)
            if stack:
                stack[-1][0].append(node)
            else:
                top.append(node)
        else:
            if stack:
                stack[-1][0].append(tok)
            else:
                top.append(tok)
    if stack:
        raise UnbalancedParens("unclosed '('", stack[-1][1])
    return top
