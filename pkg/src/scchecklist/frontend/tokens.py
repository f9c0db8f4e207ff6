"""Lexical layer: token kinds, source spans, and the tokenizer."""
from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Span:
    """A half-open byte range plus 1-based line/column of both ends."""

    start: int
    end: int
    line: int = 1
    col: int = 1
    end_line: int = 1
    end_col: int = 1

    def covers(self, other: Span) -> bool:
        return self.start <= other.start and other.end <= self.end

    def join(self, other: Span) -> Span:
        first, last = (self, other) if self.start <= other.start else (other, self)
        tail = self if self.end >= other.end else other
        return Span(first.start, tail.end, first.line, first.col, tail.end_line, tail.end_col)

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


FILE_START = Span(0, 0, 1, 1, 1, 1)


class TokenKind(enum.Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    INTEGER = "integer-literal"
    STRING = "string-literal"
    PUNCT = "punctuation"
    PRAGMA = "pragma-token"
    COMMENT = "comment"


KEYWORDS = frozenset(
    """
    pragma import contract interface library abstract is function modifier
    event constructor fallback receive returns return if else for while do break
    continue emit new delete using struct enum mapping public external internal
    private payable view pure constant immutable override virtual memory storage
    calldata unchecked assembly true false indexed anonymous try catch throw var
    """.split()
)

# Longest first so that maximal munch works with a simple prefix scan.
PUNCTUATORS = sorted(
    """
    >>>= >>> >>= <<= ** == != <= >= && || ++ -- += -= *= /= %= |= &= ^= << >> => ->
    ( ) { } [ ] ; , . ? : = + - * / % ! ~ & | ^ < >
    """.split(),
    key=len,
    reverse=True,
)

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_PART = _IDENT_START | frozenset("0123456789")
_HEX = frozenset("0123456789abcdefABCDEF_")
_DIGITS = "0123456789"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    def is_(self, kind: TokenKind, text: str | None = None) -> bool:
        return self.kind is kind and (text is None or self.text == text)

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.text!r}, {self.span})"


class LexError(Exception):
    def __init__(self, message: str, span: Span, path: str = "<input>"):
        super().__init__(f"{path}:{span.line}:{span.col}: {message}")
        self.message = message
        self.span = span
        self.path = path


class _Cursor:
    """Tracks char index, byte offset and line/column while scanning."""

    def __init__(self, source: str):
        self.src = source
        self.i = 0
        self.byte = 0
        self.line = 1
        self.col = 1
        self._ascii = source.isascii()

    def advance(self, n: int = 1) -> None:
        for ch in self.src[self.i : self.i + n]:
            self.byte += 1 if self._ascii or ord(ch) < 0x80 else len(ch.encode("utf-8"))
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.i += n

    def peek(self, k: int = 0) -> str:
        j = self.i + k
        return self.src[j] if j < len(self.src) else ""

    def mark(self) -> tuple[int, int, int, int]:
        return self.i, self.byte, self.line, self.col


def tokenize(source: str, path: str = "<input>") -> list[Token]:
    """Split ``source`` into tokens, keeping comments.

    Whitespace (and a leading byte-order mark) is skipped; every other
    character ends up in exactly one token, so the token texts interleaved
    with the skipped runs reproduce the input.
    """
    cur = _Cursor(source)
    tokens: list[Token] = []
    if cur.peek() == "\ufeff":
        cur.advance()
        cur.col = 1
    in_pragma = False

    def emit(kind: TokenKind, mark: tuple[int, int, int, int]) -> None:
        i0, b0, l0, c0 = mark
        tokens.append(Token(kind, source[i0 : cur.i], Span(b0, cur.byte, l0, c0, cur.line, cur.col)))

    def fail(message: str, mark: tuple[int, int, int, int]) -> None:
        _, b0, l0, c0 = mark
        end = max(cur.byte, b0 + 1)
        raise LexError(message, Span(b0, end, l0, c0, cur.line, cur.col + (end > cur.byte)), path)

    while cur.i < len(source):
        ch = cur.peek()
        if ch in " \t\r\n\f\v":
            cur.advance()
            continue
        mark = cur.mark()
        if ch == "/" and cur.peek(1) == "/":
            while cur.peek() not in ("\n", ""):
                cur.advance()
            emit(TokenKind.COMMENT, mark)
        elif ch == "/" and cur.peek(1) == "*":
            end = source.find("*/", cur.i + 2)
            if end < 0:
                cur.advance(len(source) - cur.i)
                fail("unterminated block comment", mark)
            cur.advance(end + 2 - cur.i)
            emit(TokenKind.COMMENT, mark)
        elif ch in _IDENT_START:
            while cur.peek() and cur.peek() in _IDENT_PART:
                cur.advance()
            word = source[mark[0] : cur.i]
            emit(TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENTIFIER, mark)
            if word == "pragma":
                in_pragma = True
        elif ch in _DIGITS:
            _scan_number(cur)
            emit(TokenKind.INTEGER, mark)
        elif ch in "\"'":
            _scan_string(cur, ch, lambda msg: fail(msg, mark))
            emit(TokenKind.STRING, mark)
        else:
            for p in PUNCTUATORS:
                if source.startswith(p, cur.i):
                    cur.advance(len(p))
                    emit(TokenKind.PUNCT, mark)
                    break
            else:
                if in_pragma and not ch.isspace():
                    cur.advance()
                    emit(TokenKind.PRAGMA, mark)
                else:
                    cur.advance()
                    fail(f"illegal character {ch!r}", mark)
            if tokens and tokens[-1].text == ";":
                in_pragma = False
    return tokens


def _scan_number(cur: _Cursor) -> None:
    if cur.peek() == "0" and cur.peek(1) in ("x", "X") and cur.peek(2) in _HEX:
        cur.advance(2)
        while cur.peek() and cur.peek() in _HEX:
            cur.advance()
        return
    while cur.peek() and cur.peek() in _DIGITS + "_":
        cur.advance()
    if cur.peek() in ("e", "E"):
        k = 2 if cur.peek(1) == "-" else 1
        if cur.peek(k) and cur.peek(k) in _DIGITS:
            cur.advance(k)
            while cur.peek() and cur.peek() in _DIGITS:
                cur.advance()


def _scan_string(cur: _Cursor, quote: str, fail) -> None:
    cur.advance()
    while True:
        ch = cur.peek()
        if ch == "" or ch == "\n":
            fail("unterminated string literal")
        if ch == "\\":
            cur.advance(2)
            continue
        cur.advance()
        if ch == quote:
            return


def significant(tokens: list[Token]) -> list[Token]:
    """Tokens the parser consumes (comments dropped)."""
    return [t for t in tokens if t.kind is not TokenKind.COMMENT]
