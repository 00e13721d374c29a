"""Tokenizer for the controlled natural language.

Spans are byte offsets into the UTF-8 encoding of the source, so they stay
meaningful across the JSON interface.  Tokenization is lossless: the token
texts, joined with the skipped whitespace, reproduce the source exactly,
and every span of a reported issue covers the offending bytes.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto

from ..logic import Span


class TokenKind(Enum):
    WORD = auto()
    IDENTIFIER = auto()
    NUMBER = auto()
    SYMBOL = auto()
    PUNCTUATION = auto()


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    def lowered(self) -> str:
        return self.text.casefold()


@dataclass(frozen=True, slots=True)
class TokenIssue:
    span: Span
    text: str
    message: str


class UnknownSymbol(Exception):
    def __init__(self, issue: TokenIssue) -> None:
        super().__init__(issue.message)
        self.span = issue.span
        self.text = issue.text


# Single-character symbols of the language (beyond the two-character ones).
_SYMBOL_CHARS = set("^+-*=()∈¬∧∨∩∪×⊂⊆→·⋅−~&!ε⊥")
_TWO_CHAR_SYMBOLS = ("->", "/\\", "\\/", "><")
_PUNCTUATION = set(".,:;")


def _is_word_char(ch: str) -> bool:
    return ch.isalpha() and ch not in ("ε",)


def scan(
    source: str, *, allow_schema_vars: bool = False
) -> tuple[list[Token], list[TokenIssue]]:
    """Tokenize leniently: unknown characters become issues, not crashes."""
    # Map character index -> byte offset once, so spans are byte-accurate.
    byte_at = [0] * (len(source) + 1)
    offset = 0
    for i, ch in enumerate(source):
        byte_at[i] = offset
        offset += len(ch.encode("utf-8"))
    byte_at[len(source)] = offset

    tokens: list[Token] = []
    issues: list[TokenIssue] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if _is_word_char(ch) or (
            allow_schema_vars and ch == "?" and i + 1 < n and source[i + 1].isalpha()
        ):
            i += 1
            while i < n and (source[i].isalnum() and source[i] != "ε"):
                i += 1
            text = source[start:i]
            body = text[1:] if text.startswith("?") else text
            if len(body) == 1 or (body[0].isalpha() and body[1:].isdigit()):
                kind = TokenKind.IDENTIFIER
            else:
                kind = TokenKind.WORD
            tokens.append(Token(kind, text, (byte_at[start], byte_at[i])))
            continue
        if ch.isdigit():
            i += 1
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(
                Token(TokenKind.NUMBER, source[start:i], (byte_at[start], byte_at[i]))
            )
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR_SYMBOLS:
            i += 2
            tokens.append(Token(TokenKind.SYMBOL, two, (byte_at[start], byte_at[i])))
            continue
        if ch in _SYMBOL_CHARS:
            i += 1
            tokens.append(Token(TokenKind.SYMBOL, ch, (byte_at[start], byte_at[i])))
            continue
        if ch in _PUNCTUATION:
            i += 1
            tokens.append(
                Token(TokenKind.PUNCTUATION, ch, (byte_at[start], byte_at[i]))
            )
            continue
        # Group a run of unrecognized characters into one issue.
        i += 1
        while i < n and not (
            source[i].isspace()
            or source[i].isalnum()
            or source[i] in _SYMBOL_CHARS
            or source[i] in _PUNCTUATION
        ):
            i += 1
        text = source[start:i]
        issues.append(
            TokenIssue(
                (byte_at[start], byte_at[i]),
                text,
                f'the symbol "{text}" is not part of the proof language',
            )
        )
    return tokens, issues


def tokenize(source: str) -> list[Token]:
    """Strict tokenization; raises :class:`UnknownSymbol` on the first issue."""
    tokens, issues = scan(source)
    if issues:
        raise UnknownSymbol(issues[0])
    return tokens


def slice_bytes(source: str, span: Span) -> str:
    """The source text covered by a byte span."""
    return source.encode("utf-8")[span[0] : span[1]].decode("utf-8")
