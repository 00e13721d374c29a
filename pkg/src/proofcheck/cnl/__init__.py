"""Controlled natural language: tokens, formulas, sentences, documents."""
from .tokens import (
    Token,
    TokenIssue,
    TokenKind,
    UnknownSymbol,
    scan,
    slice_bytes,
    tokenize,
)
from .parser import (
    MalformedFormula,
    NonprocessableSentence,
    ParseIssue,
    ParseResult,
    ProblemDocument,
    SentenceAST,
    SentenceKind,
    SentenceSlot,
    parse_document,
    parse_formula,
    parse_formula_text,
    parse_sentence_text,
    parse_term_text,
    render_sentence,
)

__all__ = [
    "Token",
    "TokenIssue",
    "TokenKind",
    "UnknownSymbol",
    "scan",
    "slice_bytes",
    "tokenize",
    "MalformedFormula",
    "NonprocessableSentence",
    "ParseIssue",
    "ParseResult",
    "ProblemDocument",
    "SentenceAST",
    "SentenceKind",
    "SentenceSlot",
    "parse_document",
    "parse_formula",
    "parse_formula_text",
    "parse_sentence_text",
    "parse_term_text",
    "render_sentence",
]
