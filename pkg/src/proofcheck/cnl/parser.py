"""Parser for the controlled natural language.

A submission is a sequence of period-terminated sentences: a header with
variable declarations, optional standing assumptions, and exactly one goal
("Prove: ..." / "We show: ..."), then a proof body opened by "Proof:" and
closed by "qed.".

Every sentence is parsed independently; a sentence that cannot be processed
is reported and skipped without affecting its neighbours.  Formulas mix
symbolic notation (with ASCII and legacy fallbacks for every connective)
and phrase forms such as "x is even", "8 divides n", or "If ..., then ...".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Sequence

from .. import logic
from ..logic import (
    And,
    Divides,
    Eq,
    Even,
    Falsum,
    Formula,
    Implies,
    In,
    IntConst,
    Inter,
    Mul,
    Neg,
    Not,
    Odd,
    Or,
    Pair,
    Pow,
    Prod,
    PropVar,
    SemType,
    Span,
    Sub,
    Subset,
    Term,
    Union,
    Var,
)
from .tokens import Token, TokenKind, scan

# --------------------------------------------------------------------------
# Sentence ASTs


class SentenceKind(Enum):
    DECLARE = auto()
    ASSUME = auto()
    EXISTS_CLAIM = auto()
    PICK = auto()
    GOAL_ANNOUNCE = auto()
    INFER = auto()
    SUBPROOF_CLOSE = auto()
    QED = auto()


@dataclass(frozen=True)
class SentenceAST:
    """One classified sentence.

    ``index`` and ``span`` locate the sentence but do not participate in
    equality, so a rendered and re-parsed sentence compares equal to the
    original.
    """

    kind: SentenceKind
    index: int = field(compare=False)
    span: Span = field(compare=False)
    cue: str | None = None
    variables: tuple[str, ...] = ()
    var_type: SemType | None = None
    formula: Formula | None = None
    method: str | None = None

    def __post_init__(self) -> None:
        k = self.kind
        if k is SentenceKind.DECLARE:
            assert self.variables and self.var_type is not None
        elif k in (SentenceKind.EXISTS_CLAIM, SentenceKind.PICK):
            assert len(self.variables) == 1 and self.var_type is not None
            assert self.formula is not None
        elif k in (SentenceKind.ASSUME, SentenceKind.INFER, SentenceKind.SUBPROOF_CLOSE):
            assert self.formula is not None
        elif k is SentenceKind.GOAL_ANNOUNCE:
            assert self.formula is not None or self.method is not None
        elif k is SentenceKind.QED:
            assert self.formula is None and not self.variables


@dataclass(frozen=True)
class ParseIssue:
    code: str
    message: str
    span: Span | None
    severity: str = "error"
    category: str = "i"


@dataclass(frozen=True)
class SentenceSlot:
    """A sentence position in the document, parsed or not."""

    index: int
    span: Span
    text: str
    ast: SentenceAST | None
    issue: ParseIssue | None


@dataclass(frozen=True)
class ProblemDocument:
    source: str
    header: tuple[SentenceSlot, ...]
    body: tuple[SentenceSlot, ...]
    goal: Formula | None
    goal_index: int | None

    @property
    def slots(self) -> tuple[SentenceSlot, ...]:
        return self.header + self.body

    @property
    def proof(self) -> list[SentenceAST]:
        return [slot.ast for slot in self.body if slot.ast is not None]


@dataclass
class ParseResult:
    document: ProblemDocument | None
    issues: list[ParseIssue]


class MalformedFormula(Exception):
    def __init__(self, message: str, span: Span | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span


class NonprocessableSentence(Exception):
    def __init__(self, message: str, span: Span | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span


# --------------------------------------------------------------------------
# Vocabulary

_OR_WORDS = {"or", "v"}
_OR_SYMBOLS = {"∨", "\\/"}
_AND_WORDS = {"and"}
_AND_SYMBOLS = {"∧", "/\\", "&"}
_NOT_WORDS = {"not"}
_NOT_SYMBOLS = {"¬", "~", "!"}
_IMPL_WORDS = {"implies"}
_IMPL_SYMBOLS = {"→", "->"}
_IN_WORDS = {"in"}
_IN_SYMBOLS = {"∈", "ε"}
_SUBSET_WORDS = {"sub"}
_SUBSET_SYMBOLS = {"⊂", "⊆"}
_INTER_WORDS = {"cap"}
_INTER_SYMBOLS = {"∩"}
_UNION_WORDS = {"cup"}
_UNION_SYMBOLS = {"∪"}
_PROD_SYMBOLS = {"×", "><"}
_MUL_SYMBOLS = {"*", "·", "⋅"}
_MINUS_SYMBOLS = {"-", "−"}

_MARKERS = {"then", "hence", "thus", "therefore", "so", "consequently"}
_TYPE_NOUNS = {
    "integer": SemType.INTEGER,
    "integers": SemType.INTEGER,
    "set": SemType.SET,
    "sets": SemType.SET,
    "proposition": SemType.PROPOSITION,
    "propositions": SemType.PROPOSITION,
}
_SINGULAR_NOUNS = {"integer", "set", "proposition"}


class _Fail(Exception):
    """Internal backtracking failure; never escapes the module."""

    def __init__(self, pos: int, message: str, in_formula: bool = False) -> None:
        super().__init__(message)
        self.pos = pos
        self.message = message
        self.in_formula = in_formula


class _BareTerm(_Fail):
    """A formula position held only a number-valued term."""

    def __init__(self, pos: int, term: Term, span: Span | None) -> None:
        super().__init__(pos, "expected a statement, found an expression", True)
        self.term = term
        self.term_span = span


class _Cursor:
    __slots__ = ("tokens", "pos")

    def __init__(self, tokens: Sequence[Token], pos: int = 0) -> None:
        self.tokens = tokens
        self.pos = pos

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise _Fail(self.pos, "unexpected end of sentence")
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def is_word(self, *words: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return (
            tok is not None
            and tok.kind in (TokenKind.WORD, TokenKind.IDENTIFIER)
            and tok.lowered() in words
        )

    def is_symbol(self, symbols: set[str], ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok is not None and tok.kind is TokenKind.SYMBOL and tok.text in symbols

    def take_word(self, *words: str) -> Token:
        if not self.is_word(*words):
            tok = self.peek()
            found = f'"{tok.text}"' if tok else "the end of the sentence"
            raise _Fail(self.pos, f"expected {' or '.join(words)}, found {found}")
        return self.next()

    def take_symbol(self, symbols: set[str], what: str) -> Token:
        if not self.is_symbol(symbols):
            tok = self.peek()
            found = f'"{tok.text}"' if tok else "the end of the sentence"
            raise _Fail(self.pos, f"expected {what}, found {found}", True)
        return self.next()

    def span_from(self, start_pos: int) -> Span:
        first = self.tokens[start_pos]
        last = self.tokens[self.pos - 1] if self.pos > start_pos else first
        return (first.span[0], last.span[1])


# --------------------------------------------------------------------------
# Formula grammar
#
#   formula     := "if" formula [","] "then" formula | implication
#   implication := disjunction [ ("→" | "implies") implication ]
#   disjunction := conjunction { ("∨" | "or") conjunction }
#   conjunction := negation { ("∧" | "and") negation }
#   negation    := ("¬" | "not") negation | atom
#   atom        := "⊥" | relational | "(" formula ")"
#   relational  := term ( "=" term { "=" term }
#                       | ("∈" | "in") term | ("⊂" | "sub") term
#                       | "is" ["not"] ("even" | "odd")
#                       | "divides" term )
#
# Terms use one grammar for arithmetic and set algebra; the type checker
# sorts out which operators were legitimate:
#
#   term  := union;  union := inter { "∪" inter };  inter := prod { "∩" prod }
#   prod  := sum { "×" sum };  sum := product { ("+" | "-") product }
#   product := factor { ("*" | juxtaposition) factor }
#   factor  := "-" factor | power;  power := primary [ "^" number ]
#   primary := number | identifier | "(" term [ "," term ] ")"


class _FormulaParser:
    def __init__(self, cursor: _Cursor, schema: bool = False) -> None:
        self.c = cursor
        self.schema = schema

    # -- formulas ----------------------------------------------------------

    def formula(self) -> Formula:
        start = self.c.pos
        if self.c.is_word("if"):
            self.c.next()
            antecedent = self.formula()
            if self.c.peek() and self.c.peek().text == ",":
                self.c.next()
            self.c.take_word("then")
            consequent = self.formula()
            return Implies(antecedent, consequent, span=self.c.span_from(start))
        return self.implication()

    def implication(self) -> Formula:
        start = self.c.pos
        left = self.disjunction()
        if self.c.is_symbol(_IMPL_SYMBOLS) or self.c.is_word(*_IMPL_WORDS):
            self.c.next()
            right = self.implication()
            return Implies(left, right, span=self.c.span_from(start))
        return left

    def disjunction(self) -> Formula:
        start = self.c.pos
        left = self.conjunction()
        while self.c.is_symbol(_OR_SYMBOLS) or self.c.is_word(*_OR_WORDS):
            self.c.next()
            right = self.conjunction()
            left = Or(left, right, span=self.c.span_from(start))
        return left

    def conjunction(self) -> Formula:
        start = self.c.pos
        left = self.negation()
        while self.c.is_symbol(_AND_SYMBOLS) or self.c.is_word(*_AND_WORDS):
            self.c.next()
            right = self.negation()
            left = And(left, right, span=self.c.span_from(start))
        return left

    def negation(self) -> Formula:
        start = self.c.pos
        if self.c.is_symbol(_NOT_SYMBOLS) or self.c.is_word(*_NOT_WORDS):
            self.c.next()
            inner = self.negation()
            return Not(inner, span=self.c.span_from(start))
        return self.atom()

    def atom(self) -> Formula:
        tok = self.c.peek()
        if tok is None:
            raise _Fail(self.c.pos, "expected a statement", True)
        if tok.kind is TokenKind.SYMBOL and tok.text == "⊥":
            self.c.next()
            return Falsum(span=tok.span)
        start = self.c.pos
        try:
            return self.relational()
        except _Fail as first:
            if tok.text == "(":
                # The parenthesis may group a whole statement rather than
                # a term, e.g. "(x is even and y is odd)".
                self.c.pos = start
                try:
                    self.c.next()
                    inner = self.formula()
                    closing = self.c.peek()
                    if closing is None or closing.text != ")":
                        raise _Fail(self.c.pos, "expected a closing parenthesis", True)
                    self.c.next()
                    return inner
                except _BareTerm:
                    self.c.pos = start
                    raise first
                except _Fail as second:
                    self.c.pos = start
                    raise first if isinstance(first, _BareTerm) else second
            raise

    def relational(self) -> Formula:
        start = self.c.pos
        left = self.term()
        left_span = self.c.span_from(start)
        if self.c.is_symbol({"="}):
            parts = [left]
            spans = [left_span]
            while self.c.is_symbol({"="}):
                self.c.next()
                part_start = self.c.pos
                parts.append(self.term())
                spans.append(self.c.span_from(part_start))
            links = [
                Eq(parts[i], parts[i + 1], span=(spans[i][0], spans[i + 1][1]))
                for i in range(len(parts) - 1)
            ]
            chain = links[0]
            for link in links[1:]:
                chain = And(chain, link, span=(spans[0][0], link.span[1]))
            return chain
        if self.c.is_symbol(_IN_SYMBOLS) or self.c.is_word(*_IN_WORDS):
            self.c.next()
            container = self.term()
            return In(left, container, span=self.c.span_from(start))
        if self.c.is_symbol(_SUBSET_SYMBOLS) or self.c.is_word(*_SUBSET_WORDS):
            self.c.next()
            right = self.term()
            return Subset(left, right, span=self.c.span_from(start))
        if self.c.is_word("is"):
            self.c.next()
            negated = False
            if self.c.is_word("not"):
                self.c.next()
                negated = True
            adjective = self.c.take_word("even", "odd")
            atom: Formula = (
                Even(left, span=self.c.span_from(start))
                if adjective.lowered() == "even"
                else Odd(left, span=self.c.span_from(start))
            )
            return Not(atom, span=self.c.span_from(start)) if negated else atom
        if self.c.is_word("divides"):
            self.c.next()
            dividend = self.term()
            return Divides(left, dividend, span=self.c.span_from(start))
        if isinstance(left, Var):
            return PropVar(left.name, span=left.span)
        raise _BareTerm(self.c.pos, left, left_span)

    # -- terms -------------------------------------------------------------

    def term(self) -> Term:
        return self.union_level()

    def _binary_loop(self, sub, symbols: set[str], words: set[str], ctor) -> Term:
        start = self.c.pos
        left = sub()
        while self.c.is_symbol(symbols) or (words and self.c.is_word(*words)):
            self.c.next()
            right = sub()
            left = ctor(left, right, span=self.c.span_from(start))
        return left

    def union_level(self) -> Term:
        return self._binary_loop(self.inter_level, _UNION_SYMBOLS, _UNION_WORDS, Union)

    def inter_level(self) -> Term:
        return self._binary_loop(self.prod_level, _INTER_SYMBOLS, _INTER_WORDS, Inter)

    def prod_level(self) -> Term:
        return self._binary_loop(self.sum_level, _PROD_SYMBOLS, set(), Prod)

    def sum_level(self) -> Term:
        start = self.c.pos
        left = self.product_level()
        while self.c.is_symbol({"+"}) or self.c.is_symbol(_MINUS_SYMBOLS):
            op = self.c.next()
            right = self.product_level()
            ctor = logic.Add if op.text == "+" else Sub
            left = ctor(left, right, span=self.c.span_from(start))
        return left

    def product_level(self) -> Term:
        start = self.c.pos
        left = self.factor()
        while True:
            if self.c.is_symbol(_MUL_SYMBOLS):
                self.c.next()
                right = self.factor()
            elif self._juxtaposition_ahead():
                right = self.factor()
            else:
                return left
            left = Mul(left, right, span=self.c.span_from(start))

    def _juxtaposition_ahead(self) -> bool:
        tok = self.c.peek()
        if tok is None:
            return False
        if tok.kind is TokenKind.SYMBOL and tok.text == "(":
            return True
        # "2k" and "(k+1)n" multiply implicitly, but "k n" does not: two
        # adjacent identifiers read as prose.  The lone identifier "v"
        # stays available as the legacy disjunction symbol.
        if tok.kind is not TokenKind.IDENTIFIER or tok.lowered() == "v":
            return False
        prev = self.c.tokens[self.c.pos - 1]
        return prev.kind is TokenKind.NUMBER or prev.text == ")"

    def factor(self) -> Term:
        start = self.c.pos
        if self.c.is_symbol(_MINUS_SYMBOLS):
            self.c.next()
            inner = self.factor()
            return Neg(inner, span=self.c.span_from(start))
        return self.power()

    def power(self) -> Term:
        start = self.c.pos
        base = self.primary()
        if self.c.is_symbol({"^"}):
            self.c.next()
            exponent = self._exponent()
            if self.c.is_symbol({"^"}):
                raise _Fail(self.c.pos, "chained exponents need parentheses", True)
            return Pow(base, exponent, span=self.c.span_from(start))
        return base

    def _exponent(self) -> int:
        tok = self.c.peek()
        if tok is not None and tok.kind is TokenKind.NUMBER:
            self.c.next()
            return int(tok.text)
        if tok is not None and tok.text == "(":
            self.c.next()
            inner = self.c.peek()
            if inner is not None and inner.kind is TokenKind.NUMBER:
                self.c.next()
                closing = self.c.peek()
                if closing is not None and closing.text == ")":
                    self.c.next()
                    return int(inner.text)
        raise _Fail(self.c.pos, "the exponent must be a number", True)

    def primary(self) -> Term:
        tok = self.c.peek()
        if tok is None:
            raise _Fail(self.c.pos, "expected an expression", True)
        if tok.kind is TokenKind.NUMBER:
            self.c.next()
            return IntConst(int(tok.text), span=tok.span)
        if tok.kind is TokenKind.IDENTIFIER:
            if not self.schema and tok.text.startswith("?"):
                raise _Fail(self.c.pos, "schema variables are not allowed here", True)
            self.c.next()
            return Var(tok.text, span=tok.span)
        if tok.text == "(":
            start = self.c.pos
            self.c.next()
            first = self.term()
            nxt = self.c.peek()
            if nxt is not None and nxt.text == ",":
                self.c.next()
                second = self.term()
                closing = self.c.peek()
                if closing is None or closing.text != ")":
                    raise _Fail(self.c.pos, "expected a closing parenthesis", True)
                self.c.next()
                return Pair(first, second, span=self.c.span_from(start))
            if nxt is None or nxt.text != ")":
                raise _Fail(self.c.pos, "expected a closing parenthesis", True)
            self.c.next()
            return first
        raise _Fail(self.c.pos, f'expected an expression, found "{tok.text}"', True)


def parse_formula(tokens: Sequence[Token], *, schema: bool = False) -> Formula:
    """Parse a complete formula from a token slice."""
    cursor = _Cursor(tokens)
    parser = _FormulaParser(cursor, schema=schema)
    try:
        formula = parser.formula()
    except _BareTerm as bare:
        raise logic.AssumedNonProposition(
            logic.render_term(bare.term), bare.term_span
        ) from None
    except _Fail as fail:
        span = tokens[min(fail.pos, len(tokens) - 1)].span if tokens else None
        raise MalformedFormula(fail.message, span) from None
    if not cursor.at_end():
        tok = cursor.peek()
        raise MalformedFormula(
            f'unexpected "{tok.text}" after a complete statement', tok.span
        )
    return formula


def parse_formula_text(text: str, *, schema: bool = False) -> Formula:
    tokens, issues = scan(text, allow_schema_vars=schema)
    if issues:
        raise MalformedFormula(issues[0].message, issues[0].span)
    return parse_formula(tokens, schema=schema)


def parse_term_text(text: str, *, schema: bool = False) -> Term:
    """Parse a bare expression (no relation), e.g. one side of an identity."""
    tokens, issues = scan(text, allow_schema_vars=schema)
    if issues:
        raise MalformedFormula(issues[0].message, issues[0].span)
    cursor = _Cursor(tokens)
    parser = _FormulaParser(cursor, schema=schema)
    try:
        term = parser.term()
    except _Fail as fail:
        span = tokens[min(fail.pos, len(tokens) - 1)].span if tokens else None
        raise MalformedFormula(fail.message, span) from None
    if not cursor.at_end():
        tok = cursor.peek()
        raise MalformedFormula(
            f'unexpected "{tok.text}" after a complete expression', tok.span
        )
    return term


# --------------------------------------------------------------------------
# Sentence classification


def _parse_ident(c: _Cursor) -> str:
    tok = c.peek()
    if tok is None or tok.kind is not TokenKind.IDENTIFIER:
        found = f'"{tok.text}"' if tok else "the end of the sentence"
        raise _Fail(c.pos, f"expected a variable name, found {found}")
    c.next()
    return tok.text


def _parse_ident_list(c: _Cursor) -> list[str]:
    names = [_parse_ident(c)]
    while True:
        tok = c.peek()
        if tok is not None and tok.text == ",":
            c.next()
            names.append(_parse_ident(c))
        elif c.is_word("and"):
            c.next()
            names.append(_parse_ident(c))
        else:
            return names


def _take_article(c: _Cursor, optional: bool = False) -> bool:
    if c.is_word("a", "an", "the"):
        c.next()
        return True
    if optional:
        return False
    raise _Fail(c.pos, 'expected "a" or "an"')


def _take_type_noun(c: _Cursor) -> tuple[SemType, bool]:
    tok = c.peek()
    if tok is not None and tok.lowered() in _TYPE_NOUNS:
        c.next()
        return _TYPE_NOUNS[tok.lowered()], tok.lowered() in _SINGULAR_NOUNS
    found = f'"{tok.text}"' if tok else "the end of the sentence"
    raise _Fail(c.pos, f"expected a sort such as integer or set, found {found}")


def _take_such_that(c: _Cursor) -> bool:
    if c.is_word("with"):
        c.next()
        return True
    if c.is_word("such") and c.is_word("that", ahead=1):
        c.next()
        c.next()
        return True
    return False


def _formula_region(c: _Cursor, schema: bool = False) -> Formula:
    parser = _FormulaParser(c, schema=schema)
    return parser.formula()


def _require_end(c: _Cursor) -> None:
    if not c.at_end():
        tok = c.peek()
        raise _Fail(c.pos, f'unexpected "{tok.text}" at the end of the sentence')


def _classify_let(c: _Cursor, make) -> SentenceAST:
    c.take_word("let")
    after_let = c.pos
    try:
        names = _parse_ident_list(c)
        c.take_word("be")
    except _Fail:
        # "Let (x,y) ∈ S." introduces an element of a set.
        c.pos = after_let
        formula = _formula_region(c)
        _require_end(c)
        if not isinstance(formula, In):
            raise _Fail(
                after_let,
                '"Let" introduces variables, assumes a parity, or assumes a membership',
            )
        return make(SentenceKind.ASSUME, cue="Let", formula=formula)
    if c.is_word("not", "even", "odd"):
        negated = False
        if c.is_word("not"):
            c.next()
            negated = True
        adjective = c.take_word("even", "odd")
        _require_end(c)
        if len(names) != 1:
            raise _Fail(c.pos, "assume a parity for one variable at a time")
        ctor = Even if adjective.lowered() == "even" else Odd
        formula: Formula = ctor(Var(names[0]))
        if negated:
            formula = Not(formula)
        return make(SentenceKind.ASSUME, cue="Let", formula=formula)
    had_article = _take_article(c, optional=True)
    sem_type, singular = _take_type_noun(c)
    if singular and not had_article:
        raise _Fail(c.pos, 'expected "a" or "an" before the sort')
    if _take_such_that(c):
        if len(names) != 1:
            raise _Fail(c.pos, "pick one variable at a time")
        formula = _formula_region(c)
        _require_end(c)
        return make(
            SentenceKind.PICK,
            cue="Let",
            variables=(names[0],),
            var_type=sem_type,
            formula=formula,
        )
    _require_end(c)
    return make(
        SentenceKind.DECLARE, variables=tuple(names), var_type=sem_type
    )


def _classify_exists(c: _Cursor, make, cue: str | None) -> SentenceAST:
    c.take_word("there")
    c.take_word("is", "exists")
    _take_article(c)
    sem_type, singular = _take_type_noun(c)
    if not singular:
        raise _Fail(c.pos, "claim existence of one variable at a time")
    name = _parse_ident(c)
    if not _take_such_that(c):
        raise _Fail(c.pos, 'expected "such that" or "with"')
    formula = _formula_region(c)
    _require_end(c)
    return make(
        SentenceKind.EXISTS_CLAIM,
        cue=cue,
        variables=(name,),
        var_type=sem_type,
        formula=formula,
    )


_FILLER_SEQUENCES = (
    ("we", "have"),
    ("we", "get"),
    ("we", "obtain"),
    ("it", "holds", "that"),
    ("it", "follows", "that"),
    ("it", "is", "the", "case", "that"),
    ("one", "has"),
)


def _skip_filler(c: _Cursor) -> None:
    for sequence in _FILLER_SEQUENCES:
        if all(c.is_word(word, ahead=i) for i, word in enumerate(sequence)):
            for _ in sequence:
                c.next()
            return


def _classify_marker(c: _Cursor, make) -> SentenceAST:
    cue_token = c.next()
    cue = cue_token.text.capitalize()
    if c.peek() is not None and c.peek().text == ",":
        c.next()
    if c.is_word("there"):
        return _classify_exists(c, make, cue)
    _skip_filler(c)
    formula = _formula_region(c)
    _require_end(c)
    return make(SentenceKind.INFER, cue=cue, formula=formula)


_METHOD_WORDS = {"contraposition": "contraposition", "contradiction": "contradiction"}


def _classify_we(c: _Cursor, make) -> SentenceAST:
    c.take_word("we")
    verb = c.take_word("show", "prove", "have", "get", "obtain", "argue", "proceed")
    v = verb.lowered()
    if v in ("have", "get", "obtain"):
        formula = _formula_region(c)
        _require_end(c)
        return make(SentenceKind.INFER, cue="We have", formula=formula)
    if c.is_word("the", "by"):
        c.next()
        method = c.take_word(*_METHOD_WORDS).lowered()
        _require_end(c)
        return make(SentenceKind.GOAL_ANNOUNCE, cue="We " + v, method=method)
    if v in ("argue", "proceed"):
        raise _Fail(c.pos, 'expected "by contradiction" or "by contraposition"')
    if c.peek() is not None and c.peek().text == ":":
        c.next()
    elif c.is_word("that"):
        c.next()
    formula = _formula_region(c)
    _require_end(c)
    return make(
        SentenceKind.GOAL_ANNOUNCE, cue="We " + v, formula=formula
    )


def _classify_it(c: _Cursor, make) -> SentenceAST:
    c.take_word("it")
    if c.is_word("remains"):
        c.next()
        c.take_word("to")
        c.take_word("show")
        if c.peek() is not None and c.peek().text == ":":
            c.next()
        elif c.is_word("that"):
            c.next()
        formula = _formula_region(c)
        _require_end(c)
        return make(
            SentenceKind.GOAL_ANNOUNCE, cue="It remains to show", formula=formula
        )
    verb = c.take_word("follows", "holds")
    c.take_word("that")
    formula = _formula_region(c)
    _require_end(c)
    cue = "It follows that" if verb.lowered() == "follows" else "It holds that"
    return make(SentenceKind.INFER, cue=cue, formula=formula)


def _classify_this(c: _Cursor, make) -> SentenceAST:
    c.take_word("this")
    if c.is_word("is"):
        c.next()
        _take_article(c)
        c.take_word("contradiction")
        _require_end(c)
        return make(
            SentenceKind.INFER, cue="This is a contradiction", formula=Falsum()
        )
    c.take_word("shows", "proves", "establishes")
    if c.peek() is not None and c.peek().text == ":":
        c.next()
    elif c.is_word("that"):
        c.next()
    formula = _formula_region(c)
    _require_end(c)
    return make(SentenceKind.SUBPROOF_CLOSE, cue="This shows", formula=formula)


def classify_sentence(tokens: Sequence[Token], index: int, span: Span) -> SentenceAST:
    """Classify one period-terminated sentence (without its period).

    Raises :class:`_Fail` wrapped into public errors by the document parser.
    """
    c = _Cursor(tokens)

    def make(kind: SentenceKind, **kws) -> SentenceAST:
        return SentenceAST(kind=kind, index=index, span=span, **kws)

    head = c.peek()
    if head is None:
        raise _Fail(0, "empty sentence")
    if head.kind in (TokenKind.WORD, TokenKind.IDENTIFIER):
        word = head.lowered()
        if word == "qed":
            c.next()
            _require_end(c)
            return make(SentenceKind.QED)
        if word == "let":
            return _classify_let(c, make)
        if word in ("assume", "suppose"):
            cue = c.next().text.capitalize()
            if c.is_word("that"):
                c.next()
            formula = _formula_region(c)
            _require_end(c)
            return make(SentenceKind.ASSUME, cue=cue, formula=formula)
        if word in ("pick", "choose"):
            cue = c.next().text.capitalize()
            _take_article(c)
            sem_type, singular = _take_type_noun(c)
            if not singular:
                raise _Fail(c.pos, "pick one variable at a time")
            name = _parse_ident(c)
            if not _take_such_that(c):
                raise _Fail(c.pos, 'expected "such that" or "with"')
            formula = _formula_region(c)
            _require_end(c)
            return make(
                SentenceKind.PICK,
                cue=cue,
                variables=(name,),
                var_type=sem_type,
                formula=formula,
            )
        if word in ("prove", "show"):
            cue = c.next().text.capitalize()
            if c.peek() is not None and c.peek().text == ":":
                c.next()
            elif c.is_word("that"):
                c.next()
            formula = _formula_region(c)
            _require_end(c)
            return make(SentenceKind.GOAL_ANNOUNCE, cue=cue, formula=formula)
        if word == "we":
            return _classify_we(c, make)
        if word == "it":
            return _classify_it(c, make)
        if word == "this":
            return _classify_this(c, make)
        if word == "there":
            return _classify_exists(c, make, None)
        if word == "contradiction":
            c.next()
            _require_end(c)
            return make(
                SentenceKind.INFER, cue="This is a contradiction", formula=Falsum()
            )
        if word in _MARKERS:
            return _classify_marker(c, make)
    # Last resort: a bare formula is read as an inference.
    formula = _formula_region(c)
    _require_end(c)
    return make(SentenceKind.INFER, cue=None, formula=formula)


def parse_sentence_text(text: str, *, index: int = 0) -> SentenceAST:
    """Parse one sentence given as plain text (final period optional)."""
    from .tokens import tokenize

    tokens = tokenize(text)
    if not tokens:
        raise NonprocessableSentence("empty sentence", None)
    content = tokens
    if tokens[-1].kind is TokenKind.PUNCTUATION and tokens[-1].text == ".":
        content = tokens[:-1]
    span = (tokens[0].span[0], tokens[-1].span[1])
    try:
        return classify_sentence(content, index, span)
    except _BareTerm as bare:
        raise logic.AssumedNonProposition(
            logic.render_term(bare.term), bare.term_span
        ) from None
    except _Fail as fail:
        if fail.in_formula:
            raise MalformedFormula(fail.message, span) from None
        raise NonprocessableSentence(fail.message, span) from None


# --------------------------------------------------------------------------
# Documents


def _split_chunks(tokens: Sequence[Token]) -> list[tuple[list[Token], bool]]:
    """Split on periods; the flag records whether the period was present."""
    chunks: list[tuple[list[Token], bool]] = []
    current: list[Token] = []
    for token in tokens:
        if token.kind is TokenKind.PUNCTUATION and token.text == ".":
            chunks.append((current + [token], True))
            current = []
        else:
            current.append(token)
    if current:
        chunks.append((current, False))
    return chunks


def _chunk_span(chunk: list[Token]) -> Span:
    return (chunk[0].span[0], chunk[-1].span[1])


def parse_document(source: str, *, require_proof: bool = True) -> ParseResult:
    """Parse a full submission into header, goal, and proof body.

    A sentence that cannot be processed never blocks the others: it yields
    an issue-bearing slot and parsing continues after its period.
    """
    tokens, token_issues = scan(source)
    issues: list[ParseIssue] = [
        ParseIssue("unknown-symbol", issue.message, issue.span)
        for issue in token_issues
    ]
    raw_chunks = _split_chunks(tokens)

    # Recover "... qed." written without a period before "qed".
    chunks: list[tuple[list[Token], bool]] = []
    for chunk, had_period in raw_chunks:
        content = chunk[:-1] if had_period else chunk
        if (
            len(content) > 1
            and content[-1].kind is TokenKind.WORD
            and content[-1].lowered() == "qed"
        ):
            chunks.append((content[:-1], False))
            chunks.append((chunk[-2:] if had_period else chunk[-1:], had_period))
        else:
            chunks.append((chunk, had_period))

    # Locate the proof marker ("Proof:" or "Proof.").
    header_chunks: list[tuple[list[Token], bool]] = []
    body_chunks: list[tuple[list[Token], bool]] = []
    marker_found = False
    for chunk, had_period in chunks:
        content = chunk[:-1] if had_period and chunk else chunk
        if (
            not marker_found
            and content
            and content[0].kind is TokenKind.WORD
            and content[0].lowered() == "proof"
        ):
            rest = content[1:]
            if rest and rest[0].text == ":":
                rest = rest[1:]
            marker_found = True
            if rest:
                body_chunks.append((rest + chunk[len(content):], had_period))
            continue
        (body_chunks if marker_found else header_chunks).append((chunk, had_period))

    def build_slot(
        chunk: list[Token], had_period: bool, index: int
    ) -> SentenceSlot:
        span = _chunk_span(chunk)
        text = _chunk_text(source, span)
        content = chunk[:-1] if had_period else chunk
        if not had_period:
            issues.append(
                ParseIssue(
                    "missing-period",
                    "this sentence is missing its final period",
                    span,
                    severity="warning",
                )
            )
        try:
            ast = classify_sentence(content, index, span)
            return SentenceSlot(index, span, text, ast, None)
        except logic.AssumedNonProposition as bare:
            issue = ParseIssue(
                "bare-term", bare.message, bare.span or span, category="ii"
            )
        except _BareTerm as bare:
            issue = ParseIssue(
                "bare-term",
                logic.AssumedNonProposition(
                    logic.render_term(bare.term), bare.term_span
                ).message,
                bare.term_span or span,
                category="ii",
            )
        except _Fail as fail:
            code = "malformed-formula" if fail.in_formula else "nonprocessable-sentence"
            issue = ParseIssue(
                code,
                f"could not process this sentence: {fail.message}",
                span,
            )
        issues.append(issue)
        return SentenceSlot(index, span, text, None, issue)

    header_slots: list[SentenceSlot] = []
    body_slots: list[SentenceSlot] = []
    index = 0
    for chunk, had_period in header_chunks:
        header_slots.append(build_slot(chunk, had_period, index))
        index += 1
    for chunk, had_period in body_chunks:
        body_slots.append(build_slot(chunk, had_period, index))
        index += 1

    # The goal is the first formula-bearing announcement in the header.
    goal: Formula | None = None
    goal_index: int | None = None
    for slot in header_slots:
        ast = slot.ast
        if ast is None:
            continue
        if ast.kind is SentenceKind.GOAL_ANNOUNCE and ast.formula is not None:
            if goal is None:
                goal = ast.formula
                goal_index = ast.index
            else:
                issues.append(
                    ParseIssue(
                        "duplicate-goal",
                        "the exercise already has a goal; only one is allowed",
                        slot.span,
                    )
                )
        elif ast.kind not in (SentenceKind.DECLARE, SentenceKind.ASSUME):
            issues.append(
                ParseIssue(
                    "header-sentence",
                    "only declarations, assumptions, and the goal may appear"
                    " before the proof",
                    slot.span,
                )
            )

    if goal is None:
        issues.append(
            ParseIssue(
                "missing-goal",
                'the exercise has no goal; state one with "Prove: ..."',
                None,
            )
        )
        return ParseResult(None, issues)

    if not marker_found:
        if require_proof:
            issues.append(
                ParseIssue(
                    "missing-proof-body",
                    'the submission has no proof; open one with "Proof:"',
                    None,
                )
            )
        document = ProblemDocument(
            source, tuple(header_slots), (), goal, goal_index
        )
        return ParseResult(document, issues)

    # qed must close the proof; anything after it is flagged.
    qed_positions = [
        i
        for i, slot in enumerate(body_slots)
        if slot.ast is not None and slot.ast.kind is SentenceKind.QED
    ]
    if not qed_positions:
        issues.append(
            ParseIssue(
                "missing-qed",
                'the proof must end with "qed."',
                body_slots[-1].span if body_slots else None,
            )
        )
    else:
        first_qed = qed_positions[0]
        if first_qed != len(body_slots) - 1:
            extra = body_slots[first_qed + 1 :]
            issues.append(
                ParseIssue(
                    "trailing-after-qed",
                    'nothing may follow "qed."',
                    (extra[0].span[0], extra[-1].span[1]),
                )
            )

    document = ProblemDocument(
        source, tuple(header_slots), tuple(body_slots), goal, goal_index
    )
    return ParseResult(document, issues)


def _chunk_text(source: str, span: Span) -> str:
    return source.encode("utf-8")[span[0] : span[1]].decode("utf-8")


# --------------------------------------------------------------------------
# Canonical rendering


_PLURAL = {
    SemType.INTEGER: "integers",
    SemType.SET: "sets",
    SemType.PROPOSITION: "propositions",
}
_SINGULAR = {
    SemType.INTEGER: "an integer",
    SemType.SET: "a set",
    SemType.PROPOSITION: "a proposition",
}


def render_sentence(ast: SentenceAST) -> str:
    """Canonical surface form; re-parsing yields an equal sentence."""
    k = ast.kind
    if k is SentenceKind.QED:
        return "qed."
    if k is SentenceKind.DECLARE:
        names = ", ".join(ast.variables)
        sort = (
            _SINGULAR[ast.var_type]
            if len(ast.variables) == 1
            else _PLURAL[ast.var_type]
        )
        return f"Let {names} be {sort}."
    if k is SentenceKind.ASSUME:
        if ast.cue == "Let":
            f = ast.formula
            if isinstance(f, In):
                return f"Let {logic.render(f)}."
            core = logic.collapse_not(f)
            name = logic.render_term(
                core.arg if isinstance(core, (Even, Odd)) else core
            )
            adjective = "even" if isinstance(core, Even) else "odd"
            negation = "not " if isinstance(f, Not) else ""
            return f"Let {name} be {negation}{adjective}."
        cue = ast.cue or "Assume"
        return f"{cue} that {logic.render(ast.formula)}."
    if k is SentenceKind.EXISTS_CLAIM:
        lead = f"{ast.cue} there is" if ast.cue else "There is"
        sort = _SINGULAR[ast.var_type]
        return f"{lead} {sort} {ast.variables[0]} such that {logic.render(ast.formula)}."
    if k is SentenceKind.PICK:
        sort = _SINGULAR[ast.var_type]
        if ast.cue == "Let":
            return (
                f"Let {ast.variables[0]} be {sort} with {logic.render(ast.formula)}."
            )
        cue = ast.cue or "Pick"
        return f"{cue} {sort} {ast.variables[0]} such that {logic.render(ast.formula)}."
    if k is SentenceKind.GOAL_ANNOUNCE:
        if ast.method is not None:
            return f"{ast.cue or 'We prove'} the {ast.method}."
        cue = ast.cue or "Prove"
        return f"{cue}: {logic.render(ast.formula)}."
    if k is SentenceKind.SUBPROOF_CLOSE:
        return f"{ast.cue or 'This shows'} that {logic.render(ast.formula)}."
    # Inference
    if ast.formula == Falsum():
        return "This is a contradiction."
    body = logic.render(ast.formula)
    if ast.cue is None:
        return f"{body}."
    if ast.cue in ("It follows that", "It holds that"):
        return f"{ast.cue} {body}."
    if ast.cue == "We have":
        return f"We have {body}."
    return f"{ast.cue} {body}."
