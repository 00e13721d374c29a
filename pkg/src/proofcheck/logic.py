"""Typed terms and formulas for a three-sorted language.

The language covers integer arithmetic, Boolean set algebra (intersection,
union, Cartesian product, subset, membership) and propositional logic, with
variables declared as one of three sorts: integer, set, or proposition.

The surface parser produces raw trees in which every identifier occurrence is
a :class:`Var`.  :func:`typecheck` resolves each occurrence against a
:class:`TypeContext` and returns a new tree in which set-typed identifiers
have been replaced by :class:`SetVar`; ill-typed trees raise a
:class:`TypeIssue` describing the first offending occurrence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator

Span = tuple[int, int]


class SemType(Enum):
    """Semantic sort of a declared variable."""

    INTEGER = "integer"
    SET = "set"
    PROPOSITION = "proposition"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Node:
    # Source location, excluded from equality so that structurally equal
    # trees from different positions compare equal.
    span: Span | None = field(default=None, compare=False, repr=False, kw_only=True)


# --------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class IntConst(Node):
    value: int


@dataclass(frozen=True)
class Var(Node):
    """An identifier occurrence; integer-typed after type checking."""

    name: str


@dataclass(frozen=True)
class SetVar(Node):
    """A set-typed identifier occurrence (introduced by the type checker)."""

    name: str


@dataclass(frozen=True)
class Add(Node):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Node):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Node):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Node):
    arg: Term


@dataclass(frozen=True)
class Pow(Node):
    """Power with a fixed non-negative integer exponent."""

    base: Term
    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")


@dataclass(frozen=True)
class Inter(Node):
    left: Term
    right: Term


@dataclass(frozen=True)
class Union(Node):
    left: Term
    right: Term


@dataclass(frozen=True)
class Prod(Node):
    left: Term
    right: Term


@dataclass(frozen=True)
class Pair(Node):
    fst: Term
    snd: Term


Term = (
    IntConst | Var | SetVar | Add | Sub | Mul | Neg | Pow | Inter | Union
    | Prod | Pair
)

ARITH_NODES = (IntConst, Add, Sub, Mul, Neg, Pow)
SET_NODES = (Inter, Union, Prod)


# --------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class PropVar(Node):
    name: str


@dataclass(frozen=True)
class Not(Node):
    arg: Formula


@dataclass(frozen=True)
class And(Node):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Node):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Node):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eq(Node):
    """Equality between integer terms."""

    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class In(Node):
    element: Term
    container: Term


@dataclass(frozen=True)
class Subset(Node):
    """Non-strict inclusion between set terms."""

    left: Term
    right: Term


@dataclass(frozen=True)
class Even(Node):
    arg: Term


@dataclass(frozen=True)
class Odd(Node):
    arg: Term


@dataclass(frozen=True)
class Divides(Node):
    divisor: Term
    dividend: Term


@dataclass(frozen=True)
class Falsum(Node):
    """The refutable constant, target of proofs by contradiction."""


Formula = (
    PropVar | Not | And | Or | Implies | Eq | In | Subset | Even | Odd
    | Divides | Falsum
)

FORMULA_NODES = (
    PropVar, Not, And, Or, Implies, Eq, In, Subset, Even, Odd, Divides, Falsum
)


def is_formula(node: object) -> bool:
    return isinstance(node, FORMULA_NODES)


# --------------------------------------------------------------------------
# Type context and type checking


class TypeIssue(Exception):
    """Base class for everything the type checker can complain about."""

    def __init__(self, message: str, span: Span | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span


class UndeclaredVariable(TypeIssue):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(f'the variable "{name}" has not been introduced', span)
        self.name = name


class TypeMismatch(TypeIssue):
    def __init__(
        self,
        name: str,
        declared: SemType,
        required: SemType,
        span: Span | None = None,
    ) -> None:
        super().__init__(
            f'"{name}" was introduced as a {declared} but is used here'
            f" as a {required}",
            span,
        )
        self.name = name
        self.declared = declared
        self.required = required


class ShadowingError(TypeIssue):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            f'"{name}" is already in use; pick a fresh name', span
        )
        self.name = name


class AssumedNonProposition(TypeIssue):
    """A statement position was filled with a bare arithmetic term."""

    def __init__(self, text: str, span: Span | None = None) -> None:
        super().__init__(
            f'"{text}" is not a statement that can be assumed or inferred;'
            " it is a number-valued expression",
            span,
        )


class SetElementMismatch(TypeIssue):
    pass


@dataclass(frozen=True)
class TypeContext:
    """An immutable, ordered map from variable names to sorts.

    Redeclaring a name raises :class:`ShadowingError`; proofs in this
    language never shadow.
    """

    bindings: tuple[tuple[str, SemType], ...] = ()

    def declare(self, name: str, sem_type: SemType, span: Span | None = None) -> TypeContext:
        if self.lookup(name) is not None:
            raise ShadowingError(name, span)
        return TypeContext(self.bindings + ((name, sem_type),))

    def lookup(self, name: str) -> SemType | None:
        for bound, sem_type in self.bindings:
            if bound == name:
                return sem_type
        return None

    def __contains__(self, name: str) -> bool:
        return self.lookup(name) is not None

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.bindings)


class _ElemKind(Enum):
    # What a set term can contain: plain integers, pairs, or (for bare set
    # variables) either.
    ATOM = "integers"
    PAIR = "pairs"
    UNKNOWN = "unknown"


def _merge_kind(a: _ElemKind, b: _ElemKind, span: Span | None) -> _ElemKind:
    if a is _ElemKind.UNKNOWN:
        return b
    if b is _ElemKind.UNKNOWN or a is b:
        return a
    raise SetElementMismatch(
        "this expression mixes sets of integers with sets of pairs", span
    )


def _set_kind(term: Term, ctx: TypeContext) -> _ElemKind:
    if isinstance(term, (Var, SetVar)):
        return _ElemKind.UNKNOWN
    if isinstance(term, Prod):
        for side in (term.left, term.right):
            kind = _set_kind(side, ctx)
            if kind is _ElemKind.PAIR:
                raise SetElementMismatch(
                    "products of product sets are not supported", term.span
                )
        return _ElemKind.PAIR
    if isinstance(term, (Inter, Union)):
        return _merge_kind(
            _set_kind(term.left, ctx), _set_kind(term.right, ctx), term.span
        )
    raise SetElementMismatch("expected a set-valued expression here", term.span)


def _check_var(term: Var | SetVar, ctx: TypeContext, required: SemType) -> Term:
    declared = ctx.lookup(term.name)
    if declared is None:
        raise UndeclaredVariable(term.name, term.span)
    if declared is not required:
        raise TypeMismatch(term.name, declared, required, term.span)
    if required is SemType.SET:
        return SetVar(term.name, span=term.span)
    return Var(term.name, span=term.span)


def _check_int_term(term: Term, ctx: TypeContext) -> Term:
    if isinstance(term, IntConst):
        return term
    if isinstance(term, (Var, SetVar)):
        return _check_var(term, ctx, SemType.INTEGER)
    if isinstance(term, (Add, Sub, Mul)):
        return type(term)(
            _check_int_term(term.left, ctx),
            _check_int_term(term.right, ctx),
            span=term.span,
        )
    if isinstance(term, Neg):
        return Neg(_check_int_term(term.arg, ctx), span=term.span)
    if isinstance(term, Pow):
        return Pow(_check_int_term(term.base, ctx), term.exponent, span=term.span)
    if isinstance(term, Pair):
        raise SetElementMismatch(
            "a pair cannot be used as an integer-valued expression", term.span
        )
    raise SetElementMismatch(
        "a set-valued expression cannot be used as an integer", term.span
    )


def _check_set_term(term: Term, ctx: TypeContext) -> Term:
    if isinstance(term, (Var, SetVar)):
        return _check_var(term, ctx, SemType.SET)
    if isinstance(term, (Inter, Union, Prod)):
        checked = type(term)(
            _check_set_term(term.left, ctx),
            _check_set_term(term.right, ctx),
            span=term.span,
        )
        _set_kind(checked, ctx)  # reject mixed or nested-product element kinds
        return checked
    raise SetElementMismatch("expected a set-valued expression here", term.span)


def typecheck(formula: Formula, ctx: TypeContext) -> Formula:
    """Validate ``formula`` against ``ctx`` and resolve identifier sorts.

    Returns a new tree in which every set-typed identifier is a
    :class:`SetVar`.  Raises the first :class:`TypeIssue` found in a
    left-to-right traversal.
    """
    if isinstance(formula, PropVar):
        declared = ctx.lookup(formula.name)
        if declared is None:
            raise UndeclaredVariable(formula.name, formula.span)
        if declared is not SemType.PROPOSITION:
            raise TypeMismatch(
                formula.name, declared, SemType.PROPOSITION, formula.span
            )
        return formula
    if isinstance(formula, Not):
        return Not(typecheck(formula.arg, ctx), span=formula.span)
    if isinstance(formula, (And, Or, Implies)):
        return type(formula)(
            typecheck(formula.left, ctx),
            typecheck(formula.right, ctx),
            span=formula.span,
        )
    if isinstance(formula, Eq):
        return Eq(
            _check_int_term(formula.lhs, ctx),
            _check_int_term(formula.rhs, ctx),
            span=formula.span,
        )
    if isinstance(formula, In):
        container = _check_set_term(formula.container, ctx)
        kind = _set_kind(container, ctx)
        if isinstance(formula.element, Pair):
            if kind is _ElemKind.ATOM:
                raise SetElementMismatch(
                    "a pair cannot be a member of a set of integers",
                    formula.span,
                )
            element: Term = Pair(
                _check_int_term(formula.element.fst, ctx),
                _check_int_term(formula.element.snd, ctx),
                span=formula.element.span,
            )
        else:
            if kind is _ElemKind.PAIR:
                raise SetElementMismatch(
                    "members of a product set are pairs, for example (x,y)",
                    formula.span,
                )
            element = _check_int_term(formula.element, ctx)
        return In(element, container, span=formula.span)
    if isinstance(formula, Subset):
        left = _check_set_term(formula.left, ctx)
        right = _check_set_term(formula.right, ctx)
        _merge_kind(_set_kind(left, ctx), _set_kind(right, ctx), formula.span)
        return Subset(left, right, span=formula.span)
    if isinstance(formula, (Even, Odd)):
        return type(formula)(_check_int_term(formula.arg, ctx), span=formula.span)
    if isinstance(formula, Divides):
        divisor = formula.divisor
        if isinstance(divisor, IntConst):
            if divisor.value == 0:
                raise SetElementMismatch(
                    "the divisor in a divisibility statement must be nonzero",
                    divisor.span,
                )
            checked_divisor: Term = divisor
        elif isinstance(divisor, (Var, SetVar)):
            checked_divisor = _check_var(divisor, ctx, SemType.INTEGER)
        else:
            raise SetElementMismatch(
                "the divisor must be a number or an integer variable",
                formula.span,
            )
        return Divides(
            checked_divisor,
            _check_int_term(formula.dividend, ctx),
            span=formula.span,
        )
    if isinstance(formula, Falsum):
        return formula
    raise AssumedNonProposition(render(formula), getattr(formula, "span", None))


# --------------------------------------------------------------------------
# Structure helpers


def collapse_not(formula: Formula) -> Formula:
    """Strip double negations."""
    while isinstance(formula, Not) and isinstance(formula.arg, Not):
        formula = formula.arg.arg
    return formula


def negate(formula: Formula) -> Formula:
    formula = collapse_not(formula)
    if isinstance(formula, Not):
        return formula.arg
    return Not(formula)


def conjuncts(formula: Formula) -> list[Formula]:
    """Flatten nested conjunctions, left to right."""
    if isinstance(formula, And):
        return conjuncts(formula.left) + conjuncts(formula.right)
    return [formula]


def map_terms(formula: Formula, fn: Callable[[Term], Term]) -> Formula:
    """Rebuild a formula with ``fn`` applied to each of its term arguments."""
    if isinstance(formula, Not):
        return Not(map_terms(formula.arg, fn), span=formula.span)
    if isinstance(formula, (And, Or, Implies)):
        return type(formula)(
            map_terms(formula.left, fn),
            map_terms(formula.right, fn),
            span=formula.span,
        )
    if isinstance(formula, Eq):
        return Eq(fn(formula.lhs), fn(formula.rhs), span=formula.span)
    if isinstance(formula, In):
        return In(fn(formula.element), fn(formula.container), span=formula.span)
    if isinstance(formula, Subset):
        return Subset(fn(formula.left), fn(formula.right), span=formula.span)
    if isinstance(formula, (Even, Odd)):
        return type(formula)(fn(formula.arg), span=formula.span)
    if isinstance(formula, Divides):
        return Divides(fn(formula.divisor), fn(formula.dividend), span=formula.span)
    return formula


def iter_nodes(node: Term | Formula) -> Iterator[Term | Formula]:
    yield node
    for name in getattr(node, "__dataclass_fields__", {}):
        if name == "span":
            continue
        child = getattr(node, name)
        if isinstance(child, Node):
            yield from iter_nodes(child)


def term_variables(term: Term) -> list[str]:
    """Variable names in first-occurrence order."""
    seen: list[str] = []
    for node in iter_nodes(term):
        if isinstance(node, (Var, SetVar)) and node.name not in seen:
            seen.append(node.name)
    return seen


def leaf_predicates(formula: Formula) -> set[str]:
    """The kinds of atomic statements a formula is built from."""
    kinds: set[str] = set()
    for node in iter_nodes(formula):
        if isinstance(node, PropVar):
            kinds.add("prop")
        elif isinstance(node, (In, Subset)):
            kinds.add("set")
        elif isinstance(node, Eq):
            kinds.add("eq")
        elif isinstance(node, (Even, Odd, Divides)):
            kinds.add("parity")
        elif isinstance(node, Falsum):
            kinds.add("falsum")
    return kinds


# --------------------------------------------------------------------------
# Rendering

# Binding strength of term operators; higher binds tighter.
_TERM_PREC = {
    Union: 1,
    Inter: 2,
    Prod: 3,
    Add: 4,
    Sub: 4,
    Mul: 5,
    Neg: 6,
    Pow: 7,
}

_TERM_OP = {Union: "∪", Inter: "∩", Prod: "×", Add: "+", Sub: "-", Mul: "*"}


def render_term(term: Term) -> str:
    return _render_term(term, 0)


def _render_term(term: Term, parent_prec: int) -> str:
    if isinstance(term, IntConst):
        return str(term.value)
    if isinstance(term, (Var, SetVar)):
        return term.name
    if isinstance(term, Pair):
        return f"({_render_term(term.fst, 0)},{_render_term(term.snd, 0)})"
    if isinstance(term, Neg):
        inner = _render_term(term.arg, _TERM_PREC[Neg])
        text = f"-{inner}"
        prec = _TERM_PREC[Neg]
    elif isinstance(term, Pow):
        base = _render_term(term.base, _TERM_PREC[Pow] + 1)
        text = f"{base}^{term.exponent}"
        prec = _TERM_PREC[Pow]
    else:
        prec = _TERM_PREC[type(term)]
        op = _TERM_OP[type(term)]
        # Left-associative: the right child needs parentheses at equal level.
        left = _render_term(term.left, prec)
        right = _render_term(term.right, prec + 1)
        text = f"{left}{op}{right}"
    if prec < parent_prec:
        return f"({text})"
    return text


def _is_symbolic(formula: Formula) -> bool:
    """True when the formula can be written with symbols alone."""
    return not any(
        isinstance(node, (Even, Odd, Divides))
        for node in iter_nodes(formula)
    )


_CONN_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}


def render(formula: Formula, top: bool = True) -> str:
    """Render a formula in the controlled surface language.

    The output re-parses to an equal tree: symbolic connectives are used
    where possible, and parity or divisibility statements fall back to their
    phrase forms ("x is even", "8 divides n").
    """
    if _is_symbolic(formula):
        return _render_symbolic(formula, 0)
    return _render_phrase(formula, top)


def _render_symbolic(formula: Formula, parent_prec: int) -> str:
    if isinstance(formula, PropVar):
        return formula.name
    if isinstance(formula, Falsum):
        return "⊥"
    if isinstance(formula, Eq):
        return f"{render_term(formula.lhs)}={render_term(formula.rhs)}"
    if isinstance(formula, In):
        return f"{render_term(formula.element)}∈{_render_term(formula.container, 4)}"
    if isinstance(formula, Subset):
        return f"{_render_term(formula.left, 4)}⊂{_render_term(formula.right, 4)}"
    if isinstance(formula, Not):
        inner = formula.arg
        if isinstance(inner, (PropVar, Falsum, Not)):
            return f"¬{_render_symbolic(inner, _CONN_PREC[Not])}"
        return f"¬({_render_symbolic(inner, 0)})"
    prec = _CONN_PREC[type(formula)]
    op = {Implies: "→", Or: "∨", And: "∧"}[type(formula)]
    if isinstance(formula, Implies):
        # Right-associative.
        left = _render_symbolic(formula.left, prec + 1)
        right = _render_symbolic(formula.right, prec)
    else:
        left = _render_symbolic(formula.left, prec)
        right = _render_symbolic(formula.right, prec + 1)
    text = f"{left}{op}{right}"
    if prec < parent_prec:
        return f"({text})"
    return text


def _render_phrase(formula: Formula, top: bool) -> str:
    if isinstance(formula, Even):
        return f"{render_term(formula.arg)} is even"
    if isinstance(formula, Odd):
        return f"{render_term(formula.arg)} is odd"
    if isinstance(formula, Divides):
        return f"{render_term(formula.divisor)} divides {render_term(formula.dividend)}"
    if isinstance(formula, Not):
        inner = formula.arg
        if isinstance(inner, Even):
            return f"{render_term(inner.arg)} is not even"
        if isinstance(inner, Odd):
            return f"{render_term(inner.arg)} is not odd"
        return f"not ({render(inner)})"
    if isinstance(formula, Implies):
        if top:
            return f"If {render(formula.left, top=False)}, then {render(formula.right, top=False)}"
        return (
            f"({render(formula.left, top=False)}"
            f" implies {render(formula.right, top=False)})"
        )
    if isinstance(formula, And):
        return f"{_phrase_operand(formula.left)} and {_phrase_operand(formula.right)}"
    if isinstance(formula, Or):
        return f"{_phrase_operand(formula.left)} or {_phrase_operand(formula.right)}"
    return _render_symbolic(formula, 0)


def _phrase_operand(formula: Formula) -> str:
    # Conjunction and disjunction operands: parenthesise anything that would
    # regroup when read back.
    if isinstance(formula, (And, Or, Implies)):
        return f"({render(formula, top=False)})"
    return render(formula, top=False)
