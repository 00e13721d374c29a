"""Canonical polynomial arithmetic over the integers.

Every integer-valued term normalizes to a multivariate polynomial with
arbitrary-precision coefficients, represented as a canonically sorted
mapping from monomials to nonzero coefficients.  Two terms denote the same
function on the integers exactly when their normal forms are equal, which is
what the step checker relies on for equation chains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from . import logic
from .logic import Eq, Span, Term

# A monomial is a tuple of (variable, exponent) pairs, sorted by variable,
# with all exponents positive.  The empty tuple is the constant monomial.
Monomial = tuple[tuple[str, int], ...]

DEFAULT_MAX_EXPONENT = 16


class AlgebraError(Exception):
    def __init__(self, message: str, span: Span | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span


class ExponentTooLarge(AlgebraError):
    def __init__(self, exponent: int, bound: int, span: Span | None = None) -> None:
        super().__init__(
            f"exponent {exponent} exceeds the supported bound of {bound}", span
        )
        self.exponent = exponent
        self.bound = bound


class SubstitutionCycle(AlgebraError):
    def __init__(self) -> None:
        super().__init__("the established equalities substitute in a cycle")


class NotIntegerTerm(AlgebraError):
    """Raised when a set-valued node reaches the arithmetic normalizer."""


@dataclass(frozen=True)
class Polynomial:
    """A canonical integer polynomial.

    ``terms`` is sorted by monomial and contains no zero coefficients, so
    structural equality coincides with mathematical equality.
    """

    terms: tuple[tuple[Monomial, int], ...] = ()

    @staticmethod
    def from_dict(coeffs: Mapping[Monomial, int]) -> Polynomial:
        return Polynomial(
            tuple(sorted((m, c) for m, c in coeffs.items() if c != 0))
        )

    @staticmethod
    def constant(value: int) -> Polynomial:
        return Polynomial.from_dict({(): value})

    @staticmethod
    def variable(name: str) -> Polynomial:
        return Polynomial.from_dict({((name, 1),): 1})

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Polynomial) -> Polynomial:
        coeffs = self.as_dict()
        for mono, coeff in other.terms:
            coeffs[mono] = coeffs.get(mono, 0) + coeff
        return Polynomial.from_dict(coeffs)

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        coeffs: dict[Monomial, int] = {}
        for mono_a, coeff_a in self.terms:
            for mono_b, coeff_b in other.terms:
                mono = _mul_monomials(mono_a, mono_b)
                coeffs[mono] = coeffs.get(mono, 0) + coeff_a * coeff_b
        return Polynomial.from_dict(coeffs)

    def power(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, point: Mapping[str, int]) -> int:
        total = 0
        for mono, coeff in self.terms:
            value = coeff
            for var, exp in mono:
                value *= point[var] ** exp
            total += value
        return total

    def variables(self) -> list[str]:
        seen: set[str] = set()
        for mono, _ in self.terms:
            for var, _ in mono:
                seen.add(var)
        return sorted(seen)

    def content(self) -> int:
        """The gcd of all coefficients (0 for the zero polynomial)."""
        return math.gcd(*(abs(c) for _, c in self.terms)) if self.terms else 0

    def divided_by_int(self, d: int) -> Polynomial | None:
        if d == 0:
            raise ValueError("division by zero")
        if any(c % d for _, c in self.terms):
            return None
        return Polynomial(tuple((m, c // d) for m, c in self.terms))

    def divide_exact(self, divisor: Polynomial) -> Polynomial | None:
        """Exact multivariate division; None when it does not come out even."""
        if divisor.is_zero:
            raise ValueError("division by the zero polynomial")
        remainder = self.as_dict()
        quotient: dict[Monomial, int] = {}
        lead_mono, lead_coeff = max(
            divisor.terms, key=lambda item: _grade_key(item[0])
        )
        while remainder:
            mono = max(remainder, key=_grade_key)
            coeff = remainder[mono]
            factor_mono = _div_monomials(mono, lead_mono)
            if factor_mono is None or coeff % lead_coeff:
                return None
            factor_coeff = coeff // lead_coeff
            quotient[factor_mono] = quotient.get(factor_mono, 0) + factor_coeff
            for div_mono, div_coeff in divisor.terms:
                prod = _mul_monomials(factor_mono, div_mono)
                new = remainder.get(prod, 0) - factor_coeff * div_coeff
                if new:
                    remainder[prod] = new
                else:
                    remainder.pop(prod, None)
        return Polynomial.from_dict(quotient)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for mono, coeff in sorted(
            self.terms, key=lambda item: _grade_key(item[0]), reverse=True
        ):
            factors = "*".join(
                var if exp == 1 else f"{var}^{exp}" for var, exp in mono
            )
            if not factors:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = factors
            else:
                body = f"{abs(coeff)}*{factors}"
            sign = "-" if coeff < 0 else "+"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else f"-{text[2:]}"


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[str, int] = dict(a)
    for var, exp in b:
        exps[var] = exps.get(var, 0) + exp
    return tuple(sorted(exps.items()))


def _div_monomials(a: Monomial, b: Monomial) -> Monomial | None:
    exps = dict(a)
    for var, exp in b:
        have = exps.get(var, 0) - exp
        if have < 0:
            return None
        if have:
            exps[var] = have
        else:
            exps.pop(var, None)
    return tuple(sorted(exps.items()))


def _grade_key(mono: Monomial) -> tuple[int, Monomial]:
    # Graded-lexicographic order keeps exact division terminating.
    return (sum(exp for _, exp in mono), mono)


# --------------------------------------------------------------------------
# Term normalization


def normalize(term: Term, max_exponent: int = DEFAULT_MAX_EXPONENT) -> Polynomial:
    """Normal form of an integer-valued term.

    Raises :class:`ExponentTooLarge` for powers beyond ``max_exponent`` and
    :class:`NotIntegerTerm` if a set-valued node sneaks in.
    """
    if isinstance(term, logic.IntConst):
        return Polynomial.constant(term.value)
    if isinstance(term, logic.Var):
        return Polynomial.variable(term.name)
    if isinstance(term, logic.Add):
        return normalize(term.left, max_exponent) + normalize(term.right, max_exponent)
    if isinstance(term, logic.Sub):
        return normalize(term.left, max_exponent) - normalize(term.right, max_exponent)
    if isinstance(term, logic.Mul):
        return normalize(term.left, max_exponent) * normalize(term.right, max_exponent)
    if isinstance(term, logic.Neg):
        return -normalize(term.arg, max_exponent)
    if isinstance(term, logic.Pow):
        if term.exponent > max_exponent:
            raise ExponentTooLarge(term.exponent, max_exponent, term.span)
        return normalize(term.base, max_exponent).power(term.exponent)
    raise NotIntegerTerm(
        "only integer-valued terms have a polynomial normal form",
        getattr(term, "span", None),
    )


# --------------------------------------------------------------------------
# Oriented substitutions


def oriented_substitutions(equalities: Iterable[Eq]) -> dict[str, Term]:
    """Extract ``x -> t`` rules from equalities whose left side is a variable.

    When a variable is constrained twice, the first equality wins; later
    ones remain ordinary facts.
    """
    subst: dict[str, Term] = {}
    for eq in equalities:
        if isinstance(eq.lhs, logic.Var) and eq.lhs.name not in subst:
            subst[eq.lhs.name] = eq.rhs
    return subst


def substitute_once(term: Term, subst: Mapping[str, Term]) -> Term:
    if isinstance(term, logic.Var) and term.name in subst:
        return subst[term.name]
    if isinstance(term, (logic.IntConst, logic.Var, logic.SetVar)):
        return term
    if isinstance(term, logic.Neg):
        return logic.Neg(substitute_once(term.arg, subst), span=term.span)
    if isinstance(term, logic.Pow):
        return logic.Pow(
            substitute_once(term.base, subst), term.exponent, span=term.span
        )
    if isinstance(term, logic.Pair):
        return logic.Pair(
            substitute_once(term.fst, subst),
            substitute_once(term.snd, subst),
            span=term.span,
        )
    if isinstance(term, (logic.Add, logic.Sub, logic.Mul, logic.Inter,
                         logic.Union, logic.Prod)):
        return type(term)(
            substitute_once(term.left, subst),
            substitute_once(term.right, subst),
            span=term.span,
        )
    return term


def substitute_fixpoint(
    term: Term, subst: Mapping[str, Term], max_rounds: int
) -> Term:
    """Apply substitutions until nothing changes, or report a cycle."""
    current = term
    for _ in range(max_rounds + 1):
        step = substitute_once(current, subst)
        if step == current:
            return current
        current = step
    raise SubstitutionCycle()


def apply_equalities(term: Term, equalities: Sequence[Eq]) -> Term:
    subst = oriented_substitutions(equalities)
    return substitute_fixpoint(term, subst, len(subst) + 1)


def equal_under(
    equalities: Sequence[Eq],
    lhs: Term,
    rhs: Term,
    max_exponent: int = DEFAULT_MAX_EXPONENT,
) -> bool:
    """Whether two terms agree as polynomials under the given equalities."""
    left = normalize(apply_equalities(lhs, equalities), max_exponent)
    right = normalize(apply_equalities(rhs, equalities), max_exponent)
    return left == right


def divisibility_certificate(
    d: int,
    term: Term,
    equalities: Sequence[Eq] = (),
    max_exponent: int = DEFAULT_MAX_EXPONENT,
) -> Polynomial | None:
    """A quotient polynomial witnessing ``d | term``, if coefficients allow.

    Coefficient-wise divisibility is sufficient for the claim but not
    necessary, so ``None`` only means this particular certificate failed.
    """
    if d <= 0:
        raise ValueError("divisor must be positive")
    poly = normalize(apply_equalities(term, equalities), max_exponent)
    return poly.divided_by_int(d)


def consecutive_factorizations(
    poly: Polynomial,
) -> Iterator[tuple[str, int, Polynomial]]:
    """Factorizations ``poly = (v^2 + sign*v) * quotient``.

    ``v^2 + v = v(v+1)`` and ``v^2 - v = v(v-1)`` are products of two
    consecutive integers, hence always even; the step checker combines this
    with the quotient's content to certify divisibility claims.
    """
    for var in poly.variables():
        v = Polynomial.variable(var)
        v_squared = v * v
        for sign in (1, -1):
            divisor = v_squared + v if sign == 1 else v_squared - v
            quotient = poly.divide_exact(divisor)
            if quotient is not None:
                yield (var, sign, quotient)


def to_term(poly: Polynomial) -> Term:
    """A term whose normal form is exactly ``poly``."""
    result: Term | None = None
    for mono, coeff in poly.terms:
        part: Term | None = None
        for var, exp in mono:
            base: Term = logic.Var(var)
            factor = logic.Pow(base, exp) if exp > 1 else base
            part = factor if part is None else logic.Mul(part, factor)
        magnitude = abs(coeff)
        if part is None:
            piece: Term = logic.IntConst(magnitude)
        elif magnitude == 1:
            piece = part
        else:
            piece = logic.Mul(logic.IntConst(magnitude), part)
        if result is None:
            result = piece if coeff > 0 else logic.Neg(piece)
        elif coeff > 0:
            result = logic.Add(result, piece)
        else:
            result = logic.Sub(result, piece)
    return result if result is not None else logic.IntConst(0)
