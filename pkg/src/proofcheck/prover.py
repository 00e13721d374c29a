"""Step checking: does one proof step follow from the facts in scope?

The checker is deliberately modest.  It decides the propositional and
Boolean-set fragments exactly (by finite model search over the statements
and memberships actually mentioned), certifies a fixed repertoire of
arithmetic rules (equation chains, parity, divisibility), and answers
``UNKNOWN`` for everything else.  A step is never marked refuted without
either a countermodel or a parity argument that holds for every integer.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from . import algebra, logic
from .algebra import Polynomial
from .logic import (
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
    Not,
    Odd,
    Or,
    Pair,
    Prod,
    PropVar,
    SetVar,
    Subset,
    Term,
    Union,
    Var,
    collapse_not,
    conjuncts,
    iter_nodes,
    leaf_predicates,
)


class Status(Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Limits:
    """Resource bounds for a single check."""

    max_atoms: int = 20
    max_exponent: int = algebra.DEFAULT_MAX_EXPONENT
    depth: int = 3


DEFAULT_LIMITS = Limits()


class TooManyAtoms(Exception):
    def __init__(self, count: int, bound: int) -> None:
        super().__init__(
            f"{count} distinct atomic statements exceed the search bound of {bound}"
        )
        self.count = count
        self.bound = bound


@dataclass(frozen=True)
class Countermodel:
    """A finite scenario: truth values and membership facts."""

    propositions: tuple[tuple[str, bool], ...] = ()
    memberships: tuple[tuple[str, str, bool], ...] = ()

    def describe(self) -> str:
        parts = [
            f"{name} {'true' if value else 'false'}"
            for name, value in self.propositions
        ]
        parts.extend(
            f"{element} {'in' if value else 'not in'} {name}"
            for element, name, value in self.memberships
        )
        # a claim can be refutable without mentioning any atom at all
        return ", ".join(parts) or "any situation whatsoever"


@dataclass(frozen=True)
class Verdict:
    status: Status
    rule: str | None = None
    countermodel: Countermodel | None = None
    notes: tuple[str, ...] = ()

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN


def _verified(rule: str, *notes: str) -> Verdict:
    return Verdict(Status.VERIFIED, rule, None, tuple(notes))


def _unknown(*notes: str) -> Verdict:
    return Verdict(Status.UNKNOWN, None, None, tuple(notes))


# --------------------------------------------------------------------------
# Ground model search (propositional statements and memberships)

_Atom = tuple


class _NotGround(Exception):
    pass


def _element_key(term: Term) -> str:
    if isinstance(term, Pair):
        return f"({_element_key(term.fst)},{_element_key(term.snd)})"
    if isinstance(term, (Var, SetVar)):
        return term.name
    if isinstance(term, IntConst):
        return str(term.value)
    return logic.render_term(term)


def _eval_membership(
    element: Term, container: Term, world: Mapping[_Atom, bool]
) -> bool:
    if isinstance(container, (SetVar, Var)):
        return world[("m", _element_key(element), container.name)]
    if isinstance(container, Inter):
        return _eval_membership(element, container.left, world) and _eval_membership(
            element, container.right, world
        )
    if isinstance(container, Union):
        return _eval_membership(element, container.left, world) or _eval_membership(
            element, container.right, world
        )
    if isinstance(container, Prod):
        # Products hold pairs and nothing else.
        if not isinstance(element, Pair):
            return False
        return _eval_membership(element.fst, container.left, world) and _eval_membership(
            element.snd, container.right, world
        )
    raise _NotGround()


def _eval_ground(
    formula: Formula, world: Mapping[_Atom, bool], elements: Sequence[Term]
) -> bool:
    if isinstance(formula, PropVar):
        return world[("p", formula.name)]
    if isinstance(formula, In):
        return _eval_membership(formula.element, formula.container, world)
    if isinstance(formula, Subset):
        return all(
            (not _eval_membership(e, formula.left, world))
            or _eval_membership(e, formula.right, world)
            for e in elements
        )
    if isinstance(formula, Falsum):
        return False
    if isinstance(formula, Not):
        return not _eval_ground(formula.arg, world, elements)
    if isinstance(formula, And):
        return _eval_ground(formula.left, world, elements) and _eval_ground(
            formula.right, world, elements
        )
    if isinstance(formula, Or):
        return _eval_ground(formula.left, world, elements) or _eval_ground(
            formula.right, world, elements
        )
    if isinstance(formula, Implies):
        return (not _eval_ground(formula.left, world, elements)) or _eval_ground(
            formula.right, world, elements
        )
    raise _NotGround()


def is_ground(formula: Formula) -> bool:
    """Whether a formula lives in the decidable statement/set fragment."""
    return leaf_predicates(formula) <= {"prop", "set", "falsum"}


def _ground_atoms(formulas: Sequence[Formula]) -> tuple[list[Term], list[_Atom]]:
    elements: list[Term] = []
    seen_elements: set[str] = set()
    set_names: set[str] = set()
    prop_names: set[str] = set()

    def add_element(term: Term) -> None:
        key = _element_key(term)
        if key not in seen_elements:
            seen_elements.add(key)
            elements.append(term)
        # Pair components get probed on their own against product factors.
        if isinstance(term, Pair):
            add_element(term.fst)
            add_element(term.snd)

    for formula in formulas:
        for node in iter_nodes(formula):
            if isinstance(node, PropVar):
                prop_names.add(node.name)
            elif isinstance(node, In):
                add_element(node.element)
            if isinstance(node, (In, Subset)):
                containers = (
                    [node.container]
                    if isinstance(node, In)
                    else [node.left, node.right]
                )
                for container in containers:
                    for sub in iter_nodes(container):
                        if isinstance(sub, (SetVar, Var)):
                            set_names.add(sub.name)
    atoms: list[_Atom] = [
        ("m", _element_key(element), set_name)
        for element in elements
        for set_name in sorted(set_names)
    ]
    atoms.sort()
    atoms.extend(("p", name) for name in sorted(prop_names))
    return elements, atoms


def entails_ground(
    premises: Sequence[Formula],
    claim: Formula,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    """Exact entailment over statements and memberships.

    Set variables range over the mentioned elements only; an inclusion is
    read as membership propagation across those elements.  Premises outside
    the fragment are dropped, which keeps verification sound but suppresses
    the countermodel on failure.
    """
    usable = [p for p in premises if is_ground(p)]
    dropped = len(usable) != len(premises)
    if not is_ground(claim):
        return _unknown("the claim is outside the statement and set fragment")
    formulas = usable + [claim]
    elements, atoms = _ground_atoms(formulas)
    if len(atoms) > limits.max_atoms:
        raise TooManyAtoms(len(atoms), limits.max_atoms)
    rule = (
        "truth-table"
        if all(atom[0] == "p" for atom in atoms)
        else "membership-tables"
    )
    for values in itertools.product((False, True), repeat=len(atoms)):
        world = dict(zip(atoms, values))
        try:
            if not all(_eval_ground(p, world, elements) for p in usable):
                continue
            if _eval_ground(claim, world, elements):
                continue
        except _NotGround:
            return _unknown("the claim is outside the statement and set fragment")
        if dropped:
            return _unknown(
                "some facts in scope are outside the searchable fragment,"
                " so the failure could not be pinned to a countermodel"
            )
        countermodel = Countermodel(
            propositions=tuple(
                (atom[1], world[atom]) for atom in atoms if atom[0] == "p"
            ),
            memberships=tuple(
                (atom[1], atom[2], world[atom]) for atom in atoms if atom[0] == "m"
            ),
        )
        _validate_countermodel(usable, claim, world, elements)
        return Verdict(Status.REFUTED, rule, countermodel)
    return _verified(rule)


def _validate_countermodel(
    premises: Sequence[Formula],
    claim: Formula,
    world: Mapping[_Atom, bool],
    elements: Sequence[Term],
) -> None:
    # Re-check before reporting; a countermodel that does not actually
    # satisfy the premises and falsify the claim must never leave this
    # module.
    if not all(_eval_ground(p, world, elements) for p in premises):
        raise RuntimeError("countermodel failed validation against the premises")
    if _eval_ground(claim, world, elements):
        raise RuntimeError("countermodel failed validation against the claim")


def entails_prop(
    premises: Sequence[Formula],
    claim: Formula,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    """Truth-table entailment for purely propositional formulas."""
    return entails_ground(premises, claim, limits)


def entails_set(
    premises: Sequence[Formula],
    claim: Formula,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    """Entailment for membership and inclusion formulas."""
    return entails_ground(premises, claim, limits)


# --------------------------------------------------------------------------
# Canonical fact keys (matching modulo arithmetic normal form and parity)


def _term_key(term: Term, eqs: Sequence[Eq], limits: Limits):
    try:
        poly = algebra.normalize(
            algebra.apply_equalities(term, eqs), limits.max_exponent
        )
        return ("poly", poly.terms)
    except algebra.NotIntegerTerm:
        pass
    except algebra.AlgebraError:
        return ("opaque", term)
    if isinstance(term, Pair):
        return ("pair", _term_key(term.fst, eqs, limits), _term_key(term.snd, eqs, limits))
    if isinstance(term, (Var, SetVar)):
        return ("setvar", term.name)
    if isinstance(term, (Inter, Union, Prod)):
        return (
            type(term).__name__,
            _term_key(term.left, eqs, limits),
            _term_key(term.right, eqs, limits),
        )
    return ("opaque", term)


def semantic_key(formula: Formula, eqs: Sequence[Eq] = (), limits: Limits = DEFAULT_LIMITS):
    """A hashable key equating formulas the checker treats as the same fact.

    Integer terms are compared by normal form under the equalities in
    scope; ``¬(t is even)`` keys like ``t is odd`` and vice versa; double
    negations drop.
    """
    f = collapse_not(formula)
    negated = isinstance(f, Not)
    inner = f.arg if negated else f
    if isinstance(inner, Even):
        return ("parity", _term_key(inner.arg, eqs, limits), int(negated))
    if isinstance(inner, Odd):
        return ("parity", _term_key(inner.arg, eqs, limits), 1 - int(negated))
    if isinstance(inner, Eq):
        key = _eq_key(inner, eqs, limits)
        return ("not", key) if negated else key
    if isinstance(inner, Divides):
        key = (
            "divides",
            _term_key(inner.divisor, eqs, limits),
            _term_key(inner.dividend, eqs, limits),
        )
        return ("not", key) if negated else key
    if isinstance(inner, In):
        key = (
            "in",
            _term_key(inner.element, eqs, limits),
            _term_key(inner.container, eqs, limits),
        )
        return ("not", key) if negated else key
    if isinstance(inner, Subset):
        key = (
            "subset",
            _term_key(inner.left, eqs, limits),
            _term_key(inner.right, eqs, limits),
        )
        return ("not", key) if negated else key
    if isinstance(inner, PropVar):
        key = ("propvar", inner.name)
        return ("not", key) if negated else key
    if isinstance(inner, Falsum):
        key = ("falsum",)
        return ("not", key) if negated else key
    if isinstance(inner, (And, Or, Implies)):
        key = (
            type(inner).__name__,
            semantic_key(inner.left, eqs, limits),
            semantic_key(inner.right, eqs, limits),
        )
        return ("not", key) if negated else key
    return ("opaque", f)


def _eq_key(eq: Eq, eqs: Sequence[Eq], limits: Limits):
    try:
        diff = algebra.normalize(
            algebra.apply_equalities(logic.Sub(eq.lhs, eq.rhs), eqs),
            limits.max_exponent,
        )
    except algebra.AlgebraError:
        return (
            "eq",
            frozenset(
                {_term_key(eq.lhs, eqs, limits), _term_key(eq.rhs, eqs, limits)}
            ),
        )
    if diff.terms and diff.terms[0][1] < 0:
        diff = -diff
    return ("eq", diff.terms)


def equivalent(
    a: Formula,
    b: Formula,
    eqs: Sequence[Eq] = (),
    limits: Limits = DEFAULT_LIMITS,
) -> bool:
    """Whether two formulas state the same thing to the checker."""
    if semantic_key(a, eqs, limits) == semantic_key(b, eqs, limits):
        return True
    if is_ground(a) and is_ground(b):
        try:
            return (
                entails_ground([a], b, limits).verified
                and entails_ground([b], a, limits).verified
            )
        except TooManyAtoms:
            return False
    return False


# --------------------------------------------------------------------------
# Parity and divisibility rules


def _poly_parity(poly: Polynomial) -> int | None:
    """0 or 1 when the value's parity is the same for every input."""
    if poly.divided_by_int(2) is not None:
        return 0
    if (poly - Polynomial.constant(1)).divided_by_int(2) is not None:
        return 1
    return None


def _parity_facts(
    kb: Sequence[Formula], eqs: Sequence[Eq], limits: Limits
) -> list[tuple[Polynomial, int, Formula]]:
    facts = []
    for fact in kb:
        f = collapse_not(fact)
        negated = isinstance(f, Not)
        inner = f.arg if negated else f
        if isinstance(inner, Even):
            term, parity = inner.arg, int(negated)
        elif isinstance(inner, Odd):
            term, parity = inner.arg, 1 - int(negated)
        elif isinstance(inner, Divides) and inner.divisor == IntConst(2):
            term, parity = inner.dividend, int(negated)
        else:
            continue
        try:
            poly = algebra.normalize(
                algebra.apply_equalities(term, eqs), limits.max_exponent
            )
        except algebra.AlgebraError:
            continue
        facts.append((poly, parity, fact))
    return facts


def _derive_parity(
    poly: Polynomial, parity_facts: Sequence[tuple[Polynomial, int, Formula]]
) -> tuple[int, str] | None:
    direct = _poly_parity(poly)
    if direct is not None:
        return direct, "parity-certificate"
    for _ in algebra.consecutive_factorizations(poly):
        # v(v+1) and v(v-1) are even whatever v is.
        return 0, "consecutive-product"
    for fact_poly, fact_parity, _ in parity_facts:
        difference = _poly_parity(poly - fact_poly)
        if difference is not None:
            return (fact_parity + difference) % 2, "parity-transfer"
    return None


def _check_divides(
    kb: Sequence[Formula],
    eqs: Sequence[Eq],
    claim: Divides,
    limits: Limits,
) -> Verdict:
    dividend = claim.dividend
    if isinstance(claim.divisor, Var):
        # A variable divisor: only transfer from a matching fact.
        name = claim.divisor.name
        try:
            target = algebra.normalize(
                algebra.apply_equalities(dividend, eqs), limits.max_exponent
            )
        except algebra.AlgebraError as err:
            return _unknown(str(err))
        for fact in kb:
            if not (isinstance(fact, Divides) and fact.divisor == claim.divisor):
                continue
            try:
                known = algebra.normalize(
                    algebra.apply_equalities(fact.dividend, eqs), limits.max_exponent
                )
            except algebra.AlgebraError:
                continue
            quotient = (target - known).divide_exact(Polynomial.variable(name))
            if quotient is not None:
                return _verified("divisibility-transfer")
        return _unknown(
            f'nothing in scope supports "{name} divides {logic.render_term(dividend)}"'
        )
    if not isinstance(claim.divisor, IntConst) or claim.divisor.value <= 0:
        return _unknown("only positive literal divisors are checked")
    n = claim.divisor.value
    try:
        poly = algebra.normalize(
            algebra.apply_equalities(dividend, eqs), limits.max_exponent
        )
    except algebra.AlgebraError as err:
        return _unknown(str(err))
    if poly.divided_by_int(n) is not None:
        return _verified("divisibility-certificate")
    for _, _, quotient in algebra.consecutive_factorizations(poly):
        # poly = v(v±1)·q with v(v±1) always even, so n | 2q gives n | poly.
        doubled = quotient * Polynomial.constant(2)
        if doubled.divided_by_int(n) is not None:
            return _verified("divisibility-consecutive")
    for fact in kb:
        if not isinstance(fact, Divides):
            continue
        # m | s with n | m transfers to n | t whenever n | (t - s).
        if not isinstance(fact.divisor, IntConst) or fact.divisor.value % n != 0:
            continue
        try:
            known = algebra.normalize(
                algebra.apply_equalities(fact.dividend, eqs), limits.max_exponent
            )
        except algebra.AlgebraError:
            continue
        if (poly - known).divided_by_int(n) is not None:
            return _verified("divisibility-transfer")
    if n == 2:
        derived = _derive_parity(poly, _parity_facts(kb, eqs, limits))
        if derived is not None and derived[0] == 0:
            return _verified(derived[1])
    return _unknown(
        f"no divisibility rule certifies {n} | {poly}"
    )


def _check_falsum(
    kb: Sequence[Formula], eqs: Sequence[Eq], limits: Limits
) -> Verdict:
    keys = {}
    for fact in kb:
        keys[semantic_key(fact, eqs, limits)] = fact
    for key in keys:
        if ("not", key) in keys:
            return _verified("contradiction-pair")
        if key[0] == "parity" and ("parity", key[1], 1 - key[2]) in keys:
            return _verified("parity-clash")
    parity_facts = _parity_facts(kb, eqs, limits)
    for poly, parity, _ in parity_facts:
        fixed = _poly_parity(poly)
        if fixed is not None and fixed != parity:
            return _verified("parity-clash")
    for (poly_a, parity_a, _), (poly_b, parity_b, _) in itertools.combinations(
        parity_facts, 2
    ):
        difference = _poly_parity(poly_a - poly_b)
        if difference is not None and (parity_b + difference) % 2 != parity_a:
            return _verified("parity-clash")
    try:
        verdict = entails_ground(kb, Falsum(), limits)
    except TooManyAtoms as err:
        return _unknown(str(err))
    if verdict.verified:
        return _verified("unsat-context")
    if verdict.refuted:
        return Verdict(
            Status.REFUTED,
            verdict.rule,
            verdict.countermodel,
            ("the facts in scope are consistent; no contradiction has been reached",),
        )
    return _unknown("no contradiction is visible in the facts in scope")


# --------------------------------------------------------------------------
# The step checker


def check_step(
    kb: Iterable[Formula],
    claim: Formula,
    limits: Limits = DEFAULT_LIMITS,
    depth: int | None = None,
) -> Verdict:
    """Decide one inference: does ``claim`` follow from the ``kb`` facts?

    The answer is fail-closed: ``UNKNOWN`` whenever no rule applies, and
    ``REFUTED`` only with a countermodel or an always-false parity
    argument.
    """
    if depth is None:
        depth = limits.depth
    facts = [c for fact in kb for c in conjuncts(fact)]
    eqs = [f for f in facts if isinstance(f, Eq)]

    claim_key = semantic_key(claim, eqs, limits)
    for fact in facts:
        if semantic_key(fact, eqs, limits) == claim_key:
            return _verified("known-fact")

    if isinstance(claim, And):
        verdicts = [check_step(facts, part, limits, depth) for part in conjuncts(claim)]
        if all(v.verified for v in verdicts):
            rules = {v.rule for v in verdicts}
            rule = rules.pop() if len(rules) == 1 else "conjunction"
            return _verified(rule)
        for verdict in verdicts:
            if verdict.refuted:
                return verdict
        notes = tuple(note for v in verdicts for note in v.notes)
        return Verdict(Status.UNKNOWN, None, None, notes)

    f = collapse_not(claim)
    negated = isinstance(f, Not)
    inner = f.arg if negated else f

    if isinstance(inner, (Even, Odd)):
        wanted = (0 if isinstance(inner, Even) else 1) ^ int(negated)
        try:
            poly = algebra.normalize(
                algebra.apply_equalities(inner.arg, eqs), limits.max_exponent
            )
        except algebra.AlgebraError as err:
            return _unknown(str(err))
        derived = _derive_parity(poly, _parity_facts(facts, eqs, limits))
        if derived is None:
            return _unknown(
                f"the parity of {poly} is not determined by the facts in scope"
            )
        parity, rule = derived
        if parity == wanted:
            return _verified(rule)
        return Verdict(
            Status.REFUTED,
            rule,
            None,
            (
                f"{logic.render_term(inner.arg)} is"
                f" {'even' if parity == 0 else 'odd'} for every choice of"
                " the variables",
            ),
        )

    if isinstance(inner, Eq):
        if negated:
            return _unknown("inequations are not checked")
        try:
            if algebra.equal_under(eqs, inner.lhs, inner.rhs, limits.max_exponent):
                return _verified("equation-chain")
            left = algebra.normalize(
                algebra.apply_equalities(inner.lhs, eqs), limits.max_exponent
            )
            right = algebra.normalize(
                algebra.apply_equalities(inner.rhs, eqs), limits.max_exponent
            )
        except algebra.AlgebraError as err:
            return _unknown(str(err))
        return _unknown(
            f"the left side reduces to {left} but the right side to {right}"
        )

    if isinstance(inner, Divides):
        if negated:
            return _unknown("negated divisibility is not checked")
        return _check_divides(facts, eqs, inner, limits)

    if isinstance(inner, Falsum) and not negated:
        return _check_falsum(facts, eqs, limits)

    if is_ground(claim):
        if any(isinstance(node, Subset) for node in iter_nodes(claim)):
            return _unknown(
                "an inclusion is proved by taking an element of the left set"
                " and showing it lies in the right set"
            )
        try:
            return entails_ground(facts, claim, limits)
        except TooManyAtoms as err:
            return _unknown(str(err))

    return _unknown("no checking rule applies to this claim")


# --------------------------------------------------------------------------
# Witness justification for existence claims


def justify_exists(
    kb: Iterable[Formula],
    witness: str,
    body: Formula,
    limits: Limits = DEFAULT_LIMITS,
    depth: int | None = None,
) -> Verdict:
    """Check that ``there is ... witness ... with body`` is warranted.

    The body must be an equation that pins the fresh witness down: either
    it is solvable outright (unit coefficient) or its coefficient's
    divisibility is already established, as in reading ``x = 2k`` off the
    fact that x is even.
    """
    if depth is None:
        depth = limits.depth
    if not isinstance(body, Eq):
        return _unknown("only an equation can define a witness here")
    facts = [c for fact in kb for c in conjuncts(fact)]
    eqs = [f for f in facts if isinstance(f, Eq)]
    attempts: list[str] = []
    for known, target in ((body.lhs, body.rhs), (body.rhs, body.lhs)):
        try:
            target_poly = algebra.normalize(
                algebra.apply_equalities(target, eqs), limits.max_exponent
            )
            known_poly = algebra.normalize(
                algebra.apply_equalities(known, eqs), limits.max_exponent
            )
        except algebra.AlgebraError as err:
            attempts.append(str(err))
            continue
        if witness not in target_poly.variables():
            continue
        if witness in known_poly.variables():
            attempts.append("the new variable appears on both sides")
            continue
        linear = ((witness, 1),)
        coeffs = target_poly.as_dict()
        if any(
            any(var == witness for var, _ in mono) and mono != linear
            for mono in coeffs
        ):
            attempts.append("the new variable does not occur linearly")
            continue
        coefficient = coeffs[linear]
        rest = target_poly - Polynomial.from_dict({linear: coefficient})
        if abs(coefficient) == 1:
            return _verified("witness-definition")
        if depth <= 0:
            return _unknown("the auxiliary check budget is exhausted")
        needed = Divides(
            IntConst(abs(coefficient)),
            logic.Sub(known, algebra.to_term(rest)),
        )
        sub = check_step(facts, needed, limits, depth - 1)
        if sub.verified:
            return _verified(f"witness-by-{sub.rule}")
        attempts.append(
            f"this would need {abs(coefficient)} |"
            f" {logic.render_term(needed.dividend)}, which is not established"
        )
    if attempts:
        return _unknown(*attempts)
    return _unknown("the equation does not involve the new variable")
