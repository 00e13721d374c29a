"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written as plain structural recursion with
no reuse of the package's normalization or entailment machinery, so that a
bug in the checked path cannot hide in the oracle.
"""
from __future__ import annotations

import itertools
import random
from typing import Mapping

from proofcheck import logic
from proofcheck.logic import (
    Add,
    And,
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
    SetVar,
    Sub,
    Subset,
    Term,
    Union,
    Var,
)

# --------------------------------------------------------------------------
# Direct term evaluation (the oracle for polynomial normalization)


def eval_term(term: Term, point: Mapping[str, int]) -> int:
    if isinstance(term, IntConst):
        return term.value
    if isinstance(term, Var):
        return point[term.name]
    if isinstance(term, Add):
        return eval_term(term.left, point) + eval_term(term.right, point)
    if isinstance(term, Sub):
        return eval_term(term.left, point) - eval_term(term.right, point)
    if isinstance(term, Mul):
        return eval_term(term.left, point) * eval_term(term.right, point)
    if isinstance(term, Neg):
        return -eval_term(term.arg, point)
    if isinstance(term, Pow):
        return eval_term(term.base, point) ** term.exponent
    raise AssertionError(f"not an integer term: {term!r}")


def random_term(
    rng: random.Random,
    variables: list[str],
    depth: int,
    max_exponent: int = 4,
) -> Term:
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return IntConst(rng.randint(-9, 9))
        return Var(rng.choice(variables))
    choice = rng.randrange(5)
    if choice == 0:
        return Add(random_term(rng, variables, depth - 1),
                   random_term(rng, variables, depth - 1))
    if choice == 1:
        return Sub(random_term(rng, variables, depth - 1),
                   random_term(rng, variables, depth - 1))
    if choice == 2:
        return Mul(random_term(rng, variables, depth - 1),
                   random_term(rng, variables, depth - 1))
    if choice == 3:
        return Neg(random_term(rng, variables, depth - 1))
    return Pow(random_term(rng, variables, depth - 2), rng.randint(0, max_exponent))


def algebraic_variant(rng: random.Random, term: Term) -> Term:
    """A term guaranteed to denote the same function as ``term``."""
    choice = rng.randrange(6)
    if choice == 0:
        return Add(term, IntConst(0))
    if choice == 1:
        return Mul(IntConst(1), term)
    if choice == 2:
        return Sub(Add(term, term), term)
    if choice == 3:
        return Neg(Neg(term))
    if choice == 4:
        return Add(Mul(IntConst(2), term), Neg(term))
    return Sub(term, IntConst(0))


# --------------------------------------------------------------------------
# Propositional truth tables (the oracle for the entailment checker)


def eval_prop(formula: Formula, assignment: Mapping[str, bool]) -> bool:
    if isinstance(formula, PropVar):
        return assignment[formula.name]
    if isinstance(formula, Falsum):
        return False
    if isinstance(formula, Not):
        return not eval_prop(formula.arg, assignment)
    if isinstance(formula, And):
        return eval_prop(formula.left, assignment) and eval_prop(formula.right, assignment)
    if isinstance(formula, Or):
        return eval_prop(formula.left, assignment) or eval_prop(formula.right, assignment)
    if isinstance(formula, Implies):
        return (not eval_prop(formula.left, assignment)) or eval_prop(formula.right, assignment)
    raise AssertionError(f"not a propositional formula: {formula!r}")


def prop_atoms(formulas: list[Formula]) -> list[str]:
    names: set[str] = set()
    for formula in formulas:
        for node in logic.iter_nodes(formula):
            if isinstance(node, PropVar):
                names.add(node.name)
    return sorted(names)


def entails_prop_oracle(
    premises: list[Formula], claim: Formula
) -> tuple[bool, dict[str, bool] | None]:
    """Exhaustive truth-table entailment; returns (holds, countermodel)."""
    atoms = prop_atoms(premises + [claim])
    for values in itertools.product([False, True], repeat=len(atoms)):
        assignment = dict(zip(atoms, values))
        if all(eval_prop(p, assignment) for p in premises) and not eval_prop(
            claim, assignment
        ):
            return False, assignment
    return True, None


def random_prop_formula(rng: random.Random, atoms: list[str], depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return PropVar(rng.choice(atoms))
    choice = rng.randrange(4)
    if choice == 0:
        return Not(random_prop_formula(rng, atoms, depth - 1))
    ctor = (And, Or, Implies)[choice - 1]
    return ctor(
        random_prop_formula(rng, atoms, depth - 1),
        random_prop_formula(rng, atoms, depth - 1),
    )


# --------------------------------------------------------------------------
# Finite set worlds (the oracle for membership entailment)
#
# A world assigns a truth value to every (element, set-variable) membership;
# distinct element names denote distinct objects.  Intersection, union and
# product memberships are evaluated by the usual clauses, and a subset
# premise is read as membership propagation over the elements mentioned in
# the query, matching the documented finite semantics.


def element_key(term: Term) -> str:
    if isinstance(term, Pair):
        return f"({element_key(term.fst)},{element_key(term.snd)})"
    if isinstance(term, (Var, SetVar)):
        return term.name
    if isinstance(term, IntConst):
        return str(term.value)
    raise AssertionError(f"not an element term: {term!r}")


def set_variables(formulas: list[Formula]) -> list[str]:
    names: set[str] = set()
    for formula in formulas:
        for node in logic.iter_nodes(formula):
            if isinstance(node, (SetVar,)):
                names.add(node.name)
            if isinstance(node, Var) and isinstance(formula, (In, Subset)):
                pass
    return sorted(names)


def mentioned_elements(formulas: list[Formula]) -> list[Term]:
    elements: list[Term] = []
    seen: set[str] = set()

    def add(term: Term) -> None:
        key = element_key(term)
        if key not in seen:
            seen.add(key)
            elements.append(term)
        # A pair's components are probed on their own whenever the pair
        # meets a product, so they count as mentioned elements too.
        if isinstance(term, Pair):
            add(term.fst)
            add(term.snd)

    for formula in formulas:
        for node in logic.iter_nodes(formula):
            if isinstance(node, In):
                add(node.element)
    return elements


def eval_membership(
    element: Term, container: Term, world: Mapping[tuple[str, str], bool]
) -> bool:
    if isinstance(container, (SetVar, Var)):
        return world[(element_key(element), container.name)]
    if isinstance(container, Inter):
        return eval_membership(element, container.left, world) and eval_membership(
            element, container.right, world
        )
    if isinstance(container, Union):
        return eval_membership(element, container.left, world) or eval_membership(
            element, container.right, world
        )
    if isinstance(container, Prod):
        # Products hold pairs and nothing else.
        if not isinstance(element, Pair):
            return False
        return eval_membership(element.fst, container.left, world) and eval_membership(
            element.snd, container.right, world
        )
    raise AssertionError(f"not a set term: {container!r}")


def eval_set_formula(
    formula: Formula,
    world: Mapping[tuple[str, str], bool],
    elements: list[Term],
) -> bool:
    if isinstance(formula, In):
        return eval_membership(formula.element, formula.container, world)
    if isinstance(formula, Subset):
        return all(
            (not eval_membership(e, formula.left, world))
            or eval_membership(e, formula.right, world)
            for e in elements
        )
    if isinstance(formula, Not):
        return not eval_set_formula(formula.arg, world, elements)
    if isinstance(formula, And):
        return eval_set_formula(formula.left, world, elements) and eval_set_formula(
            formula.right, world, elements
        )
    if isinstance(formula, Or):
        return eval_set_formula(formula.left, world, elements) or eval_set_formula(
            formula.right, world, elements
        )
    if isinstance(formula, Implies):
        return (not eval_set_formula(formula.left, world, elements)) or eval_set_formula(
            formula.right, world, elements
        )
    raise AssertionError(f"not a set formula: {formula!r}")


def membership_atoms(formulas: list[Formula]) -> list[tuple[str, str]]:
    elements = mentioned_elements(formulas)
    sets: set[str] = set()
    for formula in formulas:
        for node in logic.iter_nodes(formula):
            if isinstance(node, (In, Subset)):
                parts = (
                    [node.container] if isinstance(node, In) else [node.left, node.right]
                )
                for part in parts:
                    for sub in logic.iter_nodes(part):
                        if isinstance(sub, (SetVar, Var)):
                            sets.add(sub.name)
    atoms = []
    for element in elements:
        for set_name in sorted(sets):
            atoms.append((element_key(element), set_name))
    return sorted(atoms)


def entails_set_oracle(
    premises: list[Formula], claim: Formula
) -> tuple[bool, dict[tuple[str, str], bool] | None]:
    formulas = premises + [claim]
    elements = mentioned_elements(formulas)
    atoms = membership_atoms(formulas)
    for values in itertools.product([False, True], repeat=len(atoms)):
        world = dict(zip(atoms, values))
        if all(
            eval_set_formula(p, world, elements) for p in premises
        ) and not eval_set_formula(claim, world, elements):
            return False, world
    return True, None
