"""Step checker tests.

The decidable fragments are cross-checked against the independent
truth-table and membership oracles in ``oracles.py``; the arithmetic rules
are pinned by worked examples.
"""
from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from proofcheck import prover
from proofcheck.cnl import parse_formula_text
from proofcheck.logic import (
    And,
    Divides,
    Eq,
    Even,
    Falsum,
    Implies,
    In,
    IntConst,
    Inter,
    Mul,
    Not,
    Odd,
    Or,
    Pair,
    Prod,
    PropVar,
    SetVar,
    Sub,
    Subset,
    Union,
    Var,
)
from proofcheck.prover import (
    Limits,
    Status,
    TooManyAtoms,
    check_step,
    entails_ground,
    entails_prop,
    entails_set,
    equivalent,
    justify_exists,
    semantic_key,
)

x, y, k, n, m = Var("x"), Var("y"), Var("k"), Var("n"), Var("m")
A, B, C = SetVar("A"), SetVar("B"), SetVar("C")
P, Q, R = PropVar("P"), PropVar("Q"), PropVar("R")


def f(text: str):
    return parse_formula_text(text)


class TestPropositional:
    def test_modus_ponens(self):
        verdict = entails_prop([Implies(P, Q), P], Q)
        assert verdict.verified

    def test_denying_the_antecedent_is_refuted(self):
        verdict = entails_prop([Implies(P, Q), Not(P)], Not(Q))
        assert verdict.refuted
        assert verdict.countermodel.propositions == (("P", False), ("Q", True))

    def test_countermodel_is_lexicographically_smallest(self):
        verdict = entails_prop([], Or(P, Q))
        assert verdict.refuted
        assert verdict.countermodel.propositions == (("P", False), ("Q", False))

    def test_falsum_claim_reports_consistency(self):
        verdict = entails_prop([P], Falsum())
        assert verdict.refuted
        assert verdict.countermodel.propositions == (("P", True),)

    def test_unsat_premises_entail_falsum(self):
        verdict = entails_prop([P, Not(P)], Falsum())
        assert verdict.verified

    def test_atom_limit(self):
        atoms = [PropVar(f"P{i}") for i in range(21)]
        conj = atoms[0]
        for atom in atoms[1:]:
            conj = And(conj, atom)
        with pytest.raises(TooManyAtoms):
            entails_prop([conj], atoms[0])

    def test_describe_mentions_values(self):
        verdict = entails_prop([Implies(P, Q), Not(P)], Not(Q))
        assert verdict.countermodel.describe() == "P false, Q true"


class TestSetReasoning:
    def test_pair_membership_splits(self):
        premise = In(Pair(x, y), Prod(Inter(A, B), C))
        verdict = entails_set([premise], And(In(x, Inter(A, B)), In(y, C)))
        assert verdict.verified

    def test_membership_does_not_travel_between_elements(self):
        verdict = entails_set([In(x, A), In(x, B)], In(y, Union(B, C)))
        assert verdict.refuted
        model = dict(
            ((e, s), v) for e, s, v in verdict.countermodel.memberships
        )
        assert model[("y", "B")] is False
        assert model[("y", "C")] is False

    def test_subset_premise_propagates(self):
        verdict = entails_set([Subset(A, B), In(x, A)], In(x, B))
        assert verdict.verified

    def test_subset_chain(self):
        verdict = entails_set(
            [Subset(A, B), Subset(B, C), In(x, A)], In(x, C)
        )
        assert verdict.verified

    def test_union_needs_one_side(self):
        verdict = entails_set([In(x, A)], In(x, Union(A, B)))
        assert verdict.verified

    def test_intersection_needs_both_sides(self):
        verdict = entails_set([In(x, A)], In(x, Inter(A, B)))
        assert verdict.refuted

    def test_countermodel_describe(self):
        verdict = entails_set([In(x, A)], In(x, Inter(A, B)))
        assert "x not in B" in verdict.countermodel.describe()


class TestOracleAgreement:
    @given(st.integers(0, 10**9))
    @settings(max_examples=300, deadline=None)
    def test_propositional_agreement(self, seed: int):
        rng = random.Random(seed)
        atoms = ["P", "Q", "R", "S"][: rng.randint(1, 4)]
        premises = [
            oracles.random_prop_formula(rng, atoms, rng.randint(1, 3))
            for _ in range(rng.randint(0, 3))
        ]
        claim = oracles.random_prop_formula(rng, atoms, rng.randint(1, 3))
        holds, countermodel = oracles.entails_prop_oracle(premises, claim)
        verdict = entails_prop(premises, claim)
        assert verdict.verified == holds
        assert not verdict.unknown
        if not holds:
            assert dict(verdict.countermodel.propositions) == countermodel

    @given(st.integers(0, 10**9))
    @settings(max_examples=300, deadline=None)
    def test_set_agreement(self, seed: int):
        rng = random.Random(seed)
        premises, claim = _random_set_problem(rng)
        holds, world = oracles.entails_set_oracle(premises, claim)
        verdict = entails_set(premises, claim)
        assert verdict.verified == holds
        assert not verdict.unknown
        if not holds:
            got = {
                (e, s): v for e, s, v in verdict.countermodel.memberships
            }
            assert got == world


def _random_set_problem(rng: random.Random):
    """Shape-consistent membership problems (pairs only inside products)."""
    pair_world = rng.random() < 0.4
    sets = ["A", "B", "C"][: rng.randint(2, 3)]

    def set_term(depth: int):
        if depth <= 0 or rng.random() < 0.5:
            return SetVar(rng.choice(sets))
        ctor = rng.choice([Inter, Union])
        return ctor(set_term(depth - 1), set_term(depth - 1))

    def container(depth: int):
        if pair_world:
            if rng.random() < 0.5:
                return Prod(set_term(depth - 1), set_term(depth - 1))
            return SetVar(rng.choice(sets))
        return set_term(depth)

    def element():
        if pair_world:
            return Pair(Var(rng.choice(["x", "y"])), Var(rng.choice(["x", "y"])))
        return Var(rng.choice(["x", "y"]))

    def membership(depth: int):
        return In(element(), container(depth))

    def formula(depth: int):
        roll = rng.random()
        if depth <= 0 or roll < 0.45:
            return membership(2)
        if roll < 0.6:
            return Not(formula(depth - 1))
        ctor = rng.choice([And, Or, Implies])
        return ctor(formula(depth - 1), formula(depth - 1))

    premises = [formula(rng.randint(0, 2)) for _ in range(rng.randint(0, 3))]
    if rng.random() < 0.4:
        premises.append(Subset(container(1), container(1)))
    claim = formula(rng.randint(0, 2))
    return premises, claim


class TestEquationSteps:
    def test_rewriting_under_known_equality(self):
        kb = [Even(x), Eq(x, Mul(IntConst(2), k))]
        claim = f("2-3x = 2(1-3k)")
        assert check_step(kb, claim).verified

    def test_plain_expansion(self):
        claim = f("(2k)^2 = 4k^2")
        assert check_step([], claim).verified

    def test_wrong_equation_is_unknown_not_refuted(self):
        verdict = check_step([Eq(x, Mul(IntConst(2), k))], f("2-3x = 2(1-3k) + 1"))
        assert verdict.unknown
        assert any("reduces to" in note for note in verdict.notes)

    def test_equation_chain_conjunction(self):
        kb = [Eq(x, Mul(IntConst(2), k))]
        claim = f("2-3x = 2-3(2k) = 2(1-3k)")
        assert check_step(kb, claim).verified


class TestParitySteps:
    def test_even_from_certificate(self):
        kb = [Eq(x, Mul(IntConst(2), k))]
        assert check_step(kb, Even(x)).verified

    def test_odd_from_certificate(self):
        kb = [Eq(x, f("2k+1").lhs if False else parse_formula_text("x = 2k+1").rhs)]
        assert check_step(kb, Odd(x)).verified

    def test_parity_flip_matches_known_fact(self):
        assert check_step([Odd(x)], Not(Even(x))).verified
        assert check_step([Not(Even(x))], Odd(x)).verified

    def test_parity_transfer(self):
        # x and x+2 share a parity.
        kb = [Odd(x)]
        assert check_step(kb, Odd(Sub(x, IntConst(2)))).verified

    def test_always_odd_term_refutes_even_claim(self):
        kb = [Eq(x, parse_formula_text("x = 2k+1").rhs)]
        verdict = check_step(kb, Even(x))
        assert verdict.refuted
        assert any("odd for every choice" in note for note in verdict.notes)

    def test_undetermined_parity_is_unknown(self):
        assert check_step([], Even(x)).unknown

    def test_consecutive_product_is_even(self):
        assert check_step([], Even(f("k^2+k = 0").lhs)).verified


class TestDivisibilitySteps:
    def test_certificate_with_substitution(self):
        kb = [Eq(n, Mul(IntConst(2), m))]
        claim = Divides(IntConst(4), Mul(IntConst(3), parse_formula_text("n^2 = 0").lhs))
        assert check_step(kb, claim).verified

    def test_eight_divides_square_pattern(self):
        claim = f("8 divides (2n-1)^2 - 1")
        verdict = check_step([], claim)
        assert verdict.verified
        assert verdict.rule == "divisibility-consecutive"

    def test_divisibility_transfer(self):
        kb = [Divides(IntConst(4), x)]
        claim = Divides(IntConst(4), parse_formula_text("x = x+8").rhs)
        assert check_step(kb, claim).verified

    def test_weaker_divisor_from_stronger_fact(self):
        kb = [Divides(IntConst(8), x)]
        assert check_step(kb, Divides(IntConst(4), x)).verified

    def test_variable_divisor_transfer(self):
        d = Var("d")
        kb = [Divides(d, x)]
        claim = Divides(d, parse_formula_text("y = x + 3d").rhs)
        assert check_step(kb, claim).verified

    def test_unsupported_divisor_is_unknown(self):
        assert check_step([], Divides(IntConst(3), x)).unknown


class TestFalsumSteps:
    def test_complementary_pair(self):
        assert check_step([In(x, A), Not(In(x, A))], Falsum()).verified

    def test_parity_clash_between_facts(self):
        kb = [Even(x), Odd(x)]
        assert check_step(kb, Falsum()).verified

    def test_parity_clash_with_certificate(self):
        kb = [Even(x), Eq(x, parse_formula_text("x = 2k+1").rhs)]
        assert check_step(kb, Falsum()).verified

    def test_propositional_unsat(self):
        kb = [Implies(P, Q), P, Not(Q)]
        assert check_step(kb, Falsum()).verified

    def test_consistent_context_refutes_contradiction_claim(self):
        verdict = check_step([P, Q], Falsum())
        assert verdict.refuted
        assert verdict.countermodel is not None

    def test_mixed_context_stays_unknown(self):
        verdict = check_step([P, Even(x)], Falsum())
        assert verdict.unknown


class TestDispatch:
    def test_known_fact_matches_modulo_normal_form(self):
        kb = [Even(Sub(IntConst(2), Mul(IntConst(3), x)))]
        claim = Even(parse_formula_text("y = 2-3x").rhs)
        assert check_step(kb, claim).verified
        assert check_step(kb, claim).rule == "known-fact"

    def test_known_fact_matches_under_equalities(self):
        kb = [Eq(x, Mul(IntConst(2), k)), Even(x)]
        assert check_step(kb, Even(Mul(IntConst(2), k))).verified

    def test_ground_refutation_carries_countermodel(self):
        verdict = check_step([Implies(P, Q), Not(P)], Not(Q))
        assert verdict.refuted
        assert verdict.countermodel.propositions == (("P", False), ("Q", True))

    def test_subset_claim_asks_for_element_argument(self):
        verdict = check_step([Subset(A, B)], Subset(A, Union(A, B)))
        assert verdict.unknown
        assert any("element" in note for note in verdict.notes)

    def test_conjunction_claim_splits(self):
        kb = [In(x, A), In(y, B)]
        assert check_step(kb, And(In(x, A), In(y, B))).verified

    def test_exponent_blowup_is_unknown_with_note(self):
        claim = Eq(parse_formula_text("x = k^15").rhs, parse_formula_text("x = k^15").rhs)
        small = Limits(max_exponent=8)
        verdict = check_step([], claim, small)
        assert verdict.unknown
        assert verdict.notes


class TestSemanticKeys:
    def test_parity_flip_same_key(self):
        assert semantic_key(Odd(x)) == semantic_key(Not(Even(x)))
        assert semantic_key(Even(x)) == semantic_key(Not(Odd(x)))

    def test_double_negation_drops(self):
        assert semantic_key(Not(Not(P))) == semantic_key(P)

    def test_equation_orientation_is_ignored(self):
        assert semantic_key(Eq(x, Mul(IntConst(2), k))) == semantic_key(
            Eq(Mul(IntConst(2), k), x)
        )

    def test_normal_forms_merge(self):
        a = Even(Add_like())
        b = Even(IntConst(2))
        assert semantic_key(a) == semantic_key(b)

    def test_equivalence_via_mutual_entailment(self):
        assert equivalent(And(In(x, A), In(x, B)), In(x, Inter(A, B)))
        assert not equivalent(In(x, A), In(x, B))


def Add_like():
    return Sub(IntConst(3), IntConst(1))


class TestWitnessJustification:
    def test_even_fact_justifies_halving_witness(self):
        kb = [Even(x)]
        verdict = justify_exists(kb, "k", f("x = 2k"))
        assert verdict.verified

    def test_flipped_orientation(self):
        kb = [Even(x)]
        assert justify_exists(kb, "k", f("2k = x")).verified

    def test_odd_fact_justifies_odd_form(self):
        kb = [Not(Even(x))]
        assert justify_exists(kb, "k", f("x = 2k+1")).verified

    def test_certificate_justifies_witness(self):
        kb = [Eq(x, Mul(IntConst(2), k))]
        assert justify_exists(kb, "m", f("2-3x = 2m")).verified

    def test_unit_coefficient_needs_no_facts(self):
        assert justify_exists([], "m", f("m = 2-3x")).verified
        assert justify_exists([], "m", f("2-3x = m + 1")).verified

    def test_unsupported_witness_is_unknown(self):
        verdict = justify_exists([], "k", f("x = 2k"))
        assert verdict.unknown

    def test_nonlinear_witness_is_unknown(self):
        kb = [Even(x)]
        assert justify_exists(kb, "k", f("x = k^2")).unknown

    def test_witness_on_both_sides_is_unknown(self):
        assert justify_exists([], "k", f("k = 2k+2")).unknown


class TestMonotonicity:
    @given(st.integers(0, 10**9))
    @settings(max_examples=150, deadline=None)
    def test_adding_premises_never_downgrades_verified(self, seed: int):
        rng = random.Random(seed)
        atoms = ["P", "Q", "R"]
        premises = [
            oracles.random_prop_formula(rng, atoms, rng.randint(1, 2))
            for _ in range(rng.randint(0, 2))
        ]
        claim = oracles.random_prop_formula(rng, atoms, rng.randint(1, 2))
        extra = oracles.random_prop_formula(rng, atoms, rng.randint(1, 2))
        if entails_prop(premises, claim).verified:
            assert entails_prop(premises + [extra], claim).verified
