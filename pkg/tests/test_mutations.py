"""Mutation corpus: every mutant must draw exactly the expected feedback.

The texts under tests/data/mutations/ are small edits of the accepted
corpus proofs (see scripts/gen_mutations.py); expectations.json records,
for each mutant, the exact category counts, the set of catalogued
patterns, and how many items must carry a countermodel.
"""
from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

import pytest

from proofcheck.engine import check_document

MUTATIONS = Path(__file__).parent / "data" / "mutations"
EXPECTATIONS = json.loads((MUTATIONS / "expectations.json").read_text("utf-8"))


def test_corpus_is_large_enough():
    assert len(EXPECTATIONS) >= 20


def test_every_mutant_has_an_expectation_and_vice_versa():
    texts = {p.stem for p in MUTATIONS.glob("*.txt")}
    assert texts == set(EXPECTATIONS)


@pytest.mark.parametrize("name", sorted(EXPECTATIONS))
def test_mutant_feedback(name):
    expected = EXPECTATIONS[name]
    report = check_document((MUTATIONS / f"{name}.txt").read_text("utf-8"))

    accepted = expected["status"] == "Accepted"
    assert report.accepted == accepted, report.items

    categories = Counter(item.category.value for item in report.items)
    assert dict(categories) == expected["categories"]

    patterns = sorted({item.pattern_id for item in report.items if item.pattern_id})
    assert patterns == expected["patterns"]

    countermodels = sum(1 for item in report.items if item.countermodel is not None)
    assert countermodels == expected["countermodels"]


class TestNamedMutations:
    """The three mutation shapes everything else is calibrated against."""

    def test_deleting_the_goal_sentence_is_one_goal_item(self):
        report = check_document((MUTATIONS / "text1-drop-goal.txt").read_text("utf-8"))
        assert [item.category.value for item in report.items] == ["v"]

    def test_power_coefficient_slip_names_the_identity(self):
        report = check_document(
            (MUTATIONS / "series8-power-coeff.txt").read_text("utf-8")
        )
        step = next(i for i in report.items if i.category.value == "iii")
        assert step.pattern_id == "power-distribution"

    def test_denying_the_antecedent_comes_with_a_countermodel(self):
        report = check_document(
            (MUTATIONS / "prop-denying-antecedent.txt").read_text("utf-8")
        )
        step = next(i for i in report.items if i.category.value == "iii")
        assert step.pattern_id == "denying-the-antecedent"
        assert step.countermodel is not None
        assert dict(step.countermodel.propositions) == {"P": False, "Q": True}
