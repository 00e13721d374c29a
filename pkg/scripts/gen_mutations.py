#!/usr/bin/env python3
"""Regenerate the mutation corpus under tests/data/mutations/.

Each mutation applies a small, described edit to one of the accepted
corpus texts: deleting a sentence, corrupting a coefficient, inserting
a fallacious step, and so on.  The expected feedback for every mutant
is written down by hand in tests/data/mutations/expectations.json; this
script only produces the texts, never the expectations.

Run from the repository root:

    python3 scripts/gen_mutations.py
"""
from __future__ import annotations

from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
OUT = ROOT / "tests" / "data" / "mutations"

# name -> (base text, ((old, new), ...)); new == "" deletes the line
MUTATIONS: dict[str, tuple[str, tuple[tuple[str, str], ...]]] = {
    # deletions of the closing sentence
    "text1-drop-goal": ("fig1-text1", (("Thus 2-3x is even.\n", ""),)),
    "text2-drop-goal": ("fig1-text2", (("Thus (x,y) ∈ A × (B ∪ C).\n", ""),)),
    "div4-drop-goal": ("div4", (("Thus 4 divides 3n^2.\n", ""),)),
    "div8-drop-goal": ("div8", (("Thus 8 divides (2n-1)^2 - 1.\n", ""),)),
    "inter-union-drop-goal": ("inter-union", (("Thus x ∈ A ∪ B.\n", ""),)),
    "series8-drop-both-closers": (
        "series8",
        (
            ("Thus x^2+2 is even.\n", ""),
            ("This shows that x^2+2 is not odd.\n", ""),
        ),
    ),
    # deletions the checker should tolerate
    "prop-drop-goal": ("prop-implication", (("Thus not P or Q.\n", ""),)),
    "no-contradiction-drop-close": (
        "no-contradiction",
        (("This is a contradiction.\n", ""),),
    ),
    "series8-drop-final-close": (
        "series8",
        (("This shows that x^2+2 is not odd.\n", ""),),
    ),
    "no-contradiction-redundant-step": (
        "no-contradiction",
        (("This is a contradiction.", "Thus P."),),
    ),
    "text2-ascii-product": ("fig1-text2", (("×", "><"),)),
    # arithmetic corruptions
    "series8-power-coeff": ("series8", (("4k^2+2", "2k^2+2"),)),
    "text1-chain-sign": ("fig1-text1", (("2(1-3k)", "2(1+3k)"),)),
    "div4-coeff": ("div4", (("12k^2", "6k^2"),)),
    "series8-freshman-square": (
        "series8",
        (
            ("such that x = 2k.", "such that x = k+k."),
            (
                "Then x^2+2 = (2k)^2+2 = 4k^2+2 = 2(2k^2+1).",
                "Then x^2+2 = (k+k)^2+2 = k^2+k^2+2 = 2(k^2+1).",
            ),
        ),
    ),
    "div8-wrong-parity": (
        "div8",
        (("Then n(n-1) is even.", "Then n(n-1) is odd."),),
    ),
    # set-theory corruptions
    "text2-wrong-component": (
        "fig1-text2",
        (("Then x ∈ A and y ∈ B ∪ C.", "Then y ∈ A and y ∈ B ∪ C."),),
    ),
    "inter-union-element-swap": (
        "inter-union",
        (("Let x ∈ A ∩ B.", "Let x ∈ A ∪ B."),),
    ),
    "text2-swap-claim": (
        "fig1-text2",
        (
            (
                "Then x ∈ A and y ∈ B ∪ C.\n",
                "Then x ∈ A and y ∈ B ∪ C.\nThen y ∈ B.\n",
            ),
        ),
    ),
    "subset-direction": (
        "inter-union",
        (
            ("Let A and B be sets.\n", "Let A and B be sets.\nAssume that A ⊂ B.\n"),
            ("Prove: (A ∩ B) ⊂ (A ∪ B).", "Prove: B ⊂ (A ∪ B)."),
            ("Let x ∈ A ∩ B.", "Let x ∈ B."),
        ),
    ),
    # propositional fallacies
    "prop-denying-antecedent": (
        "prop-implication",
        (("We have not P.\n", "Hence not Q.\nWe have not P.\n"),),
    ),
    "prop-affirming-consequent": (
        "prop-implication",
        (
            ("Assume that not P.", "Assume that Q."),
            ("We have not P.", "Hence P."),
        ),
    ),
    "prop-converse": (
        "prop-implication",
        (("We have not P.\n", "We have not P.\nThen Q implies P.\n"),),
    ),
    "prop-goal-truth": (
        "prop-implication",
        (("Thus not P or Q.", "Thus P or Q."),),
    ),
    "prop-unmatched-assume": (
        "prop-implication",
        (("We have not P.\n", "Assume that Q.\nWe have not P.\n"),),
    ),
    # declaration and lexical faults
    "text1-shadowing": (
        "fig1-text1",
        (
            (
                "Assume that x is even.\n",
                "Assume that x is even.\nLet x be an integer.\n",
            ),
        ),
    ),
    "text1-undeclared": ("fig1-text1", (("Then 2-3x =", "Then 2-3y ="),)),
    "text1-gibberish": (
        "fig1-text1",
        (("Then 2-3x = 2-3(2k) = 2(1-3k).", "Then 2-3x = = 2(1-3k)."),),
    ),
    "inter-union-undeclared-set": (
        "inter-union",
        (("Let A and B be sets.\n", ""),),
    ),
    # structural damage
    "div4-drop-witness": (
        "div4",
        (("Then there is an integer k such that n = 2k.\n", ""),),
    ),
    "series8-drop-assume": (
        "series8",
        (("Assume that x is not odd.\n", ""),),
    ),
    "text2-drop-element-intro": (
        "fig1-text2",
        (("Let (x,y) ∈ (A ∩ B) × C.\n", ""),),
    ),
    "no-contradiction-drop-assume": (
        "no-contradiction",
        (("Assume that P and not P.\n", ""),),
    ),
    "text1-swap-witness-coeff": (
        "fig1-text1",
        (("such that 2-3x = 2m.", "such that 2-3x = 3m."),),
    ),
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (base, edits) in sorted(MUTATIONS.items()):
        text = (CORPUS / f"{base}.txt").read_text("utf-8")
        for old, new in edits:
            if old not in text:
                raise SystemExit(f"{name}: edit source {old!r} not found in {base}")
            text = text.replace(old, new)
        (OUT / f"{name}.txt").write_text(text, "utf-8")
    print(f"wrote {len(MUTATIONS)} mutants to {OUT}")


if __name__ == "__main__":
    main()
