#!/usr/bin/env python3
"""Regenerate the golden JSON reports under tests/data/golden/.

Each golden file freezes the exact serialized response for one input
text; the suite compares fresh output against these files byte for
byte.  Regenerate only when the output format changes on purpose, and
review the diff before committing it.

Run from the repository root:

    python3 scripts/gen_goldens.py
"""
from __future__ import annotations

import json
from pathlib import Path

from proofcheck.engine import check_document
from proofcheck.serialize import response_payload

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "data" / "golden"

# (golden name, source file, verbosity)
CASES: tuple[tuple[str, str, str], ...] = (
    ("fig1-text1.explained", "corpus/fig1-text1.txt", "explained"),
    ("fig1-text2.explained", "corpus/fig1-text2.txt", "explained"),
    ("series8.explained", "corpus/series8.txt", "explained"),
    ("fig1-text1-truncated.explained", "corpus/fig1-text1-truncated.txt", "explained"),
    ("fig1-text1-truncated.terse", "corpus/fig1-text1-truncated.txt", "terse"),
    (
        "prop-denying-antecedent.explained",
        "tests/data/mutations/prop-denying-antecedent.txt",
        "explained",
    ),
    (
        "series8-power-coeff.explained",
        "tests/data/mutations/series8-power-coeff.txt",
        "explained",
    ),
    ("text1-gibberish.explained", "tests/data/mutations/text1-gibberish.txt", "explained"),
    (
        "inter-union-element-swap.explained",
        "tests/data/mutations/inter-union-element-swap.txt",
        "explained",
    ),
)


def render(source: str, verbosity: str) -> str:
    payload = response_payload(check_document(source), verbosity=verbosity)
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, relpath, verbosity in CASES:
        source = (ROOT / relpath).read_text("utf-8")
        (GOLDEN / f"{name}.json").write_text(render(source, verbosity), "utf-8")
    print(f"wrote {len(CASES)} goldens to {GOLDEN}")


if __name__ == "__main__":
    main()
