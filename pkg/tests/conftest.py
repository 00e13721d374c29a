"""Shared fixtures: corpus texts and checked reports."""
from __future__ import annotations

from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parent.parent
CORPUS = REPO / "corpus"

ACCEPTED_PROOFS = (
    "fig1-text1",
    "fig1-text2",
    "series8",
    "div8",
    "div4",
    "prop-implication",
    "no-contradiction",
    "inter-union",
)


def corpus_text(name: str) -> str:
    return (CORPUS / f"{name}.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus():
    return {name: corpus_text(name) for name in ACCEPTED_PROOFS}
