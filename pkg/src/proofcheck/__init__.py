"""Didactical proof checker for controlled-natural-language proofs.

The usual entry point is :func:`check_document`, which takes a
submission as written by a student and returns a :class:`Report` with
per-sentence verdicts and categorized feedback items.
"""
from __future__ import annotations

from .diagnostics import Category, FeedbackItem, render_feedback
from .engine import Report, check_document
from .prover import Limits, check_step
from .serialize import response_payload

__version__ = "0.1.0"

__all__ = [
    "Category",
    "FeedbackItem",
    "Limits",
    "Report",
    "check_document",
    "check_step",
    "render_feedback",
    "response_payload",
    "__version__",
]
