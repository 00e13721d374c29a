"""JSON serialization of check reports.

One serializer feeds both the CLI's --format json output and the HTTP
service, which keeps the two byte-compatible.  Top-level payloads carry
"schema": "1" so clients can detect format changes.  Key order is fixed
by construction, making dumps deterministic for golden-file tests.

Verbosity: "terse" carries the diagnostic core; "explained" adds the
hint and countermodel fields.
"""

from __future__ import annotations

from .diagnostics import FeedbackItem, countermodel_sentence
from .engine import Report, SentenceReport
from .prover import Countermodel

VERBOSITIES = ("terse", "explained")

SCHEMA = "1"


def countermodel_payload(countermodel: Countermodel) -> dict:
    return {
        "propositions": [[name, value] for name, value in countermodel.propositions],
        "memberships": [list(entry) for entry in countermodel.memberships],
        "prose": countermodel_sentence(countermodel),
    }


def item_payload(item: FeedbackItem, verbosity: str = "terse") -> dict:
    data = {
        "id": item.item_id,
        "category": str(item.category),
        "severity": item.severity,
        "message": item.message,
        "sentence-index": item.sentence_index,
        "span": list(item.span) if item.span is not None else None,
        "pattern-id": item.pattern_id,
        "refines": item.refines,
    }
    if verbosity == "explained":
        data["hint"] = item.hint
        data["countermodel"] = (
            countermodel_payload(item.countermodel) if item.countermodel is not None else None
        )
    return data


def sentence_payload(sentence: SentenceReport) -> dict:
    return {
        "index": sentence.index,
        "span": list(sentence.span),
        "text": sentence.text,
        "status": sentence.status,
        "notes": list(sentence.notes),
    }


def response_payload(report: Report, verbosity: str = "terse") -> dict:
    if verbosity not in VERBOSITIES:
        raise ValueError(f"unknown verbosity {verbosity!r}")
    return {
        "schema": SCHEMA,
        "status": "Accepted" if report.accepted else "Rejected",
        "items": [item_payload(item, verbosity) for item in report.items],
        "sentence-verdicts": [sentence_payload(s) for s in report.sentences],
    }


def shift_payload(body: dict, prefix_bytes: int) -> dict:
    """Remap spans and sentence indices from a statement-prefixed
    document onto the submitted text, dropping the prefix region.

    Used when a request names an exercise: the server checks the
    exercise statement plus the submission, but the response must be
    valid for the submission alone.
    """
    verdicts = [s for s in body["sentence-verdicts"] if s["span"][0] >= prefix_bytes]
    shift = len(body["sentence-verdicts"]) - len(verdicts)
    for verdict in verdicts:
        verdict["index"] -= shift
        verdict["span"] = [verdict["span"][0] - prefix_bytes, verdict["span"][1] - prefix_bytes]
    body["sentence-verdicts"] = verdicts
    for item in body["items"]:
        if item["span"] is not None and item["span"][0] >= prefix_bytes:
            item["span"] = [item["span"][0] - prefix_bytes, item["span"][1] - prefix_bytes]
        else:
            item["span"] = None
        index = item["sentence-index"]
        item["sentence-index"] = index - shift if index is not None and index >= shift else None
    return body
