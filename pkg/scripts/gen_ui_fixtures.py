#!/usr/bin/env python3
"""Record service payloads as fixtures for the browser client's tests.

The frontend suite (frontend/test/) runs under vitest with no Python
available, so it replays these recorded responses instead of talking
to a live service.  Everything here goes through the real HTTP app;
nothing is composed by hand.

Run from the repository root after changing the serializer, the
mutation corpus, or the bank:

    python3 scripts/gen_ui_fixtures.py
"""
from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from proofcheck.bank import load_bank
from proofcheck.service import create_app

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
MUTATIONS = ROOT / "tests" / "data" / "mutations"
OUT = ROOT / "frontend" / "test" / "fixtures"


def dump(name: str, payload: object) -> None:
    text = json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    (OUT / name).write_text(text, "utf-8")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(load_bank(CORPUS / "exercises.bank")))

    def check(text: str, verbosity: str = "explained") -> dict:
        response = client.post("/api/check", json={"text": text, "verbosity": verbosity})
        assert response.status_code == 200, response.text
        return response.json()

    accepted_text = (CORPUS / "fig1-text1.txt").read_text("utf-8")
    dump("accepted.json", {"text": accepted_text, "response": check(accepted_text)})

    # one entry per mutant, in name order so reruns diff cleanly
    mutants = []
    for path in sorted(MUTATIONS.glob("*.txt")):
        text = path.read_text("utf-8")
        mutants.append({"name": path.stem, "text": text, "response": check(text)})
    dump("mutations.json", mutants)

    # same document with its terminator cut off: the one item then
    # attaches to the whole proof, not to a sentence
    no_qed = accepted_text[: accepted_text.rindex("qed.")]
    dump("no-qed.json", {"text": no_qed, "response": check(no_qed)})

    listing = client.get("/api/exercises")
    assert listing.status_code == 200
    detail = client.get("/api/exercises/predict-parity")
    assert detail.status_code == 200
    fix = client.get("/api/exercises/fix-div4")
    assert fix.status_code == 200
    dump(
        "exercises.json",
        {"listing": listing.json(), "predict": detail.json(), "fix": fix.json()},
    )

    # predict-feedback round trips: labels are taken from the service's
    # own "actual" answer, so the perfect run is correct by construction
    exercise = detail.json()
    full_text = exercise["statement"] + exercise["attachment"]
    sentences = check(full_text, verbosity="terse")
    probe = client.post(
        "/api/predict-check",
        json={
            "exercise-id": "predict-parity",
            "predictions": ["ok"] * len(sentences["sentence-verdicts"]),
        },
    )
    assert probe.status_code == 200, probe.text
    actual = probe.json()["actual"]
    perfect = client.post(
        "/api/predict-check",
        json={"exercise-id": "predict-parity", "predictions": actual},
    )
    assert perfect.status_code == 200
    assert perfect.json()["diff"] == []
    flipped = list(actual)
    target = next((i for i, label in enumerate(flipped) if label != "ok"), 0)
    flipped[target] = "ok" if flipped[target] != "ok" else "iii"
    one_wrong = client.post(
        "/api/predict-check",
        json={"exercise-id": "predict-parity", "predictions": flipped},
    )
    assert one_wrong.status_code == 200
    assert len(one_wrong.json()["diff"]) == 1
    dump(
        "predict.json",
        {
            "exercise-id": "predict-parity",
            "statement": exercise["statement"],
            "attachment": exercise["attachment"],
            "sentences-response": sentences,
            "perfect": {"predictions": actual, "response": perfect.json()},
            "one-wrong": {"predictions": flipped, "response": one_wrong.json()},
        },
    )

    # error bodies the client must surface as toasts
    samples = []
    for name, response in (
        ("malformed-json", client.post("/api/check", content=b"{not json")),
        ("missing-text", client.post("/api/check", json={})),
        ("unknown-exercise", client.get("/api/exercises/nope")),
        (
            "bad-label",
            client.post(
                "/api/predict-check",
                json={"exercise-id": "predict-parity", "predictions": ["vi"]},
            ),
        ),
    ):
        samples.append({"name": name, "status": response.status_code, "body": response.json()})
    dump("errors.json", samples)

    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
