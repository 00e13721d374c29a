"""HTTP JSON service backing the web editor.

Endpoints:
  POST /api/check            check a submission, optionally against an exercise
  GET  /api/exercises        bank listing
  GET  /api/exercises/{id}   one exercise, with attachment when present
  POST /api/predict-check    compare predicted feedback categories with actual

Error contract: 400 for malformed JSON or missing fields, 404 for
unknown exercise ids, 422 only for non-UTF-8 or oversize (> 64 KiB)
bodies.  A submission the checker cannot process is NOT an error: it
yields a normal 200 response whose items are category-(i) diagnostics.

The service is stateless: the bank and pattern catalog are loaded once
and every request is an independent pure computation.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import diagnostics, engine, serialize
from .bank import Exercise
from .prover import DEFAULT_LIMITS, Limits

MAX_BODY_BYTES = 64 * 1024

PREDICTION_LABELS = ("ok", "i", "ii", "iii", "iv", "v")


class _RequestFault(Exception):
    def __init__(self, status_code: int, reason: str) -> None:
        self.status_code = status_code
        self.reason = reason


def _fail(status_code: int, reason: str) -> JSONResponse:
    return JSONResponse({"schema": serialize.SCHEMA, "error": reason}, status_code=status_code)


async def _read_payload(request: Request) -> dict:
    raw = await request.body()
    if len(raw) > MAX_BODY_BYTES:
        raise _RequestFault(422, f"request body exceeds {MAX_BODY_BYTES} bytes")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise _RequestFault(422, "request body is not valid UTF-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError:
        raise _RequestFault(400, "malformed JSON")
    if not isinstance(payload, dict):
        raise _RequestFault(400, "expected a JSON object")
    return payload


def _exercise_summary(exercise: Exercise) -> dict:
    return {
        "id": exercise.exercise_id,
        "domain": exercise.domain,
        "mode": exercise.mode,
        "statement": exercise.statement,
    }


def _exercise_detail(exercise: Exercise) -> dict:
    data = _exercise_summary(exercise)
    data["attachment"] = exercise.attachment
    return data


def _actual_labels(report: engine.Report) -> list[str]:
    labels = []
    for sentence in report.sentences:
        label = "ok"
        for item in report.items:
            if item.sentence_index == sentence.index and item.severity == "error":
                label = str(item.category)
                break
        labels.append(label)
    return labels


def create_app(
    exercises: tuple[Exercise, ...] = (),
    limits: Limits = DEFAULT_LIMITS,
) -> FastAPI:
    catalog = diagnostics.load_default_catalog(limits)
    by_id = {exercise.exercise_id: exercise for exercise in exercises}
    app = FastAPI(title="proofcheck", docs_url=None, redoc_url=None)

    @app.exception_handler(_RequestFault)
    async def _on_fault(request: Request, fault: _RequestFault) -> JSONResponse:
        return _fail(fault.status_code, fault.reason)

    @app.get("/api/exercises")
    async def list_exercises() -> JSONResponse:
        return JSONResponse(
            {
                "schema": serialize.SCHEMA,
                "exercises": [_exercise_summary(e) for e in exercises],
            }
        )

    @app.get("/api/exercises/{exercise_id}")
    async def get_exercise(exercise_id: str) -> JSONResponse:
        exercise = by_id.get(exercise_id)
        if exercise is None:
            return _fail(404, f"unknown exercise id {exercise_id!r}")
        return JSONResponse({"schema": serialize.SCHEMA, **_exercise_detail(exercise)})

    @app.post("/api/check")
    async def check(request: Request) -> JSONResponse:
        payload = await _read_payload(request)
        text = payload.get("text")
        if not isinstance(text, str):
            return _fail(400, 'field "text" (string) is required')
        verbosity = payload.get("verbosity", "terse")
        if verbosity not in serialize.VERBOSITIES:
            return _fail(400, f'field "verbosity" must be one of {", ".join(serialize.VERBOSITIES)}')
        exercise_id = payload.get("exercise-id")
        if exercise_id is None:
            report = engine.check_document(text, catalog, limits)
            return JSONResponse(serialize.response_payload(report, verbosity))
        if not isinstance(exercise_id, str) or exercise_id not in by_id:
            return _fail(404, f"unknown exercise id {exercise_id!r}")
        exercise = by_id[exercise_id]
        report = engine.check_document(exercise.statement + text, catalog, limits)
        body = serialize.response_payload(report, verbosity)
        return JSONResponse(
            serialize.shift_payload(body, len(exercise.statement.encode("utf-8")))
        )

    @app.post("/api/predict-check")
    async def predict_check(request: Request) -> JSONResponse:
        payload = await _read_payload(request)
        exercise_id = payload.get("exercise-id")
        if not isinstance(exercise_id, str):
            return _fail(400, 'field "exercise-id" (string) is required')
        exercise = by_id.get(exercise_id)
        if exercise is None:
            return _fail(404, f"unknown exercise id {exercise_id!r}")
        if exercise.mode != "predict-feedback":
            return _fail(400, f"exercise {exercise_id!r} is not a predict-feedback exercise")
        predictions = payload.get("predictions")
        if not isinstance(predictions, list) or not all(
            isinstance(p, str) for p in predictions
        ):
            return _fail(400, 'field "predictions" (list of category labels) is required')
        bad = [p for p in predictions if p not in PREDICTION_LABELS]
        if bad:
            return _fail(400, f"unknown prediction label {bad[0]!r}")
        report = engine.check_document(exercise.full_text, catalog, limits)
        actual = _actual_labels(report)
        if len(predictions) != len(actual):
            return _fail(
                400,
                f"expected {len(actual)} predictions, one per sentence, got {len(predictions)}",
            )
        diff = [
            {"sentence-index": i, "predicted": predicted, "actual": truth}
            for i, (predicted, truth) in enumerate(zip(predictions, actual))
            if predicted != truth
        ]
        return JSONResponse({"schema": serialize.SCHEMA, "diff": diff, "actual": actual})

    return app
