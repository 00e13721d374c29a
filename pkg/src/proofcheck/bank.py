"""Exercise banks: instructor-authored exercise files.

A bank is a human-editable UTF-8 text file.  Records start with a line
``--- exercise <id>``; inside a record, ``domain:`` and ``mode:`` are
single-line fields while ``statement:`` and ``attachment:`` open blocks
of two-space indented text.  Blank lines and ``#`` comments between
records are ignored.  See docs/bank-format.md for the grammar.

Loading validates every exercise: the statement must parse and
typecheck as an exercise header with a goal, predict-feedback and
fix-the-proof exercises need an attachment, and a fix-the-proof
attachment must actually be rejected by the checker (an accepted
"faulty" proof is a broken exercise).  One bad record rejects the
whole bank, naming the offending exercise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from . import engine, logic
from .cnl import parser
from .prover import DEFAULT_LIMITS, Limits

DOMAINS = ("number-theory", "set-theory", "propositional")
MODES = ("prove", "predict-feedback", "fix-the-proof")

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9-]*$")


class BankParseError(Exception):
    """A bank file could not be loaded; names the offending exercise."""

    def __init__(self, exercise_id: str | None, reason: str) -> None:
        self.exercise_id = exercise_id
        self.reason = reason
        where = f"exercise {exercise_id!r}" if exercise_id else "bank"
        super().__init__(f"{where}: {reason}")


@dataclass(frozen=True)
class Exercise:
    """One exercise: a statement header plus an optional attached proof."""

    exercise_id: str
    domain: str
    mode: str
    statement: str
    attachment: str | None = None

    @property
    def full_text(self) -> str | None:
        """Statement and attachment combined into one checkable document."""
        if self.attachment is None:
            return None
        return self.statement + self.attachment


def _normalize_block(lines: list[str]) -> str:
    while lines and not lines[-1].strip():
        lines.pop()
    return "".join(line + "\n" for line in lines)


def parse_bank(text: str) -> list[Exercise]:
    """Parse the bank syntax; field values are not validated here."""
    exercises: list[Exercise] = []
    current: dict | None = None
    block_key: str | None = None

    def finish() -> None:
        nonlocal current, block_key
        if current is None:
            return
        ex_id = current["id"]
        for key in ("domain", "mode", "statement"):
            if current.get(key) is None:
                raise BankParseError(ex_id, f"missing required field {key!r}")
        exercises.append(
            Exercise(
                exercise_id=ex_id,
                domain=current["domain"],
                mode=current["mode"],
                statement=_normalize_block(current["statement"]),
                attachment=(
                    _normalize_block(current["attachment"])
                    if current.get("attachment") is not None
                    else None
                ),
            )
        )
        current, block_key = None, None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if line.startswith("--- exercise"):
            finish()
            ex_id = line[len("--- exercise") :].strip()
            if not _ID_RE.match(ex_id):
                raise BankParseError(None, f"line {number}: bad exercise id {ex_id!r}")
            if any(e.exercise_id == ex_id for e in exercises):
                raise BankParseError(ex_id, "duplicate exercise id")
            current = {"id": ex_id, "domain": None, "mode": None, "statement": None, "attachment": None}
            block_key = None
            continue
        if current is None:
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            raise BankParseError(None, f'line {number}: expected "--- exercise <id>", found {line!r}')
        if block_key is not None and (line.startswith("  ") or not line.strip()):
            current[block_key].append(line[2:] if line.startswith("  ") else "")
            continue
        block_key = None
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped in ("statement:", "attachment:"):
            key = stripped[:-1]
            if current[key] is not None:
                raise BankParseError(current["id"], f"duplicate field {key!r}")
            current[key] = []
            block_key = key
            continue
        match = re.match(r"^(domain|mode):\s*(\S+)\s*$", stripped)
        if match:
            key, value = match.groups()
            if current[key] is not None:
                raise BankParseError(current["id"], f"duplicate field {key!r}")
            current[key] = value
            continue
        raise BankParseError(current["id"], f"line {number}: unrecognized line {line!r}")
    finish()
    return exercises


def validate_exercise(exercise: Exercise, limits: Limits = DEFAULT_LIMITS) -> None:
    """Check the semantic invariants of one exercise; raises BankParseError."""
    ex_id = exercise.exercise_id
    if exercise.domain not in DOMAINS:
        raise BankParseError(ex_id, f"unknown domain {exercise.domain!r}; expected one of {', '.join(DOMAINS)}")
    if exercise.mode not in MODES:
        raise BankParseError(ex_id, f"unknown mode {exercise.mode!r}; expected one of {', '.join(MODES)}")

    probe = exercise.statement + "Proof:\nqed.\n"
    result = parser.parse_document(probe)
    if result.document is None or result.issues:
        reason = result.issues[0].message if result.issues else "statement is empty"
        raise BankParseError(ex_id, f"statement does not parse as an exercise header: {reason}")
    if result.document.goal is None:
        raise BankParseError(ex_id, 'statement has no goal; end it with "Prove: ..."')
    try:
        engine.init_state(result.document, limits)
    except (logic.TypeIssue, ValueError) as exc:
        raise BankParseError(ex_id, f"statement does not typecheck: {exc}") from None

    if exercise.mode == "prove":
        if exercise.attachment is not None:
            raise BankParseError(ex_id, "prove exercises take no attachment")
        return
    if exercise.attachment is None:
        raise BankParseError(ex_id, f"{exercise.mode} exercises need an attachment")
    report = engine.check_document(exercise.full_text, limits=limits)
    if report.document is None:
        raise BankParseError(ex_id, "attachment is not processable as a proof text")
    if exercise.mode == "fix-the-proof" and report.accepted:
        raise BankParseError(ex_id, "fix-the-proof attachment is accepted by the checker; nothing to fix")


def load_bank(path: str | Path, limits: Limits = DEFAULT_LIMITS) -> tuple[Exercise, ...]:
    """Load and fully validate a bank file."""
    text = Path(path).read_text(encoding="utf-8")
    exercises = parse_bank(text)
    for exercise in exercises:
        validate_exercise(exercise, limits)
    return tuple(exercises)
