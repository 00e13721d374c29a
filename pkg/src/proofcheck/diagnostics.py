"""Feedback items and the catalog of recognizable reasoning errors.

The checker reports problems in five categories:

  (i)   textual: the sentence could not be read at all;
  (ii)  type errors: a well-formed sentence uses a variable at the wrong
        sort, or a number where a statement belongs;
  (iii) unverified steps: a readable, well-typed claim that does not
        follow by any checking rule;
  (iv)  error patterns: a recognized classical mistake behind an
        unverified step (never reported on its own; it refines a (iii));
  (v)   goal status: whether the stated goal was actually reached.

Pattern records live in a plain-text catalog.  Every inference record is
checked for genuine invalidity at load time and every rewrite record for
polynomial inequality, so a typo in the catalog fails loudly rather than
silently teaching nonsense.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterator, Sequence

from . import algebra, logic, prover
from .cnl import MalformedFormula, parse_formula_text, slice_bytes
from .logic import (
    And,
    Divides,
    Eq,
    Even,
    Falsum,
    Formula,
    Implies,
    In,
    IntConst,
    Not,
    Odd,
    Or,
    Pow,
    PropVar,
    SemType,
    SetVar,
    Span,
    Subset,
    Term,
    TypeContext,
    TypeIssue,
    TypeMismatch,
    Var,
    collapse_not,
)
from .prover import Countermodel, Limits


class Category(Enum):
    TEXTUAL = "i"
    TYPE = "ii"
    UNVERIFIED = "iii"
    PATTERN = "iv"
    GOAL = "v"

    def __str__(self) -> str:
        return self.value


#: Categories whose error-severity items block acceptance.  A pattern
#: item only ever refines an unverified step, so it never blocks on its
#: own.
BLOCKING_CATEGORIES = frozenset(
    {Category.TEXTUAL, Category.TYPE, Category.UNVERIFIED, Category.GOAL}
)


@dataclass(frozen=True)
class FeedbackItem:
    """One remark addressed to the author of the proof."""

    item_id: str
    category: Category
    severity: str  # "error" | "warning" | "info"
    message: str
    sentence_index: int | None = None
    span: Span | None = None
    pattern_id: str | None = None
    refines: str | None = None
    countermodel: Countermodel | None = None
    hint: str | None = None

    @property
    def blocking(self) -> bool:
        return self.severity == "error" and self.category in BLOCKING_CATEGORIES


def countermodel_sentence(countermodel: Countermodel) -> str:
    """The fixed prose form in which countermodels are shown to students."""
    return (
        f"Consider: {countermodel.describe()}. Then all your assumptions"
        " hold but your claim fails."
    )


# --------------------------------------------------------------------------
# The pattern catalog


class CatalogError(Exception):
    def __init__(self, line_number: int, reason: str) -> None:
        super().__init__(f"pattern catalog line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


@dataclass(frozen=True)
class InferencePattern:
    pattern_id: str
    premises: tuple[Formula, ...]
    claim: Formula
    message: str


@dataclass(frozen=True)
class RewritePattern:
    pattern_id: str
    faulty_lhs: Term
    faulty_rhs: Term
    message: str


PatternRecord = InferencePattern | RewritePattern


@dataclass(frozen=True)
class PatternMatch:
    pattern_id: str
    message: str


@dataclass(frozen=True)
class PatternCatalog:
    records: tuple[PatternRecord, ...]

    @property
    def pattern_ids(self) -> tuple[str, ...]:
        seen: list[str] = []
        for record in self.records:
            if record.pattern_id not in seen:
                seen.append(record.pattern_id)
        return tuple(seen)

    def _matching_records(
        self,
        facts: Sequence[Formula],
        claim: Formula,
        limits: Limits,
    ) -> Iterator[PatternRecord]:
        eqs = [f for f in facts if isinstance(f, Eq)]
        core = collapse_not(claim)
        for record in self.records:
            if isinstance(record, InferencePattern):
                if _match_inference(record, facts, claim):
                    yield record
            elif isinstance(core, Eq) and _match_rewrite(record, core, eqs, limits):
                yield record

    def matches(
        self,
        facts: Sequence[Formula],
        claim: Formula,
        limits: Limits = prover.DEFAULT_LIMITS,
    ) -> tuple[PatternMatch, ...]:
        """All applicable records in catalog order, one entry per id."""
        found: list[PatternMatch] = []
        for record in self._matching_records(facts, claim, limits):
            if all(m.pattern_id != record.pattern_id for m in found):
                found.append(PatternMatch(record.pattern_id, record.message))
        return tuple(found)

    def diagnose(
        self,
        facts: Sequence[Formula],
        claim: Formula,
        limits: Limits = prover.DEFAULT_LIMITS,
    ) -> PatternMatch | None:
        """The first catalog record that explains a failed step, if any."""
        for record in self._matching_records(facts, claim, limits):
            return PatternMatch(record.pattern_id, record.message)
        return None


def detect_patterns(
    claim: Formula,
    kb: Sequence[Formula],
    catalog: PatternCatalog,
    limits: Limits = prover.DEFAULT_LIMITS,
) -> list[str]:
    """All pattern ids explaining a failed step, in catalog order.

    Only call this for claims the prover did not verify; a pattern can
    never override a verified step.
    """
    return [m.pattern_id for m in catalog.matches(kb, claim, limits)]


def load_catalog(
    text: str, limits: Limits = prover.DEFAULT_LIMITS
) -> PatternCatalog:
    records: list[PatternRecord] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [part.strip() for part in line.split("|", 3)]
        if len(parts) != 4:
            raise CatalogError(
                line_number, f"expected 4 fields separated by '|', got {len(parts)}"
            )
        pattern_id, premise_field, claim_field, message = parts
        if not pattern_id or " " in pattern_id:
            raise CatalogError(line_number, "the id must be a single kebab-case word")
        if not message:
            raise CatalogError(line_number, "the message must not be empty")
        try:
            premises = tuple(
                parse_formula_text(p.strip(), schema=True)
                for p in premise_field.split(";")
                if p.strip()
            )
            claim = parse_formula_text(claim_field, schema=True)
        except (MalformedFormula, logic.AssumedNonProposition) as err:
            raise CatalogError(line_number, f"unparseable schema: {err}") from None
        if not premises and isinstance(claim, Eq):
            # No premises and an equation: the record is a faulty identity.
            _validate_rewrite(line_number, claim.lhs, claim.rhs, limits)
            records.append(
                RewritePattern(pattern_id, claim.lhs, claim.rhs, message)
            )
        else:
            _validate_inference(line_number, premises, claim, limits)
            records.append(InferencePattern(pattern_id, premises, claim, message))
    return PatternCatalog(tuple(records))


@lru_cache(maxsize=None)
def load_default_catalog(limits: Limits = prover.DEFAULT_LIMITS) -> PatternCatalog:
    text = (
        resources.files("proofcheck").joinpath("data/patterns.txt").read_text("utf-8")
    )
    return load_catalog(text, limits)


def load_catalog_file(
    path: str, limits: Limits = prover.DEFAULT_LIMITS
) -> PatternCatalog:
    with open(path, encoding="utf-8") as handle:
        return load_catalog(handle.read(), limits)


# --------------------------------------------------------------------------
# Load-time validation: the catalog must describe genuine errors


def _strip_term(term: Term) -> Term:
    renames = {
        name: Var(name.lstrip("?"))
        for name in logic.term_variables(term)
        if name.startswith("?")
    }
    return algebra.substitute_once(term, renames)


def _strip_formula(formula: Formula) -> Formula:
    if isinstance(formula, PropVar):
        return PropVar(formula.name.lstrip("?"))
    if isinstance(formula, Not):
        return Not(_strip_formula(formula.arg))
    if isinstance(formula, (And, Or, Implies)):
        return type(formula)(
            _strip_formula(formula.left), _strip_formula(formula.right)
        )
    if isinstance(formula, Eq):
        return Eq(_strip_term(formula.lhs), _strip_term(formula.rhs))
    if isinstance(formula, In):
        return In(_strip_term(formula.element), _strip_term(formula.container))
    if isinstance(formula, Subset):
        return Subset(_strip_term(formula.left), _strip_term(formula.right))
    if isinstance(formula, (Even, Odd)):
        return type(formula)(_strip_term(formula.arg))
    if isinstance(formula, Divides):
        return Divides(_strip_term(formula.divisor), _strip_term(formula.dividend))
    return formula


def _typed_instance(
    line_number: int, formulas: Sequence[Formula]
) -> list[Formula]:
    """Instantiate schema variables as concrete typed variables."""
    stripped = [_strip_formula(f) for f in formulas]
    guesses: dict[str, SemType] = {}
    for formula in stripped:
        for node in logic.iter_nodes(formula):
            if isinstance(node, PropVar):
                guesses[node.name] = SemType.PROPOSITION
            elif isinstance(node, (Var, SetVar)):
                guesses.setdefault(node.name, SemType.INTEGER)
    for _ in range(len(guesses) + 1):
        ctx = TypeContext()
        for name, sem_type in guesses.items():
            ctx = ctx.declare(name, sem_type)
        try:
            return [logic.typecheck(f, ctx) for f in stripped]
        except TypeMismatch as err:
            guesses[err.name] = err.required
        except TypeIssue as err:
            raise CatalogError(line_number, f"untypeable schema: {err}") from None
    raise CatalogError(line_number, "the schema cannot be typed consistently")


def _validate_inference(
    line_number: int,
    premises: tuple[Formula, ...],
    claim: Formula,
    limits: Limits,
) -> None:
    instance = _typed_instance(line_number, list(premises) + [claim])
    try:
        verdict = prover.entails_ground(instance[:-1], instance[-1], limits)
    except prover.TooManyAtoms as err:
        raise CatalogError(line_number, str(err)) from None
    if verdict.verified:
        raise CatalogError(
            line_number,
            "the premises actually entail the claim; this is not an error pattern",
        )
    if not verdict.refuted:
        raise CatalogError(
            line_number,
            "no countermodel could be exhibited; the schema lies outside"
            " the checkable fragment",
        )


def _validate_rewrite(
    line_number: int, lhs: Term, rhs: Term, limits: Limits
) -> None:
    try:
        left = algebra.normalize(_strip_term(lhs), limits.max_exponent)
        right = algebra.normalize(_strip_term(rhs), limits.max_exponent)
    except algebra.AlgebraError as err:
        raise CatalogError(line_number, str(err)) from None
    if left == right:
        raise CatalogError(
            line_number,
            "the two sides are the same polynomial; this identity is not faulty",
        )


# --------------------------------------------------------------------------
# Unification of schemas against concrete formulas

_Bindings = dict[str, object]


def _is_schema_formula_var(node: Formula) -> bool:
    return isinstance(node, PropVar) and node.name.startswith("?")


def _is_schema_term_var(node: Term) -> bool:
    return isinstance(node, Var) and node.name.startswith("?")


def _bind(bindings: _Bindings, name: str, value: object) -> _Bindings | None:
    known = bindings.get(name)
    if known is None:
        extended = dict(bindings)
        extended[name] = value
        return extended
    return bindings if known == value else None


def _unify_term(schema: Term, concrete: Term, bindings: _Bindings) -> _Bindings | None:
    if _is_schema_term_var(schema):
        return _bind(bindings, schema.name, concrete)
    if isinstance(schema, (Var, SetVar)):
        if isinstance(concrete, (Var, SetVar)) and schema.name == concrete.name:
            return bindings
        return None
    if isinstance(schema, IntConst):
        return (
            bindings
            if isinstance(concrete, IntConst) and schema.value == concrete.value
            else None
        )
    if type(schema) is not type(concrete):
        return None
    if isinstance(schema, Pow):
        if schema.exponent != concrete.exponent:
            return None
        return _unify_term(schema.base, concrete.base, bindings)
    if isinstance(schema, logic.Neg):
        return _unify_term(schema.arg, concrete.arg, bindings)
    if isinstance(schema, logic.Pair):
        step = _unify_term(schema.fst, concrete.fst, bindings)
        return None if step is None else _unify_term(schema.snd, concrete.snd, step)
    # Remaining binary term constructors share a left/right layout.
    step = _unify_term(schema.left, concrete.left, bindings)
    return None if step is None else _unify_term(schema.right, concrete.right, step)


def _unify_formula(
    schema: Formula, concrete: Formula, bindings: _Bindings
) -> _Bindings | None:
    if _is_schema_formula_var(schema):
        return _bind(bindings, schema.name, concrete)
    if type(schema) is not type(concrete):
        return None
    if isinstance(schema, PropVar):
        return bindings if schema.name == concrete.name else None
    if isinstance(schema, Falsum):
        return bindings
    if isinstance(schema, Not):
        return _unify_formula(schema.arg, concrete.arg, bindings)
    if isinstance(schema, (And, Or, Implies)):
        step = _unify_formula(schema.left, concrete.left, bindings)
        if step is None:
            return None
        return _unify_formula(schema.right, concrete.right, step)
    if isinstance(schema, Eq):
        step = _unify_term(schema.lhs, concrete.lhs, bindings)
        return None if step is None else _unify_term(schema.rhs, concrete.rhs, step)
    if isinstance(schema, In):
        step = _unify_term(schema.element, concrete.element, bindings)
        if step is None:
            return None
        return _unify_term(schema.container, concrete.container, step)
    if isinstance(schema, Subset):
        step = _unify_term(schema.left, concrete.left, bindings)
        return None if step is None else _unify_term(schema.right, concrete.right, step)
    if isinstance(schema, (Even, Odd)):
        return _unify_term(schema.arg, concrete.arg, bindings)
    if isinstance(schema, Divides):
        step = _unify_term(schema.divisor, concrete.divisor, bindings)
        if step is None:
            return None
        return _unify_term(schema.dividend, concrete.dividend, step)
    return None


def _deep_collapse(formula: Formula) -> Formula:
    """Strip double negations throughout, not only at the top."""
    formula = collapse_not(formula)
    if isinstance(formula, Not):
        return Not(_deep_collapse(formula.arg))
    if isinstance(formula, (And, Or, Implies)):
        return type(formula)(
            _deep_collapse(formula.left), _deep_collapse(formula.right)
        )
    return formula


def _parity_variants(formula: Formula) -> Iterator[Formula]:
    core = _deep_collapse(formula)
    variants = [formula, core]
    if isinstance(core, Even):
        variants.append(Not(Odd(core.arg)))
    elif isinstance(core, Odd):
        variants.append(Not(Even(core.arg)))
    elif isinstance(core, Not):
        inner = core.arg
        if isinstance(inner, Even):
            variants.append(Odd(inner.arg))
        elif isinstance(inner, Odd):
            variants.append(Even(inner.arg))
    seen: list[Formula] = []
    for variant in variants:
        if variant not in seen:
            seen.append(variant)
            yield variant


def _match_inference(
    record: InferencePattern, facts: Sequence[Formula], claim: Formula
) -> bool:
    for claim_variant in _parity_variants(claim):
        bindings = _unify_formula(record.claim, claim_variant, {})
        if bindings is None:
            continue
        if _match_premises(record.premises, facts, bindings):
            return True
    return False


def _match_premises(
    schemas: Sequence[Formula], facts: Sequence[Formula], bindings: _Bindings
) -> bool:
    if not schemas:
        return True
    head, rest = schemas[0], schemas[1:]
    for fact in facts:
        for variant in _parity_variants(fact):
            extended = _unify_formula(head, variant, bindings)
            if extended is not None and _match_premises(rest, facts, extended):
                return True
    return False


# --------------------------------------------------------------------------
# Rewrite matching: undo one faulty step inside a failed equation


def _term_paths(term: Term) -> Iterator[tuple[tuple[str, ...], Term]]:
    yield (), term
    for f in dataclasses.fields(term):
        if f.name == "span":
            continue
        child = getattr(term, f.name)
        if isinstance(child, logic.Node) and not logic.is_formula(child):
            for path, sub in _term_paths(child):
                yield (f.name, *path), sub


def _replace_at(term: Term, path: tuple[str, ...], replacement: Term) -> Term:
    if not path:
        return replacement
    head, rest = path[0], path[1:]
    child = getattr(term, head)
    return dataclasses.replace(
        term, **{head: _replace_at(child, rest, replacement)}
    )


def _instantiate(schema: Term, bindings: _Bindings) -> Term:
    renames = {
        name: value
        for name, value in bindings.items()
        if isinstance(value, logic.Node) and not logic.is_formula(value)
    }
    return algebra.substitute_once(schema, renames)


def _match_rewrite(
    record: RewritePattern, claim: Eq, eqs: Sequence[Eq], limits: Limits
) -> bool:
    sides = (claim.lhs, claim.rhs)
    for index, side in enumerate(sides):
        other = sides[1 - index]
        try:
            applied = algebra.apply_equalities(side, eqs)
        except algebra.AlgebraError:
            continue
        for path, sub in _term_paths(applied):
            bindings = _unify_term(record.faulty_lhs, sub, {})
            if bindings is None:
                continue
            repaired = _replace_at(
                applied, path, _instantiate(record.faulty_rhs, bindings)
            )
            try:
                if algebra.equal_under(eqs, repaired, other, limits.max_exponent):
                    return True
            except algebra.AlgebraError:
                continue
    return False


# --------------------------------------------------------------------------
# Rendering reports as plain text


def render_feedback(report, verbosity: str = "terse") -> str:
    """Render a checking report as a plain-text feedback document.

    Terse mode gives the status, one check-mark line per sentence, and
    one line per feedback item with the offending text quoted.  Explained
    mode also shows the rule trace for verified sentences, hints, and
    countermodels in prose.
    """
    if verbosity not in ("terse", "explained"):
        raise ValueError('verbosity must be "terse" or "explained"')
    explained = verbosity == "explained"
    lines = [report.status]
    source = report.document.source if report.document is not None else None
    for sentence in report.sentences:
        mark = "ok  " if sentence.status == "ok" else "FLAG"
        text = " ".join(sentence.text.split())
        lines.append(f"  {mark} #{sentence.index}  {text}")
        if explained:
            lines.extend(f"           {note}" for note in sentence.notes)
    if report.items:
        lines.append("")
    for item in report.items:
        where = (
            f" sentence #{item.sentence_index}"
            if item.sentence_index is not None
            else ""
        )
        lines.append(f"{item.item_id} ({item.category}){where}: {item.message}")
        if source is not None and item.span is not None:
            quoted = " ".join(slice_bytes(source, item.span).split())
            if quoted:
                lines.append(f'    at: "{quoted}"')
        if explained and item.hint:
            lines.append(f"    hint: {item.hint}")
        if explained and item.countermodel is not None:
            lines.append(f"    {countermodel_sentence(item.countermodel)}")
    return "\n".join(lines) + "\n"
