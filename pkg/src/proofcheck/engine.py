"""Sentence-by-sentence execution of proof documents.

The engine folds a parsed document into an immutable :class:`ProofState`:
declarations extend the typing context, assumptions and verified claims
grow the knowledge base, and goal announcements open :class:`GoalFrame`
entries on a stack.  The first assumption of a proof part determines the
proof method (direct, contraposition, contradiction, or an element
argument for a subset goal) and rewrites the frame's target accordingly.

Everything a sentence asserts is kept even when it could not be
verified, so one mistake yields one diagnostic instead of a cascade;
the feedback items produced here carry categories (iii) unverified
step, (v) goal not reached, and (ii) for typing faults discovered
during execution.  Categories are defined in :mod:`.diagnostics`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, replace
from typing import Sequence

from . import algebra, diagnostics, logic, prover
from .cnl import parser
from .cnl.parser import ProblemDocument, ParseResult, SentenceAST, SentenceKind, SentenceSlot
from .diagnostics import Category, FeedbackItem, PatternCatalog
from .logic import Formula, SemType, TypeContext, TypeIssue
from .prover import DEFAULT_LIMITS, Limits, TooManyAtoms

Span = tuple[int, int]

#: Proof methods a goal frame can be argued by.  "case-split" is reserved
#: for exhaustion arguments; no sentence form produces it yet.
METHODS = ("direct", "contraposition", "contradiction", "case-split", "element")


@dataclass(frozen=True)
class GoalFrame:
    """One open proof obligation.

    ``original`` is the formula as announced; ``target`` is what still
    has to be established and changes when an assumption peels an
    implication or switches the method.  ``kb_mark`` records the size of
    the knowledge base when the frame opened: everything above it is
    local to this proof part and is dropped again on discharge.
    """

    original: Formula
    target: Formula
    method: str = "direct"
    kb_mark: int = 0
    opening_index: int | None = None
    discharged: bool = False


@dataclass(frozen=True)
class WitnessMarker:
    """Records an existence claim so a later pick can refer to it."""

    name: str
    body: Formula
    kb_mark: int


@dataclass(frozen=True)
class ProofState:
    """Immutable checking state; apply_sentence returns a new one."""

    ctx: TypeContext = field(default_factory=TypeContext)
    kb: tuple[Formula, ...] = ()
    frames: tuple[GoalFrame, ...] = ()
    pending: tuple[WitnessMarker, ...] = ()
    cursor: int = 0
    finished: bool = False
    trace: tuple[tuple[int, str], ...] = ()


@dataclass(frozen=True)
class SentenceReport:
    """Per-sentence verdict: ok, or flagged by at least one error item."""

    index: int
    span: Span
    text: str
    status: str
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Report:
    """Outcome of checking one document."""

    status: str
    items: tuple[FeedbackItem, ...]
    sentences: tuple[SentenceReport, ...]
    goal: Formula | None
    document: ProblemDocument | None

    @property
    def accepted(self) -> bool:
        return self.status == "Accepted"


class _Emitter:
    """Collects feedback items for one sentence with provisional ids."""

    def __init__(self, prefix: str) -> None:
        self.prefix = prefix
        self.items: list[FeedbackItem] = []

    def _emit(self, category: Category, severity: str, message: str, **kw) -> str:
        item_id = f"{self.prefix}n{len(self.items) + 1}"
        self.items.append(
            FeedbackItem(item_id=item_id, category=category, severity=severity, message=message, **kw)
        )
        return item_id

    def error(self, category: Category, message: str, **kw) -> str:
        return self._emit(category, "error", message, **kw)

    def info(self, category: Category, message: str, **kw) -> str:
        return self._emit(category, "info", message, **kw)


def _equalities(kb: Sequence[Formula]) -> tuple[logic.Eq, ...]:
    return tuple(f for f in kb if isinstance(f, logic.Eq))


def _article(noun: str) -> str:
    return "an" if noun[:1] in "aeiou" else "a"


def _closing_hint(target: Formula) -> str:
    if isinstance(target, logic.Falsum):
        return 'derive two conflicting facts, then finish with "This is a contradiction."'
    return f'a final sentence like "Thus {logic.render(target)}." would close this goal'


def _established(kb: Sequence[Formula], target: Formula, limits: Limits) -> bool:
    eqs = _equalities(kb)
    return any(prover.equivalent(fact, target, eqs, limits) for fact in kb)


def _element_names(element) -> tuple[str, ...]:
    if isinstance(element, logic.Var):
        return (element.name,)
    if isinstance(element, logic.Pair):
        names = []
        for part in (element.fst, element.snd):
            if isinstance(part, logic.Var):
                names.append(part.name)
        return tuple(names)
    return ()


def _trace(state: ProofState, index: int, note: str) -> tuple[tuple[int, str], ...]:
    return state.trace + ((index, note),)


def _do_declare(state, ast, em, catalog, limits):
    ctx = state.ctx
    for name in ast.variables:
        try:
            ctx = ctx.declare(name, ast.var_type)
        except logic.ShadowingError as exc:
            em.error(Category.TYPE, str(exc), span=exc.span or ast.span, sentence_index=ast.index)
    return replace(state, ctx=ctx, trace=_trace(state, ast.index, "declare"))


def _assume_hint(target: Formula) -> str:
    if isinstance(target, logic.Implies):
        return (
            f'to prove "{logic.render(target)}", assume "{logic.render(target.left)}"'
            f' (or "{logic.render(logic.negate(target.right))}" for contraposition)'
        )
    if isinstance(target, logic.Subset):
        return f'to show "{logic.render(target)}", let an element of {logic.render_term(target.left)} be given'
    return f'to argue by contradiction, assume "{logic.render(logic.negate(target))}"'


def _do_assume(state, ast, em, catalog, limits):
    ctx = state.ctx
    formula = ast.formula
    top = state.frames[-1] if state.frames else None

    # "Let (x,y) ∈ S." against a subset goal introduces the components.
    if top is not None and isinstance(top.target, logic.Subset) and isinstance(formula, logic.In):
        for name in _element_names(formula.element):
            if ctx.lookup(name) is None:
                ctx = ctx.declare(name, SemType.INTEGER)

    try:
        typed = logic.typecheck(formula, ctx)
    except TypeIssue as exc:
        em.error(Category.TYPE, str(exc), span=exc.span or ast.span, sentence_index=ast.index)
        return replace(state, ctx=ctx, trace=_trace(state, ast.index, "assume"))

    eqs = _equalities(state.kb)
    frames = state.frames
    note = "assume"
    matched = top is None
    if top is not None:
        target = top.target
        if isinstance(target, logic.Implies) and prover.equivalent(typed, target.left, eqs, limits):
            frames = frames[:-1] + (replace(top, target=target.right),)
            note, matched = "assume-antecedent", True
        elif isinstance(target, logic.Implies) and prover.equivalent(
            typed, logic.negate(target.right), eqs, limits
        ):
            frames = frames[:-1] + (
                replace(top, target=logic.negate(target.left), method="contraposition"),
            )
            note, matched = "assume-contraposition", True
        elif prover.equivalent(typed, logic.negate(target), eqs, limits):
            frames = frames[:-1] + (replace(top, target=logic.Falsum(), method="contradiction"),)
            note, matched = "assume-towards-contradiction", True
        elif (
            isinstance(target, logic.Subset)
            and isinstance(typed, logic.In)
            and (
                typed.container == target.left
                or prover.equivalent(typed, logic.In(typed.element, target.left), eqs, limits)
            )
        ):
            frames = frames[:-1] + (
                replace(top, target=logic.In(typed.element, target.right), method="element"),
            )
            note, matched = "let-element", True
    if not matched:
        em.error(
            Category.UNVERIFIED,
            f'this assumption does not match the current goal "{logic.render(top.target)}"',
            span=ast.span,
            sentence_index=ast.index,
            hint=_assume_hint(top.target),
        )
        note = "assume-unmatched"
    return replace(
        state, ctx=ctx, kb=state.kb + (typed,), frames=frames, trace=_trace(state, ast.index, note)
    )


def _do_exists(state, ast, em, catalog, limits):
    name = ast.variables[0]
    if state.ctx.lookup(name) is not None:
        em.error(
            Category.TYPE,
            f'the name "{name}" is already in use here; a witness needs a fresh name',
            span=ast.span,
            sentence_index=ast.index,
        )
        return replace(state, trace=_trace(state, ast.index, "exists-claim"))
    ctx = state.ctx.declare(name, ast.var_type)
    try:
        typed = logic.typecheck(ast.formula, ctx)
    except TypeIssue as exc:
        em.error(Category.TYPE, str(exc), span=exc.span or ast.span, sentence_index=ast.index)
        return replace(state, ctx=ctx, trace=_trace(state, ast.index, "exists-claim"))

    try:
        verdict = prover.justify_exists(state.kb, name, typed, limits)
    except TooManyAtoms:
        verdict = None
    if verdict is not None and verdict.verified:
        note = verdict.rule or "exists-claim"
    else:
        noun = ast.var_type.value
        em.error(
            Category.UNVERIFIED,
            f'no {noun} {name} with "{logic.render(typed)}" could be found from the facts in scope',
            span=ast.span,
            sentence_index=ast.index,
            hint=(
                'an existence claim must follow from the facts; for instance "x is even" '
                'justifies "there is an integer k such that x = 2k"'
            ),
        )
        note = "exists-unverified"
    marker = WitnessMarker(name, typed, len(state.kb))
    return replace(
        state,
        ctx=ctx,
        kb=state.kb + (typed,),
        pending=state.pending + (marker,),
        trace=_trace(state, ast.index, note),
    )


def _do_pick(state, ast, em, catalog, limits):
    name = ast.variables[0]
    known = state.ctx.lookup(name) is not None
    ctx = state.ctx if known else state.ctx.declare(name, ast.var_type)
    try:
        typed = logic.typecheck(ast.formula, ctx)
    except TypeIssue as exc:
        em.error(Category.TYPE, str(exc), span=exc.span or ast.span, sentence_index=ast.index)
        return replace(state, ctx=ctx, trace=_trace(state, ast.index, "pick"))

    eqs = _equalities(state.kb)
    matched = None
    for pos, marker in enumerate(state.pending):
        if known:
            if marker.name != name:
                continue
            candidate = marker.body
        else:
            rename = {marker.name: logic.Var(name)}
            candidate = logic.map_terms(marker.body, lambda t: algebra.substitute_once(t, rename))
        if prover.equivalent(typed, candidate, eqs, limits):
            matched = pos
            break
    if matched is not None:
        pending = state.pending[:matched] + state.pending[matched + 1 :]
        return replace(
            state,
            ctx=ctx,
            kb=state.kb + (typed,),
            pending=pending,
            trace=_trace(state, ast.index, "pick"),
        )
    if known:
        em.error(
            Category.TYPE,
            f'the name "{name}" is already in use here; a witness needs a fresh name',
            span=ast.span,
            sentence_index=ast.index,
        )
        note = "pick"
    else:
        noun = ast.var_type.value
        em.error(
            Category.UNVERIFIED,
            f"witness not justified: no earlier sentence establishes that such {_article(noun)} {noun} exists",
            span=ast.span,
            sentence_index=ast.index,
            hint=(
                f'first claim existence, e.g. "Then there is {_article(noun)} {noun} {name} '
                f'such that {logic.render(typed)}."'
            ),
        )
        note = "pick-unjustified"
    return replace(state, ctx=ctx, kb=state.kb + (typed,), trace=_trace(state, ast.index, note))


def _do_announce(state, ast, em, catalog, limits):
    if ast.formula is None:
        if not state.frames:
            em.error(
                Category.UNVERIFIED,
                "there is no active goal at this point",
                span=ast.span,
                sentence_index=ast.index,
            )
            return replace(state, trace=_trace(state, ast.index, "announce"))
        top = state.frames[-1]
        if top.method == ast.method:
            return replace(state, trace=_trace(state, ast.index, "re-announcement"))
        if ast.method == "contraposition":
            if isinstance(top.target, logic.Implies):
                flipped = logic.Implies(
                    logic.negate(top.target.right), logic.negate(top.target.left)
                )
                frames = state.frames[:-1] + (
                    replace(top, target=flipped, method="contraposition"),
                )
                return replace(
                    state, frames=frames, trace=_trace(state, ast.index, "announce-contraposition")
                )
            em.error(
                Category.UNVERIFIED,
                f'contraposition applies to if-then goals; "{logic.render(top.target)}" is not of this shape',
                span=ast.span,
                sentence_index=ast.index,
            )
            return replace(state, trace=_trace(state, ast.index, "announce"))
        if ast.method == "contradiction":
            frames = state.frames[:-1] + (replace(top, method="contradiction"),)
            return replace(
                state, frames=frames, trace=_trace(state, ast.index, "announce-contradiction")
            )
        return replace(state, trace=_trace(state, ast.index, "announce"))

    try:
        typed = logic.typecheck(ast.formula, state.ctx)
    except TypeIssue as exc:
        em.error(Category.TYPE, str(exc), span=exc.span or ast.span, sentence_index=ast.index)
        return replace(state, trace=_trace(state, ast.index, "announce"))

    if state.frames:
        top = state.frames[-1]
        eqs = _equalities(state.kb)
        if prover.equivalent(typed, top.target, eqs, limits) or prover.equivalent(
            typed, top.original, eqs, limits
        ):
            return replace(state, trace=_trace(state, ast.index, "re-announcement"))
    frame = GoalFrame(
        original=typed,
        target=typed,
        method="direct",
        kb_mark=len(state.kb),
        opening_index=ast.index,
    )
    note = "goal" if not state.frames else "announce-subgoal"
    return replace(state, frames=state.frames + (frame,), trace=_trace(state, ast.index, note))


def _check_conjuncts(state, ast, typed, em, catalog, limits):
    kb = state.kb
    trace = state.trace
    for part in logic.conjuncts(typed):
        span = part.span or ast.span
        try:
            verdict = prover.check_step(kb, part, limits)
        except TooManyAtoms as exc:
            em.error(
                Category.UNVERIFIED,
                f'"{logic.render(part)}" is too large to check: it involves {exc.count} '
                f"basic statements and the checker handles at most {exc.bound}",
                span=span,
                sentence_index=ast.index,
            )
            kb = kb + (part,)
            trace = trace + ((ast.index, "too-large"),)
            continue
        if verdict.verified:
            kb = kb + (part,)
            trace = trace + ((ast.index, verdict.rule or "inference"),)
            continue
        matches = catalog.matches(kb, part, limits) if catalog is not None else ()
        if verdict.refuted:
            message = f'"{logic.render(part)}" is wrong here: it can fail while every fact in scope holds'
        else:
            message = f'"{logic.render(part)}" could not be verified from the facts in scope'
        item_id = em.error(
            Category.UNVERIFIED,
            message,
            span=span,
            sentence_index=ast.index,
            pattern_id=matches[0].pattern_id if matches else None,
            countermodel=verdict.countermodel,
        )
        for match in matches:
            em.info(
                Category.PATTERN,
                match.message,
                span=span,
                sentence_index=ast.index,
                pattern_id=match.pattern_id,
                refines=item_id,
            )
        kb = kb + (part,)
        trace = trace + ((ast.index, "refuted" if verdict.refuted else "unverified"),)
    return replace(state, kb=kb, trace=trace)


def _do_infer(state, ast, em, catalog, limits):
    try:
        typed = logic.typecheck(ast.formula, state.ctx)
    except TypeIssue as exc:
        em.error(Category.TYPE, str(exc), span=exc.span or ast.span, sentence_index=ast.index)
        return replace(state, trace=_trace(state, ast.index, "inference"))
    return _check_conjuncts(state, ast, typed, em, catalog, limits)


def _pop_frame(state: ProofState, established: bool) -> ProofState:
    top = state.frames[-1]
    kb = state.kb[: top.kb_mark] + (top.original,)
    pending = tuple(m for m in state.pending if m.kb_mark < top.kb_mark)
    return replace(state, kb=kb, frames=state.frames[:-1], pending=pending)


def _do_close(state, ast, em, catalog, limits):
    try:
        typed = logic.typecheck(ast.formula, state.ctx)
    except TypeIssue as exc:
        em.error(Category.TYPE, str(exc), span=exc.span or ast.span, sentence_index=ast.index)
        return replace(state, trace=_trace(state, ast.index, "close"))

    if state.frames:
        top = state.frames[-1]
        eqs = _equalities(state.kb)
        if prover.equivalent(typed, top.target, eqs, limits) or prover.equivalent(
            typed, top.original, eqs, limits
        ):
            established = _established(state.kb, top.target, limits)
            if not established:
                em.error(
                    Category.GOAL,
                    f'this closes the goal "{logic.render(top.original)}", '
                    f'but "{logic.render(top.target)}" has not been established',
                    span=ast.span,
                    sentence_index=ast.index,
                    hint=_closing_hint(top.target),
                )
            popped = _pop_frame(state, established)
            note = "discharge" if established else "close-undischarged"
            return replace(popped, trace=_trace(popped, ast.index, note))
    # the sentence concludes something that is not the current goal;
    # read it as an ordinary inference step
    return _check_conjuncts(state, ast, typed, em, catalog, limits)


def _do_qed(state, ast, em, catalog, limits):
    index = ast.index if ast is not None else None
    span = ast.span if ast is not None else None
    current = state
    while current.frames:
        top = current.frames[-1]
        established = _established(current.kb, top.target, limits)
        if not established:
            if isinstance(top.target, logic.Falsum):
                message = "the proof ends, but no contradiction was reached"
            else:
                message = f'the proof ends, but "{logic.render(top.target)}" has not been established'
            em.error(
                Category.GOAL,
                message,
                span=span,
                sentence_index=index,
                hint=_closing_hint(top.target),
            )
        current = _pop_frame(current, established)
        if index is not None:
            note = "discharge" if established else "goal-not-reached"
            current = replace(current, trace=_trace(current, index, note))
    if index is not None:
        current = replace(current, trace=_trace(current, index, "qed"))
    return replace(current, finished=True)


_HANDLERS = {
    SentenceKind.DECLARE: _do_declare,
    SentenceKind.ASSUME: _do_assume,
    SentenceKind.EXISTS_CLAIM: _do_exists,
    SentenceKind.PICK: _do_pick,
    SentenceKind.GOAL_ANNOUNCE: _do_announce,
    SentenceKind.INFER: _do_infer,
    SentenceKind.SUBPROOF_CLOSE: _do_close,
    SentenceKind.QED: _do_qed,
}


def apply_sentence(
    state: ProofState,
    sentence: SentenceAST,
    catalog: PatternCatalog | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[ProofState, list[FeedbackItem]]:
    """Execute one sentence; returns the new state and any feedback.

    Never raises: typing faults, unverified steps and discharge
    failures all come back as feedback items, and the asserted content
    is retained regardless so later sentences still get checked.
    """
    em = _Emitter(f"s{sentence.index}")
    handler = _HANDLERS[sentence.kind]
    new_state = handler(state, sentence, em, catalog, limits)
    return replace(new_state, cursor=sentence.index + 1), em.items


def init_state(document: ProblemDocument, limits: Limits = DEFAULT_LIMITS) -> ProofState:
    """Strict header fold: declarations, premises, and the root goal.

    Unlike :func:`check_document` this raises on a broken header
    (ShadowingError, TypeMismatch and friends propagate), so callers
    driving the engine sentence by sentence start from a sound state.
    """
    ctx = TypeContext()
    kb: list[Formula] = []
    frames: list[GoalFrame] = []
    trace: list[tuple[int, str]] = []
    cursor = 0
    for slot in document.header:
        ast = slot.ast
        if ast is None:
            raise ValueError(f"header sentence {slot.index} could not be parsed: {slot.text!r}")
        if ast.kind is SentenceKind.DECLARE:
            for name in ast.variables:
                ctx = ctx.declare(name, ast.var_type)
            trace.append((ast.index, "declare"))
        elif ast.kind is SentenceKind.ASSUME:
            kb.append(logic.typecheck(ast.formula, ctx))
            trace.append((ast.index, "assume"))
        elif ast.kind is SentenceKind.GOAL_ANNOUNCE and ast.formula is not None:
            goal = logic.typecheck(ast.formula, ctx)
            frames.append(
                GoalFrame(original=goal, target=goal, kb_mark=len(kb), opening_index=ast.index)
            )
            trace.append((ast.index, "goal"))
        else:
            raise ValueError(
                f"only declarations, assumptions, and the goal may precede the proof, "
                f"not {slot.text!r}"
            )
        cursor = ast.index + 1
    return ProofState(
        ctx=ctx, kb=tuple(kb), frames=tuple(frames), cursor=cursor, trace=tuple(trace)
    )


def _finalize(collected: Sequence[FeedbackItem]) -> tuple[FeedbackItem, ...]:
    """Renumber items f1..fn in document order, fixing refines links."""
    order = sorted(
        range(len(collected)),
        key=lambda i: (collected[i].span[0] if collected[i].span else 2**31, i),
    )
    mapping = {collected[i].item_id: f"f{n}" for n, i in enumerate(order, start=1)}
    final = []
    for i in order:
        item = collected[i]
        final.append(
            dataclasses.replace(
                item,
                item_id=mapping[item.item_id],
                refines=mapping[item.refines] if item.refines else None,
            )
        )
    return tuple(final)


def check_document(
    source: str | ParseResult | ProblemDocument,
    catalog: PatternCatalog | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> Report:
    """Check a whole submission and report per-sentence verdicts.

    Total: parse failures, type faults, unverified steps and unreached
    goals all land in the report rather than raising.  A document is
    Accepted exactly when no error item of category (i), (ii), (iii)
    or (v) was produced; pattern notes (iv) never block on their own.
    """
    if isinstance(source, str):
        result = parser.parse_document(source)
    elif isinstance(source, ParseResult):
        result = source
    elif isinstance(source, ProblemDocument):
        result = ParseResult(source, [])
    else:
        raise TypeError(f"cannot check a {type(source).__name__}")
    if catalog is None:
        catalog = diagnostics.load_default_catalog(limits)

    document = result.document
    collected: list[FeedbackItem] = []

    issue_owner: dict[int, int] = {}
    if document is not None:
        for slot in document.slots:
            if slot.issue is not None:
                issue_owner[id(slot.issue)] = slot.index
    for n, issue in enumerate(result.issues, start=1):
        collected.append(
            FeedbackItem(
                item_id=f"p{n}",
                category=Category(issue.category),
                severity=issue.severity,
                message=issue.message,
                sentence_index=issue_owner.get(id(issue)),
                span=issue.span,
            )
        )

    if document is None:
        return Report("RejectedWithFeedback", _finalize(collected), (), None, None)

    state = ProofState()
    for slot in document.slots:
        if slot.ast is None:
            state = replace(state, cursor=slot.index + 1)
            continue
        state, items = apply_sentence(state, slot.ast, catalog=catalog, limits=limits)
        collected.extend(items)

    if not state.finished and state.frames:
        # no qed; still close out so unreached goals are reported
        em = _Emitter("e0")
        state = _do_qed(state, None, em, catalog, limits)
        collected.extend(em.items)

    items = _finalize(collected)
    sentences = []
    for slot in document.slots:
        flagged = any(
            it.sentence_index == slot.index and it.severity == "error" for it in items
        )
        notes = tuple(note for idx, note in state.trace if idx == slot.index)
        sentences.append(
            SentenceReport(
                index=slot.index,
                span=slot.span,
                text=slot.text,
                status="flagged" if flagged else "ok",
                notes=notes,
            )
        )

    blocking = any(item.blocking for item in items)
    return Report(
        status="RejectedWithFeedback" if blocking else "Accepted",
        items=items,
        sentences=tuple(sentences),
        goal=document.goal,
        document=document,
    )
