"""Consultation lifecycle: the question/answer loop, transcript persistence,
and diagnosis-report assembly.

A session is a resumable state machine. Every ``next()`` call re-derives the
working memory from the recorded answers, replaying them exactly when the
engine asks for them, so question order and certainties are deterministic
functions of (KB, answer sequence).
"""

from __future__ import annotations

import hashlib
import shlex
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional, Sequence

from . import dsl
from .inference import (
    ANSWERED,
    Engine,
    ProofNode,
    WorkingMemory,
)
from .model import (
    Certainty,
    Entity,
    Goal,
    KnowledgeBase,
    Level,
    PromptKind,
    PromptSpec,
    Variable,
    errors_of,
    ident_key,
    validate,
)

TRANSCRIPT_FORMAT_VERSION = 1
REPORT_FORMAT_VERSION = 1


def kb_hash(kb: KnowledgeBase) -> str:
    """Content digest of the canonical KB serialization."""
    return hashlib.sha256(dsl.serialize(kb).encode("utf-8")).hexdigest()


class SessionError(Exception):
    pass


class WrongVariableError(SessionError):
    """An answer arrived for a variable other than the pending question's."""


class AnswerValidationError(SessionError):
    """Selections violate the prompt kind's cardinality or the domain."""


class TranscriptError(SessionError):
    pass


@dataclass(frozen=True)
class Question:
    variable: str
    prompt: Optional[PromptSpec]
    options: tuple[str, ...]
    accepts_cf: bool


@dataclass(frozen=True)
class Selection:
    value: str
    certainty: Optional[float] = None  # None = left blank, stored as 1.0


@dataclass(frozen=True)
class Answer:
    variable: str
    selections: tuple[Selection, ...]


@dataclass(frozen=True)
class Finished:
    report: "DiagnosisReport"


@dataclass(frozen=True)
class GoalResult:
    variable: str
    status: str  # "concluded" | "no-conclusion" | "pending"
    value: Optional[str] = None
    certainty: Optional[Certainty] = None
    tags: frozenset[tuple[Entity, Level]] = frozenset()
    rule_ids: tuple[str, ...] = ()
    suppressed: bool = False  # below the goal's report threshold


@dataclass(frozen=True)
class RuleOutcome:
    rule_id: str
    satisfied: Optional[bool]  # None = never evaluated
    tags: frozenset[tuple[Entity, Level]] = frozenset()


@dataclass(frozen=True)
class DiagnosisReport:
    kb_name: str
    kb_version: str
    kb_hash: str
    truth_threshold: Certainty
    complete: bool
    goals: tuple[GoalResult, ...]
    rules: tuple[RuleOutcome, ...]


def _cf_text(value: Optional[float]) -> str:
    return format(float(value), ".12g") if value is not None else "-"


def render_structured(report: DiagnosisReport) -> str:
    """Canonical line-delimited rendering; byte-stable for golden tests."""
    lines = [
        f"report {REPORT_FORMAT_VERSION}",
        f"kb {shlex.quote(report.kb_name)} version "
        f"{shlex.quote(report.kb_version)} hash {report.kb_hash}",
        f"truth-threshold {_cf_text(report.truth_threshold)}",
        f"status {'complete' if report.complete else 'incomplete'}",
    ]
    headline = [g for g in report.goals if not g.suppressed]
    appendix = [g for g in report.goals if g.suppressed]
    for g in headline:
        lines.append(_goal_line("goal", g))
    for g in appendix:
        lines.append(_goal_line("appendix", g))
    for r in report.rules:
        state = (
            "untried"
            if r.satisfied is None
            else ("satisfied" if r.satisfied else "unsatisfied")
        )
        tag_text = _tags_text(r.tags)
        lines.append(f"rule {r.rule_id} {state}{tag_text}")
    concluded = sum(1 for g in report.goals if g.status == "concluded")
    none = sum(1 for g in report.goals if g.status == "no-conclusion")
    pending = sum(1 for g in report.goals if g.status == "pending")
    lines.append(
        f"summary goals {len(report.goals)} concluded {concluded} "
        f"no-conclusion {none} pending {pending} "
        f"suppressed {len(appendix)}"
    )
    return "\n".join(lines) + "\n"


def _tags_text(tags: frozenset[tuple[Entity, Level]]) -> str:
    if not tags:
        return ""
    parts = sorted(f"{e.value}/{l.value}" for e, l in tags)
    return " [" + ", ".join(parts) + "]"


def _goal_line(prefix: str, g: GoalResult) -> str:
    if g.status == "concluded":
        body = f"{g.variable} = {g.value} cf {_cf_text(g.certainty)}"
        if g.rule_ids:
            body += " via " + ",".join(g.rule_ids)
    elif g.status == "pending":
        body = f"{g.variable} pending"
    else:
        body = f"{g.variable} no-conclusion"
    return f"{prefix} {body}{_tags_text(g.tags)}"


def render_text(report: DiagnosisReport) -> str:
    """Human-readable report rendering."""
    lines = [
        f"Consultation report for {report.kb_name} "
        f"(version {report.kb_version})",
        "Status: " + ("complete" if report.complete else "incomplete"),
        "",
    ]
    grouped: dict[str, list[GoalResult]] = {}
    for g in report.goals:
        grouped.setdefault(_tags_text(g.tags) or " [untagged]", []).append(g)
    for tag_text in sorted(grouped):
        lines.append("Group" + tag_text)
        for g in grouped[tag_text]:
            if g.status == "concluded":
                mark = "below threshold, see appendix" if g.suppressed else ""
                cert = Certainty(g.certainty or 0.0).as_percent()
                lines.append(
                    f"  {g.variable}: {g.value} ({cert})"
                    + (f"  [{mark}]" if mark else "")
                )
            elif g.status == "pending":
                lines.append(f"  {g.variable}: pending")
            else:
                lines.append(f"  {g.variable}: no conclusion")
        lines.append("")
    satisfied = [r.rule_id for r in report.rules if r.satisfied]
    unsatisfied = [r.rule_id for r in report.rules if r.satisfied is False]
    lines.append("Implementation rules satisfied: " + (", ".join(satisfied) or "-"))
    lines.append(
        "Implementation rules not satisfied: " + (", ".join(unsatisfied) or "-")
    )
    return "\n".join(lines) + "\n"


class _NeedAnswer(Exception):
    def __init__(self, variable: Variable):
        super().__init__(variable.id)
        self.variable = variable


class Session:
    """One consultation: feed answers with ``answer``, pull work with
    ``next``; serializable with ``save``/``resume``."""

    def __init__(self, kb: KnowledgeBase, truth_threshold: Optional[float] = None):
        diagnostics = validate(kb)
        if errors_of(diagnostics):
            raise SessionError(
                "knowledge base fails validation: "
                + "; ".join(str(d) for d in errors_of(diagnostics))
            )
        self.kb = kb
        self.kb_hash = kb_hash(kb)
        self.truth_threshold = Certainty(
            kb.truth_threshold if truth_threshold is None else truth_threshold
        )
        self._answers: list[Answer] = []
        self._answered: dict[str, Answer] = {}
        self._events: list[tuple[str, str, str]] = []  # (ts, kind, payload)
        self._pending: Optional[Question] = None
        self._finished: Optional[DiagnosisReport] = None
        self._last_engine: Optional[Engine] = None

    # -- driving -----------------------------------------------------------
    @property
    def pending_goals(self) -> list[Goal]:
        return self.kb.ordered_goals()

    @property
    def finished(self) -> bool:
        return self._finished is not None

    def next(self) -> Question | Finished:
        if self._finished is not None:
            return Finished(self._finished)
        if self._pending is not None:
            return self._pending
        engine = Engine(
            self.kb, self._provide, truth_threshold=self.truth_threshold
        )
        try:
            for goal in self.pending_goals:
                engine.resolve(goal.variable)
        except _NeedAnswer as need:
            self._last_engine = engine
            var = need.variable
            self._pending = Question(
                variable=var.id,
                prompt=var.prompt,
                options=var.domain,
                accepts_cf=bool(var.prompt and var.prompt.allow_cf_input),
            )
            self._record_event("question", var.id)
            return self._pending
        self._last_engine = engine
        self._finished = self._build_report(engine, complete=True)
        return Finished(self._finished)

    def _provide(self, var: Variable) -> Sequence[tuple[str, Optional[float]]]:
        recorded = self._answered.get(var.key)
        if recorded is None:
            raise _NeedAnswer(var)
        return [(s.value, s.certainty) for s in recorded.selections]

    def answer(self, a: Answer) -> None:
        if self._finished is not None:
            raise WrongVariableError("the consultation is already finished")
        if self._pending is None:
            self.next()
        if self._pending is None:
            raise WrongVariableError("no question is pending")
        if ident_key(a.variable) != ident_key(self._pending.variable):
            raise WrongVariableError(
                f"expected an answer for {self._pending.variable!r}, "
                f"got {a.variable!r}"
            )
        var = self.kb.variable(a.variable)
        self._check_answer(var, a)
        self._answers.append(a)
        self._answered[var.key] = a
        self._record_event("answer", _answer_payload(var.id, a))
        self._pending = None
        self._last_engine = None  # stale: it predates this answer

    def _check_answer(self, var: Variable, a: Answer) -> None:
        kind = var.prompt.kind  # type: ignore[union-attr]
        n = len(a.selections)
        if kind in (PromptKind.FORCEDCHOICE, PromptKind.CHOICE) and n != 1:
            raise AnswerValidationError(
                f"{kind.value} expects exactly one selection, got {n}"
            )
        if kind is PromptKind.MULTICHOICE and n < 1:
            raise AnswerValidationError(
                "multichoice expects at least one selection"
            )
        if kind is PromptKind.ALLCHOICE:
            picked = {ident_key(s.value) for s in a.selections}
            if picked != var.domain_keys():
                raise AnswerValidationError(
                    "allchoice expects a certainty for every domain value"
                )
        seen: set[str] = set()
        for s in a.selections:
            valk = ident_key(s.value)
            if valk not in var.domain_keys():
                raise AnswerValidationError(
                    f"value {s.value!r} is not in the domain of {var.id!r}"
                )
            if valk in seen:
                raise AnswerValidationError(
                    f"value {s.value!r} selected twice"
                )
            seen.add(valk)
            if s.certainty is not None:
                try:
                    Certainty(s.certainty)
                except ValueError as exc:
                    raise AnswerValidationError(
                        f"certainty for {s.value!r} is out of range: {exc}"
                    ) from exc

    # -- reporting ---------------------------------------------------------
    def report(self) -> DiagnosisReport:
        if self._finished is not None:
            return self._finished
        step = self.next()
        if isinstance(step, Finished):
            return step.report
        assert self._last_engine is not None
        return self._build_report(self._last_engine, complete=False)

    def _build_report(self, engine: Engine, complete: bool) -> DiagnosisReport:
        wm = engine.wm
        goal_results: list[GoalResult] = []
        for goal in self.pending_goals:
            vk = ident_key(goal.variable)
            var = self.kb.variables[vk]
            tags = _goal_tags(self.kb, vk)
            if not complete and vk not in wm.exhausted:
                goal_results.append(
                    GoalResult(var.id, "pending", tags=tags)
                )
                continue
            fact = wm.established_value(vk, self.truth_threshold)
            if fact is None:
                goal_results.append(
                    GoalResult(var.id, "no-conclusion", tags=tags)
                )
                continue
            key = (vk, ident_key(fact.value))
            rule_ids = tuple(
                dict.fromkeys(
                    n.rule_id
                    for n in engine.proofs.get(key, ())
                    if hasattr(n, "rule_id")
                )
            )
            threshold = self.kb.goal_report_threshold(goal)
            goal_results.append(
                GoalResult(
                    var.id,
                    "concluded",
                    value=fact.value,
                    certainty=fact.certainty,
                    tags=tags,
                    rule_ids=rule_ids,
                    suppressed=fact.certainty < threshold,
                )
            )
        rule_outcomes = tuple(
            RuleOutcome(
                rule.id,
                engine.rule_outcomes.get(rule.key),
                rule.tags,
            )
            for rule in self.kb.rules
        )
        return DiagnosisReport(
            kb_name=self.kb.name,
            kb_version=self.kb.version,
            kb_hash=self.kb_hash,
            truth_threshold=self.truth_threshold,
            complete=complete,
            goals=tuple(goal_results),
            rules=rule_outcomes,
        )

    def proofs(self) -> dict[tuple[str, str], list[ProofNode]]:
        if self._last_engine is None:
            self.next()
        assert self._last_engine is not None
        return self._last_engine.proofs

    def working_memory(self) -> WorkingMemory:
        if self._last_engine is None:
            self.next()
        assert self._last_engine is not None
        return self._last_engine.wm

    # -- persistence -------------------------------------------------------
    def _record_event(self, kind: str, payload: str) -> None:
        ts = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")
        self._events.append((ts, kind, payload))

    def save(self) -> bytes:
        """Serialize the consultation to the `.etr` transcript format."""
        lines = [
            f"etr {TRANSCRIPT_FORMAT_VERSION}",
            f"kb {shlex.quote(self.kb.name)} version "
            f"{shlex.quote(self.kb.version)} hash {self.kb_hash}",
            f"config truth-threshold {_cf_text(self.truth_threshold)}",
        ]
        for ts, kind, payload in self._events:
            lines.append(f"event {ts} {kind} {payload}")
        return ("\n".join(lines) + "\n").encode("utf-8")

    @classmethod
    def resume(
        cls, kb: KnowledgeBase, transcript: bytes
    ) -> "Session":
        """Rebuild a session by replaying a transcript's answers.

        The KB hash must match; replay stops exactly where the saved
        session stopped.
        """
        text = transcript.decode("utf-8")
        lines = [l for l in text.splitlines() if l.strip()]
        if not lines or not lines[0].startswith("etr "):
            raise TranscriptError("not a transcript: missing 'etr' header")
        version = lines[0].split()[1]
        if version != str(TRANSCRIPT_FORMAT_VERSION):
            raise TranscriptError(f"unsupported transcript version {version}")
        truth_threshold: Optional[float] = None
        answers: list[Answer] = []
        expected_hash: Optional[str] = None
        for line in lines[1:]:
            parts = shlex.split(line)
            if parts[0] == "kb":
                expected_hash = parts[parts.index("hash") + 1]
            elif parts[0] == "config":
                if parts[1] == "truth-threshold":
                    truth_threshold = float(parts[2])
            elif parts[0] == "event":
                kind = parts[2]
                if kind == "answer":
                    answers.append(_parse_answer_payload(parts[3:]))
            else:
                raise TranscriptError(f"unknown transcript line {line!r}")
        if expected_hash is None:
            raise TranscriptError("transcript is missing the kb hash")
        session = cls(kb, truth_threshold=truth_threshold)
        if session.kb_hash != expected_hash:
            raise TranscriptError(
                "knowledge base does not match the transcript "
                f"(expected hash {expected_hash}, got {session.kb_hash})"
            )
        for a in answers:
            step = session.next()
            if isinstance(step, Finished):
                raise TranscriptError(
                    "transcript has more answers than the consultation needs"
                )
            if ident_key(step.variable) != ident_key(a.variable):
                raise TranscriptError(
                    f"transcript answers {a.variable!r} but the consultation "
                    f"asks {step.variable!r}"
                )
            session.answer(a)
        return session


def _goal_tags(
    kb: KnowledgeBase, goal_key: str
) -> frozenset[tuple[Entity, Level]]:
    tags: set[tuple[Entity, Level]] = set()
    for rule in kb.rules_concluding(goal_key):
        tags.update(rule.tags)
    return frozenset(tags)


def _answer_payload(variable: str, a: Answer) -> str:
    parts = [variable, "="]
    for i, s in enumerate(a.selections):
        if i:
            parts.append(",")
        parts.append(s.value)
        parts.append("cf")
        parts.append("default" if s.certainty is None else _cf_text(s.certainty))
    return " ".join(parts)


def _parse_answer_payload(parts: list[str]) -> Answer:
    if len(parts) < 2 or parts[1] != "=":
        raise TranscriptError(f"malformed answer event: {parts!r}")
    variable = parts[0]
    rest = parts[2:]
    selections: list[Selection] = []
    i = 0
    while i < len(rest):
        if rest[i] == ",":
            i += 1
            continue
        value = rest[i]
        if i + 2 >= len(rest) or rest[i + 1] != "cf":
            raise TranscriptError(f"malformed answer event: {parts!r}")
        cf_text = rest[i + 2]
        cf = None if cf_text == "default" else float(cf_text)
        selections.append(Selection(value, cf))
        i += 3
    if not selections:
        raise TranscriptError(f"empty answer event: {parts!r}")
    return Answer(variable, tuple(selections))


def start(kb: KnowledgeBase, truth_threshold: Optional[float] = None) -> Session:
    """Begin a fresh consultation over a validated KB."""
    return Session(kb, truth_threshold=truth_threshold)
