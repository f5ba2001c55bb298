import random

import pytest

from genkb import conformant_answers, random_kb
from inqshell import (
    Answer,
    Finished,
    Question,
    Selection,
    Session,
    kb_hash,
    parse,
    render_structured,
    render_text,
    start,
)
from inqshell.model import ident_key
from inqshell.session import (
    AnswerValidationError,
    SessionError,
    TranscriptError,
    WrongVariableError,
)


def sel(value, cf=None):
    return Selection(value, cf)


def drive(session, answers):
    """Run a session to completion from an answers mapping."""
    amap = {ident_key(k): v for k, v in answers.items()}
    while True:
        step = session.next()
        if isinstance(step, Finished):
            return step.report
        selections = tuple(sel(v, c) for v, c in amap[ident_key(step.variable)])
        session.answer(Answer(step.variable, selections))


class TestFlow:
    def test_first_question_is_a_question(self, tiny_kb):
        step = start(tiny_kb).next()
        assert isinstance(step, Question)
        assert step.variable == "climate"
        assert step.options == ("warm", "cold")
        assert step.accepts_cf

    def test_next_is_idempotent(self, tiny_kb):
        session = start(tiny_kb)
        assert session.next() == session.next()

    def test_answer_then_finished(self, tiny_kb):
        session = start(tiny_kb)
        step = session.next()
        session.answer(Answer(step.variable, (sel("warm"),)))
        step = session.next()
        assert isinstance(step, Finished)
        (goal,) = step.report.goals
        assert goal.status == "concluded"
        assert goal.value == "go-outside"
        assert float(goal.certainty) == pytest.approx(0.9)

    def test_invalid_kb_rejected(self):
        from inqshell.model import Arity, KnowledgeBase, Variable

        var = Variable("a", Arity.UNIVALUED, ("yes",))
        kb = KnowledgeBase(
            name="bad", variables={var.key: var}, rules=(), goals=()
        )
        with pytest.raises(SessionError):
            Session(kb)

    def test_eqetic_asks_at_most_all_askables(self, eqetic_kb):
        from inqshell import eqetic

        session = start(eqetic_kb)
        report = drive(session, eqetic.best_practice_answers(eqetic_kb))
        askables = sum(1 for v in eqetic_kb.variables.values() if v.askable)
        asked = [e for e in session._events if e[1] == "question"]
        assert len(asked) <= askables
        assert len({p for _, _, p in asked}) == len(asked)  # no re-asks
        assert report.complete
        assert len(report.goals) == 16

    def test_pending_goals_listed_before_any_answer(self, eqetic_kb):
        session = start(eqetic_kb)
        session.next()
        report = session.report()
        assert not report.complete
        assert all(g.status == "pending" for g in report.goals)
        assert len(report.goals) == 16

    def test_partial_report_mixes_statuses(self, eqetic_kb):
        from inqshell import eqetic

        answers = eqetic.best_practice_answers(eqetic_kb)
        session = start(eqetic_kb)
        for _ in range(6):
            step = session.next()
            assert isinstance(step, Question)
            selections = tuple(
                sel(v, c) for v, c in answers[step.variable]
            )
            session.answer(Answer(step.variable, selections))
        report = session.report()
        assert not report.complete
        statuses = {g.status for g in report.goals}
        assert "pending" in statuses


class TestAnswerValidation:
    def test_wrong_variable_rejected(self, tiny_kb):
        session = start(tiny_kb)
        session.next()
        with pytest.raises(WrongVariableError):
            session.answer(Answer("advice", (sel("go-outside"),)))

    def test_answer_after_finish_rejected(self, tiny_kb):
        session = start(tiny_kb)
        session.answer(Answer("climate", (sel("warm"),)))
        assert isinstance(session.next(), Finished)
        with pytest.raises(WrongVariableError):
            session.answer(Answer("climate", (sel("cold"),)))

    def test_choice_needs_exactly_one(self, tiny_kb):
        session = start(tiny_kb)
        session.next()
        with pytest.raises(AnswerValidationError):
            session.answer(Answer("climate", (sel("warm"), sel("cold"))))
        with pytest.raises(AnswerValidationError):
            session.answer(Answer("climate", ()))

    def test_out_of_domain_rejected(self, tiny_kb):
        session = start(tiny_kb)
        session.next()
        with pytest.raises(AnswerValidationError):
            session.answer(Answer("climate", (sel("tropical"),)))

    def test_out_of_range_certainty_rejected(self, tiny_kb):
        session = start(tiny_kb)
        session.next()
        with pytest.raises(AnswerValidationError) as err:
            session.answer(Answer("climate", (sel("warm", 1.5),)))
        assert "certainty" in str(err.value)

    def test_duplicate_selection_rejected(self, eqetic_kb):
        from inqshell import eqetic

        answers = eqetic.best_practice_answers(eqetic_kb)
        session = start(eqetic_kb)
        while True:
            step = session.next()
            var = eqetic_kb.variable(step.variable)
            if var.prompt.kind.value == "multichoice":
                first = answers[step.variable][0][0]
                with pytest.raises(AnswerValidationError):
                    session.answer(
                        Answer(step.variable, (sel(first), sel(first)))
                    )
                break
            session.answer(
                Answer(
                    step.variable,
                    tuple(sel(v, c) for v, c in answers[step.variable]),
                )
            )

    def test_allchoice_requires_full_domain(self, eqetic_kb):
        from inqshell import eqetic

        answers = eqetic.best_practice_answers(eqetic_kb)
        session = start(eqetic_kb)
        while True:
            step = session.next()
            var = eqetic_kb.variable(step.variable)
            if var.prompt.kind.value == "allchoice":
                partial = tuple(sel(v, c) for v, c in answers[step.variable][:-1])
                with pytest.raises(AnswerValidationError):
                    session.answer(Answer(step.variable, partial))
                session.answer(
                    Answer(
                        step.variable,
                        tuple(sel(v, c) for v, c in answers[step.variable]),
                    )
                )
                break
            session.answer(
                Answer(
                    step.variable,
                    tuple(sel(v, c) for v, c in answers[step.variable]),
                )
            )

    def test_blank_certainty_stored_as_exactly_one(self, tiny_kb):
        session = start(tiny_kb)
        session.answer(Answer("climate", (sel("warm", None),)))
        session.next()
        fact = session.working_memory().fact("climate", "warm")
        assert float(fact.certainty) == 1.0
        assert fact.provenance == "defaulted"


class TestTranscripts:
    def test_save_resume_midway_same_next_question(self, eqetic_kb):
        from inqshell import eqetic

        answers = eqetic.best_practice_answers(eqetic_kb)
        session = start(eqetic_kb)
        for _ in range(7):
            step = session.next()
            session.answer(
                Answer(
                    step.variable,
                    tuple(sel(v, c) for v, c in answers[step.variable]),
                )
            )
        expected = session.next()
        resumed = Session.resume(eqetic_kb, session.save())
        got = resumed.next()
        assert isinstance(expected, Question)
        assert got == expected

    def test_resume_completed_session_reproduces_report(self, eqetic_kb):
        from inqshell import eqetic

        session = start(eqetic_kb)
        report = drive(session, eqetic.best_practice_answers(eqetic_kb))
        resumed = Session.resume(eqetic_kb, session.save())
        step = resumed.next()
        assert isinstance(step, Finished)
        assert render_structured(step.report) == render_structured(report)

    def test_hash_mismatch_rejected(self, eqetic_kb, tiny_kb):
        session = start(tiny_kb)
        session.answer(Answer("climate", (sel("warm"),)))
        with pytest.raises(TranscriptError) as err:
            Session.resume(eqetic_kb, session.save())
        assert "hash" in str(err.value)

    def test_garbage_transcript_rejected(self, tiny_kb):
        with pytest.raises(TranscriptError):
            Session.resume(tiny_kb, b"definitely not a transcript\n")

    def test_transcript_is_utf8_lines(self, tiny_kb):
        session = start(tiny_kb)
        session.answer(Answer("climate", (sel("warm", 0.75),)))
        session.next()
        text = session.save().decode("utf-8")
        lines = text.splitlines()
        assert lines[0] == "etr 1"
        assert lines[1].startswith("kb tiny version 1 hash ")
        assert kb_hash(tiny_kb) in lines[1]
        assert "config truth-threshold 0.2" in lines[2]
        assert any(" answer climate = warm cf 0.75" in l for l in lines)

    def test_default_certainty_round_trips_as_default(self, tiny_kb):
        session = start(tiny_kb)
        session.answer(Answer("climate", (sel("warm", None),)))
        text = session.save().decode("utf-8")
        assert "warm cf default" in text
        resumed = Session.resume(tiny_kb, session.save())
        fact = resumed.working_memory().fact("climate", "warm")
        assert float(fact.certainty) == 1.0

    @pytest.mark.parametrize("seed", range(25))
    def test_generated_kb_replay_byte_identical(self, seed):
        rng = random.Random(seed + 31337)
        kb = random_kb(rng)
        answers = conformant_answers(rng, kb)
        session = start(kb)
        report = drive(session, answers)
        resumed = Session.resume(kb, session.save())
        step = resumed.next()
        assert isinstance(step, Finished)
        assert render_structured(step.report) == render_structured(report)


class TestReports:
    def test_structured_rendering_shape(self, tiny_kb):
        session = start(tiny_kb)
        session.answer(Answer("climate", (sel("warm"),)))
        report = session.report()
        text = render_structured(report)
        lines = text.splitlines()
        assert lines[0] == "report 1"
        assert lines[1].startswith("kb tiny version 1 hash ")
        assert lines[2] == "truth-threshold 0.2"
        assert lines[3] == "status complete"
        assert "goal advice = go-outside cf 0.9" in lines[4]
        assert lines[-1].startswith("summary goals 1 concluded 1 ")
        assert text.endswith("\n")

    def test_structured_rendering_is_stable(self, eqetic_kb):
        from inqshell import eqetic

        answers = eqetic.best_practice_answers(eqetic_kb)
        outputs = {
            render_structured(drive(start(eqetic_kb), answers))
            for _ in range(3)
        }
        assert len(outputs) == 1

    def test_human_rendering_mentions_goals(self, tiny_kb):
        session = start(tiny_kb)
        session.answer(Answer("climate", (sel("warm"),)))
        text = render_text(session.report())
        assert "advice" in text
        assert "90%" in text

    def test_threshold_override_recorded(self, tiny_kb):
        session = Session(tiny_kb, truth_threshold=0.5)
        session.answer(Answer("climate", (sel("warm"),)))
        report = session.report()
        assert float(report.truth_threshold) == 0.5
        assert "truth-threshold 0.5" in render_structured(report)

    def test_low_certainty_goal_goes_to_appendix(self):
        text = """
kb "tiny" version "1"
var climate: univalued (warm, cold)
var advice: univalued (go-outside, stay-in)
rule R1: if climate is warm then advice is go-outside cf 0.9
rule R2: if climate is cold then advice is stay-in cf 0.8
prompt climate: choice "?" cf-input
goal advice threshold 0.5
"""
        session = start(parse(text).kb)
        session.answer(Answer("climate", (sel("warm", 0.25),)))
        report = session.report()
        (goal,) = report.goals
        assert goal.status == "concluded"
        assert goal.suppressed
        text = render_structured(report)
        assert "appendix advice = go-outside" in text
        assert "suppressed 1" in text

    def test_rule_outcomes_cover_every_rule(self, eqetic_kb):
        from inqshell import eqetic

        report = drive(
            start(eqetic_kb), eqetic.best_practice_answers(eqetic_kb)
        )
        assert len(report.rules) == 47
        assert all(r.satisfied is not None for r in report.rules)
