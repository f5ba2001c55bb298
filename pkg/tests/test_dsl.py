import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genkb import random_kb
from inqshell import lint, parse, serialize
from inqshell.dsl import SourceSpan, tokenize
from inqshell.model import Severity, errors_of

MINI = """
kb "mini"
var climate: univalued (warm, cold)
var advice: univalued (go-outside)
rule R1: if climate is warm then advice is go-outside cf 0.9
prompt climate: choice "Warm outside?"
goal advice
"""


class TestParse:
    def test_mini_counts(self):
        result = parse(MINI)
        assert result.ok, result.diagnostics
        kb = result.kb
        askable = [v for v in kb.variables.values() if v.askable]
        derived = [v for v in kb.variables.values() if not v.askable]
        assert (len(askable), len(derived)) == (1, 1)
        assert len(kb.rules) == 1
        assert len(kb.goals) == 1

    def test_unknown_prompt_kind_has_span_on_token(self):
        bad = MINI.replace("choice", "multichoise")
        result = parse(bad)
        assert not result.ok
        (diag,) = [d for d in result.diagnostics if d.severity is Severity.ERROR]
        assert "unknown prompt kind" in diag.message
        assert isinstance(diag.span, SourceSpan)
        assert bad[diag.span.start : diag.span.end] == "multichoise"

    def test_cf_percent_and_fraction_agree(self):
        a = parse(MINI).kb
        b = parse(MINI.replace("cf 0.9", "cf 90%")).kb
        assert a == b

    def test_missing_cf_defaults_to_one(self):
        kb = parse(MINI.replace(" cf 0.9", "")).kb
        assert float(kb.rules[0].consequents[0].attenuation) == 1.0

    def test_shipped_kb_counts(self, eqetic_kb):
        assert len(eqetic_kb.rules) == 47
        assert len(eqetic_kb.variables) == 38
        assert len(eqetic_kb.goals) == 16

    def test_syntax_error_reports_location(self):
        result = parse("rule R1: if climate warm then x is y")
        assert not result.ok
        assert any("is" in d.message for d in result.diagnostics)

    def test_duplicate_variable_rejected(self):
        text = MINI + "\nvar climate: univalued (warm)\n"
        result = parse(text)
        assert not result.ok
        assert any("duplicate" in d.message for d in result.diagnostics)

    def test_prompt_order_is_free(self):
        reordered = """
kb "mini"
var climate: univalued (warm, cold)
prompt climate: choice "Warm outside?"
var advice: univalued (go-outside)
rule R1: if climate is warm then advice is go-outside cf 0.9
goal advice
"""
        assert parse(reordered).ok

    def test_spans_stay_inside_input(self):
        bad_inputs = [
            "rule", "var x:", 'kb "x" version', "goal ", "prompt p: zzz",
            "var v: univalued (a,) extra",
        ]
        for text in bad_inputs:
            result = parse(text)
            assert not result.ok
            for d in result.diagnostics:
                if isinstance(d.span, SourceSpan):
                    assert 0 <= d.span.start <= d.span.end <= len(text)


class TestSerialize:
    def test_round_trip_mini(self):
        kb = parse(MINI).kb
        again = parse(serialize(kb))
        assert again.ok and again.kb == kb

    def test_case_preserved(self):
        text = MINI.replace("climate", "Climate").replace("R1", "Rule-One")
        kb = parse(text).kb
        out = serialize(kb)
        assert "Climate" in out
        assert "Rule-One" in out

    @pytest.mark.parametrize("seed", range(40))
    def test_round_trip_generated(self, seed):
        kb = random_kb(random.Random(seed))
        result = parse(serialize(kb))
        assert result.ok, (result.diagnostics, serialize(kb))
        assert result.kb == kb

    def test_shipped_file_is_canonical(self, eqetic_kb, repo_root):
        golden = (repo_root / "kb" / "eqetic-sufficient-didactic.ekb").read_text(
            "utf-8"
        )
        assert serialize(eqetic_kb) == golden

    def test_repo_and_package_copies_agree(self, repo_root):
        from inqshell import eqetic

        repo = (repo_root / "kb" / "eqetic-sufficient-didactic.ekb").read_text(
            "utf-8"
        )
        assert eqetic.source_text() == repo


class TestTotality:
    @given(st.text(max_size=120))
    @settings(max_examples=300, deadline=None)
    def test_arbitrary_text_never_crashes(self, text):
        result = parse(text)
        assert result.ok or result.diagnostics

    @given(st.binary(max_size=120))
    @settings(max_examples=200, deadline=None)
    def test_arbitrary_bytes_never_crash(self, data):
        result = parse(data.decode("utf-8", errors="replace"))
        assert result.ok or result.diagnostics

    def test_tokenizer_tracks_lines(self):
        toks = tokenize("var a: univalued\nrule R1: if a is x then b is y")
        assert toks[0].span.line == 1
        rule_tok = next(t for t in toks if t.value == "rule")
        assert rule_tok.span.line == 2
        assert rule_tok.span.column == 1


CYCLIC = """
kb "cyclic"
var a: univalued (yes)
var g: univalued (ok)
var ask1: univalued (yes, no)
rule R1: if a is yes then a is yes cf 0.9
rule R2: if ask1 is yes then g is ok
prompt ask1: choice "?"
goal g
"""

UNSAT = """
kb "unsat"
var x: univalued (v1, v2)
var g: univalued (ok)
rule R1: if x is v1 and x is v2 then g is ok
prompt x: choice "?"
goal g
"""


class TestLint:
    def test_self_dependency_cycle_names_rule(self):
        kb = parse(CYCLIC).kb
        diags = lint(kb)
        assert any("cycle" in d.message and "R1" in d.message for d in diags)

    def test_unsatisfiable_goal_found_exhaustively(self):
        kb = parse(UNSAT).kb
        diags = lint(kb)
        assert any(
            d.message.startswith("unreachable goal") for d in diags
        )

    def test_eqetic_kb_lints_clean(self, eqetic_kb):
        assert lint(eqetic_kb) == []

    def test_dead_value_detected(self):
        text = """
kb "dead"
var a: univalued (yes, no)
var mid: univalued (used, never-used)
var g: univalued (ok)
rule R1: if a is yes then mid is used
rule R2: if mid is used then g is ok
prompt a: choice "?"
goal g
"""
        kb = parse(text).kb
        diags = lint(kb)
        assert any("dead value 'never-used'" in d.message for d in diags)
