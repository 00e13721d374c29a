"""Exercise bank loading and validation."""
from __future__ import annotations

import pytest

from conftest import CORPUS
from proofcheck.bank import (
    BankParseError,
    Exercise,
    load_bank,
    parse_bank,
    validate_exercise,
)

MINIMAL = """--- exercise tiny
domain: propositional
mode: prove
statement:
  Let P be a proposition.
  Prove: P implies P.
"""


class TestParseSyntax:
    def test_minimal_record(self):
        (ex,) = parse_bank(MINIMAL)
        assert ex.exercise_id == "tiny"
        assert ex.domain == "propositional"
        assert ex.mode == "prove"
        assert ex.statement == "Let P be a proposition.\nProve: P implies P.\n"
        assert ex.attachment is None

    def test_empty_file_is_an_empty_bank(self):
        assert parse_bank("") == []
        assert parse_bank("# nothing here\n\n") == []

    def test_attachment_block(self):
        text = MINIMAL.replace("mode: prove", "mode: fix-the-proof") + (
            "attachment:\n  Proof:\n  qed.\n"
        )
        (ex,) = parse_bank(text)
        assert ex.attachment == "Proof:\nqed.\n"
        assert ex.full_text == ex.statement + ex.attachment

    def test_blank_lines_inside_blocks_are_kept(self):
        text = (
            "--- exercise gap\ndomain: propositional\nmode: prove\n"
            "statement:\n  Let P be a proposition.\n\n  Prove: P implies P.\n"
        )
        (ex,) = parse_bank(text)
        assert ex.statement == "Let P be a proposition.\n\nProve: P implies P.\n"

    def test_missing_field_is_rejected(self):
        broken = MINIMAL.replace("domain: propositional\n", "")
        with pytest.raises(BankParseError, match="missing required field 'domain'"):
            parse_bank(broken)

    def test_duplicate_id_is_rejected(self):
        with pytest.raises(BankParseError, match="duplicate exercise id"):
            parse_bank(MINIMAL + "\n" + MINIMAL)

    def test_duplicate_field_is_rejected(self):
        with pytest.raises(BankParseError, match="duplicate field 'mode'"):
            parse_bank(MINIMAL + "mode: prove\n")

    def test_bad_id_is_rejected(self):
        with pytest.raises(BankParseError, match="bad exercise id"):
            parse_bank("--- exercise two words\n")

    def test_stray_line_is_rejected(self):
        with pytest.raises(BankParseError, match="expected"):
            parse_bank("what is this\n")

    def test_unrecognized_field_is_rejected(self):
        with pytest.raises(BankParseError, match="unrecognized line"):
            parse_bank(MINIMAL + "difficulty: hard\n")


class TestValidation:
    def make(self, **overrides) -> Exercise:
        base = dict(
            exercise_id="probe",
            domain="propositional",
            mode="prove",
            statement="Let P be a proposition.\nProve: P implies P.\n",
            attachment=None,
        )
        base.update(overrides)
        return Exercise(**base)

    def test_valid_exercise_passes(self):
        validate_exercise(self.make())

    @pytest.mark.parametrize("field,value", [("domain", "numerology"), ("mode", "grade")])
    def test_unknown_enum_values(self, field, value):
        with pytest.raises(BankParseError, match=f"unknown {field}"):
            validate_exercise(self.make(**{field: value}))

    def test_statement_must_parse(self):
        bad = self.make(statement="Let P be a frobnicator.\n")
        with pytest.raises(BankParseError, match="does not parse"):
            validate_exercise(bad)

    def test_statement_needs_a_goal(self):
        bad = self.make(statement="Let P be a proposition.\n")
        with pytest.raises(BankParseError, match="no goal"):
            validate_exercise(bad)

    def test_statement_must_typecheck(self):
        bad = self.make(statement="Let A be a set.\nAssume that A is even.\nProve: A ⊂ A.\n")
        with pytest.raises(BankParseError, match="typecheck"):
            validate_exercise(bad)

    def test_prove_takes_no_attachment(self):
        bad = self.make(attachment="Proof:\nqed.\n")
        with pytest.raises(BankParseError, match="no attachment"):
            validate_exercise(bad)

    def test_predict_feedback_needs_attachment(self):
        bad = self.make(mode="predict-feedback")
        with pytest.raises(BankParseError, match="need an attachment"):
            validate_exercise(bad)

    def test_accepted_fix_the_proof_attachment_is_rejected(self):
        # a "faulty" proof that actually checks out is a broken exercise
        bad = self.make(
            mode="fix-the-proof",
            attachment="Proof:\nAssume that P.\nThus P.\nThis shows that P implies P.\nqed.\n",
        )
        with pytest.raises(BankParseError, match="accepted by the checker"):
            validate_exercise(bad)

    def test_faulty_fix_the_proof_attachment_passes(self):
        good = self.make(
            mode="fix-the-proof",
            attachment="Proof:\nThus P.\nqed.\n",
        )
        validate_exercise(good)

    def test_error_names_the_exercise(self):
        bad = self.make(exercise_id="culprit", domain="numerology")
        with pytest.raises(BankParseError) as err:
            validate_exercise(bad)
        assert err.value.exercise_id == "culprit"
        assert "culprit" in str(err.value)


class TestLoadBank:
    def test_corpus_bank_loads(self):
        exercises = load_bank(CORPUS / "exercises.bank")
        assert len(exercises) == 10
        by_id = {e.exercise_id: e for e in exercises}
        assert by_id["fig1-text1"].mode == "prove"
        assert by_id["predict-parity"].mode == "predict-feedback"
        assert by_id["fix-div4"].attachment is not None

    def test_one_bad_record_rejects_the_whole_bank(self, tmp_path):
        path = tmp_path / "bad.bank"
        path.write_text(MINIMAL + MINIMAL.replace("tiny", "broken").replace("prove", "grade"))
        with pytest.raises(BankParseError) as err:
            load_bank(path)
        assert err.value.exercise_id == "broken"

    def test_empty_bank_file(self, tmp_path):
        path = tmp_path / "empty.bank"
        path.write_text("")
        assert load_bank(path) == ()
