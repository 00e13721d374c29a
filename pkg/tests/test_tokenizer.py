"""Tokenizer tests: losslessness, spans, and symbol handling."""
from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proofcheck.cnl import Token, TokenKind, UnknownSymbol, scan, slice_bytes, tokenize


def kinds(tokens):
    return [t.kind for t in tokens]


def texts(tokens):
    return [t.text for t in tokens]


class TestBasics:
    def test_declaration_sentence(self):
        tokens = tokenize("Let x be an integer.")
        assert texts(tokens) == ["Let", "x", "be", "an", "integer", "."]
        assert kinds(tokens) == [
            TokenKind.WORD,
            TokenKind.IDENTIFIER,
            TokenKind.WORD,
            TokenKind.WORD,
            TokenKind.WORD,
            TokenKind.PUNCTUATION,
        ]

    def test_single_letter_is_identifier(self):
        (tok,) = tokenize("x")
        assert tok.kind is TokenKind.IDENTIFIER

    def test_letter_digit_run_is_identifier(self):
        (tok,) = tokenize("x1")
        assert tok.kind is TokenKind.IDENTIFIER
        assert tok.text == "x1"

    def test_multi_letter_run_is_word(self):
        (tok,) = tokenize("even")
        assert tok.kind is TokenKind.WORD

    def test_number(self):
        (tok,) = tokenize("42")
        assert tok.kind is TokenKind.NUMBER

    def test_juxtaposed_number_identifier_split(self):
        tokens = tokenize("2k")
        assert texts(tokens) == ["2", "k"]
        assert kinds(tokens) == [TokenKind.NUMBER, TokenKind.IDENTIFIER]

    @pytest.mark.parametrize(
        "symbol",
        ["∈", "¬", "∧", "∨", "∩", "∪", "×", "⊂", "⊆", "→", "·", "−", "^", "="],
    )
    def test_unicode_symbols(self, symbol):
        (tok,) = tokenize(symbol)
        assert tok.kind is TokenKind.SYMBOL

    @pytest.mark.parametrize("pair", ["->", "/\\", "\\/", "><"])
    def test_two_character_symbols(self, pair):
        (tok,) = tokenize(pair)
        assert tok.kind is TokenKind.SYMBOL
        assert tok.text == pair

    def test_arrow_not_split(self):
        tokens = tokenize("A->B")
        assert texts(tokens) == ["A", "->", "B"]


class TestUnknownSymbols:
    def test_strict_mode_raises(self):
        with pytest.raises(UnknownSymbol) as exc:
            tokenize("x §§ y")
        assert "§§" in str(exc.value)

    def test_lenient_mode_collects_issue(self):
        tokens, issues = scan("x §§ y")
        assert texts(tokens) == ["x", "y"]
        assert len(issues) == 1
        assert issues[0].text == "§§"
        assert "not part of the proof language" in issues[0].message

    def test_adjacent_unknown_characters_group(self):
        _, issues = scan("a @# b")
        assert len(issues) == 1
        assert issues[0].text == "@#"

    def test_separate_runs_become_separate_issues(self):
        _, issues = scan("@ a #")
        assert [i.text for i in issues] == ["@", "#"]


class TestSpans:
    def test_spans_are_byte_offsets(self):
        source = "x ∈ A"
        tokens = tokenize(source)
        # ∈ is three bytes in UTF-8.
        assert tokens[0].span == (0, 1)
        assert tokens[1].span == (2, 5)
        assert tokens[2].span == (6, 7)

    def test_slice_bytes_recovers_text(self):
        source = "Assume that x ∈ A∩B."
        for token in tokenize(source):
            assert slice_bytes(source, token.span) == token.text

    def test_issue_span_recovers_text(self):
        source = "x §§ y"
        _, issues = scan(source)
        assert slice_bytes(source, issues[0].span) == "§§"


@st.composite
def cnl_text(draw) -> str:
    pieces = draw(
        st.lists(
            st.one_of(
                st.sampled_from(
                    [
                        "Let",
                        "Assume",
                        "that",
                        "x",
                        "y2",
                        "even",
                        "integer",
                        "12",
                        "3",
                        "∈",
                        "∧",
                        "->",
                        "/\\",
                        "><",
                        "(",
                        ")",
                        "+",
                        "^",
                        ".",
                        ",",
                        ":",
                    ]
                ),
                st.sampled_from([" ", "  ", "\n", "\t"]),
            ),
            max_size=40,
        )
    )
    return "".join(pieces)


class TestLosslessness:
    @given(cnl_text())
    @settings(max_examples=200, deadline=None)
    def test_every_token_matches_its_span(self, source: str):
        tokens, issues = scan(source)
        for token in tokens:
            assert slice_bytes(source, token.span) == token.text
        for issue in issues:
            assert slice_bytes(source, issue.span) == issue.text

    @given(cnl_text())
    @settings(max_examples=200, deadline=None)
    def test_spans_are_ordered_and_disjoint(self, source: str):
        tokens, issues = scan(source)
        spans = sorted(
            [t.span for t in tokens] + [i.span for i in issues]
        )
        for (a_start, a_end), (b_start, b_end) in zip(spans, spans[1:]):
            assert a_start <= a_end <= b_start <= b_end

    @given(cnl_text())
    @settings(max_examples=200, deadline=None)
    def test_non_whitespace_is_covered(self, source: str):
        tokens, issues = scan(source)
        raw = source.encode("utf-8")
        covered = bytearray(len(raw))
        for start, end in [t.span for t in tokens] + [i.span for i in issues]:
            for i in range(start, end):
                covered[i] = 1
        for i, flag in enumerate(covered):
            if not flag:
                assert bytes(raw[i : i + 1]).decode("utf-8", "ignore").isspace() or not (
                    raw[i : i + 1].decode("utf-8", "ignore")
                )


class TestSchemaVariables:
    def test_schema_mode_reads_question_mark_variables(self):
        tokens, issues = scan("?P -> ?Q", allow_schema_vars=True)
        assert not issues
        assert texts(tokens) == ["?P", "->", "?Q"]
        assert tokens[0].kind is TokenKind.IDENTIFIER

    def test_default_mode_rejects_question_mark(self):
        _, issues = scan("?P")
        assert issues
