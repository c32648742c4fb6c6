import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexikernel.lexicon import (
    ClosureError,
    DuplicateEntryError,
    ParseError,
    StopList,
    close_lexicon,
    dump_jsonl,
    load_norms,
    normalize_definition,
    parse_dictionary,
    strip_stopwords,
)

from conftest import make_lexicon


def parse_jsonl(text: str):
    return parse_dictionary(io.StringIO(text), "jsonl")


def parse_tsv(text: str):
    return parse_dictionary(io.StringIO(text), "tsv")


class TestParseDictionary:
    def test_first_sense_only(self):
        text = (
            '{"word": "a", "senses": [{"rank": 1, "tokens": ["b"]}, {"rank": 2, "tokens": ["c"]}]}\n'
        )
        lex = parse_jsonl(text)
        assert lex.definition("a") == frozenset({"b"})

    def test_first_sense_only_across_records(self):
        text = (
            '{"word": "a", "senses": [{"rank": 1, "tokens": ["b"]}]}\n'
            '{"word": "a", "senses": [{"rank": 2, "tokens": ["c"]}]}\n'
        )
        lex = parse_jsonl(text)
        assert lex.definition("a") == frozenset({"b"})

    def test_empty_stream(self):
        assert len(parse_jsonl("")) == 0

    def test_lowercasing(self):
        lex = parse_tsv("C\t1\tA B\n")
        assert lex.definition("c") == frozenset({"a", "b"})

    def test_duplicate_same_sense_rejected(self):
        text = (
            '{"word": "a", "senses": [{"rank": 1, "tokens": ["b"]}]}\n'
            '{"word": "a", "senses": [{"rank": 1, "tokens": ["c"]}]}\n'
        )
        with pytest.raises(DuplicateEntryError):
            parse_jsonl(text)

    def test_malformed_record_reports_line(self):
        with pytest.raises(ParseError) as exc:
            parse_jsonl('{"word": "a", "senses": [{"rank": 1, "tokens": ["b"]}]}\nnot json\n')
        assert exc.value.line == 2

    def test_multiword_headword_rejected(self):
        with pytest.raises(ParseError):
            parse_tsv("two words\t1\ta b\n")

    def test_tsv_bad_rank(self):
        with pytest.raises(ParseError):
            parse_tsv("a\tfirst\tb c\n")

    def test_tsv_field_count(self):
        with pytest.raises(ParseError):
            parse_tsv("a\t1\n")

    def test_unclosed_result(self):
        lex = parse_tsv("a\t1\tb c\n")
        assert not lex.closed


class TestNormalizeDefinition:
    def test_stop_removal(self):
        stop = StopList(frozenset({"the", "of"}))
        assert normalize_definition(["the", "act", "of", "moving"], stop) == {"act", "moving"}

    def test_duplicates_collapse(self):
        assert normalize_definition(["walk", "walk"], StopList()) == {"walk"}

    def test_all_stop_words(self):
        stop = StopList(frozenset({"if", "is", "the"}))
        assert normalize_definition(["if", "is", "the"], stop) == frozenset()

    @given(
        st.lists(st.sampled_from(["act", "move", "leg", "the", "of"]), max_size=12),
        st.randoms(),
    )
    def test_permutation_and_duplication_invariance(self, tokens, rnd):
        stop = StopList(frozenset({"the", "of"}))
        shuffled = list(tokens) + tokens[:3]
        rnd.shuffle(shuffled)
        assert normalize_definition(tokens, stop) == normalize_definition(shuffled, stop)


class TestCloseLexicon:
    def test_drop_unknown(self):
        raw = make_lexicon({"a": {"b"}, "b": {"a", "z"}}, closed=False)
        closed, report = close_lexicon(raw, "drop-unknown")
        assert closed.definition("b") == frozenset({"a"})
        assert report.dropped == {"z": 1}

    def test_already_closed_is_identity(self, f2_lexicon):
        closed, report = close_lexicon(f2_lexicon, "drop-unknown")
        assert closed.entries == f2_lexicon.entries
        assert report.total_dropped == 0
        assert report.emptied_entries == []

    def test_error_unknown_names_token_and_entry(self):
        raw = make_lexicon({"a": {"b"}}, closed=False)
        with pytest.raises(ClosureError, match="'a'.*'b'"):
            close_lexicon(raw, "error-unknown")

    def test_idempotent(self):
        raw = make_lexicon({"a": {"b", "q"}, "b": {"a"}}, closed=False)
        once, _ = close_lexicon(raw)
        twice, report = close_lexicon(once)
        assert once.entries == twice.entries
        assert report.total_dropped == 0

    def test_result_is_closed(self):
        raw = make_lexicon({"a": {"b", "x"}, "b": {"a", "y"}}, closed=False)
        closed, _ = close_lexicon(raw)
        for head in closed.headwords():
            for token in closed.definition(head):
                assert token in closed.entries

    def test_emptied_entries_reported(self):
        raw = make_lexicon({"a": {"zz"}, "b": {"a"}}, closed=False)
        _, report = close_lexicon(raw)
        assert report.emptied_entries == ["a"]

    def test_drop_self(self):
        raw = make_lexicon({"a": {"a", "b"}, "b": {"a"}}, closed=False)
        closed, report = close_lexicon(raw, drop_self=True)
        assert closed.definition("a") == frozenset({"b"})
        assert report.self_dropped == ["a"]

    def test_self_reference_kept_by_default(self):
        raw = make_lexicon({"a": {"a", "b"}, "b": {"a"}}, closed=False)
        closed, _ = close_lexicon(raw)
        assert "a" in closed.definition("a")

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            close_lexicon(make_lexicon({}, closed=False), "nonsense")


class TestStopList:
    def test_from_stream_with_comments(self):
        stream = io.StringIO("# articles\nthe\na # indefinite\n\nof\n")
        stop = StopList.from_stream(stream)
        assert stop.words == frozenset({"the", "a", "of"})

    def test_default_contains_function_words(self):
        stop = StopList.default()
        for w in ("if", "is", "the", "and", "not"):
            assert w in stop

    def test_strip_stopwords(self):
        raw = make_lexicon({"act": {"the", "move"}, "move": {"act"}}, closed=False)
        stripped = strip_stopwords(raw, StopList(frozenset({"the"})))
        assert stripped.definition("act") == frozenset({"move"})


class TestLoadNorms:
    HEADER = "word,aoa,concreteness,imageability,freq_written,freq_oral\n"

    def test_full_row(self):
        table = load_norms(io.StringIO(self.HEADER + "dog,250,590,630,75,80\n"))
        record = table.rows["dog"]
        assert (record.aoa, record.concreteness, record.imageability) == (250, 590, 630)
        assert (record.freq_written, record.freq_oral) == (75, 80)

    def test_missing_cells(self):
        table = load_norms(io.StringIO(self.HEADER + "justice,,280,,12,\n"))
        record = table.rows["justice"]
        assert record.aoa is None
        assert record.imageability is None
        assert record.freq_oral is None
        assert record.concreteness == 280

    def test_duplicate_rows_last_wins_with_warning(self):
        table = load_norms(
            io.StringIO(self.HEADER + "dog,100,,,,\ndog,200,,,,\n")
        )
        assert table.rows["dog"].aoa == 200
        assert any("duplicate" in w for w in table.warnings)

    def test_non_numeric_cell_reports_row(self):
        with pytest.raises(ParseError, match="line 3"):
            load_norms(io.StringIO(self.HEADER + "dog,1,,,,\ncat,x,,,,\n"))

    def test_bad_header(self):
        with pytest.raises(ParseError):
            load_norms(io.StringIO("word,age\ndog,1\n"))

    def test_non_finite_rejected(self):
        with pytest.raises(ParseError):
            load_norms(io.StringIO(self.HEADER + "dog,inf,,,,\n"))


def test_dump_jsonl_round_trip(f2_lexicon):
    text = dump_jsonl(f2_lexicon)
    lex = parse_dictionary(io.StringIO(text), "jsonl")
    assert {w: set(e.definition) for w, e in lex.entries.items()} == {
        w: set(e.definition) for w, e in f2_lexicon.entries.items()
    }
