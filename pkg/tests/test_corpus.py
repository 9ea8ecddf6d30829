import math

import pytest
from hypothesis import given, strategies as st

from verbscope.corpus import (
    AnnotatedSentence,
    Corpus,
    FrequencyTable,
    Token,
    bin_candidates,
    bin_index,
    build_frequency_table,
    load_table,
    save_table,
    tag_pair,
)

from conftest import corpus_of, sent


class TestTypes:
    def test_token_requires_form(self):
        with pytest.raises(ValueError):
            Token(form="")

    def test_head_must_point_inside_sentence(self):
        with pytest.raises(ValueError, match="invalid head"):
            AnnotatedSentence((Token("a", head=5),), "s1")

    def test_head_must_not_be_self(self):
        with pytest.raises(ValueError, match="invalid head"):
            AnnotatedSentence((Token("a", head=0), Token("b")), "s1")

    def test_at_most_one_root(self):
        t = Token("a", deprel="root")
        u = Token("b", deprel="root", head=None)
        with pytest.raises(ValueError, match="root"):
            AnnotatedSentence((t, u), "s1")

    def test_sentence_needs_tokens(self):
        with pytest.raises(ValueError):
            AnnotatedSentence((), "s1")

    def test_corpus_rejects_duplicate_ids(self):
        s = sent("a/DET/DT")
        with pytest.raises(ValueError, match="duplicate"):
            Corpus((s, s))

    def test_missing_xpos_falls_back_to_upos(self):
        assert tag_pair(Token("cat", upos="NOUN", xpos="")) == ("NOUN", "NOUN")


class TestBinIndex:
    def test_count_one_is_bin_zero(self):
        assert bin_index(1) == 0

    def test_count_eight_is_bin_three(self):
        assert bin_index(8) == 3

    def test_count_thousand_is_bin_nine(self):
        assert bin_index(1000) == 9

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            bin_index(0)

    @given(st.integers(min_value=1, max_value=10**12))
    def test_matches_float_log2(self, n):
        assert bin_index(n) == math.floor(math.log2(n))

    @given(st.integers(min_value=1, max_value=10**9), st.integers(min_value=0, max_value=10**6))
    def test_monotone_in_count(self, a, delta):
        assert bin_index(a + delta) >= bin_index(a)


class TestBuildFrequencyTable:
    def test_single_sentence_counts(self):
        table = build_frequency_table(corpus_of("the/DET/DT cat/NOUN/NN sat/VERB/VBD"))
        assert table.counts[("DET", "DT", "the")] == 1
        assert table.bin_of("DET", "DT", "the") == 0

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError, match="empty corpus"):
            build_frequency_table(Corpus(()))

    def test_total_tokens_equals_corpus_tokens(self, chat_fixture):
        table = build_frequency_table(chat_fixture)
        assert table.total_tokens() == chat_fixture.n_tokens

    def test_tag_totals_match_tokens_carrying_pair(self):
        corpus = corpus_of(
            "the/DET/DT cat/NOUN/NN sat/VERB/VBD",
            "a/DET/DT dog/NOUN/NN ran/VERB/VBD",
            "the/DET/DT dog/NOUN/NN sat/VERB/VBD",
        )
        table = build_frequency_table(corpus)
        nn_total = sum(c for (u, x, _f), c in table.counts.items() if (u, x) == ("NOUN", "NN"))
        carrying = sum(
            1 for s in corpus for t in s.tokens if (t.upos, t.xpos) == ("NOUN", "NN")
        )
        assert nn_total == carrying == 3


class TestBinCandidates:
    @pytest.fixture
    def table(self):
        return FrequencyTable(
            {
                ("NOUN", "NN", "a"): 4,
                ("NOUN", "NN", "b"): 5,
                ("NOUN", "NN", "c"): 7,
                ("NOUN", "NN", "d"): 2,
                ("VERB", "VBD", "e"): 5,
            }
        )

    def test_exclusion_exhausts_bin(self, table):
        assert bin_candidates(table, "NOUN", "NN", 1, exclude="d") == []

    def test_same_bin_forms_sorted(self, table):
        # independent oracle: enumerate all forms, keep floor(log2(c)) == 2
        expected = sorted(
            (f, c)
            for (u, x, f), c in table.counts.items()
            if (u, x) == ("NOUN", "NN") and math.floor(math.log2(c)) == 2 and f != "a"
        )
        assert expected == [("b", 5), ("c", 7)]
        assert bin_candidates(table, "NOUN", "NN", 2, exclude="a") == expected

    def test_unpopulated_tag_pair_is_empty(self, table):
        assert bin_candidates(table, "ADJ", "JJ", 2, exclude="x") == []

    @given(
        st.dictionaries(
            st.tuples(
                st.sampled_from(["NOUN", "VERB"]),
                st.sampled_from(["NN", "VBZ"]),
                st.text(st.characters(categories=("Ll",)), min_size=1, max_size=4),
            ),
            st.integers(min_value=1, max_value=300),
            min_size=1,
            max_size=25,
        ),
        st.integers(min_value=0, max_value=8),
    )
    def test_candidates_verified_by_brute_force(self, counts, bin):
        table = FrequencyTable(counts)
        for upos, xpos in {(u, x) for (u, x, _f) in counts}:
            got = bin_candidates(table, upos, xpos, bin, exclude="zzz")
            brute = sorted(
                (f, c)
                for (u, x, f), c in counts.items()
                if u == upos and x == xpos and bin_index(c) == bin
            )
            assert got == brute


def test_table_round_trip(tmp_path):
    table = FrequencyTable(
        {("NOUN", "NN", "cat"): 3, ("VERB", "VBZ", "sits"): 17}
    )
    path = tmp_path / "table.tsv"
    save_table(table, path)
    loaded = load_table(path)
    assert dict(loaded.counts) == dict(table.counts)


def test_table_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("not a table\n")
    with pytest.raises(ValueError, match="not a frequency table"):
        load_table(path)
