import math
import os

import pytest
from hypothesis import given, settings, strategies as st

from verbscope.corpus import Corpus
from verbscope.scorer import (
    BOS,
    EOS,
    UNK,
    SentenceScore,
    corpus_perplexity,
    load_lm,
    save_lm,
    score_pairs,
    train_ngram,
)
from verbscope.pairgen import MinimalPair

from conftest import corpus_of


class ReferenceKN:
    """Independent reference: counts its own n-grams and evaluates the
    interpolated Kneser-Ney recursion directly from the definition."""

    def __init__(self, sentences, order, discount=0.75):
        self.order = order
        self.d = discount
        forms = sorted({f for s in sentences for f in s})
        self.vocab = forms + [UNK, EOS]  # scorable symbols
        self.raw = {k: {} for k in range(1, order + 1)}
        for s in sentences:
            events = list(s) + [EOS]
            for k in range(1, order + 1):
                padded = [BOS] * (k - 1) + events
                for t in range(k - 1, len(padded)):
                    gram = tuple(padded[t - k + 1 : t + 1])
                    self.raw[k][gram] = self.raw[k].get(gram, 0) + 1
        # continuation counts for levels below the top
        self.table = {self.order: self.raw[self.order]}
        for k in range(1, order):
            cont = {}
            for gram in self.raw[k + 1]:
                cont[gram[1:]] = cont.get(gram[1:], 0) + 1
            self.table[k] = cont

    def prob(self, w, ctx):
        return self._p(len(ctx) + 1, tuple(ctx), w)

    def _p(self, k, ctx, w):
        if k == 0:
            return 1.0 / len(self.vocab)
        table = self.table[k]
        total = sum(c for gram, c in table.items() if gram[:-1] == ctx)
        if total == 0:
            return self._p(k - 1, ctx[1:], w)
        c = table.get(ctx + (w,), 0)
        types = sum(1 for gram in table if gram[:-1] == ctx)
        return max(c - self.d, 0.0) / total + (self.d * types / total) * self._p(
            k - 1, ctx[1:], w
        )

    def logprob(self, tokens):
        events = [t if t in self.vocab else UNK for t in tokens] + [EOS]
        ctx = [BOS] * (self.order - 1)
        lp = 0.0
        for w in events:
            lp += math.log(self.prob(w, ctx))
            if self.order > 1:
                ctx = ctx[1:] + [w]
        return lp


class TestTrainNGram:
    def test_order_below_one_rejected(self):
        with pytest.raises(ValueError, match="order"):
            train_ngram(corpus_of("a b"), 0)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError, match="empty corpus"):
            train_ngram(Corpus(()), 2)

    def test_unigram_distribution_on_aab(self):
        # corpus "a a b": events a,a,b,EOS; N=4; D=0.75; V={a,b,UNK,EOS}
        lm = train_ngram(corpus_of("a a b"), order=1)
        assert sorted(lm.scorable_symbols()) == sorted(["a", "b", UNK, EOS])
        p = {w: lm.prob(w) for w in lm.scorable_symbols()}
        # hand computation: p(a) = (2-.75)/4 + (.75*3/4)*(1/4)
        assert p["a"] == pytest.approx(0.453125, abs=1e-12)
        assert p["b"] == pytest.approx(0.203125, abs=1e-12)
        assert p[EOS] == pytest.approx(0.203125, abs=1e-12)
        assert p[UNK] == pytest.approx(0.140625, abs=1e-12)
        assert sum(p.values()) == pytest.approx(1.0, abs=1e-9)

    def test_training_is_deterministic(self, tmp_path):
        corpus = corpus_of("a b c", "b c a", "c c c")
        a, b = train_ngram(corpus, 3), train_ngram(corpus, 3)
        pa, pb = tmp_path / "a.lm", tmp_path / "b.lm"
        save_lm(a, pa)
        save_lm(b, pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_min_count_unk_maps_rare_forms(self):
        lm = train_ngram(corpus_of("a a a b"), order=1, min_count_unk=2)
        assert "b" not in lm.forms
        assert lm.symbol_id("b") == lm.unk_id


class TestLogprob:
    def test_empty_tokens_is_eos_only(self):
        lm = train_ngram(corpus_of("a b", "b a"), order=2)
        score = lm.logprob([])
        assert score.num_tokens == 1
        assert score.logprob == pytest.approx(math.log(lm.prob(EOS, [BOS])), abs=1e-12)

    def test_unseen_word_equals_unk_substitution(self):
        lm = train_ngram(corpus_of("you want it", "you want milk"), order=3)
        a = lm.logprob(["you", "want", "xylophone"])
        b = lm.logprob(["you", "want", UNK])
        assert a.logprob == b.logprob

    def test_matches_independent_reference(self):
        sentences = [
            ["the", "cat", "sat"],
            ["the", "dog", "sat"],
            ["a", "cat", "ran"],
            ["the", "cat", "ran", "far"],
        ]
        corpus = corpus_of(*[" ".join(s) for s in sentences])
        for order in (1, 2, 3):
            lm = train_ngram(corpus, order)
            ref = ReferenceKN(sentences, order)
            for probe in (
                ["the", "cat", "sat"],
                ["a", "dog", "ran"],
                ["far"],
                ["the", "zebra"],
                [],
            ):
                assert lm.logprob(probe).logprob == pytest.approx(
                    ref.logprob(probe), abs=1e-10
                ), (order, probe)

    def test_score_is_negative_and_counts_eos(self):
        lm = train_ngram(corpus_of("a b c d"), order=2)
        score = lm.logprob(["a", "b"], "sid")
        assert score.logprob < 0
        assert score.num_tokens == 3
        assert score.sentence_id == "sid"


class TestNormalization:
    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_observed_contexts_sum_to_one(self, order, chat_fixture):
        subset = Corpus(chat_fixture.sentences[:400], domain="chat")
        lm = train_ngram(subset, order)
        symbols = lm.scorable_symbols()
        ids = [lm.symbol_id(s) for s in symbols]
        for level in range(1, order + 1):
            contexts = lm.observed_contexts(level)[:10]
            for ctx in contexts:
                total = sum(lm.prob_ids(w, ctx) for w in ids)
                assert total == pytest.approx(1.0, abs=1e-6), (level, ctx)

    def test_probabilities_strictly_positive(self):
        lm = train_ngram(corpus_of("a b", "c d"), order=2)
        for w in lm.scorable_symbols():
            assert 0 < lm.prob(w, ["a"]) < 1


class TestModelProperties:
    def test_perplexity_beats_uniform(self, chat_fixture):
        subset = Corpus(chat_fixture.sentences[:500], domain="chat")
        for order in (1, 2, 3):
            lm = train_ngram(subset, order)
            assert corpus_perplexity(lm, subset) <= lm.vocab_size

    def test_doubling_corpus_keeps_dominant_argmax(self):
        base = ["the cat sat", "the cat sat", "the dog ran"]
        double = base + base
        lm1 = train_ngram(corpus_of(*base), order=2)
        lm2 = train_ngram(corpus_of(*double), order=2)
        for ctx in (["the"], ["cat"], [BOS]):
            best1 = max(lm1.scorable_symbols(), key=lambda w: lm1.prob(w, ctx))
            best2 = max(lm2.scorable_symbols(), key=lambda w: lm2.prob(w, ctx))
            assert best1 == best2

    def test_save_load_round_trip_scores_identically(self, tmp_path):
        corpus = corpus_of("a b c", "c b a", "a a b b")
        lm = train_ngram(corpus, 3, min_count_unk=1, discount=0.6)
        path = tmp_path / "m.lm"
        save_lm(lm, path)
        loaded = load_lm(path)
        for probe in (["a", "b", "c"], ["c", "z"], []):
            assert loaded.logprob(probe).logprob == lm.logprob(probe).logprob
        assert loaded.discounts == lm.discounts


class TestScorePairs:
    def _pair(self, pid, good, bad, idx):
        return MinimalPair(pid, "semantic-verb", tuple(good), tuple(bad), idx)

    def test_identical_members_tie(self):
        lm = train_ngram(corpus_of("a b c"), order=2)
        # construct via different diff then evaluate equal-scoring directly
        pair = self._pair("p", ["a", "b"], ["a", "c"], 1)
        lm_scores = score_pairs(lm, [pair])
        assert lm_scores[0][0] == "p"
        same = lm.logprob(["a", "b"]).logprob
        assert lm_scores[0][1] == same

    def test_plausible_sentence_beats_unk(self):
        lm = train_ngram(
            corpus_of("you want it .", "you want it .", "they see milk ."), order=3
        )
        good = ["you", "want", "it", "."]
        bad = ["you", "want", "xylophone", "."]
        pair = self._pair("p", good, bad, 2)
        _, lp_good, lp_bad = score_pairs(lm, [pair])[0]
        assert lp_good > lp_bad

    def test_batch_of_n_gives_n_rows_in_order(self, chat_fixture):
        from verbscope.corpus import build_frequency_table
        from verbscope.ingest import split_corpus
        from verbscope.pairgen import gen_semantic_pairs

        train, _dev, test = split_corpus(chat_fixture)
        lm = train_ngram(Corpus(train.sentences[:500], domain="chat"), 3)
        pairs = gen_semantic_pairs(test, build_frequency_table(train), seed=2)[:200]
        rows = score_pairs(lm, pairs)
        assert len(rows) == len(pairs)
        assert [r[0] for r in rows] == [p.pair_id for p in pairs]
        assert score_pairs(lm, pairs) == rows  # pure function of (scorer, pairs)

    def test_duplicate_pair_ids_rejected(self):
        lm = train_ngram(corpus_of("a b"), order=1)
        pair = self._pair("p", ["a"], ["b"], 0)
        with pytest.raises(ValueError, match="unique"):
            score_pairs(lm, [pair, pair])


class TestSentenceScoreType:
    def test_positive_logprob_rejected(self):
        with pytest.raises(ValueError, match="logprob"):
            SentenceScore("s", 0.5, 3, "x")

    def test_zero_tokens_rejected(self):
        with pytest.raises(ValueError, match="num_tokens"):
            SentenceScore("s", -1.0, 0, "x")


class TestKernelTwins:
    def test_compiled_kernel_matches_pure(self, chat_fixture):
        from verbscope.scorer.kernel import available_kernels

        kernels = available_kernels()
        if "compiled" not in kernels:
            pytest.skip("compiled kernel not built")
        subset = Corpus(chat_fixture.sentences[:300], domain="chat")
        lm = train_ngram(subset, 3)
        py, cy = kernels["pure-python"], kernels["compiled"]
        args = (lm.discounts, lm._counts, lm._totals, lm._types, lm._inv_vocab)
        for s in chat_fixture.sentences[300:600]:
            ids = [lm.symbol_id(f) for f in s.forms()] + [lm.eos_id]
            assert py.sentence_logprob(ids, lm.order, lm.bos_id, *args) == \
                cy.sentence_logprob(ids, lm.order, lm.bos_id, *args)

    def test_pure_python_env_override(self):
        import subprocess
        import sys

        code = (
            "import verbscope.scorer.kernel as k; print(k.KERNEL_NAME)"
        )
        env = dict(os.environ, VERBSCOPE_PURE_PYTHON="1")
        src = os.path.join(os.path.dirname(__file__), "..", "src")
        env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, env=env, text=True
        )
        assert out.stdout.strip() == "pure-python"


@settings(max_examples=20, deadline=None)
@given(
    st.lists(
        st.lists(st.sampled_from("abcde"), min_size=1, max_size=6),
        min_size=1,
        max_size=8,
    ),
    st.integers(min_value=1, max_value=3),
)
def test_model_agrees_with_reference_on_random_corpora(sentences, order):
    corpus = corpus_of(*[" ".join(s) for s in sentences])
    lm = train_ngram(corpus, order)
    ref = ReferenceKN(sentences, order)
    probes = sentences[:3] + [["a", "z", "b"], []]
    for probe in probes:
        assert lm.logprob(probe).logprob == pytest.approx(ref.logprob(probe), abs=1e-9)
