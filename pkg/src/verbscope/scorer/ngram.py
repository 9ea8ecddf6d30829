"""Interpolated Kneser-Ney n-gram language model.

Absolute discounting with a fixed per-order discount (default 0.75), true
counts at the top order and continuation counts below, and full backoff
through unseen contexts down to a uniform floor over the scorable
vocabulary. That floor guarantees every conditional distribution sums to
exactly 1 and every symbol keeps nonzero mass, UNK included.

The scorable vocabulary is the kept training forms plus UNK and EOS. BOS
is a context-only padding symbol: it can never be predicted, so it takes
no probability mass. Forms seen fewer than min_count_unk times are mapped
to UNK at training time; unknown forms map to UNK at scoring time.

Scores are total (not length-normalized) natural-log probabilities
including the EOS event. Minimal-pair members always have equal token
counts, so normalization would cancel anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp

from ..corpus import Corpus
from . import kernel

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"


@dataclass(frozen=True)
class SentenceScore:
    sentence_id: str
    logprob: float
    num_tokens: int
    scorer_id: str
    checkpoint: str | None = None

    def __post_init__(self):
        if self.logprob > 0:
            raise ValueError(f"logprob must be <= 0, got {self.logprob}")
        if self.num_tokens < 1:
            raise ValueError(f"num_tokens must be >= 1, got {self.num_tokens}")


class NGramLM:
    """Immutable after construction; shareable across threads."""

    def __init__(
        self,
        order: int,
        forms: list[str],
        raw_counts: list[dict | None],
        discount: float = 0.75,
        min_count_unk: int = 1,
    ):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        self.min_count_unk = min_count_unk
        self.discounts = [0.0] + [float(discount)] * order  # index 0 unused
        self.forms = list(forms)  # sorted kept forms; ids follow list order
        self._ids = {f: i for i, f in enumerate(self.forms)}
        self.unk_id = len(self.forms)
        self.eos_id = len(self.forms) + 1
        self.bos_id = len(self.forms) + 2  # context-only, outside the event space
        self.vocab_size = len(self.forms) + 2  # forms + UNK + EOS
        self._inv_vocab = 1.0 / self.vocab_size
        self._raw = raw_counts
        self._derive_tables()

    @property
    def scorer_id(self) -> str:
        return f"ngram-o{self.order}"

    def _derive_tables(self) -> None:
        order = self.order
        counts: list[dict | None] = [None] * (order + 1)
        counts[order] = self._raw[order]
        for k in range(1, order):
            cont: dict = {}
            for gram in self._raw[k + 1]:
                suffix = gram[1:]
                cont[suffix] = cont.get(suffix, 0) + 1
            counts[k] = cont
        totals: list[dict | None] = [None] * (order + 1)
        types: list[dict | None] = [None] * (order + 1)
        for k in range(1, order + 1):
            tot: dict = {}
            ty: dict = {}
            for gram, c in counts[k].items():
                u = gram[:-1]
                tot[u] = tot.get(u, 0) + c
                ty[u] = ty.get(u, 0) + 1
            totals[k] = tot
            types[k] = ty
        self._counts = counts
        self._totals = totals
        self._types = types

    # -- symbol mapping ---------------------------------------------------
    def symbol_id(self, form: str) -> int:
        """Event id of a form; OOV and UNK map to the UNK id."""
        if form == UNK:
            return self.unk_id
        if form == EOS:
            return self.eos_id
        return self._ids.get(form, self.unk_id)

    def scorable_symbols(self) -> list[str]:
        return self.forms + [UNK, EOS]

    def observed_contexts(self, level: int) -> list[tuple]:
        """All observed context id-tuples of one level (1..order)."""
        return list(self._totals[level].keys())

    # -- probabilities ----------------------------------------------------
    def prob_ids(self, w_id: int, ctx_ids: tuple) -> float:
        return kernel.ngram_prob(
            w_id, ctx_ids, self.discounts, self._counts, self._totals,
            self._types, self._inv_vocab,
        )

    def prob(self, form: str, context: list[str] | tuple = ()) -> float:
        """p(form | context), context given as forms, BOS-padded on the left."""
        ctx_ids = tuple(
            self.bos_id if f == BOS else self.symbol_id(f) for f in context
        )
        if len(ctx_ids) < self.order - 1:
            ctx_ids = (self.bos_id,) * (self.order - 1 - len(ctx_ids)) + ctx_ids
        elif len(ctx_ids) > self.order - 1:
            ctx_ids = ctx_ids[len(ctx_ids) - (self.order - 1):]
        return self.prob_ids(self.symbol_id(form), ctx_ids)

    def logprob(self, tokens, sentence_id: str = "") -> SentenceScore:
        """Total ln-probability of the token sequence plus the EOS event."""
        event_ids = [self.symbol_id(f) for f in tokens]
        event_ids.append(self.eos_id)
        lp = kernel.sentence_logprob(
            event_ids, self.order, self.bos_id, self.discounts,
            self._counts, self._totals, self._types, self._inv_vocab,
        )
        return SentenceScore(
            sentence_id=sentence_id,
            logprob=lp,
            num_tokens=len(event_ids),
            scorer_id=self.scorer_id,
        )


def train_ngram(
    corpus: Corpus, order: int, min_count_unk: int = 1, discount: float = 0.75
) -> NGramLM:
    """Count n-grams of every order up to ``order`` and build the model.

    Deterministic: no randomness anywhere, forms are id-assigned in sorted
    order. Forms occurring at most min_count_unk - 1 times become UNK.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if len(corpus) == 0:
        raise ValueError("empty corpus")

    form_counts: dict[str, int] = {}
    for sent in corpus:
        for tok in sent.tokens:
            form_counts[tok.form] = form_counts.get(tok.form, 0) + 1
    forms = sorted(f for f, c in form_counts.items() if c >= min_count_unk)

    ids = {f: i for i, f in enumerate(forms)}
    unk_id = len(forms)
    eos_id = len(forms) + 1
    bos_id = len(forms) + 2

    raw: list[dict | None] = [None] + [dict() for _ in range(order)]
    for sent in corpus:
        event_ids = [ids.get(t.form, unk_id) for t in sent.tokens]
        event_ids.append(eos_id)
        for k in range(1, order + 1):
            seq = [bos_id] * (k - 1) + event_ids
            table = raw[k]
            for t in range(k - 1, len(seq)):
                gram = tuple(seq[t - k + 1 : t + 1])
                table[gram] = table.get(gram, 0) + 1

    return NGramLM(
        order=order, forms=forms, raw_counts=raw,
        discount=discount, min_count_unk=min_count_unk,
    )


def corpus_perplexity(lm: NGramLM, corpus: Corpus) -> float:
    """exp(-total logprob / total events), events including one EOS each."""
    lp = 0.0
    events = 0
    for sent in corpus:
        score = lm.logprob(sent.forms(), sent.sentence_id)
        lp += score.logprob
        events += score.num_tokens
    return exp(-lp / events)


MODEL_VERSION = "verbscope-ngram/1"


def save_lm(lm: NGramLM, path) -> None:
    """Sorted-text count tables; loading rebuilds the derived tables."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(MODEL_VERSION + "\n")
        fh.write(f"order\t{lm.order}\n")
        fh.write("discount\t" + ",".join(repr(d) for d in lm.discounts[1:]) + "\n")
        fh.write(f"min_count_unk\t{lm.min_count_unk}\n")
        fh.write(f"forms\t{len(lm.forms)}\n")
        for f in lm.forms:
            fh.write(f + "\n")
        for k in range(1, lm.order + 1):
            table = lm._raw[k]
            fh.write(f"grams\t{k}\t{len(table)}\n")
            for gram in sorted(table):
                fh.write(" ".join(map(str, gram)) + f"\t{table[gram]}\n")


def load_lm(path) -> NGramLM:
    with open(path, encoding="utf-8") as fh:
        version = fh.readline().rstrip("\n")
        if version != MODEL_VERSION:
            raise ValueError(f"{path}: unsupported model version {version!r}")
        header: dict[str, str] = {}
        for _ in range(4):
            key, _, value = fh.readline().rstrip("\n").partition("\t")
            header[key] = value
        order = int(header["order"])
        discounts = [float(d) for d in header["discount"].split(",")]
        forms = [fh.readline().rstrip("\n") for _ in range(int(header["forms"]))]
        raw: list[dict | None] = [None] + [dict() for _ in range(order)]
        for _ in range(order):
            tag, k_s, n_s = fh.readline().rstrip("\n").split("\t")
            if tag != "grams":
                raise ValueError(f"{path}: malformed model file")
            k, n = int(k_s), int(n_s)
            table = raw[k]
            for _ in range(n):
                gram_s, count_s = fh.readline().rstrip("\n").split("\t")
                table[tuple(map(int, gram_s.split(" ")))] = int(count_s)
    lm = NGramLM(
        order=order, forms=forms, raw_counts=raw,
        discount=discounts[0], min_count_unk=int(header["min_count_unk"]),
    )
    lm.discounts = [0.0] + discounts
    return lm
