"""Core corpus types and the tag/frequency-bin machinery.

Word replacement and semantic pair generation both operate on strata of
words sharing a (coarse tag, fine tag) pair and a power-of-two frequency
band, so the binning rule lives here:

    bin(count) = floor(log2(count))

computed exactly on integer counts. Tokens without a fine tag fall back to
their coarse tag for binning, so raw-text pipelines still stratify (a
degraded mode: one stratum per coarse tag).

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace as _dc_replace
from typing import Iterable, Iterator, Mapping

UNK_TAG = "UNK"

SPLIT_LABELS = ("train", "dev", "test", "unsplit")

TagKey = tuple[str, str, str]  # (upos, xpos, form)


@dataclass(frozen=True)
class Token:
    """One token: surface form, lemma, tags, and optional dependency edge.

    ``head`` is a 0-based index into the owning sentence, or None for the
    root (and for unparsed text). Head range checks live in
    AnnotatedSentence, which knows the sentence length.
    """

    form: str
    lemma: str = ""
    upos: str = UNK_TAG
    xpos: str = UNK_TAG
    head: int | None = None
    deprel: str | None = None

    def __post_init__(self):
        if not self.form:
            raise ValueError("token form must be non-empty")


def tag_pair(token: Token) -> tuple[str, str]:
    """The (upos, xpos) pair used for binning; missing xpos falls back to upos."""
    return token.upos, token.xpos if token.xpos else token.upos


@dataclass(frozen=True)
class AnnotatedSentence:
    tokens: tuple[Token, ...]
    sentence_id: str
    source: str = ""

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise ValueError(f"sentence {self.sentence_id!r} has no tokens")
        n = len(self.tokens)
        roots = 0
        for i, tok in enumerate(self.tokens):
            if tok.deprel == "root":
                roots += 1
            if tok.head is not None and not (0 <= tok.head < n and tok.head != i):
                raise ValueError(
                    f"sentence {self.sentence_id!r}: token {i} has invalid head {tok.head}"
                )
        if roots > 1:
            raise ValueError(f"sentence {self.sentence_id!r} has {roots} root tokens")

    def __len__(self) -> int:
        return len(self.tokens)

    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    def with_tokens(self, tokens: Iterable[Token]) -> "AnnotatedSentence":
        return _dc_replace(self, tokens=tuple(tokens))


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[AnnotatedSentence, ...]
    domain: str = ""
    split: str = "unsplit"

    def __post_init__(self):
        if not isinstance(self.sentences, tuple):
            object.__setattr__(self, "sentences", tuple(self.sentences))
        if self.split not in SPLIT_LABELS:
            raise ValueError(f"unknown split label {self.split!r}")
        seen = set()
        for sent in self.sentences:
            if sent.sentence_id in seen:
                raise ValueError(f"duplicate sentence_id {sent.sentence_id!r}")
            seen.add(sent.sentence_id)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[AnnotatedSentence]:
        return iter(self.sentences)

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)


def bin_index(count: int) -> int:
    """floor(log2(count)), exact on integers; counts must be >= 1."""
    if count < 1:
        raise ValueError(f"counts must be >= 1, got {count}")
    return count.bit_length() - 1


class FrequencyTable:
    """Token frequencies keyed by (upos, xpos, form), with log2 bins.

    Within each (upos, xpos, bin) stratum the forms are held in
    lexicographic order together with their counts and cumulative counts,
    ready for deterministic frequency-weighted sampling.
    """

    def __init__(self, counts: Mapping[TagKey, int]):
        for key, c in counts.items():
            if c < 1:
                raise ValueError(f"count for {key} must be >= 1, got {c}")
        self._counts: dict[TagKey, int] = dict(counts)
        self._bins: dict[TagKey, int] = {
            key: bin_index(c) for key, c in self._counts.items()
        }
        strata: dict[tuple[str, str, int], list[tuple[str, int]]] = {}
        for (upos, xpos, form), c in self._counts.items():
            strata.setdefault((upos, xpos, bin_index(c)), []).append((form, c))
        self._strata = {k: sorted(v) for k, v in strata.items()}
        self._cumulative: dict[tuple[str, str, int], list[int]] = {}
        for k, members in self._strata.items():
            acc, cum = 0, []
            for _, c in members:
                acc += c
                cum.append(acc)
            self._cumulative[k] = cum

    @property
    def counts(self) -> Mapping[TagKey, int]:
        return self._counts

    def count(self, upos: str, xpos: str, form: str) -> int | None:
        return self._counts.get((upos, xpos, form))

    def bin_of(self, upos: str, xpos: str, form: str) -> int | None:
        return self._bins.get((upos, xpos, form))

    def total_tokens(self) -> int:
        return sum(self._counts.values())

    def stratum(self, upos: str, xpos: str, bin: int) -> list[tuple[str, int]]:
        """All (form, count) entries of one (upos, xpos, bin) stratum, sorted."""
        return self._strata.get((upos, xpos, bin), [])

    def stratum_cumulative(self, upos: str, xpos: str, bin: int) -> list[int]:
        return self._cumulative.get((upos, xpos, bin), [])

    def forms_by_upos(self, upos: str) -> list[tuple[str, int]]:
        """Aggregated (form, count) for one coarse tag, most frequent first."""
        agg: dict[str, int] = {}
        for (u, _x, form), c in self._counts.items():
            if u == upos:
                agg[form] = agg.get(form, 0) + c
        return sorted(agg.items(), key=lambda kv: (-kv[1], kv[0]))


def build_frequency_table(corpus: Corpus) -> FrequencyTable:
    """Exact (upos, xpos, form) frequencies of a corpus, with log2 bins."""
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    counts: dict[TagKey, int] = {}
    for sent in corpus:
        for tok in sent.tokens:
            upos, xpos = tag_pair(tok)
            key = (upos, xpos, tok.form)
            counts[key] = counts.get(key, 0) + 1
    return FrequencyTable(counts)


def bin_candidates(
    table: FrequencyTable, upos: str, xpos: str, bin: int, exclude: str
) -> list[tuple[str, int]]:
    """Forms sharing (upos, xpos, bin), minus ``exclude``, lexicographic order."""
    return [(f, c) for f, c in table.stratum(upos, xpos, bin) if f != exclude]


def save_table(table: FrequencyTable, path) -> None:
    """Write a frequency table as sorted TSV: upos, xpos, form, count."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("verbscope-table/1\n")
        for (upos, xpos, form), c in sorted(table.counts.items()):
            fh.write(f"{upos}\t{xpos}\t{form}\t{c}\n")


def load_table(path) -> FrequencyTable:
    counts: dict[TagKey, int] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "verbscope-table/1":
            raise ValueError(f"{path}: not a frequency table file")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}: line {lineno}: expected 4 columns")
            upos, xpos, form, c = parts
            counts[(upos, xpos, form)] = int(c)
    return FrequencyTable(counts)
