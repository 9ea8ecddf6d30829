"""One-command experiment runner.

For each (corpus, condition, seed) cell: split, build the frequency table
from the original training split, perturb the training split, train the
n-gram scorer on it, score minimal pairs generated once per domain from
the untouched test split, and evaluate. Perturbations apply to training
data only; evaluation pairs always come from the original test split, and
cross-domain scoring runs for ORIGINAL-condition models over every other
domain's pairs.

Cells run in parallel up to the configured thread count; every stage
derives its randomness from (seed, index) streams, so outputs are byte
identical regardless of scheduling. Completed cells are cached under a
hash of the config and input files and are skipped on re-runs.

Config files are flat key = value text (a TOML subset, parsed in-package):
strings quoted, booleans true/false, numbers bare, lists in brackets.
Corpora are "domain:path:format" strings. Full-line comments start with #.
"""

from __future__ import annotations

import csv
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .corpus import Corpus, build_frequency_table, save_table
from .evaluate import (
    EvalResult,
    Labels,
    cross_domain_matrix,
    evaluate,
    result_rows,
    write_matrix_csv,
    RESULT_COLUMNS,
)
from .ingest import (
    DEFAULT_SPLIT,
    SplitSpec,
    read_chat,
    read_conllu,
    read_plaintext,
    split_corpus,
    write_corpus,
)
from .pairgen import (
    AGREEMENT_PARADIGMS,
    build_lemma_index,
    distinct_verb_lemmas,
    extract_agreement_lexicon,
    gen_agreement_pairs,
    gen_semantic_pairs,
    write_pairs,
)
from .perturb import CONDITIONS, ORIGINAL, REPLACE_WORD, perturb_corpus
from .scorer import score_sentences, train_ngram, write_scores
from .scorer.scoring import pair_items, read_pair_scores
from .stats import compare_replacement_rates, compute_stats, write_rates_csv, write_stats_csv

FORMATS = ("conllu", "text", "chat")


@dataclass(frozen=True)
class CorpusSpec:
    domain: str
    path: str
    format: str = "conllu"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown corpus format {self.format!r}")

    @classmethod
    def parse(cls, text: str) -> "CorpusSpec":
        parts = text.rsplit(":", 2) if text.count(":") >= 2 else text.split(":")
        if len(parts) == 2:
            return cls(parts[0], parts[1])
        if len(parts) == 3:
            return cls(parts[0], parts[1], parts[2])
        raise ValueError(f"corpus spec {text!r} is not domain:path[:format]")


@dataclass
class ExperimentConfig:
    corpora: list
    out_dir: str
    conditions: list = field(default_factory=lambda: list(CONDITIONS))
    seeds: list = field(default_factory=lambda: [1])
    lm_order: int = 3
    discount: float = 0.75
    min_count_unk: int = 1
    max_alts: int = 5
    len_min: int = 10
    len_max: int = 30
    n_per_paradigm: int = 100
    pair_seed: int = 0
    split: str = "2/3,1/6,1/6"
    shuffle_split: bool = False
    include_propn: bool = False
    pin_final_punct: bool = False
    agreement: bool = True
    threads: int = 1
    keep_models: bool = False

    def __post_init__(self):
        self.corpora = [
            c if isinstance(c, CorpusSpec) else CorpusSpec.parse(c)
            for c in self.corpora
        ]
        if not self.corpora:
            raise ValueError("config needs at least one corpus")
        if not self.conditions:
            raise ValueError("config needs at least one condition")
        for cond in self.conditions:
            if cond not in CONDITIONS:
                raise ValueError(f"unknown condition {cond!r}")
        if not self.seeds:
            raise ValueError("config needs at least one seed")
        domains = [c.domain for c in self.corpora]
        if len(set(domains)) != len(domains):
            raise ValueError("corpus domains must be unique")

    def split_spec(self) -> SplitSpec:
        return SplitSpec.parse(self.split) if self.split else DEFAULT_SPLIT


def parse_flat_config(text: str) -> dict:
    """Parse the flat key = value config dialect."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected key = value")
        out[key.strip()] = _parse_value(value.strip(), lineno)
    return out


def _parse_value(text: str, lineno: int):
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(part.strip(), lineno) for part in inner.split(",")]
    if text.startswith('"') and text.endswith('"') and len(text) >= 2:
        return text[1:-1]
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"config line {lineno}: cannot parse value {text!r}")


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        values = parse_flat_config(fh.read())
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def _load_corpus(spec: CorpusSpec) -> Corpus:
    if spec.format == "conllu":
        return read_conllu(spec.path, domain=spec.domain)
    if spec.format == "text":
        return read_plaintext(spec.path, domain=spec.domain)
    return read_chat(spec.path, domain=spec.domain)


def _sha256(path) -> str:
    if not Path(path).exists():
        return "missing"
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _config_hash(config: ExperimentConfig) -> str:
    payload = asdict(config)
    payload.pop("threads")  # scheduling must not change outputs
    payload.pop("out_dir")
    payload["corpus_files"] = {c.domain: _sha256(c.path) for c in config.corpora}
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()
    ).hexdigest()


def _slug(condition: str) -> str:
    return condition.lower().replace(".", "-")


@dataclass
class ExperimentResult:
    status: int
    out_dir: Path
    failures: list
    results: list


@dataclass
class _DomainData:
    spec: CorpusSpec
    train: Corpus
    table: object
    pairs: list
    pairs_meta: dict
    pairs_path: Path
    stats: object


def _prepare_domain(config: ExperimentConfig, spec: CorpusSpec, out: Path) -> _DomainData:
    ddir = out / spec.domain
    (ddir / "splits").mkdir(parents=True, exist_ok=True)
    (ddir / "pairs").mkdir(parents=True, exist_ok=True)
    corpus = _load_corpus(spec)
    train, dev, test = split_corpus(
        corpus, config.split_spec(), shuffle=config.shuffle_split,
        seed=config.pair_seed,
    )
    for name, part in (("train", train), ("dev", dev), ("test", test)):
        write_corpus(part, ddir / "splits" / f"{name}.conllu", "conllu")
    table = build_frequency_table(train)
    save_table(table, ddir / "table.tsv")

    counters: dict = {}
    pairs = gen_semantic_pairs(
        test, table, max_alts=config.max_alts, len_min=config.len_min,
        len_max=config.len_max, seed=config.pair_seed, counters=counters,
    )
    agreement_note = ""
    if config.agreement:
        try:
            lexicon = extract_agreement_lexicon(table, build_lemma_index(train))
            pairs += gen_agreement_pairs(
                lexicon, AGREEMENT_PARADIGMS, config.n_per_paradigm,
                seed=config.pair_seed,
            )
        except ValueError as exc:
            agreement_note = str(exc)
    pairs_path = ddir / "pairs" / "pairs.jsonl"
    write_pairs(pairs, pairs_path)
    counters["semantic_verb_lemmas"] = distinct_verb_lemmas(pairs)
    if agreement_note:
        counters["agreement_skipped"] = agreement_note
    with open(ddir / "pairs" / "genreport.json", "w", encoding="utf-8") as fh:
        json.dump(counters, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return _DomainData(
        spec=spec, train=train, table=table, pairs=pairs,
        pairs_meta={p.pair_id: p.paradigm for p in pairs},
        pairs_path=pairs_path, stats=compute_stats(train),
    )


def _run_cell(
    config: ExperimentConfig,
    domains: dict,
    domain: str,
    condition: str,
    seed: int,
    out: Path,
    run_hash: str,
):
    """One experiment cell; returns (eval rows, replacement report dict)."""
    cell_dir = out / domain / _slug(condition) / f"seed{seed}"
    marker = cell_dir / "cell.json"
    if marker.exists():
        with open(marker, encoding="utf-8") as fh:
            cached = json.load(fh)
        if cached.get("hash") == run_hash:
            return cached["rows"], cached["report"]
    cell_dir.mkdir(parents=True, exist_ok=True)
    data: _DomainData = domains[domain]

    perturbed, report = perturb_corpus(
        data.train, condition, data.table, seed=seed,
        include_propn=config.include_propn,
        pin_final_punct=config.pin_final_punct,
    )
    with open(cell_dir / "perturb.json", "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    lm = train_ngram(
        perturbed, config.lm_order, min_count_unk=config.min_count_unk,
        discount=config.discount,
    )
    if config.keep_models:
        from .scorer import save_lm

        save_lm(lm, cell_dir / "lm.txt")

    rows: list[dict] = []
    for eval_domain in sorted(domains):
        if eval_domain != domain and condition != ORIGINAL:
            continue  # cross-domain check runs on unperturbed models only
        pairs = domains[eval_domain].pairs
        scores = score_sentences(lm, pair_items(pairs))
        write_scores(scores, cell_dir / f"scores-{eval_domain}.tsv")
        scored = read_pair_scores(cell_dir / f"scores-{eval_domain}.tsv")
        # seeds stack as replicate rows; per-seed traces live in the cell dir
        result = evaluate(
            scored,
            domains[eval_domain].pairs_meta,
            Labels(domain, eval_domain, condition, None),
        )
        rows.extend(result_rows(result))
    with open(marker, "w", encoding="utf-8") as fh:
        json.dump(
            {"hash": run_hash, "rows": rows, "report": json.loads(report.to_json())},
            fh, sort_keys=True, indent=2,
        )
        fh.write("\n")
    return rows, json.loads(report.to_json())


def _write_rows_csv(rows: list[dict], path) -> None:
    rows = sorted(rows, key=lambda r: tuple(str(r[c]) for c in RESULT_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def _write_summary_csv(rows: list[dict], path) -> None:
    """Mean accuracy over seeds per (train, eval, condition, paradigm)."""
    groups: dict[tuple, list] = {}
    for r in rows:
        key = (r["train_domain"], r["eval_domain"], r["condition"], r["paradigm"])
        groups.setdefault(key, []).append((float(r["accuracy"]), int(r["n"])))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["train_domain", "eval_domain", "condition", "paradigm",
             "mean_accuracy", "n_seeds", "n_pairs"]
        )
        for key in sorted(groups):
            vals = groups[key]
            mean = sum(a for a, _n in vals) / len(vals)
            writer.writerow(list(key) + [repr(mean), len(vals), vals[0][1]])


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    run_hash = _config_hash(config)

    domains: dict[str, _DomainData] = {}
    failures: list[tuple[str, str]] = []
    for spec in config.corpora:
        try:
            domains[spec.domain] = _prepare_domain(config, spec, out)
        except Exception as exc:  # domain prep failure takes down its cells only
            failures.append((spec.domain, str(exc)))

    cells = [
        (spec.domain, condition, seed)
        for spec in config.corpora
        if spec.domain in domains
        for condition in config.conditions
        for seed in config.seeds
    ]
    all_rows: list[dict] = []
    reports: dict[str, dict] = {}

    def one(cell):
        domain, condition, seed = cell
        return cell, _run_cell(config, domains, domain, condition, seed, out, run_hash)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            futures = [pool.submit(one, cell) for cell in cells]
            outcomes = []
            for fut in futures:
                try:
                    outcomes.append((fut.result(), None))
                except Exception as exc:  # cell failures abort the cell, not the run
                    outcomes.append((None, exc))
    else:
        outcomes = []
        for cell in cells:
            try:
                outcomes.append((one(cell), None))
            except Exception as exc:
                outcomes.append((None, exc))

    for i, (outcome, error) in enumerate(outcomes):
        if error is not None:
            failures.append(("/".join(map(str, cells[i])), str(error)))
            continue
        (domain, condition, seed), (rows, report) = outcome
        all_rows.extend(rows)
        if condition == REPLACE_WORD and domain not in reports:
            reports[domain] = report

    _write_rows_csv(all_rows, out / "results.csv")
    _write_summary_csv(all_rows, out / "summary.csv")

    cross = [
        r for r in all_rows
        if r["condition"] == ORIGINAL and r["paradigm"] == "ALL"
    ]
    if cross:
        by_cell: dict[tuple, list[float]] = {}
        for r in cross:
            by_cell.setdefault((r["train_domain"], r["eval_domain"]), []).append(
                float(r["accuracy"])
            )
        results = [
            EvalResult(
                accuracy=sum(v) / len(v), n_pairs=1, n_ties=0,
                per_paradigm={"ALL": (sum(v) / len(v), 1)},
                labels=Labels(t, e, ORIGINAL, None),
            )
            for (t, e), v in sorted(by_cell.items())
        ]
        write_matrix_csv(cross_domain_matrix(results), out / "cross_domain.csv")

    write_stats_csv({d: data.stats for d, data in domains.items()}, out / "stats.csv")
    if reports:
        from .perturb import PerturbReport

        table = compare_replacement_rates(
            {d: PerturbReport(**r) for d, r in reports.items()},
            {d: data.stats for d, data in domains.items()},
        )
        write_rates_csv(table, out / "rates.csv")

    manifest = {
        "package_version": __version__,
        "config": {
            **{k: v for k, v in asdict(config).items() if k != "corpora"},
            "corpora": [asdict(c) for c in config.corpora],
        },
        "config_hash": run_hash,
        "cells": {
            "/".join(map(str, cell)): "failed" if any(
                f[0] == "/".join(map(str, cell)) for f in failures
            ) else "ok"
            for cell in cells
        },
        "failures": sorted(failures),
        "pairs_files": {d: str(data.pairs_path) for d, data in domains.items()},
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")

    return ExperimentResult(
        status=1 if failures else 0,
        out_dir=out,
        failures=failures,
        results=all_rows,
    )
