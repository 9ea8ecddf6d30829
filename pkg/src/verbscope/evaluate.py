"""Turn scored pairs into accuracies, per paradigm and per domain pairing.

A pair counts as a win when the good member outscores the bad one. Exact
score ties get half credit and are reported separately: a continuous
neural scorer essentially never ties, but an n-gram scorer can (e.g. when
both members back off identically), and silently counting ties either way
would bias the comparison.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence


class Labels(NamedTuple):
    train_domain: str = ""
    eval_domain: str = ""
    condition: str = ""
    checkpoint: str | None = None


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    n_pairs: int
    n_ties: int
    per_paradigm: dict  # paradigm -> (accuracy, n)
    labels: Labels = Labels()
    per_paradigm_ties: dict = field(default_factory=dict)

    def __post_init__(self):
        if sum(n for _a, n in self.per_paradigm.values()) != self.n_pairs:
            raise ValueError("per-paradigm counts do not sum to n_pairs")


def evaluate(
    scored: Iterable[tuple[str, float, float]],
    pairs_meta: Mapping[str, str],
    labels: Labels = Labels(),
) -> EvalResult:
    """Accuracy = (wins + 0.5 * ties) / n, with a per-paradigm breakdown.

    ``pairs_meta`` maps pair_id -> paradigm and must cover every scored id.
    """
    wins = ties = n = 0
    by_paradigm: dict[str, list[int]] = {}  # paradigm -> [wins, ties, n]
    seen: set[str] = set()
    for pair_id, lp_good, lp_bad in scored:
        if pair_id in seen:
            raise ValueError(f"duplicate pair_id {pair_id!r}")
        seen.add(pair_id)
        paradigm = pairs_meta.get(pair_id)
        if paradigm is None:
            raise ValueError(f"no metadata for pair_id {pair_id!r}")
        n += 1
        row = by_paradigm.setdefault(paradigm, [0, 0, 0])
        row[2] += 1
        if lp_good > lp_bad:
            wins += 1
            row[0] += 1
        elif lp_good == lp_bad:
            ties += 1
            row[1] += 1
    if n == 0:
        raise ValueError("no pairs")
    per_paradigm = {
        p: ((w + 0.5 * t) / m, m) for p, (w, t, m) in sorted(by_paradigm.items())
    }
    return EvalResult(
        accuracy=(wins + 0.5 * ties) / n,
        n_pairs=n,
        n_ties=ties,
        per_paradigm=per_paradigm,
        labels=labels,
        per_paradigm_ties={p: t for p, (_w, t, _m) in sorted(by_paradigm.items())},
    )


@dataclass(frozen=True)
class CrossDomainMatrix:
    train_domains: tuple[str, ...]
    eval_domains: tuple[str, ...]
    cells: dict  # (train_domain, eval_domain) -> mean accuracy
    diagonal_mean: float | None
    off_diagonal_mean: float | None
    missing: tuple[tuple[str, str], ...]


def cross_domain_matrix(results: Iterable[EvalResult]) -> CrossDomainMatrix:
    """Mean accuracy per (train domain, eval domain) cell over the results.

    Missing grid cells are reported (and warned about), not invented.
    """
    acc: dict[tuple[str, str], list[float]] = {}
    for r in results:
        key = (r.labels.train_domain, r.labels.eval_domain)
        acc.setdefault(key, []).append(r.accuracy)
    train_domains = tuple(sorted({t for t, _e in acc}))
    eval_domains = tuple(sorted({e for _t, e in acc}))
    cells = {k: sum(v) / len(v) for k, v in acc.items()}
    missing = tuple(
        (t, e) for t in train_domains for e in eval_domains if (t, e) not in cells
    )
    if missing:
        warnings.warn(f"cross-domain grid has missing cells: {missing}")
    diag = [v for (t, e), v in cells.items() if t == e]
    off = [v for (t, e), v in cells.items() if t != e]
    return CrossDomainMatrix(
        train_domains=train_domains,
        eval_domains=eval_domains,
        cells=cells,
        diagonal_mean=sum(diag) / len(diag) if diag else None,
        off_diagonal_mean=sum(off) / len(off) if off else None,
        missing=missing,
    )


RESULT_COLUMNS = (
    "train_domain",
    "eval_domain",
    "condition",
    "checkpoint",
    "paradigm",
    "accuracy",
    "n",
    "ties",
)


def result_rows(result: EvalResult) -> list[dict]:
    """One ALL row plus one row per paradigm, ready for the results CSV."""
    labels = result.labels
    base = {
        "train_domain": labels.train_domain,
        "eval_domain": labels.eval_domain,
        "condition": labels.condition,
        "checkpoint": "" if labels.checkpoint is None else labels.checkpoint,
    }
    rows = [
        dict(
            base,
            paradigm="ALL",
            accuracy=repr(result.accuracy),
            n=result.n_pairs,
            ties=result.n_ties,
        )
    ]
    for paradigm, (a, m) in result.per_paradigm.items():
        rows.append(
            dict(
                base,
                paradigm=paradigm,
                accuracy=repr(a),
                n=m,
                ties=result.per_paradigm_ties.get(paradigm, 0),
            )
        )
    return rows


def write_results_csv(results: Sequence[EvalResult], path) -> None:
    rows = []
    for r in results:
        rows.extend(result_rows(r))
    rows.sort(key=lambda r: tuple(str(r[c]) for c in RESULT_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def write_matrix_csv(matrix: CrossDomainMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["train\\eval"] + list(matrix.eval_domains))
        for t in matrix.train_domains:
            row = [t]
            for e in matrix.eval_domains:
                v = matrix.cells.get((t, e))
                row.append("NA" if v is None else repr(v))
            writer.writerow(row)
        writer.writerow([])
        writer.writerow(
            [
                "diagonal_mean",
                "" if matrix.diagonal_mean is None else repr(matrix.diagonal_mean),
            ]
        )
        writer.writerow(
            [
                "off_diagonal_mean",
                ""
                if matrix.off_diagonal_mean is None
                else repr(matrix.off_diagonal_mean),
            ]
        )
