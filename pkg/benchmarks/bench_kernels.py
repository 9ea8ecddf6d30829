#!/usr/bin/env python3
"""Benchmark the pure-Python scoring kernel against the compiled one.

Trains an order-N model on a synthetic fixture corpus, scores a batch of
sentences through each importable kernel, verifies the results are
bit-identical, and reports tokens/second. Build the compiled kernel first
with `python setup.py build_ext --inplace` (it is optional; without it
only the pure path is timed).

    python benchmarks/bench_kernels.py --tokens 200000 --order 3
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from verbscope.fixtures import build_fixture_corpus
from verbscope.ingest import split_corpus
from verbscope.scorer import train_ngram
from verbscope.scorer.kernel import available_kernels


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tokens", type=int, default=200_000)
    parser.add_argument("--order", type=int, default=3)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    corpus = build_fixture_corpus("chat", args.tokens)
    train, _dev, test = split_corpus(corpus)
    t0 = time.perf_counter()
    lm = train_ngram(train, args.order)
    print(
        f"trained order-{args.order} model on {train.n_tokens} tokens "
        f"in {time.perf_counter() - t0:.2f}s ({len(lm.forms)} forms)"
    )

    batch = [
        [lm.symbol_id(f) for f in s.forms()] + [lm.eos_id] for s in test.sentences
    ]
    n_events = sum(len(ids) for ids in batch)
    shared = (lm.discounts, lm._counts, lm._totals, lm._types, lm._inv_vocab)

    results = {}
    timings = {}
    for name, impl in sorted(available_kernels().items()):
        best = None
        total = 0.0
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            total = 0.0
            for ids in batch:
                total += impl.sentence_logprob(ids, lm.order, lm.bos_id, *shared)
            elapsed = time.perf_counter() - t0
            best = elapsed if best is None else min(best, elapsed)
        results[name] = total
        timings[name] = best
        print(
            f"{name:12s} {n_events / best:>12,.0f} events/s   "
            f"({best * 1000:.1f} ms for {n_events} events, logprob sum {total:.3f})"
        )

    if len(results) == 2:
        pure, compiled = results["pure-python"], results["compiled"]
        if pure != compiled:
            print("ERROR: kernels disagree:", repr(pure), repr(compiled))
            return 1
        print(
            f"bit-identical results; speedup x"
            f"{timings['pure-python'] / timings['compiled']:.2f}"
        )
    else:
        print("compiled kernel not built; only the pure path was timed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
