"""Pure-Python n-gram scoring kernel.

Kept line-for-line parallel with the compiled twin in ``_kn_c.pyx``; the
two must produce bit-identical doubles (same operations, same order, no
re-association), so edit them together.

Table layout, shared with the trainer in ``ngram``: ``counts``, ``totals``
and ``types`` are lists indexed by level k (index 0 unused). ``counts[k]``
maps k-length id tuples to occurrence counts (raw counts at the top level,
continuation counts below), ``totals[k]`` and ``types[k]`` map (k-1)-length
context tuples to their count mass and distinct-continuation count. Levels
whose context is unseen are skipped entirely (full backoff); the recursion
bottoms out at the uniform distribution over the scorable vocabulary.
"""

from __future__ import annotations

from math import log


def ngram_prob(w, ctx, discounts, counts, totals, types, inv_vocab):
    """p(w | ctx) folded bottom-up over levels 1..len(ctx)+1."""
    p = inv_vocab
    length = len(ctx)
    for k in range(1, length + 2):
        sub = ctx[length - k + 1:]
        tot = totals[k].get(sub)
        if tot is None:
            continue
        c = counts[k].get(sub + (w,), 0)
        ty = types[k][sub]
        d = discounts[k]
        disc = c - d
        if disc < 0.0:
            disc = 0.0
        p = disc / tot + (d * ty / tot) * p
    return p


def sentence_logprob(event_ids, order, bos_id, discounts, counts, totals, types, inv_vocab):
    """Sum of ln p(event | rolling context), BOS-padded at the left edge.

    ``event_ids`` already ends with the EOS id.
    """
    lp = 0.0
    ctx = (bos_id,) * (order - 1)
    for w in event_ids:
        lp += log(ngram_prob(w, ctx, discounts, counts, totals, types, inv_vocab))
        if order > 1:
            ctx = ctx[1:] + (w,)
    return lp
