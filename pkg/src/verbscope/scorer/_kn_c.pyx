# cython: language_level=3
# cython: boundscheck=False
# cython: cdivision=False
"""Compiled n-gram scoring kernel.

Line-for-line twin of ``_kn_py``; both must produce bit-identical doubles.
Compiled with -ffp-contract=off so the C arithmetic matches the
interpreter's operation-by-operation double math. Edit them together.
"""

from libc.math cimport log


def ngram_prob(w, tuple ctx, list discounts, list counts, list totals, list types, double inv_vocab):
    """p(w | ctx) folded bottom-up over levels 1..len(ctx)+1."""
    cdef double p = inv_vocab
    cdef double d, disc, tot_f, ty_f
    cdef Py_ssize_t length = len(ctx)
    cdef Py_ssize_t k
    cdef object tot, c_obj
    cdef tuple sub
    for k in range(1, length + 2):
        sub = ctx[length - k + 1:]
        tot = (<dict>totals[k]).get(sub)
        if tot is None:
            continue
        c_obj = (<dict>counts[k]).get(sub + (w,), 0)
        ty_f = <double><long>(<dict>types[k])[sub]
        d = <double>discounts[k]
        disc = <double><long>c_obj - d
        if disc < 0.0:
            disc = 0.0
        tot_f = <double><long>tot
        p = disc / tot_f + (d * ty_f / tot_f) * p
    return p


def sentence_logprob(list event_ids, int order, object bos_id, list discounts, list counts, list totals, list types, double inv_vocab):
    """Sum of ln p(event | rolling context), BOS-padded at the left edge.

    ``event_ids`` already ends with the EOS id.
    """
    cdef double lp = 0.0
    cdef tuple ctx = (bos_id,) * (order - 1)
    cdef object w
    for w in event_ids:
        lp += log(ngram_prob(w, ctx, discounts, counts, totals, types, inv_vocab))
        if order > 1:
            ctx = ctx[1:] + (w,)
    return lp
