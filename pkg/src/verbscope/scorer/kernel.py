"""Scoring-kernel selection.

Imports the compiled kernel when it has been built, the pure-Python twin
otherwise. Set VERBSCOPE_PURE_PYTHON=1 to force the pure path (used by the
benchmark and the twin-equality test). The two produce bit-identical
results, so the choice never affects outputs, only speed.
"""

from __future__ import annotations

import os

from . import _kn_py

if os.environ.get("VERBSCOPE_PURE_PYTHON"):
    _impl = _kn_py
else:
    try:
        from . import _kn_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kn_py

ngram_prob = _impl.ngram_prob
sentence_logprob = _impl.sentence_logprob

KERNEL_NAME = "pure-python" if _impl is _kn_py else "compiled"


def available_kernels() -> dict[str, object]:
    """Name -> module for every importable kernel (benchmark helper)."""
    kernels: dict[str, object] = {"pure-python": _kn_py}
    try:
        from . import _kn_c

        kernels["compiled"] = _kn_c
    except ImportError:
        pass
    return kernels
