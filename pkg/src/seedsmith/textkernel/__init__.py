"""Hot text kernels: token counting and sparse cosine.

Two interchangeable implementations live here: a Cython extension
(``_ckernel``) compiled at install time and a pure-Python fallback
(``_pykernel``). The compiled one is picked at import when available;
set ``SEEDSMITH_PURE_PYTHON=1`` to force the fallback. Both expose the
same functions and must produce identical results (see the parity
tests and ``benchmarks/bench_textkernel.py``).
"""

import os

from . import _pykernel

if os.environ.get("SEEDSMITH_PURE_PYTHON") == "1":
    _impl = _pykernel
else:
    try:
        from . import _ckernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernel

IMPLEMENTATION = "c" if _impl is not _pykernel else "python"

token_counts = _impl.token_counts
merge_counts = _impl.merge_counts
sparse_cosine = _impl.sparse_cosine

__all__ = [
    "IMPLEMENTATION",
    "token_counts",
    "merge_counts",
    "sparse_cosine",
]
