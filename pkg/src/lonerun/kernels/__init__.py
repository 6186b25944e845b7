"""Hot-kernel backend selection.

The numba JIT kernels are used when numba is importable; setting the
environment variable ``LONERUN_NUMBA=0`` (or ``false``/``no``/``off``)
forces the pure-numpy fallback.  Both backends are semantically identical;
``bench/bench_kernels.py`` compares their throughput.
"""

from __future__ import annotations

import os

from . import numpy_impl


def _select():
    flag = os.environ.get("LONERUN_NUMBA", "").strip().lower()
    if flag in {"0", "false", "no", "off"}:
        return numpy_impl, "numpy"
    try:
        from . import numba_impl
    except ImportError:
        return numpy_impl, "numpy"
    return numba_impl, "numba"


_impl, BACKEND = _select()

ml_scan = _impl.ml_scan
ml_batch = _impl.ml_batch
oracle_scan = _impl.oracle_scan
oracle_batch = _impl.oracle_batch


def backend_name() -> str:
    """Which kernel backend is active: "numba" or "numpy"."""
    return BACKEND
