"""Numerical core: symmetric eigensolver with compiled / pure-python twins.

The compiled extension is preferred; the pure-python implementation is
selected when the extension is missing or when ``DMABEAM_PURE_PYTHON`` is set
in the environment.  ``benchmarks/bench_eig.py`` compares the two.
"""

import os

from . import tridiag_ql_py

if os.environ.get("DMABEAM_PURE_PYTHON"):
    _impl = tridiag_ql_py
    BACKEND = "python"
else:
    try:
        from . import tridiag_ql as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = tridiag_ql_py
        BACKEND = "python"

symmetric_eig = _impl.symmetric_eig

__all__ = ["symmetric_eig", "BACKEND"]
