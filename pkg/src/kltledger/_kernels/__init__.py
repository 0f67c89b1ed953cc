"""Kernel backend selection: compiled extension if available, pure fallback.

Set ``KLTLEDGER_PURE=1`` to force the pure-Python kernels (used by the
benchmark and by tests that compare the two backends).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("KLTLEDGER_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

solve_int_system = _impl.solve_int_system
leading_minors = _impl.leading_minors
cf_evaluate = _impl.cf_evaluate

__all__ = ["solve_int_system", "leading_minors", "cf_evaluate", "BACKEND"]
