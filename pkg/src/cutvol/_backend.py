"""Select the sampling kernel implementation at import time.

The compiled extension `cutvol._walk` is preferred; the pure-Python twin
`cutvol._walk_py` is the fallback.  Set CUTVOL_PURE_PYTHON=1 to force the
fallback (the benchmark and the equivalence tests do).
"""

from __future__ import annotations

import os

if os.environ.get("CUTVOL_PURE_PYTHON") == "1":
    from . import _walk_py as impl
else:
    try:
        from . import _walk as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _walk_py as impl  # type: ignore[no-redef]

BACKEND: str = impl.BACKEND
COORDINATE: int = impl.COORDINATE
RANDOM: int = impl.RANDOM

walk_h = impl.walk_h
sob_h_run = impl.sob_h_run
sob_v_run = impl.sob_v_run
rejection_run = impl.rejection_run
