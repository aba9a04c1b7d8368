"""Numerical core selection.

The compiled core (ftjc._mlcore, Cython) is preferred when it imported
cleanly; the pure-Python core (ftjc._mlpure) is the always-available
fallback and the reference implementation. Setting the environment
variable FTJC_PURE=1 forces the pure core, which is useful for debugging
and for benchmarking the two against each other.
"""

from __future__ import annotations

import os

from . import _mlpure

if os.environ.get("FTJC_PURE", "0") == "1":
    core = _mlpure
else:
    try:
        from . import _mlcore as core  # type: ignore[no-redef]
    except ImportError:
        core = _mlpure


def backend_name() -> str:
    """Name of the active numerical core: "compiled" or "pure"."""
    return core.BACKEND
