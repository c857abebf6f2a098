"""Kernel backend selection.

The numba kernels are used when numba imports cleanly; set
FOOTHILL_DISABLE_NUMBA=1 to force the pure-numpy fallback. The choice is
made once at import time and reported by `backend_name()`.
"""

import os

_DISABLED = os.environ.get("FOOTHILL_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)

if not _DISABLED:
    try:
        from . import kernels_numba as _impl
        _NAME = "numba"
    except ImportError:
        from . import kernels_numpy as _impl
        _NAME = "numpy"
else:
    from . import kernels_numpy as _impl
    _NAME = "numpy"

objective_grid = _impl.objective_grid
objective_argmin = _impl.objective_argmin


def backend_name() -> str:
    return _NAME
