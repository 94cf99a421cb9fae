"""Kernel selection: compiled extension when built, pure Python otherwise.

Set POLYPERM_PURE=1 to force the pure-Python backend.
"""

import os

if os.environ.get("POLYPERM_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
count_positive_diagonals = _impl.count_positive_diagonals
find_positive_diagonal = _impl.find_positive_diagonal
permanent_float = _impl.permanent_float
