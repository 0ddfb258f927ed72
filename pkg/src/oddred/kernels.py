"""Backend selection for the integer hot loops.

The compiled extension ``oddred._ckernels`` is used when it imports;
otherwise (or when ``ODDRED_PURE_PYTHON=1``) the pure-Python twins in
``oddred._pykernels`` take over. Both expose the same functions.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("ODDRED_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

bareiss_rank = _impl.bareiss_rank
determinant = _impl.determinant
minor_values = _impl.minor_values
cycle_weights = _impl.cycle_weights
scan_labelings = _impl.scan_labelings
pm_parity_counts = _impl.pm_parity_counts

__all__ = [
    "BACKEND",
    "bareiss_rank",
    "compiled_backend",
    "cycle_weights",
    "determinant",
    "minor_values",
    "pm_parity_counts",
    "python_backend",
    "scan_labelings",
]
