"""Hot loops, compiled when the extension is available.

Set ``FIDUCIAL_PURE_PYTHON=1`` to force the NumPy fallback.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("FIDUCIAL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def available_backends():
    """Map backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


def min_row_mismatch(rows, floor=0):
    return int(_impl.min_row_mismatch(np.ascontiguousarray(rows, dtype=np.int64), floor))


def inverse_cdf_counts(cdf, u):
    return _impl.inverse_cdf_counts(
        np.ascontiguousarray(cdf, dtype=np.float64), np.ascontiguousarray(u, dtype=np.float64)
    )


def compatible_subsets(adjacency):
    return _impl.compatible_subsets(np.ascontiguousarray(adjacency, dtype=np.int64))
