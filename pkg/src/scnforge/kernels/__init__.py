"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (``scnforge.kernels._native``, built from Cython) is
preferred when importable; otherwise the NumPy reference implementation is
used. ``SCNFORGE_KERNELS=python|native`` forces a backend; ``native`` raises
if the extension is unavailable. Both backends produce bitwise-identical
results (asserted by the test suite), so the choice only affects speed.
"""
from __future__ import annotations

import os

import numpy as np

from . import _ref

_requested = os.environ.get("SCNFORGE_KERNELS", "auto")
if _requested not in ("auto", "native", "python"):
    raise ValueError(f"SCNFORGE_KERNELS must be auto|native|python, got {_requested!r}")

if _requested == "python":
    _impl = _ref
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "native":
            raise
        _impl = _ref

BACKEND: str = _impl.BACKEND_NAME


def _c1(a, dtype=float) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=dtype)


def relax_speed_limits(u: np.ndarray, kappa_abs: np.ndarray, ds: np.ndarray, a_max: float) -> int:
    """In-place fixed-point relaxation of squared-speed caps. Returns rounds."""
    if not (u.flags["C_CONTIGUOUS"] and u.dtype == np.float64):
        raise ValueError("u must be a C-contiguous float64 array")
    return _impl.relax_speed_limits(u, _c1(kappa_abs), _c1(ds), float(a_max))


def points_in_polygon(px: np.ndarray, py: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """1 where a point lies strictly inside the closed polygon, else 0."""
    return _impl.points_in_polygon(_c1(px), _c1(py), _c1(poly))


def rects_overlap(a: np.ndarray, b: np.ndarray) -> bool:
    """Separating-axis overlap test for two (4,2) corner arrays."""
    return bool(_impl.rects_overlap(_c1(a), _c1(b)))


def first_overlap_index(ca: np.ndarray, cb: np.ndarray) -> int:
    """First time index at which two (T,4,2) corner tracks overlap, or -1."""
    return int(_impl.first_overlap_index(_c1(ca), _c1(cb)))
