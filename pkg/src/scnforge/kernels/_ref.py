"""Pure-Python / NumPy reference implementations of the hot kernels.

The compiled extension in ``_native.pyx`` mirrors these operation for
operation; both backends must produce bitwise-identical results.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"


def _speed_step(u0: float, k_src: float, k_dst: float, ds: float, a_max: float) -> float:
    """Largest reachable squared speed one station ahead of squared speed u0.

    Enforces the combined-acceleration disc at both stations of the segment:
    the explicit bound uses the lateral demand at the departure station, the
    implicit bound (larger root of a quadratic in the arrival squared speed)
    uses the lateral demand at the arrival station.
    """
    a2 = a_max * a_max
    lat = u0 * k_src
    rem = a2 - lat * lat
    if rem > 0.0:
        expl = u0 + 2.0 * ds * math.sqrt(rem)
    else:
        expl = u0
    kd2 = k_dst * k_dst
    den = 1.0 + 4.0 * ds * ds * kd2
    disc = (a2 - (u0 * k_dst) ** 2) / (ds * ds) + 4.0 * kd2 * a2
    if disc > 0.0:
        impl = (u0 + 2.0 * ds * ds * math.sqrt(disc)) / den
    else:
        # No arrival speed satisfies the disc at the arrival station; the
        # opposite sweep lowers the departure speed, so emit the minimizer.
        impl = u0 / den
    return expl if expl < impl else impl


def relax_speed_limits(u: np.ndarray, kappa_abs: np.ndarray, ds: np.ndarray, a_max: float) -> int:
    """Relax per-station squared-speed caps to a friction-feasible profile.

    Each round runs the forward and the backward sweep on copies of the
    current profile and keeps the pointwise minimum; reversing the problem
    therefore mirrors the result bitwise. Rounds repeat until the profile
    stops changing, a floating-point fixed point reached because every
    update strictly lowers a value bounded below by zero; at that point the
    profile is a fixed point of both sweeps, which pins the combined
    acceleration within a_max on every segment. ``u`` is modified in place;
    returns the number of rounds.
    """
    n = u.shape[0]
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        fwd = u.copy()
        bwd = u.copy()
        for i in range(n - 1):
            b = _speed_step(fwd[i], kappa_abs[i], kappa_abs[i + 1], ds[i], a_max)
            if b < fwd[i + 1]:
                fwd[i + 1] = b
        for i in range(n - 1, 0, -1):
            b = _speed_step(bwd[i], kappa_abs[i], kappa_abs[i - 1], ds[i - 1], a_max)
            if b < bwd[i - 1]:
                bwd[i - 1] = b
        for i in range(n):
            b = fwd[i] if fwd[i] < bwd[i] else bwd[i]
            if b < u[i]:
                u[i] = b
                changed = True
    return rounds


def point_in_polygon(px: float, py: float, poly: np.ndarray) -> int:
    """Classify a point against a closed polygon: 0 outside, 1 strictly inside.

    Points on a boundary segment classify as outside (0); track margins are
    not drivable. Even-odd crossing rule.
    """
    n = poly.shape[0]
    inside = False
    for i in range(n):
        x1 = poly[i, 0]
        y1 = poly[i, 1]
        j = i + 1
        if j == n:
            j = 0
        x2 = poly[j, 0]
        y2 = poly[j, 1]
        cross = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
        if cross == 0.0:
            if min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2):
                return 0
        if (y1 > py) != (y2 > py):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xint:
                inside = not inside
    return 1 if inside else 0


def points_in_polygon(px: np.ndarray, py: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Vectorized point_in_polygon over many query points."""
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    x1 = poly[:, 0]
    y1 = poly[:, 1]
    x2 = np.roll(poly[:, 0], -1)
    y2 = np.roll(poly[:, 1], -1)

    qx = px[:, None]
    qy = py[:, None]
    cross = (x2 - x1) * (qy - y1) - (qx - x1) * (y2 - y1)
    on_seg = (
        (cross == 0.0)
        & (qx >= np.minimum(x1, x2))
        & (qx <= np.maximum(x1, x2))
        & (qy >= np.minimum(y1, y2))
        & (qy <= np.maximum(y1, y2))
    ).any(axis=1)

    straddles = (y1 > qy) != (y2 > qy)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x1 + (qy - y1) * (x2 - x1) / (y2 - y1)
    crossings = (straddles & (qx < xint)).sum(axis=1)

    return np.where(on_seg, 0, crossings % 2).astype(np.uint8)


def _project(corners: np.ndarray, ax: float, ay: float) -> tuple[float, float]:
    lo = hi = corners[0, 0] * ax + corners[0, 1] * ay
    for k in range(1, corners.shape[0]):
        d = corners[k, 0] * ax + corners[k, 1] * ay
        if d < lo:
            lo = d
        elif d > hi:
            hi = d
    return lo, hi


def rects_overlap(a: np.ndarray, b: np.ndarray) -> bool:
    """Separating-axis test for two oriented rectangles given as (4,2) corners.

    Axes are the two face normals of each rectangle; touching boundaries
    count as overlap.
    """
    for rect in (a, b):
        for i in (0, 1):
            ex = rect[i + 1, 0] - rect[i, 0]
            ey = rect[i + 1, 1] - rect[i, 1]
            ax, ay = -ey, ex
            alo, ahi = _project(a, ax, ay)
            blo, bhi = _project(b, ax, ay)
            if ahi < blo or bhi < alo:
                return False
    return True


def first_overlap_index(ca: np.ndarray, cb: np.ndarray) -> int:
    """First index t with rects_overlap(ca[t], cb[t]), or -1. Shapes (T,4,2)."""
    edges_a = ca[:, 1:3] - ca[:, 0:2]
    edges_b = cb[:, 1:3] - cb[:, 0:2]
    edges = np.concatenate([edges_a, edges_b], axis=1)  # (T,4,2)
    axes = np.stack([-edges[:, :, 1], edges[:, :, 0]], axis=2)  # (T,4,2)

    pa = np.einsum("tkc,tac->tak", ca, axes)  # (T,4 axes,4 corners)
    pb = np.einsum("tkc,tac->tak", cb, axes)
    sep = (pa.max(axis=2) < pb.min(axis=2)) | (pb.max(axis=2) < pa.min(axis=2))
    overlap = ~sep.any(axis=1)
    idx = np.flatnonzero(overlap)
    return int(idx[0]) if idx.size else -1
