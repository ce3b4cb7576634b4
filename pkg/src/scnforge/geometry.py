"""Cubic spline chains through support points, sampled to arc-length paths.

A path is a chain of per-segment cubic polynomials x(mu), y(mu) over a
shared virtual parameter mu in [0, 1]. Chains interpolate every support
point, match first and second derivatives at interior joints, and pin the
tangent direction at both ends. Tangent magnitude at the ends is scaled by
the chord length of the respective end segment, which keeps the
parameterization close to arc length and avoids loops at the boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from .errors import DegenerateGeometry, InternalSolverError, InvalidInput

#: Consecutive support points closer than this count as duplicates (meters).
MIN_POINT_SPACING = 1e-9

#: Sub-intervals per segment for arc-length integration of |d1|.
ARC_SUBSAMPLES = 50

#: Default station spacing for sampled paths (meters).
DEFAULT_STEP = 0.5

_TANGENT_EPS2 = 1e-12


@dataclass(frozen=True)
class Point2:
    """A planar coordinate in meters."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInput(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class SupportSequence:
    """Ordered support points a fitted path must pass through."""

    points: tuple[Point2, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        for k, (a, b) in enumerate(zip(self.points, self.points[1:])):
            if math.hypot(b.x - a.x, b.y - a.y) <= MIN_POINT_SPACING:
                raise InvalidInput(f"support points {k} and {k + 1} coincide")

    @classmethod
    def from_xy(cls, xy) -> "SupportSequence":
        return cls(tuple(Point2(float(x), float(y)) for x, y in xy))

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.points], dtype=float)


@dataclass(frozen=True)
class SplineSegment:
    """One cubic segment; coefficients in ascending powers (a0..a3) of mu."""

    ax: tuple[float, float, float, float]
    ay: tuple[float, float, float, float]


@dataclass(frozen=True)
class SplineChain:
    """Fitted segment chain plus the boundary headings and chord scales."""

    segments: tuple[SplineSegment, ...]
    theta_start: float
    theta_end: float
    chord_lengths: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.segments)

    def coefficient_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Segment coefficients as (M,4) arrays for x and y."""
        ax = np.array([s.ax for s in self.segments], dtype=float)
        ay = np.array([s.ay for s in self.segments], dtype=float)
        return ax, ay


@dataclass(eq=False)
class SampledPath:
    """Path discretized to stations: arc length, position, heading, curvature."""

    s: np.ndarray
    pts: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray

    def __post_init__(self) -> None:
        n = self.s.shape[0]
        if n < 2:
            raise InvalidInput("a sampled path needs at least 2 stations")
        if self.pts.shape != (n, 2) or self.theta.shape != (n,) or self.kappa.shape != (n,):
            raise InvalidInput("sampled path arrays must have matching lengths")
        if self.s[0] != 0.0 or np.any(np.diff(self.s) <= 0.0):
            raise InvalidInput("arc length must start at 0 and strictly increase")

    @property
    def length(self) -> float:
        return float(self.s[-1])


def _direction_angle(dx: float, dy: float) -> float:
    theta = math.atan2(dy, dx)
    if theta <= -math.pi:
        theta = math.pi
    return theta


def heading_from_neighbors(seq: SupportSequence) -> tuple[float, float]:
    """End headings from the chords to the neighboring support points.

    Returns the direction angles of (p2 - p1) and (pN - pN-1), each in
    (-pi, pi].
    """
    if len(seq) < 2:
        raise InvalidInput("need at least 2 support points for end headings")
    p = seq.points
    theta_start = _direction_angle(p[1].x - p[0].x, p[1].y - p[0].y)
    theta_end = _direction_angle(p[-1].x - p[-2].x, p[-1].y - p[-2].y)
    return theta_start, theta_end


def fit_spline(seq: SupportSequence, theta_start: float, theta_end: float) -> SplineChain:
    """Fit a C2 cubic chain through all support points with pinned end tangents.

    One banded linear system per coordinate (same matrix, two right-hand
    sides): interpolation rows at both segment ends, first/second-derivative
    matching at interior joints, and chord-scaled boundary tangent rows
    (cosine of the heading for x, sine for y).
    """
    if len(seq) < 3:
        raise InvalidInput("spline fit requires at least 3 support points")
    if not (math.isfinite(theta_start) and math.isfinite(theta_end)):
        raise InvalidInput("end headings must be finite")

    p = seq.as_array()
    chords = np.hypot(*np.diff(p, axis=0).T)
    if np.any(chords <= MIN_POINT_SPACING):
        raise InvalidInput("consecutive support points coincide")

    m = len(seq) - 1
    size = 4 * m
    band = np.zeros((5, size))
    rhs = np.zeros((size, 2))

    def put(r: int, c: int, v: float) -> None:
        band[2 + r - c, c] = v

    # Row layout keeps every equation within two columns of the diagonal.
    put(0, 1, 1.0)
    rhs[0] = chords[0] * np.array([math.cos(theta_start), math.sin(theta_start)])
    for i in range(m - 1):
        base = 4 * i
        put(base + 1, base, 1.0)
        rhs[base + 1] = p[i]
        for k in range(4):
            put(base + 2, base + k, 1.0)
        rhs[base + 2] = p[i + 1]
        put(base + 3, base + 1, 1.0)
        put(base + 3, base + 2, 2.0)
        put(base + 3, base + 3, 3.0)
        put(base + 3, base + 5, -1.0)
        put(base + 4, base + 2, 2.0)
        put(base + 4, base + 3, 6.0)
        put(base + 4, base + 6, -2.0)
    base = 4 * (m - 1)
    put(size - 3, base, 1.0)
    rhs[size - 3] = p[m - 1]
    for k in range(4):
        put(size - 2, base + k, 1.0)
    rhs[size - 2] = p[m]
    put(size - 1, base + 1, 1.0)
    put(size - 1, base + 2, 2.0)
    put(size - 1, base + 3, 3.0)
    rhs[size - 1] = chords[-1] * np.array([math.cos(theta_end), math.sin(theta_end)])

    try:
        sol = solve_banded((2, 2), band, rhs)
    except (LinAlgError, ValueError) as exc:
        raise InternalSolverError(f"spline system failed to solve: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise InternalSolverError("spline system produced non-finite coefficients")

    segments = tuple(
        SplineSegment(ax=tuple(sol[4 * i : 4 * i + 4, 0]), ay=tuple(sol[4 * i : 4 * i + 4, 1]))
        for i in range(m)
    )
    return SplineChain(
        segments=segments,
        theta_start=float(theta_start),
        theta_end=float(theta_end),
        chord_lengths=tuple(float(c) for c in chords),
    )


def _check_segment_mu(chain: SplineChain, segment_index: int, mu: float) -> None:
    if not isinstance(segment_index, (int, np.integer)):
        raise InvalidInput("segment index must be an integer")
    if not 0 <= segment_index < len(chain):
        raise InvalidInput(f"segment index {segment_index} out of range [0, {len(chain) - 1}]")
    if not (0.0 <= mu <= 1.0):
        raise InvalidInput(f"mu must lie in [0, 1], got {mu}")


def eval_spline(
    chain: SplineChain, segment_index: int, mu: float
) -> tuple[Point2, np.ndarray, np.ndarray]:
    """Position and first/second mu-derivatives of one segment at mu."""
    _check_segment_mu(chain, segment_index, mu)
    seg = chain.segments[segment_index]
    out_p = np.empty(2)
    out_d1 = np.empty(2)
    out_d2 = np.empty(2)
    for j, (a0, a1, a2, a3) in enumerate((seg.ax, seg.ay)):
        out_p[j] = a0 + mu * (a1 + mu * (a2 + mu * a3))
        out_d1[j] = a1 + mu * (2.0 * a2 + mu * 3.0 * a3)
        out_d2[j] = 2.0 * a2 + 6.0 * a3 * mu
    return Point2(float(out_p[0]), float(out_p[1])), out_d1, out_d2


def curvature_at(chain: SplineChain, segment_index: int, mu: float) -> float:
    """Signed curvature at (segment, mu); positive turns left."""
    _, d1, d2 = eval_spline(chain, segment_index, mu)
    speed2 = d1[0] * d1[0] + d1[1] * d1[1]
    if speed2 < _TANGENT_EPS2:
        raise DegenerateGeometry("vanishing tangent; curvature undefined")
    return float((d1[0] * d2[1] - d1[1] * d2[0]) / speed2**1.5)


def _eval_many(ax: np.ndarray, ay: np.ndarray, seg_idx: np.ndarray, mu: np.ndarray):
    """Vectorized evaluation of position and derivatives at (segment, mu) pairs."""
    a = ax[seg_idx]
    b = ay[seg_idx]
    x = a[:, 0] + mu * (a[:, 1] + mu * (a[:, 2] + mu * a[:, 3]))
    y = b[:, 0] + mu * (b[:, 1] + mu * (b[:, 2] + mu * b[:, 3]))
    dx = a[:, 1] + mu * (2.0 * a[:, 2] + mu * 3.0 * a[:, 3])
    dy = b[:, 1] + mu * (2.0 * b[:, 2] + mu * 3.0 * b[:, 3])
    ddx = 2.0 * a[:, 2] + 6.0 * a[:, 3] * mu
    ddy = 2.0 * b[:, 2] + 6.0 * b[:, 3] * mu
    return x, y, dx, dy, ddx, ddy


def sample_path(chain: SplineChain, step: float = DEFAULT_STEP) -> SampledPath:
    """Discretize a chain to stations roughly equidistant in arc length.

    Arc length comes from dense trapezoid integration of |d1| over
    ARC_SUBSAMPLES sub-intervals per segment; stations are then placed at
    uniform arc-length targets, with the first and last stations exactly at
    the path endpoints.
    """
    if not (step > 0.0 and math.isfinite(step)):
        raise InvalidInput(f"sampling step must be positive, got {step}")

    ax, ay = chain.coefficient_arrays()
    m = len(chain)
    mu_nodes = np.linspace(0.0, 1.0, ARC_SUBSAMPLES + 1)
    dmu = 1.0 / ARC_SUBSAMPLES

    dx = ax[:, 1:2] + mu_nodes * (2.0 * ax[:, 2:3] + mu_nodes * 3.0 * ax[:, 3:4])
    dy = ay[:, 1:2] + mu_nodes * (2.0 * ay[:, 2:3] + mu_nodes * 3.0 * ay[:, 3:4])
    speed = np.hypot(dx, dy)  # (m, nodes)
    if np.any(speed * speed < _TANGENT_EPS2):
        raise DegenerateGeometry("vanishing tangent along a segment")

    inc = 0.5 * (speed[:, :-1] + speed[:, 1:]) * dmu
    seg_cum = np.concatenate([np.zeros((m, 1)), np.cumsum(inc, axis=1)], axis=1)
    seg_len = seg_cum[:, -1]
    offsets = np.concatenate([[0.0], np.cumsum(seg_len)])
    total = float(offsets[-1])

    n = max(2, int(round(total / step)) + 1)
    targets = np.linspace(0.0, total, n)

    seg_idx = np.clip(np.searchsorted(offsets, targets, side="right") - 1, 0, m - 1)
    mu = np.empty(n)
    for i in np.unique(seg_idx):
        mask = seg_idx == i
        mu[mask] = np.interp(targets[mask] - offsets[i], seg_cum[i], mu_nodes)
    seg_idx[0], mu[0] = 0, 0.0
    seg_idx[-1], mu[-1] = m - 1, 1.0

    x, y, d1x, d1y, d2x, d2y = _eval_many(ax, ay, seg_idx, mu)
    speed2 = d1x * d1x + d1y * d1y
    if np.any(speed2 < _TANGENT_EPS2):
        raise DegenerateGeometry("vanishing tangent at a station")
    theta = np.arctan2(d1y, d1x)
    kappa = (d1x * d2y - d1y * d2x) / speed2**1.5

    return SampledPath(s=targets, pts=np.column_stack([x, y]), theta=theta, kappa=kappa)
