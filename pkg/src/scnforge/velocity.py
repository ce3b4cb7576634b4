"""Friction-limited velocity profiles and time parameterization.

Speeds are initialized from a curvature cap and relaxed by forward/backward
sweeps that never demand more combined (lateral plus longitudinal) tire
acceleration than a single limit a_max. Manual profile edits deliberately
bypass that limit: injected faults must survive so downstream scans can
flag them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInput
from .geometry import SampledPath

#: Curvature magnitudes below this are treated as straight (1/m).
KAPPA_FLOOR = 1e-9

#: A station pair whose speeds sum to less than this is a stop (m/s).
STOP_EPS = 1e-3


@dataclass(frozen=True)
class FrictionSpec:
    """Combined acceleration limit and absolute top speed of a vehicle."""

    a_max: float
    v_lim: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a_max) and self.a_max > 0.0):
            raise InvalidInput(f"a_max must be positive, got {self.a_max}")
        if not (math.isfinite(self.v_lim) and self.v_lim > 0.0):
            raise InvalidInput(f"v_lim must be positive, got {self.v_lim}")


@dataclass(eq=False)
class VelocityProfile:
    """Per-station speeds aligned with a sampled path."""

    v: np.ndarray

    def __post_init__(self) -> None:
        if np.any(~np.isfinite(self.v)) or np.any(self.v < 0.0):
            raise InvalidInput("speeds must be finite and non-negative")


@dataclass(eq=False)
class Trajectory:
    """A time-parameterized path: aligned station, motion and force channels.

    All arrays share one length. A profile that stalls mid-path truncates
    every channel at the stop station; the vehicle rests there afterwards.
    """

    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray
    v: np.ndarray
    t: np.ndarray
    a_lon: np.ndarray
    a_lat: np.ndarray
    a_comb: np.ndarray

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def duration(self) -> float:
        return float(self.t[-1])


def _check_alignment(path: SampledPath, profile: VelocityProfile) -> None:
    if profile.v.shape[0] != path.s.shape[0]:
        raise InvalidInput(
            f"profile has {profile.v.shape[0]} speeds for {path.s.shape[0]} stations"
        )


def curvature_speed_cap(path: SampledPath, spec: FrictionSpec) -> VelocityProfile:
    """Top speed per station from pure lateral acceleration: sqrt(a_max/|kappa|)."""
    k = np.maximum(np.abs(path.kappa), KAPPA_FLOOR)
    return VelocityProfile(np.minimum(spec.v_lim, np.sqrt(spec.a_max / k)))


def init_profile(
    path: SampledPath,
    spec: FrictionSpec,
    v_start: float | None = None,
    v_end: float | None = None,
) -> VelocityProfile:
    """Fastest profile whose combined acceleration stays within a_max.

    Starts from the curvature cap, clamps the boundary stations to v_start /
    v_end (default: the cap itself, i.e. unconstrained entry and exit), and
    relaxes with alternating forward and backward sweeps until fixed point.
    Each sweep step maxes out the acceleration budget left over by the
    lateral demand at both stations of the segment, so the pointwise result
    respects the friction disc everywhere; an unreachable v_end is lowered
    to what braking from the start allows.
    """
    for name, val in (("v_start", v_start), ("v_end", v_end)):
        if val is not None and not (math.isfinite(val) and val >= 0.0):
            raise InvalidInput(f"{name} must be finite and non-negative, got {val}")

    cap = curvature_speed_cap(path, spec).v
    if v_start is not None:
        cap[0] = min(cap[0], v_start)
    if v_end is not None:
        cap[-1] = min(cap[-1], v_end)

    u = cap * cap
    kernels.relax_speed_limits(u, np.abs(path.kappa), np.diff(path.s), spec.a_max)
    return VelocityProfile(np.sqrt(u))


def apply_profile_edit(
    profile: VelocityProfile,
    path: SampledPath,
    edits: list[tuple[float, float]],
) -> VelocityProfile:
    """Apply one batch of (s, v) edits to a profile.

    Each edit snaps to the nearest station; spans between consecutive edits
    of the batch are linearly interpolated over arc length; stations outside
    the edited range keep their values. No feasibility clamp is applied.
    """
    _check_alignment(path, profile)
    s = path.s
    total = path.length
    snapped: list[tuple[int, float]] = []
    for s_e, v_e in edits:
        if not (math.isfinite(s_e) and 0.0 <= s_e <= total):
            raise InvalidInput(f"edit position {s_e} outside [0, {total}]")
        if not (math.isfinite(v_e) and v_e >= 0.0):
            raise InvalidInput(f"edit speed must be non-negative, got {v_e}")
        idx = int(np.searchsorted(s, s_e))
        if idx > 0 and (idx == len(s) or s_e - s[idx - 1] <= s[idx] - s_e):
            idx -= 1
        snapped.append((idx, float(v_e)))

    out = profile.v.copy()
    snapped.sort(key=lambda iv: iv[0])
    for (ia, va), (ib, vb) in zip(snapped, snapped[1:]):
        if ib == ia:
            continue
        span = np.arange(ia, ib + 1)
        w = (s[span] - s[ia]) / (s[ib] - s[ia])
        out[span] = va + w * (vb - va)
    for ia, va in snapped:
        out[ia] = va
    return VelocityProfile(out)


def time_parameterize(path: SampledPath, profile: VelocityProfile) -> Trajectory:
    """Timestamps and acceleration channels for a path/profile pair.

    Per segment, dt = 2*ds/(v_i + v_i+1) (constant acceleration over the
    segment); a segment whose speeds sum below STOP_EPS truncates the
    trajectory at its first station. Longitudinal acceleration comes from
    the squared-speed difference, lateral from v^2 * kappa.
    """
    _check_alignment(path, profile)
    v = profile.v
    ds = np.diff(path.s)
    vsum = v[:-1] + v[1:]

    stops = np.flatnonzero(vsum <= STOP_EPS)
    n = int(stops[0]) + 1 if stops.size else v.shape[0]

    if n >= 2:
        dt = 2.0 * ds[: n - 1] / vsum[: n - 1]
        t = np.concatenate([[0.0], np.cumsum(dt)])
        a_seg = (v[1:n] ** 2 - v[: n - 1] ** 2) / (2.0 * ds[: n - 1])
        a_lon = np.append(a_seg, a_seg[-1])
    else:
        t = np.zeros(1)
        a_lon = np.zeros(1)

    a_lat = v[:n] ** 2 * path.kappa[:n]
    return Trajectory(
        s=path.s[:n].copy(),
        x=path.pts[:n, 0].copy(),
        y=path.pts[:n, 1].copy(),
        theta=path.theta[:n].copy(),
        kappa=path.kappa[:n].copy(),
        v=v[:n].copy(),
        t=t,
        a_lon=a_lon,
        a_lat=a_lat,
        a_comb=np.hypot(a_lon, a_lat),
    )
