"""Time-domain scenario queries and safety scans.

Vehicles are oriented rectangles moving along resolved trajectories; the
scans look for footprint collisions, excursions from the drivable polygon,
and combined-acceleration violations. Event times from the sampled scans
are sharpened by bisection, so results are independent of the scan step
down to the refinement tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .errors import InvalidInput, InvalidTrack
from .scenario import ResolvedScenario, Scenario, TrackBounds, VehicleSpec, resolve_scenario
from .velocity import Trajectory

#: Default scan step (seconds), one order below the fixtures' dynamics.
DEFAULT_SCAN_DT = 0.01

#: Bisection stops when the bracket is narrower than this (seconds).
REFINE_TOL = 1e-4

DEFAULT_GRID_RESOLUTION = 0.1


@dataclass(frozen=True)
class VehicleState:
    """All dynamic parameters of one vehicle at one time stamp."""

    t: float
    x: float
    y: float
    theta: float
    v: float
    a_lon: float
    a_lat: float
    a_comb: float
    stopped: bool

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "x": self.x,
            "y": self.y,
            "theta": self.theta,
            "v": self.v,
            "a_lon": self.a_lon,
            "a_lat": self.a_lat,
            "a_comb": self.a_comb,
            "stopped": self.stopped,
        }


@dataclass(frozen=True)
class Event:
    """A detected safety violation."""

    kind: str  # "collision" | "offtrack" | "accel_violation"
    t_first: float
    participants: tuple[str, ...]
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "t_first": self.t_first,
            "participants": list(self.participants),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class GroundTruthLabel:
    """An authored expected event: kind, participants, allowed time window."""

    kind: str
    participants: tuple[str, ...]
    window: tuple[float, float]

    def __post_init__(self) -> None:
        if self.window[0] > self.window[1]:
            raise InvalidInput(f"label window {self.window} is reversed")

    def matches(self, event: Event) -> bool:
        return (
            event.kind == self.kind
            and set(event.participants) == set(self.participants)
            and self.window[0] <= event.t_first <= self.window[1]
        )


@dataclass(frozen=True)
class Verdict:
    matched: tuple[GroundTruthLabel, ...]
    missed: tuple[GroundTruthLabel, ...]
    unexpected: tuple[Event, ...]

    @property
    def passed(self) -> bool:
        return not self.missed and not self.unexpected


@dataclass(eq=False)
class OccupancyGrid:
    """Raster of the drivable region; 1 = free (drivable), row 0 = lowest y."""

    origin: tuple[float, float]
    resolution: float
    width: int
    height: int
    cells: np.ndarray  # (height, width) uint8

    def __post_init__(self) -> None:
        if self.cells.shape != (self.height, self.width):
            raise InvalidInput("grid cell array does not match the declared size")

    def to_text(self) -> str:
        lines = [
            f"resolution {self.resolution:.9g}",
            f"origin {self.origin[0]:.9g} {self.origin[1]:.9g}",
            f"size {self.width} {self.height}",
        ]
        for row in self.cells:
            lines.append(" ".join("1" if c else "0" for c in row))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# State interpolation

def _wrap_angle(a: float) -> float:
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


def state_at_time(traj: Trajectory, t: float) -> VehicleState:
    """Vehicle state at an arbitrary time stamp.

    Stored rows are returned exactly; between rows x, y, v and the
    acceleration components interpolate linearly and the heading along the
    shortest arc. Past the final row the vehicle rests at its last pose.
    """
    if not (math.isfinite(t) and t >= 0.0):
        raise InvalidInput(f"time stamp must be non-negative, got {t}")

    times = traj.t
    n = times.shape[0]
    if t >= times[-1]:
        if t == times[-1]:
            return _stored_state(traj, n - 1)
        return VehicleState(
            t=float(t),
            x=float(traj.x[-1]),
            y=float(traj.y[-1]),
            theta=float(traj.theta[-1]),
            v=0.0,
            a_lon=0.0,
            a_lat=0.0,
            a_comb=0.0,
            stopped=True,
        )

    i = int(np.searchsorted(times, t, side="right")) - 1
    if times[i] == t:
        return _stored_state(traj, i)
    w = (t - times[i]) / (times[i + 1] - times[i])

    def lerp(arr: np.ndarray) -> float:
        return float(arr[i] + w * (arr[i + 1] - arr[i]))

    theta = traj.theta[i] + w * _wrap_angle(traj.theta[i + 1] - traj.theta[i])
    a_lon = lerp(traj.a_lon)
    a_lat = lerp(traj.a_lat)
    return VehicleState(
        t=float(t),
        x=lerp(traj.x),
        y=lerp(traj.y),
        theta=float(_wrap_angle(theta)),
        v=lerp(traj.v),
        a_lon=a_lon,
        a_lat=a_lat,
        a_comb=float(math.hypot(a_lon, a_lat)),
        stopped=False,
    )


def _stored_state(traj: Trajectory, i: int) -> VehicleState:
    return VehicleState(
        t=float(traj.t[i]),
        x=float(traj.x[i]),
        y=float(traj.y[i]),
        theta=float(traj.theta[i]),
        v=float(traj.v[i]),
        a_lon=float(traj.a_lon[i]),
        a_lat=float(traj.a_lat[i]),
        a_comb=float(traj.a_comb[i]),
        stopped=False,
    )


# ---------------------------------------------------------------------------
# Footprints and overlap

def footprint(state: VehicleState, spec: VehicleSpec) -> np.ndarray:
    """Counter-clockwise (4,2) corners of the vehicle rectangle at a state."""
    return _corners_at(state.x, state.y, state.theta, spec.length / 2.0, spec.width / 2.0)


def _corners_at(x: float, y: float, theta: float, hl: float, hw: float) -> np.ndarray:
    c = math.cos(theta)
    s = math.sin(theta)
    local = ((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw))
    return np.array([(x + c * lx - s * ly, y + s * lx + c * ly) for lx, ly in local])


def rects_overlap(a: np.ndarray, b: np.ndarray) -> bool:
    """Separating-axis overlap test; touching boundaries count as overlap."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (4, 2) or b.shape != (4, 2):
        raise InvalidInput("rectangles must be (4,2) corner arrays")
    return kernels.rects_overlap(a, b)


def _sampled_corners(traj: Trajectory, ts: np.ndarray, spec: VehicleSpec) -> np.ndarray:
    """(T,4,2) footprint corners at the given sample times."""
    x = np.interp(ts, traj.t, traj.x)
    y = np.interp(ts, traj.t, traj.y)
    theta = np.interp(ts, traj.t, np.unwrap(traj.theta))
    c = np.cos(theta)
    s = np.sin(theta)
    hl = spec.length / 2.0
    hw = spec.width / 2.0
    corners = np.empty((ts.shape[0], 4, 2))
    for k, (lx, ly) in enumerate(((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw))):
        corners[:, k, 0] = x + c * lx - s * ly
        corners[:, k, 1] = y + s * lx + c * ly
    return corners


def _scan_times(end_time: float, dt: float) -> np.ndarray:
    n = int(math.floor(end_time / dt + 1e-9)) + 1
    ts = np.arange(n) * dt
    if ts[-1] < end_time:
        ts = np.append(ts, end_time)
    return ts


def _bisect(predicate, lo: float, hi: float) -> float:
    """Earliest predicate-true time in (lo, hi], to REFINE_TOL."""
    while hi - lo > REFINE_TOL:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _require_resolved(sc: Scenario, resolved: ResolvedScenario | None) -> ResolvedScenario:
    res = resolved if resolved is not None else resolve_scenario(sc)
    if res.failures:
        vid, reason = next(iter(res.failures.items()))
        raise InvalidInput(f"vehicle {vid!r} has no resolvable trajectory: {reason}")
    return res


# ---------------------------------------------------------------------------
# Scans

def collision_scan(
    sc: Scenario, dt: float = DEFAULT_SCAN_DT, resolved: ResolvedScenario | None = None
) -> list[Event]:
    """Earliest footprint overlap per vehicle pair."""
    if not (dt > 0.0 and math.isfinite(dt)):
        raise InvalidInput(f"scan step must be positive, got {dt}")
    res = _require_resolved(sc, resolved)
    if len(sc.vehicles) < 2:
        return []

    ts = _scan_times(res.end_time, dt)
    corners = {
        e.spec.id: _sampled_corners(res.trajectories[e.spec.id], ts, e.spec)
        for e in sc.vehicles
    }

    events: list[Event] = []
    for ea, eb in combinations(sc.vehicles, 2):
        ida, idb = ea.spec.id, eb.spec.id
        k = kernels.first_overlap_index(corners[ida], corners[idb])
        if k < 0:
            continue
        if k == 0:
            t_first = 0.0
        else:
            ta = res.trajectories[ida]
            tb = res.trajectories[idb]

            def touching(t: float) -> bool:
                fa = footprint(state_at_time(ta, t), ea.spec)
                fb = footprint(state_at_time(tb, t), eb.spec)
                return kernels.rects_overlap(fa, fb)

            t_first = _bisect(touching, float(ts[k - 1]), float(ts[k]))
        events.append(
            Event("collision", t_first, (ida, idb), {"t_sample": float(ts[k])})
        )
    events.sort(key=lambda e: (e.t_first, e.participants))
    return events


def _drivable_polygon(track: TrackBounds) -> np.ndarray:
    poly = track.drivable_polygon()
    if poly.shape[0] < 3:
        raise InvalidTrack("drivable polygon needs at least 3 vertices")
    x = poly[:, 0]
    y = poly[:, 1]
    area = 0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    if area < 1e-9:
        raise InvalidTrack("drivable polygon has (near) zero area")
    return poly


def offtrack_scan(
    sc: Scenario, dt: float = DEFAULT_SCAN_DT, resolved: ResolvedScenario | None = None
) -> list[Event]:
    """Earliest time any footprint corner leaves the drivable polygon.

    Corners exactly on a bound segment count as violations; the boundary is
    not drivable margin.
    """
    if not (dt > 0.0 and math.isfinite(dt)):
        raise InvalidInput(f"scan step must be positive, got {dt}")
    res = _require_resolved(sc, resolved)
    poly = _drivable_polygon(sc.track)

    events: list[Event] = []
    for entry in sc.vehicles:
        vid = entry.spec.id
        traj = res.trajectories[vid]
        ts = _scan_times(traj.duration, dt)
        corners = _sampled_corners(traj, ts, entry.spec)
        flat = corners.reshape(-1, 2)
        inside = kernels.points_in_polygon(flat[:, 0], flat[:, 1], poly).reshape(-1, 4)
        bad = np.flatnonzero(~inside.all(axis=1))
        if not bad.size:
            continue
        k = int(bad[0])
        if k == 0:
            t_first = 0.0
        else:

            def outside(t: float) -> bool:
                fp = footprint(state_at_time(traj, t), entry.spec)
                ok = kernels.points_in_polygon(fp[:, 0], fp[:, 1], poly)
                return not ok.all()

            t_first = _bisect(outside, float(ts[k - 1]), float(ts[k]))
        corner_idx = int(np.flatnonzero(~inside[k])[0])
        events.append(Event("offtrack", t_first, (vid,), {"corner": corner_idx}))
    events.sort(key=lambda e: (e.t_first, e.participants))
    return events


#: Relative guard band of the acceleration scan; matches the tolerance the
#: profile solver is allowed on the friction circle, so a limit equal to
#: a_max never flags an untouched profile.
ACCEL_SCAN_GUARD = 1e-6


def accel_limit_scan(
    sc: Scenario, a_limit: float, resolved: ResolvedScenario | None = None
) -> list[Event]:
    """Stations where combined acceleration exceeds the limit, merged per run."""
    if not (a_limit > 0.0 and math.isfinite(a_limit)):
        raise InvalidInput(f"acceleration limit must be positive, got {a_limit}")
    res = _require_resolved(sc, resolved)

    events: list[Event] = []
    for entry in sc.vehicles:
        vid = entry.spec.id
        traj = res.trajectories[vid]
        over = traj.a_comb > a_limit * (1.0 + ACCEL_SCAN_GUARD)
        if not over.any():
            continue
        padded = np.concatenate([[False], over, [False]])
        starts = np.flatnonzero(padded[1:] & ~padded[:-1])
        ends = np.flatnonzero(~padded[1:] & padded[:-1])
        for lo, hi in zip(starts, ends):
            run = slice(lo, hi)
            peak_i = lo + int(np.argmax(traj.a_comb[run]))
            events.append(
                Event(
                    "accel_violation",
                    float(traj.t[lo]),
                    (vid,),
                    {
                        "peak_exceedance": float(traj.a_comb[peak_i] - a_limit),
                        "a_comb_peak": float(traj.a_comb[peak_i]),
                        "t_peak": float(traj.t[peak_i]),
                    },
                )
            )
    events.sort(key=lambda e: (e.t_first, e.participants))
    return events


# ---------------------------------------------------------------------------
# Occupancy grid

def occupancy_grid(track: TrackBounds, resolution: float = DEFAULT_GRID_RESOLUTION) -> OccupancyGrid:
    """Rasterize the drivable polygon over its padded bounding box.

    A cell is free iff its center lies strictly inside the polygon. The grid
    covers the bound bounding box padded by one cell on every side; the
    origin is the center of the lower-left cell.
    """
    if not (resolution > 0.0 and math.isfinite(resolution)):
        raise InvalidInput(f"resolution must be positive, got {resolution}")
    poly = _drivable_polygon(track)

    all_pts = np.vstack([track.left, track.right])
    xmin, ymin = all_pts.min(axis=0)
    xmax, ymax = all_pts.max(axis=0)
    width = int(math.ceil((xmax - xmin) / resolution - 1e-9)) + 2
    height = int(math.ceil((ymax - ymin) / resolution - 1e-9)) + 2
    origin = (xmin - resolution / 2.0, ymin - resolution / 2.0)

    cx = origin[0] + resolution * np.arange(width)
    cy = origin[1] + resolution * np.arange(height)
    gx, gy = np.meshgrid(cx, cy)
    free = kernels.points_in_polygon(gx.ravel(), gy.ravel(), poly)
    return OccupancyGrid(
        origin=(float(origin[0]), float(origin[1])),
        resolution=float(resolution),
        width=width,
        height=height,
        cells=free.reshape(height, width),
    )


# ---------------------------------------------------------------------------
# Ground truth comparison

def compare_ground_truth(events: list[Event], labels: list[GroundTruthLabel]) -> Verdict:
    """Match events against authored labels.

    A label is matched by any event of the same kind and participants whose
    time falls inside the window; events matching no label are unexpected
    (false positives). Pass requires no misses and no unexpected events.
    """
    matched = tuple(lab for lab in labels if any(lab.matches(ev) for ev in events))
    missed = tuple(lab for lab in labels if not any(lab.matches(ev) for ev in events))
    unexpected = tuple(ev for ev in events if not any(lab.matches(ev) for lab in labels))
    return Verdict(matched=matched, missed=missed, unexpected=unexpected)
