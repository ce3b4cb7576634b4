"""The scenario document: track bounds, vehicles, import/export, validation.

Scenario files (``.scn.json``) carry both the authoring intent (support
points, profile edits, specs) and fully resolved per-vehicle trajectory
tables, so replay consumers never need the solver. Numbers serialize at 9
significant decimal digits; export of an imported document is
byte-identical when the authoring data is exact at that precision.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    BoundsCsvError,
    ExportRefused,
    InvalidInput,
    InvalidTrack,
    SchemaError,
    StaleTrajectoryWarning,
    UnsupportedVersion,
)
from .geometry import (
    DEFAULT_STEP,
    MIN_POINT_SPACING,
    SupportSequence,
    fit_spline,
    heading_from_neighbors,
    sample_path,
)
from .velocity import (
    FrictionSpec,
    Trajectory,
    apply_profile_edit,
    init_profile,
    time_parameterize,
)

SCHEMA_VERSION = "1"
BOUNDS_CSV_HEADER = "x_left;y_left;x_right;y_right"

#: Stored trajectory tables deviating more than this from recomputation are stale.
STALENESS_TOL = 1e-6

_TRAJECTORY_KEYS = ("t", "x", "y", "theta", "kappa", "v", "a_lon", "a_lat", "a_comb")


def _as_point_array(points, what: str) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInput(f"{what} must be a list of [x, y] pairs")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{what} contains non-finite coordinates")
    return arr


@dataclass(eq=False)
class TrackBounds:
    """Left and right drivable-edge polylines, each ordered along the track."""

    left: np.ndarray
    right: np.ndarray
    raceline: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.left = _as_point_array(self.left, "left bound")
        self.right = _as_point_array(self.right, "right bound")
        for name, arr in (("left", self.left), ("right", self.right)):
            if arr.shape[0] < 2:
                raise InvalidTrack(f"{name} bound needs at least 2 points")
            gaps = np.hypot(*np.diff(arr, axis=0).T)
            if np.any(gaps <= MIN_POINT_SPACING):
                raise InvalidTrack(f"{name} bound has coinciding consecutive points")
        if self.raceline is not None:
            self.raceline = _as_point_array(self.raceline, "raceline")

    def drivable_polygon(self) -> np.ndarray:
        """Closed drivable region: left polyline then the right one reversed."""
        return np.vstack([self.left, self.right[::-1]])


@dataclass
class VehicleSpec:
    """Footprint dimensions and identity of one vehicle."""

    id: str
    length: float
    width: float
    is_vut: bool = False
    color: str = "#1f77b4"


@dataclass
class VehicleEntry:
    """Authoring data of one vehicle: path support, edits, boundary speeds."""

    spec: VehicleSpec
    support: np.ndarray
    profile_edits: list[tuple[float, float]] = field(default_factory=list)
    v_start: float | None = None
    v_end: float | None = None

    def __post_init__(self) -> None:
        self.support = _as_point_array(self.support, f"support of {self.spec.id}")
        self.profile_edits = [(float(s), float(v)) for s, v in self.profile_edits]


@dataclass
class Scenario:
    """A complete scenario document."""

    name: str
    track: TrackBounds
    vehicles: list[VehicleEntry]
    friction: FrictionSpec
    planning_horizon: float = 3.0
    sampling_step: float = DEFAULT_STEP

    def __post_init__(self) -> None:
        if not (math.isfinite(self.planning_horizon) and self.planning_horizon > 0.0):
            raise InvalidInput(f"planning horizon must be positive, got {self.planning_horizon}")
        if not (math.isfinite(self.sampling_step) and self.sampling_step > 0.0):
            raise InvalidInput(f"sampling step must be positive, got {self.sampling_step}")

    def vehicle(self, vehicle_id: str) -> VehicleEntry:
        for entry in self.vehicles:
            if entry.spec.id == vehicle_id:
                return entry
        raise InvalidInput(f"no vehicle with id {vehicle_id!r}")

    def vut(self) -> VehicleEntry:
        for entry in self.vehicles:
            if entry.spec.is_vut:
                return entry
        raise InvalidInput("scenario has no vehicle under test")


# ---------------------------------------------------------------------------
# Resolution: authoring data -> trajectories

@dataclass(eq=False)
class ResolvedScenario:
    """Scenario plus the trajectory each vehicle's authoring data yields."""

    scenario: Scenario
    trajectories: dict[str, Trajectory]
    failures: dict[str, str]

    @property
    def end_time(self) -> float:
        if not self.trajectories:
            return 0.0
        return max(t.duration for t in self.trajectories.values())


def resolve_vehicle(entry: VehicleEntry, friction: FrictionSpec, step: float) -> Trajectory:
    """Spline fit, sampling, profile initialization, edits, timestamps."""
    if entry.support.shape[0] < 3:
        raise InvalidInput(
            f"vehicle {entry.spec.id!r} has {entry.support.shape[0]} support points; spline fit needs 3"
        )
    seq = SupportSequence.from_xy(entry.support)
    theta_start, theta_end = heading_from_neighbors(seq)
    chain = fit_spline(seq, theta_start, theta_end)
    path = sample_path(chain, step)
    profile = init_profile(path, friction, entry.v_start, entry.v_end)
    if entry.profile_edits:
        profile = apply_profile_edit(profile, path, entry.profile_edits)
    return time_parameterize(path, profile)


def resolve_scenario(sc: Scenario) -> ResolvedScenario:
    trajectories: dict[str, Trajectory] = {}
    failures: dict[str, str] = {}
    for entry in sc.vehicles:
        try:
            trajectories[entry.spec.id] = resolve_vehicle(entry, sc.friction, sc.sampling_step)
        except InvalidInput as exc:
            failures[entry.spec.id] = str(exc)
    return ResolvedScenario(scenario=sc, trajectories=trajectories, failures=failures)


# ---------------------------------------------------------------------------
# Structural validation

@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    message: str


def _segments_intersect(p1, p2, q1, q2) -> bool:
    def orient(a, b, c) -> float:
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def on_segment(a, b, c) -> bool:
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0:
        return True
    if d1 == 0 and on_segment(q1, q2, p1):
        return True
    if d2 == 0 and on_segment(q1, q2, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, q1):
        return True
    if d4 == 0 and on_segment(p1, p2, q2):
        return True
    return False


def _polylines_intersect(a: np.ndarray, b: np.ndarray) -> bool:
    for i in range(a.shape[0] - 1):
        for j in range(b.shape[0] - 1):
            if _segments_intersect(a[i], a[i + 1], b[j], b[j + 1]):
                return True
    return False


def validate_scenario(sc: Scenario) -> list[Finding]:
    """Structural findings; an empty list means the scenario is exportable."""
    findings: list[Finding] = []

    if not sc.vehicles:
        findings.append(Finding("error", "no-vehicles", "scenario has no vehicles"))

    seen: set[str] = set()
    for entry in sc.vehicles:
        vid = entry.spec.id
        if vid in seen:
            findings.append(Finding("error", "duplicate-id", f"duplicate vehicle id {vid!r}"))
        seen.add(vid)

    vut_count = sum(1 for e in sc.vehicles if e.spec.is_vut)
    if sc.vehicles and vut_count == 0:
        findings.append(Finding("error", "no-vut", "no vehicle is flagged as vehicle under test"))
    elif vut_count > 1:
        findings.append(
            Finding("error", "multiple-vut", f"{vut_count} vehicles are flagged as vehicle under test")
        )

    for entry in sc.vehicles:
        vid = entry.spec.id
        if not (entry.spec.length > 0 and entry.spec.width > 0):
            findings.append(
                Finding("error", "bad-dimensions", f"vehicle {vid!r} has non-positive footprint dimensions")
            )
        if entry.support.shape[0] < 3:
            findings.append(
                Finding(
                    "error",
                    "short-support",
                    f"vehicle {vid!r} has {entry.support.shape[0]} support points; spline fit needs 3",
                )
            )
        elif np.any(np.hypot(*np.diff(entry.support, axis=0).T) <= MIN_POINT_SPACING):
            findings.append(
                Finding("error", "degenerate-support", f"vehicle {vid!r} has coinciding consecutive support points")
            )
        for name, val in (("v_start", entry.v_start), ("v_end", entry.v_end)):
            if val is not None and val < 0:
                findings.append(
                    Finding("error", "bad-speed", f"vehicle {vid!r} has negative {name}")
                )

    if _polylines_intersect(sc.track.left, sc.track.right):
        findings.append(
            Finding("error", "bound-crossing", "left and right track bounds intersect")
        )

    return findings


# ---------------------------------------------------------------------------
# Bounds CSV

def import_bounds_csv(text: str) -> TrackBounds:
    """Parse semicolon-separated bound coordinates.

    Header is ``x_left;y_left;x_right;y_right``; a row may leave either
    coordinate pair blank when the bounds have different point counts.
    """
    lines = text.splitlines()
    if not lines or lines[0].strip().lstrip("﻿") != BOUNDS_CSV_HEADER:
        raise BoundsCsvError(1, f"expected header {BOUNDS_CSV_HEADER!r}")

    left: list[tuple[float, float]] = []
    right: list[tuple[float, float]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = [p.strip() for p in raw.split(";")]
        if len(parts) != 4:
            raise BoundsCsvError(lineno, f"expected 4 fields, got {len(parts)}")
        for target, (xs, ys) in ((left, parts[0:2]), (right, parts[2:4])):
            if xs == "" and ys == "":
                continue
            if xs == "" or ys == "":
                raise BoundsCsvError(lineno, "coordinate pair is half blank")
            try:
                target.append((float(xs), float(ys)))
            except ValueError:
                raise BoundsCsvError(lineno, f"not a number: {xs if _bad(xs) else ys!r}") from None
        if parts[0] == parts[1] == parts[2] == parts[3] == "":
            raise BoundsCsvError(lineno, "row is entirely blank")
    if len(left) < 2 or len(right) < 2:
        raise InvalidTrack("each bound needs at least 2 points")
    return TrackBounds(left=np.array(left), right=np.array(right))


def _bad(s: str) -> bool:
    try:
        float(s)
        return False
    except ValueError:
        return True


def export_bounds_csv(track: TrackBounds) -> str:
    rows = max(track.left.shape[0], track.right.shape[0])
    out = [BOUNDS_CSV_HEADER]
    for i in range(rows):
        l = (
            f"{_fmt(track.left[i, 0])};{_fmt(track.left[i, 1])}"
            if i < track.left.shape[0]
            else ";"
        )
        r = (
            f"{_fmt(track.right[i, 0])};{_fmt(track.right[i, 1])}"
            if i < track.right.shape[0]
            else ";"
        )
        out.append(f"{l};{r}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Scenario JSON

def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _r9(x: float) -> float:
    """Round to 9 significant decimal digits (the serialization precision)."""
    return float(_fmt(x))


def _r9_array(arr) -> np.ndarray:
    """Vectorized 9-significant-digit rounding.

    Rounding to a decimal that short is idempotent across export and import,
    which is what keeps re-exports byte-identical.
    """
    out = np.array(arr, dtype=float)
    flat = out.reshape(-1)
    nz = flat != 0.0
    if nz.any():
        vals = flat[nz]
        scale = np.power(10.0, 8.0 - np.floor(np.log10(np.abs(vals))))
        flat[nz] = np.rint(vals * scale) / scale
    return out


def _r9_list(arr) -> list[float]:
    return _r9_array(arr).tolist()


def _r9_points(arr: np.ndarray) -> list[list[float]]:
    return _r9_array(arr).tolist()


def _trajectory_table(traj: Trajectory, include_s: bool = False) -> dict:
    table: dict = {}
    if include_s:
        table["s"] = _r9_list(traj.s)
    for key in _TRAJECTORY_KEYS:
        table[key] = _r9_list(getattr(traj, key))
    return table


def build_document(
    sc: Scenario,
    resolved: ResolvedScenario | None = None,
    include_s: bool = False,
    allow_partial: bool = False,
) -> dict:
    """Scenario document dict in schema order.

    With ``allow_partial`` vehicles that cannot be resolved carry a null
    trajectory (used by the editing service for intermediate states);
    otherwise resolution failures raise ExportRefused.
    """
    if resolved is None:
        resolved = resolve_scenario(sc)
    if resolved.failures and not allow_partial:
        vid, reason = next(iter(resolved.failures.items()))
        raise ExportRefused(f"vehicle {vid!r} has no resolvable trajectory: {reason}")

    track: dict = {
        "left": _r9_points(sc.track.left),
        "right": _r9_points(sc.track.right),
    }
    if sc.track.raceline is not None:
        track["raceline"] = _r9_points(sc.track.raceline)

    vehicles = []
    for entry in sc.vehicles:
        traj = resolved.trajectories.get(entry.spec.id)
        vehicles.append(
            {
                "id": entry.spec.id,
                "is_vut": entry.spec.is_vut,
                "length_m": _r9(entry.spec.length),
                "width_m": _r9(entry.spec.width),
                "color": entry.spec.color,
                "v_start": None if entry.v_start is None else _r9(entry.v_start),
                "v_end": None if entry.v_end is None else _r9(entry.v_end),
                "support": _r9_points(entry.support),
                "profile_edits": [[_r9(s), _r9(v)] for s, v in entry.profile_edits],
                "trajectory": None if traj is None else _trajectory_table(traj, include_s),
            }
        )

    return {
        "schema_version": SCHEMA_VERSION,
        "name": sc.name,
        "friction": {"a_max": _r9(sc.friction.a_max), "v_lim": _r9(sc.friction.v_lim)},
        "planning_horizon_s": _r9(sc.planning_horizon),
        "sampling_step_m": _r9(sc.sampling_step),
        "track": track,
        "vehicles": vehicles,
    }


def export_scenario(sc: Scenario, resolved: ResolvedScenario | None = None) -> str:
    """Serialize a valid scenario with resolved trajectory tables."""
    errors = [f for f in validate_scenario(sc) if f.severity == "error"]
    if errors:
        raise ExportRefused(f"scenario fails validation: {errors[0].message}")
    doc = build_document(sc, resolved=resolved)
    return json.dumps(doc, indent=1) + "\n"


def _req(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}.{key}" if where else key)
    return obj[key]


def import_scenario(text: str) -> Scenario:
    """Parse a scenario document and restore the authoring fields.

    Stored trajectory tables are recomputed from the authoring data and
    compared; a deviation beyond STALENESS_TOL emits StaleTrajectoryWarning
    naming the affected vehicles (the file stays loadable).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("document", f"not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise SchemaError("document", "top level must be an object")

    version = _req(doc, "schema_version", "")
    if version != SCHEMA_VERSION:
        raise UnsupportedVersion(f"schema version {version!r} is not supported (expected {SCHEMA_VERSION!r})")

    friction_doc = _req(doc, "friction", "")
    friction = FrictionSpec(
        a_max=float(_req(friction_doc, "a_max", "friction")),
        v_lim=float(_req(friction_doc, "v_lim", "friction")),
    )
    track_doc = _req(doc, "track", "")
    track = TrackBounds(
        left=_req(track_doc, "left", "track"),
        right=_req(track_doc, "right", "track"),
        raceline=track_doc.get("raceline"),
    )

    vehicles = []
    stored_tables: dict[str, dict | None] = {}
    for k, vdoc in enumerate(_req(doc, "vehicles", "")):
        where = f"vehicles[{k}]"
        spec = VehicleSpec(
            id=str(_req(vdoc, "id", where)),
            length=float(_req(vdoc, "length_m", where)),
            width=float(_req(vdoc, "width_m", where)),
            is_vut=bool(_req(vdoc, "is_vut", where)),
            color=str(_req(vdoc, "color", where)),
        )
        v_start = _req(vdoc, "v_start", where)
        v_end = _req(vdoc, "v_end", where)
        entry = VehicleEntry(
            spec=spec,
            support=_req(vdoc, "support", where),
            profile_edits=[(float(s), float(v)) for s, v in _req(vdoc, "profile_edits", where)],
            v_start=None if v_start is None else float(v_start),
            v_end=None if v_end is None else float(v_end),
        )
        vehicles.append(entry)
        stored_tables[spec.id] = vdoc.get("trajectory")

    sc = Scenario(
        name=str(_req(doc, "name", "")),
        track=track,
        vehicles=vehicles,
        friction=friction,
        planning_horizon=float(_req(doc, "planning_horizon_s", "")),
        sampling_step=float(_req(doc, "sampling_step_m", "")),
    )

    stale = _stale_vehicles(sc, stored_tables)
    if stale:
        warnings.warn(
            StaleTrajectoryWarning(
                "stored trajectories differ from recomputation for: " + ", ".join(stale)
            ),
            stacklevel=2,
        )
    return sc


def _stale_vehicles(sc: Scenario, stored_tables: dict[str, dict | None]) -> list[str]:
    if not any(stored_tables.values()):
        return []
    resolved = resolve_scenario(sc)
    stale = []
    for entry in sc.vehicles:
        stored = stored_tables.get(entry.spec.id)
        if stored is None:
            continue
        traj = resolved.trajectories.get(entry.spec.id)
        if traj is None:
            stale.append(entry.spec.id)
            continue
        for key in _TRAJECTORY_KEYS:
            fresh = getattr(traj, key)
            kept = np.asarray(stored.get(key, []), dtype=float)
            if kept.shape != fresh.shape or np.max(np.abs(kept - fresh), initial=0.0) > STALENESS_TOL:
                stale.append(entry.spec.id)
                break
    return stale


def scenario_from_document(doc: dict) -> Scenario:
    """Import from an already-parsed document dict (service use)."""
    return import_scenario(json.dumps(doc))


def copy_scenario(sc: Scenario) -> Scenario:
    """Deep-enough copy for mutation under the service's write lock."""
    return Scenario(
        name=sc.name,
        track=TrackBounds(
            left=sc.track.left.copy(),
            right=sc.track.right.copy(),
            raceline=None if sc.track.raceline is None else sc.track.raceline.copy(),
        ),
        vehicles=[
            VehicleEntry(
                spec=replace(entry.spec),
                support=entry.support.copy(),
                profile_edits=list(entry.profile_edits),
                v_start=entry.v_start,
                v_end=entry.v_end,
            )
            for entry in sc.vehicles
        ],
        friction=sc.friction,
        planning_horizon=sc.planning_horizon,
        sampling_step=sc.sampling_step,
    )
