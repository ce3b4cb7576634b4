#!/usr/bin/env python3
"""Author the bundled fixture scenarios and their ground-truth labels.

The fixtures are constructed analogs of three safety-critical situations:

  scenario_a         two vehicles; the lead car hard-stops on the ego line,
                     footprint contact lands at 4.5 s
  scenario_b         hand-drawn right turn; the path spline bulges into the
                     outer bound between legal support points
  scenario_b_control same turn with a centered path; no violation
  scenario_c         scenario_a's track and ego path with the velocity
                     manually raised around s = 50 m; combined acceleration
                     exceeds the 13.0 m/s^2 limit
  scenario_nominal   scenario_a's ego alone, untouched profile; all scans
                     must stay silent

All authored coordinates are exact at 9 significant decimal digits so that
export -> import -> export is byte-identical. Run from the repo root:

    python tools/build_fixtures.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from scnforge.analysis import accel_limit_scan, collision_scan, offtrack_scan
from scnforge.geometry import SupportSequence, fit_spline, heading_from_neighbors, sample_path
from scnforge.scenario import (
    FrictionSpec,
    Scenario,
    TrackBounds,
    VehicleEntry,
    VehicleSpec,
    export_scenario,
    import_scenario,
    resolve_scenario,
)

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "scnforge" / "fixtures"

FRICTION = FrictionSpec(a_max=13.0, v_lim=60.0)
HALF_WIDTH = 5.0
EGO_SPEC = VehicleSpec(id="ego", length=4.7, width=1.9, is_vut=True, color="#ff7f0e")
LEAD_SPEC = VehicleSpec(id="veh_2", length=4.7, width=1.9, is_vut=False, color="#1f77b4")

# Triple turn combination; the first apex sits near s = 50 m of the ego line.
EGO_SUPPORT = [
    [0.0, 0.0],
    [18.0, 0.5],
    [34.0, 4.0],
    [48.0, 12.0],
    [58.0, 24.0],
    [62.0, 38.0],
    [70.0, 50.0],
    [84.0, 56.0],
    [100.0, 54.0],
    [112.0, 46.0],
    [124.0, 40.0],
    [138.0, 40.0],
    [152.0, 46.0],
]


def _round2(arr) -> np.ndarray:
    return np.round(np.asarray(arr, dtype=float), 2)


def _resolved_path(support: np.ndarray):
    seq = SupportSequence.from_xy(support)
    chain = fit_spline(seq, *heading_from_neighbors(seq))
    return sample_path(chain, 0.5)


def _bounds_from_path(path, half_width: float, lead_in: float = 12.0, lead_out: float = 12.0) -> TrackBounds:
    """Offset bounds along the path normals, extended straight at both ends."""
    stride = 8
    pts = path.pts[::stride]
    theta = path.theta[::stride]
    if (path.pts.shape[0] - 1) % stride:
        pts = np.vstack([pts, path.pts[-1]])
        theta = np.append(theta, path.theta[-1])

    d0 = np.array([np.cos(path.theta[0]), np.sin(path.theta[0])])
    d1 = np.array([np.cos(path.theta[-1]), np.sin(path.theta[-1])])
    centers = np.vstack([pts[0] - lead_in * d0, pts, pts[-1] + lead_out * d1])
    thetas = np.concatenate([[path.theta[0]], theta, [path.theta[-1]]])

    normals = np.column_stack([-np.sin(thetas), np.cos(thetas)])
    left = _round2(centers + half_width * normals)
    right = _round2(centers - half_width * normals)
    return TrackBounds(left=left, right=right)


def _support_along(path, arc_positions, straight_tail: float = 0.0, tail_points: int = 2) -> np.ndarray:
    """Support points picked at arc-length stations, plus a straight tail."""
    pts = [
        [np.interp(s, path.s, path.pts[:, 0]), np.interp(s, path.s, path.pts[:, 1])]
        for s in arc_positions
    ]
    if straight_tail > 0.0:
        th = np.interp(arc_positions[-1], path.s, np.unwrap(path.theta))
        d = np.array([np.cos(th), np.sin(th)])
        last = np.array(pts[-1])
        for k in range(1, tail_points + 1):
            pts.append(list(last + d * straight_tail * k / tail_points))
    return _round2(pts)


def build_scenario_a() -> Scenario:
    ego_path = _resolved_path(np.asarray(EGO_SUPPORT))
    track = _bounds_from_path(ego_path, HALF_WIDTH)

    best = None
    for gap in np.arange(20.0, 75.0, 0.5):
        sc = _scenario_a_with_gap(track, ego_path, gap)
        events = collision_scan(sc)
        if not events:
            continue
        t = events[0].t_first
        if best is None or abs(t - 4.5) < abs(best[1] - 4.5):
            best = (gap, t)
    if best is None:
        raise SystemExit("scenario A search found no colliding gap")
    gap, t_raw = best
    sc = _scenario_a_with_gap(track, ego_path, gap)
    print(f"scenario_a: gap {gap:.1f} m -> contact {t_raw:.3f} s")
    return sc


def _scenario_a_with_gap(track: TrackBounds, ego_path, gap: float) -> Scenario:
    lead_support = _support_along(
        ego_path, [gap, gap + 12.0, gap + 24.0, gap + 36.0], straight_tail=10.0
    )
    ego = VehicleEntry(spec=EGO_SPEC, support=np.asarray(EGO_SUPPORT), v_start=15.0)
    lead = VehicleEntry(spec=LEAD_SPEC, support=lead_support, v_end=0.0)
    return Scenario(
        name="scenario_a",
        track=track,
        vehicles=[ego, lead],
        friction=FRICTION,
        planning_horizon=3.0,
        sampling_step=0.5,
    )


def build_scenario_c(sc_a: Scenario) -> Scenario:
    """Scenario A's track and ego path, velocity raised around s = 50 m."""
    ego_path = _resolved_path(np.asarray(EGO_SUPPORT))
    resolved = resolve_scenario(
        Scenario(
            name="tmp",
            track=sc_a.track,
            vehicles=[VehicleEntry(spec=EGO_SPEC, support=np.asarray(EGO_SUPPORT), v_start=15.0)],
            friction=FRICTION,
        )
    )
    base = resolved.trajectories["ego"]
    v44 = float(np.interp(44.0, base.s, base.v))
    v56 = float(np.interp(56.0, base.s, base.v))
    v_apex_cap = float(np.min(base.v[(base.s >= 46.0) & (base.s <= 54.0)]))
    edits = [
        [44.0, round(v44, 2)],
        [50.0, round(v_apex_cap * 1.10, 2)],
        [56.0, round(v56, 2)],
    ]
    print(f"scenario_c: apex cap {v_apex_cap:.2f} m/s raised to {edits[1][1]} m/s")
    ego = VehicleEntry(
        spec=EGO_SPEC, support=np.asarray(EGO_SUPPORT), profile_edits=edits, v_start=15.0
    )
    return Scenario(
        name="scenario_c",
        track=sc_a.track,
        vehicles=[ego],
        friction=FRICTION,
        planning_horizon=3.0,
        sampling_step=0.5,
    )


def build_scenario_nominal(sc_a: Scenario) -> Scenario:
    ego = VehicleEntry(spec=EGO_SPEC, support=np.asarray(EGO_SUPPORT), v_start=15.0)
    track = TrackBounds(
        left=sc_a.track.left.copy(),
        right=sc_a.track.right.copy(),
        raceline=np.asarray(EGO_SUPPORT),
    )
    return Scenario(
        name="scenario_nominal",
        track=track,
        vehicles=[ego],
        friction=FRICTION,
        planning_horizon=3.0,
        sampling_step=0.5,
    )


def _right_turn_track() -> TrackBounds:
    """Hand-drawn 90 degree right turn, outer radius 21 m, inner 13 m."""
    cx, cy = 30.0, -13.0
    angles = np.deg2rad(np.arange(90.0, -15.0, -15.0))
    inner = [[0.0, 0.0], [14.0, 0.0]] + [
        [cx + 13.0 * np.cos(a), cy + 13.0 * np.sin(a)] for a in angles
    ] + [[43.0, -30.0], [43.0, -44.0]]
    outer = [[0.0, 8.0], [14.0, 8.0]] + [
        [cx + 21.0 * np.cos(a), cy + 21.0 * np.sin(a)] for a in angles
    ] + [[51.0, -30.0], [51.0, -44.0]]
    return TrackBounds(left=_round2(outer), right=_round2(inner))


def build_scenario_b() -> Scenario:
    """Sparse support points around the corner; the spline bulges outward."""
    support = np.asarray(
        [[4.0, 4.0], [16.0, 4.0], [28.0, 3.0], [44.0, -14.0], [47.0, -28.0], [47.0, -40.0]]
    )
    ego = VehicleEntry(
        spec=VehicleSpec(id="ego", length=4.7, width=1.9, is_vut=True, color="#ff7f0e"),
        support=support,
        v_start=12.0,
    )
    return Scenario(
        name="scenario_b",
        track=_right_turn_track(),
        vehicles=[ego],
        friction=FRICTION,
        planning_horizon=3.0,
        sampling_step=0.5,
    )


def build_scenario_b_control() -> Scenario:
    """Same turn, path held to the lane center by denser support points."""
    cx, cy = 30.0, -13.0
    angles = np.deg2rad([75.0, 55.0, 35.0, 15.0, 0.0])
    arc = [[cx + 17.0 * np.cos(a), cy + 17.0 * np.sin(a)] for a in angles]
    support = _round2([[4.0, 4.0], [16.0, 4.0], [24.0, 3.5]] + arc + [[47.0, -28.0], [47.0, -40.0]])
    ego = VehicleEntry(
        spec=VehicleSpec(id="ego", length=4.7, width=1.9, is_vut=True, color="#ff7f0e"),
        support=support,
        v_start=12.0,
    )
    return Scenario(
        name="scenario_b_control",
        track=_right_turn_track(),
        vehicles=[ego],
        friction=FRICTION,
        planning_horizon=3.0,
        sampling_step=0.5,
    )


def _window(t: float, pad: float) -> list[float]:
    return [round(t - pad, 4), round(t + pad, 4)]


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / "labels").mkdir(exist_ok=True)

    sc_a = build_scenario_a()
    sc_b = build_scenario_b()
    sc_bc = build_scenario_b_control()
    sc_c = build_scenario_c(sc_a)
    sc_nom = build_scenario_nominal(sc_a)

    scenarios = {
        "scenario_a": sc_a,
        "scenario_b": sc_b,
        "scenario_b_control": sc_bc,
        "scenario_c": sc_c,
        "scenario_nominal": sc_nom,
    }

    labels: dict[str, list[dict]] = {name: [] for name in scenarios}
    ok = True

    # scenario A: exactly one collision in [4.4, 4.6]; no other events.
    col = collision_scan(sc_a)
    off = offtrack_scan(sc_a)
    acc = accel_limit_scan(sc_a, FRICTION.a_max)
    t_a = col[0].t_first if col else float("nan")
    print(f"A: collision={[(e.participants, round(e.t_first, 4)) for e in col]} off={len(off)} acc={len(acc)}")
    if not (len(col) == 1 and abs(t_a - 4.5) <= 0.1 and not off and not acc):
        ok = False
        print("  !! scenario A constraints not met")
    labels["scenario_a"].append(
        {"kind": "collision", "participants": ["ego", "veh_2"], "window": _window(t_a, 0.01)}
    )

    # scenario B: exactly one offtrack for the VUT; control silent.
    off_b = offtrack_scan(sc_b)
    acc_b = accel_limit_scan(sc_b, FRICTION.a_max)
    print(f"B: offtrack={[(e.participants, round(e.t_first, 4)) for e in off_b]} acc={len(acc_b)}")
    if not (len(off_b) == 1 and not acc_b):
        ok = False
        print("  !! scenario B constraints not met")
    else:
        labels["scenario_b"].append(
            {"kind": "offtrack", "participants": ["ego"], "window": _window(off_b[0].t_first, 0.02)}
        )
    off_bc = offtrack_scan(sc_bc)
    acc_bc = accel_limit_scan(sc_bc, FRICTION.a_max)
    print(f"B control: offtrack={len(off_bc)} acc={len(acc_bc)}")
    if off_bc or acc_bc:
        ok = False
        print("  !! scenario B control is not clean")

    # scenario C: exactly one acceleration violation above 13; nothing else.
    acc_c = accel_limit_scan(sc_c, 13.0)
    off_c = offtrack_scan(sc_c)
    print(
        "C: accel="
        + str([(round(e.t_first, 3), round(e.detail['a_comb_peak'], 2)) for e in acc_c])
        + f" off={len(off_c)}"
    )
    if not (len(acc_c) == 1 and acc_c[0].detail["a_comb_peak"] > 13.5 and not off_c):
        ok = False
        print("  !! scenario C constraints not met")
    else:
        labels["scenario_c"].append(
            {
                "kind": "accel_violation",
                "participants": ["ego"],
                "window": _window(acc_c[0].t_first, 0.02),
            }
        )

    # nominal: all scans silent.
    nom_events = (
        collision_scan(sc_nom)
        + offtrack_scan(sc_nom)
        + accel_limit_scan(sc_nom, FRICTION.a_max)
    )
    print(f"nominal: events={len(nom_events)}")
    if nom_events:
        ok = False
        print("  !! nominal fixture is not clean")

    for name, sc in scenarios.items():
        text = export_scenario(sc)
        again = export_scenario(import_scenario(text))
        if text != again:
            ok = False
            print(f"  !! {name}: export -> import -> export is not byte-identical")
        (OUT_DIR / f"{name}.scn.json").write_text(text, encoding="utf-8")
        label_path = OUT_DIR / "labels" / f"{name}.labels.json"
        label_path.write_text(json.dumps(labels[name], indent=1) + "\n", encoding="utf-8")

    print("fixtures written to", OUT_DIR, "status:", "OK" if ok else "FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
