import math

import numpy as np
import pytest

from conftest import straight_scenario
from scnforge.analysis import (
    Event,
    GroundTruthLabel,
    accel_limit_scan,
    collision_scan,
    compare_ground_truth,
    footprint,
    occupancy_grid,
    offtrack_scan,
    rects_overlap,
    state_at_time,
)
from scnforge.errors import InvalidInput, InvalidTrack
from scnforge.scenario import (
    TrackBounds,
    VehicleEntry,
    VehicleSpec,
    resolve_scenario,
)
from scnforge.velocity import Trajectory


def make_trajectory() -> Trajectory:
    # Uniform motion along +x at 10 m/s for 10 s.
    n = 101
    t = np.arange(n) * 0.1
    s = 10.0 * t
    return Trajectory(
        s=s,
        x=s.copy(),
        y=np.zeros(n),
        theta=np.zeros(n),
        kappa=np.zeros(n),
        v=np.full(n, 10.0),
        t=t,
        a_lon=np.zeros(n),
        a_lat=np.zeros(n),
        a_comb=np.zeros(n),
    )


class TestStateAtTime:
    def test_stored_timestamp_returns_stored_row(self):
        traj = make_trajectory()
        st = state_at_time(traj, float(traj.t[37]))
        assert st.x == traj.x[37]
        assert st.v == 10.0
        assert not st.stopped

    def test_midpoint_of_uniform_motion(self):
        traj = make_trajectory()
        st = state_at_time(traj, 0.05)
        assert st.x == pytest.approx(0.5, abs=1e-12)
        assert st.v == pytest.approx(10.0)

    def test_past_the_end_is_a_rest_pose(self):
        traj = make_trajectory()
        st = state_at_time(traj, 99.0)
        assert st.stopped
        assert st.v == 0.0
        assert st.x == traj.x[-1]
        assert st.a_comb == 0.0

    def test_heading_interpolates_shortest_arc(self):
        traj = make_trajectory()
        traj.theta[:] = 0.0
        traj.theta[1:] = 3.0
        traj.theta[0] = -3.0  # crossing the pi seam
        st = state_at_time(traj, 0.05)
        assert abs(st.theta) > 3.0  # went through pi, not through zero

    def test_combined_acceleration_consistent(self):
        traj = make_trajectory()
        traj.a_lon[:] = 3.0
        traj.a_lat[:] = 4.0
        traj.a_comb[:] = 5.0
        st = state_at_time(traj, 0.12)
        assert st.a_comb == pytest.approx(math.hypot(st.a_lon, st.a_lat), abs=1e-9)

    def test_negative_time_rejected(self):
        with pytest.raises(InvalidInput):
            state_at_time(make_trajectory(), -0.1)


class TestFootprint:
    SPEC = VehicleSpec(id="x", length=4.0, width=2.0)

    def state(self, theta):
        return state_at_time_dummy(theta)

    def test_axis_aligned(self):
        fp = footprint(state_at_time_dummy(0.0), self.SPEC)
        assert sorted(map(tuple, fp.tolist())) == [(-2, -1), (-2, 1), (2, -1), (2, 1)]

    def test_quarter_turn(self):
        fp = footprint(state_at_time_dummy(math.pi / 2), self.SPEC)
        xs = sorted(round(x, 9) for x, _ in fp.tolist())
        ys = sorted(round(y, 9) for _, y in fp.tolist())
        assert xs == [-1, -1, 1, 1]
        assert ys == [-2, -2, 2, 2]

    def test_eighth_turn_matches_rotation_matrix(self):
        theta = math.pi / 4
        fp = footprint(state_at_time_dummy(theta), self.SPEC)
        rot = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
        )
        local = np.array([[2, 1], [-2, 1], [-2, -1], [2, -1]], dtype=float)
        assert np.abs(fp - local @ rot.T).max() < 1e-12

    def test_counter_clockwise_order(self):
        fp = footprint(state_at_time_dummy(0.3), self.SPEC)
        x, y = fp[:, 0], fp[:, 1]
        area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        assert area2 > 0

    def test_corners_form_a_proper_rectangle(self, rng):
        for _ in range(20):
            theta = float(rng.uniform(-math.pi, math.pi))
            fp = footprint(state_at_time_dummy(theta), self.SPEC)
            edges = np.roll(fp, -1, axis=0) - fp
            lengths = np.hypot(edges[:, 0], edges[:, 1])
            assert abs(lengths[0] - lengths[2]) < 1e-9
            assert abs(lengths[1] - lengths[3]) < 1e-9
            for i in range(4):
                cos_angle = np.dot(edges[i], edges[(i + 1) % 4]) / (lengths[i] * lengths[(i + 1) % 4])
                assert abs(cos_angle) < 1e-9  # right angle


def state_at_time_dummy(theta: float):
    from scnforge.analysis import VehicleState

    return VehicleState(
        t=0.0, x=0.0, y=0.0, theta=theta, v=0.0,
        a_lon=0.0, a_lat=0.0, a_comb=0.0, stopped=False,
    )


def rect(cx, cy, theta, length=4.0, width=2.0) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    local = np.array([[length / 2, width / 2], [-length / 2, width / 2],
                      [-length / 2, -width / 2], [length / 2, -width / 2]])
    rot = np.array([[c, -s], [s, c]])
    return local @ rot.T + np.array([cx, cy])


def point_in_rect(pts: np.ndarray, center, theta, length, width) -> np.ndarray:
    """Containment by local-frame coordinates; independent of the SAT code."""
    d = pts - np.asarray(center)
    c, s = math.cos(theta), math.sin(theta)
    lx = d[:, 0] * c + d[:, 1] * s
    ly = -d[:, 0] * s + d[:, 1] * c
    return (np.abs(lx) <= length / 2) & (np.abs(ly) <= width / 2)


def sampling_oracle(a_params, b_params, n=200) -> bool:
    """Dense grid containment test over the union bounding box."""
    ra = rect(*a_params[:3], *a_params[3:])
    rb = rect(*b_params[:3], *b_params[3:])
    allc = np.vstack([ra, rb])
    lo = allc.min(axis=0)
    hi = allc.max(axis=0)
    xs = np.linspace(lo[0], hi[0], n)
    ys = np.linspace(lo[1], hi[1], n)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    ina = point_in_rect(pts, a_params[:2], a_params[2], *a_params[3:])
    inb = point_in_rect(pts, b_params[:2], b_params[2], *b_params[3:])
    return bool(np.any(ina & inb))


def random_rect_params(rng):
    return (
        float(rng.uniform(-5, 5)),
        float(rng.uniform(-5, 5)),
        float(rng.uniform(-math.pi, math.pi)),
        float(rng.uniform(1.0, 6.0)),
        float(rng.uniform(0.8, 3.0)),
    )


def non_marginal(a_params, b_params, margin: float) -> bool:
    """True when inflating/deflating both rects by the margin cannot flip the answer."""
    def scaled(p, d):
        if p[3] + 2 * d <= 0 or p[4] + 2 * d <= 0:
            return None
        return (p[0], p[1], p[2], p[3] + 2 * d, p[4] + 2 * d)

    grown = (scaled(a_params, margin), scaled(b_params, margin))
    shrunk = (scaled(a_params, -margin), scaled(b_params, -margin))
    if shrunk[0] is None or shrunk[1] is None:
        return False
    return sampling_oracle(*grown) == sampling_oracle(*shrunk)


class TestRectsOverlap:
    def test_identical(self):
        r = rect(0, 0, 0.3)
        assert rects_overlap(r, r)

    def test_far_apart(self):
        assert not rects_overlap(rect(0, 0, 0.0), rect(100, 0, 0.0))

    def test_touching_counts_as_overlap(self):
        assert rects_overlap(rect(0, 0, 0.0), rect(4.0, 0, 0.0))

    def test_cross_shape_without_corner_containment(self):
        assert rects_overlap(rect(0, 0, 0.0, 6.0, 1.0), rect(0, 0, math.pi / 2, 6.0, 1.0))

    def test_symmetric(self, rng):
        for _ in range(200):
            a = rect(*random_rect_params(rng)[:3])
            b = rect(*random_rect_params(rng)[:3])
            assert rects_overlap(a, b) == rects_overlap(b, a)

    def test_agrees_with_sampling_oracle(self, rng):
        checked = 0
        disagreements = 0
        while checked < 300:
            pa = random_rect_params(rng)
            pb = random_rect_params(rng)
            diag = math.hypot(pa[3], pa[4]) / 2 + math.hypot(pb[3], pb[4]) / 2
            resolution = (diag * 2) / 200
            if not non_marginal(pa, pb, resolution):
                continue
            checked += 1
            if rects_overlap(rect(*pa), rect(*pb)) != sampling_oracle(pa, pb):
                disagreements += 1
        assert disagreements == 0


def two_vehicle_scenario(offset_y: float):
    sc = straight_scenario()
    other = VehicleEntry(
        spec=VehicleSpec(id="other", length=4.0, width=2.0),
        support=[[0.0, offset_y], [100.0, offset_y], [200.0, offset_y]],
        v_start=10.0,
        v_end=10.0,
    )
    sc.vehicles.append(other)
    return sc


class TestCollisionScan:
    def test_parallel_offset_paths_do_not_collide(self):
        events = collision_scan(two_vehicle_scenario(offset_y=4.0))
        assert events == []

    def test_single_vehicle_is_empty(self):
        assert collision_scan(straight_scenario()) == []

    def test_catch_up_collision_time(self):
        # ego holds 20 m/s; the other vehicle parks at x = 100 after a stop.
        sc = straight_scenario()
        sc.vehicles[0].v_end = 20.0
        sc.vehicles[0].profile_edits = [(0.0, 20.0), (200.0, 20.0)]
        parked = VehicleEntry(
            spec=VehicleSpec(id="wall", length=4.0, width=2.0),
            support=[[96.0, 0.0], [98.0, 0.0], [100.0, 0.0]],
            v_start=4.0,
            v_end=0.0,
        )
        sc.vehicles.append(parked)
        events = collision_scan(sc, dt=0.01)
        assert len(events) == 1
        ev = events[0]
        assert ev.kind == "collision"
        assert set(ev.participants) == {"ego", "wall"}
        # front bumper (x+2) meets parked rear bumper (100-2=98) at t=4.8
        assert ev.t_first == pytest.approx(4.8, abs=0.02)

    def test_halving_dt_keeps_confirmed_events(self):
        sc = two_vehicle_scenario(offset_y=1.0)
        coarse = collision_scan(sc, dt=0.02)
        fine = collision_scan(sc, dt=0.01)
        assert len(coarse) == len(fine) == 1
        assert abs(coarse[0].t_first - fine[0].t_first) < 0.02

    def test_rejects_non_positive_dt(self):
        with pytest.raises(InvalidInput):
            collision_scan(straight_scenario(), dt=0.0)


class TestOfftrackScan:
    def test_centerline_path_is_clean(self):
        assert offtrack_scan(straight_scenario()) == []

    def test_drift_across_bound_is_detected(self):
        sc = straight_scenario()
        sc.vehicles[0].support = np.array([[0.0, 0.0], [100.0, 0.0], [200.0, 9.0]])
        events = offtrack_scan(sc)
        assert len(events) == 1
        assert events[0].kind == "offtrack"
        assert events[0].participants == ("ego",)

    def test_corner_exactly_on_bound_counts(self):
        # Footprint half-width reaches y = 6.0 exactly: on the bound segment.
        sc = straight_scenario()
        sc.vehicles[0].support = np.array([[0.0, 5.0], [100.0, 5.0], [200.0, 5.0]])
        events = offtrack_scan(sc)
        assert len(events) == 1
        assert events[0].t_first == 0.0

    def test_degenerate_polygon_raises(self):
        sc = straight_scenario(
            track=TrackBounds(left=[[0.0, 0.0], [200.0, 0.0]], right=[[0.0, 0.0001], [200.0, 0.0001]])
        )
        sc.track.right = np.array([[0.0, 0.0], [200.0, 0.0]])  # zero area
        with pytest.raises(InvalidTrack):
            offtrack_scan(sc)


class TestAccelLimitScan:
    def test_untouched_profile_with_limit_at_a_max_is_clean(self):
        sc = straight_scenario()
        assert accel_limit_scan(sc, sc.friction.a_max) == []

    def test_injected_fault_is_one_merged_event(self):
        sc = straight_scenario()
        sc.vehicles[0].profile_edits = [(100.0, 20.0), (110.0, 32.0), (120.0, 20.0)]
        events = accel_limit_scan(sc, sc.friction.a_max)
        assert len(events) == 1
        ev = events[0]
        assert ev.kind == "accel_violation"
        assert ev.detail["peak_exceedance"] > 0
        assert ev.detail["t_peak"] >= ev.t_first

    def test_limit_above_peak_is_empty(self):
        sc = straight_scenario()
        sc.vehicles[0].profile_edits = [(100.0, 20.0), (110.0, 32.0), (120.0, 20.0)]
        assert accel_limit_scan(sc, 1e4) == []


class TestOccupancyGrid:
    def strip(self):
        return TrackBounds(left=[[0.0, 4.0], [10.0, 4.0]], right=[[0.0, 0.0], [10.0, 0.0]])

    def test_hand_counted_strip(self):
        grid = occupancy_grid(self.strip(), resolution=1.0)
        assert (grid.width, grid.height) == (12, 6)
        assert grid.origin == (-0.5, -0.5)
        assert int(grid.cells.sum()) == 40  # 10 x 4 interior cell centers
        assert grid.cells[0].sum() == 0  # padding row is occupied

    def test_refinement_consistency(self):
        coarse = occupancy_grid(self.strip(), resolution=1.0)
        fine = occupancy_grid(self.strip(), resolution=0.5)
        area_c = coarse.cells.sum() * 1.0
        area_f = fine.cells.sum() * 0.25
        perimeter_band = 28.0 * 1.0
        assert abs(area_c - area_f) <= perimeter_band

    def test_translation_by_whole_cells_is_invariant(self):
        track = self.strip()
        moved = TrackBounds(left=track.left + np.array([3.0, 2.0]), right=track.right + np.array([3.0, 2.0]))
        g0 = occupancy_grid(track, resolution=1.0)
        g1 = occupancy_grid(moved, resolution=1.0)
        assert np.array_equal(g0.cells, g1.cells)
        assert g1.origin == (g0.origin[0] + 3.0, g0.origin[1] + 2.0)

    def test_zero_area_track_raises(self):
        track = TrackBounds(left=[[0.0, 0.0], [10.0, 0.0]], right=[[0.0, 0.0], [10.0, 0.0]])
        with pytest.raises(InvalidTrack):
            occupancy_grid(track, resolution=1.0)

    def test_text_format(self):
        grid = occupancy_grid(self.strip(), resolution=1.0)
        text = grid.to_text()
        lines = text.splitlines()
        assert lines[0] == "resolution 1"
        assert lines[1] == "origin -0.5 -0.5"
        assert lines[2] == "size 12 6"
        assert len(lines) == 3 + 6
        assert set(lines[3].split()) <= {"0", "1"}


class TestCompareGroundTruth:
    LABEL = GroundTruthLabel(kind="collision", participants=("a", "b"), window=(4.0, 5.0))
    EVENT = Event(kind="collision", t_first=4.5, participants=("b", "a"))

    def test_exact_match_passes(self):
        verdict = compare_ground_truth([self.EVENT], [self.LABEL])
        assert verdict.passed
        assert verdict.matched == (self.LABEL,)

    def test_missing_event_fails(self):
        verdict = compare_ground_truth([], [self.LABEL])
        assert not verdict.passed
        assert verdict.missed == (self.LABEL,)

    def test_unexpected_event_fails(self):
        extra = Event(kind="collision", t_first=1.0, participants=("a", "c"))
        verdict = compare_ground_truth([self.EVENT, extra], [self.LABEL])
        assert not verdict.passed
        assert verdict.unexpected == (extra,)

    def test_window_edges_inclusive(self):
        edge = Event(kind="collision", t_first=5.0, participants=("a", "b"))
        assert compare_ground_truth([edge], [self.LABEL]).passed


class TestDeterminism:
    def test_scans_are_reproducible(self):
        sc = two_vehicle_scenario(offset_y=1.0)
        first = collision_scan(sc) + offtrack_scan(sc) + accel_limit_scan(sc, 10.0)
        second = collision_scan(sc) + offtrack_scan(sc) + accel_limit_scan(sc, 10.0)
        assert first == second
