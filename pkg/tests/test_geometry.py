import math

import numpy as np
import pytest

from conftest import random_support
from scnforge.errors import DegenerateGeometry, InvalidInput
from scnforge.geometry import (
    Point2,
    SplineChain,
    SplineSegment,
    SupportSequence,
    curvature_at,
    eval_spline,
    fit_spline,
    heading_from_neighbors,
    sample_path,
)


def fit_from_xy(xy) -> tuple[SupportSequence, "SplineChain"]:
    seq = SupportSequence.from_xy(xy)
    theta_start, theta_end = heading_from_neighbors(seq)
    return seq, fit_spline(seq, theta_start, theta_end)


class TestSupportSequence:
    def test_rejects_duplicate_consecutive_points(self):
        with pytest.raises(InvalidInput):
            SupportSequence.from_xy([[0, 0], [0, 0], [1, 1]])

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInput):
            Point2(float("nan"), 0.0)


class TestHeadingFromNeighbors:
    def test_axis_aligned(self):
        seq = SupportSequence.from_xy([[0, 0], [1, 0]])
        assert heading_from_neighbors(seq) == (0.0, 0.0)

    def test_axis_aligned_bend(self):
        seq = SupportSequence.from_xy([[0, 0], [0, 2], [-1, 2]])
        ts, te = heading_from_neighbors(seq)
        assert ts == pytest.approx(math.pi / 2, abs=1e-15)
        assert te == pytest.approx(math.pi, abs=1e-15)

    def test_diagonal(self):
        seq = SupportSequence.from_xy([[0, 0], [1, 1], [2, 3]])
        ts, te = heading_from_neighbors(seq)
        assert ts == pytest.approx(math.atan2(1, 1), abs=1e-12)
        assert te == pytest.approx(math.atan2(2, 1), abs=1e-12)

    def test_range_is_half_open(self):
        seq = SupportSequence.from_xy([[1, 0], [0, 0]])
        ts, _ = heading_from_neighbors(seq)
        assert ts == pytest.approx(math.pi)
        assert -math.pi < ts <= math.pi

    def test_needs_two_points(self):
        with pytest.raises(InvalidInput):
            heading_from_neighbors(SupportSequence.from_xy([[0, 0]]))


class TestFitSpline:
    def test_collinear_points_trace_the_axis(self):
        _, chain = fit_from_xy([[0, 0], [1, 0], [2, 0]])
        for i in range(len(chain)):
            for mu in np.linspace(0, 1, 11):
                p, _, _ = eval_spline(chain, i, float(mu))
                assert abs(p.y) < 1e-9
                assert abs(curvature_at(chain, i, float(mu))) < 1e-9

    def test_interpolates_support_points(self, rng):
        pts = random_support(rng, 8)
        seq, chain = fit_from_xy(pts)
        for i in range(len(chain)):
            p0, _, _ = eval_spline(chain, i, 0.0)
            assert math.hypot(p0.x - pts[i, 0], p0.y - pts[i, 1]) < 1e-9
        plast, _, _ = eval_spline(chain, len(chain) - 1, 1.0)
        assert math.hypot(plast.x - pts[-1, 0], plast.y - pts[-1, 1]) < 1e-9

    def test_joint_continuity(self, rng):
        for _ in range(5):
            _, chain = fit_from_xy(random_support(rng, 9))
            for i in range(len(chain) - 1):
                pl, d1l, d2l = eval_spline(chain, i, 1.0)
                pr, d1r, d2r = eval_spline(chain, i + 1, 0.0)
                assert math.hypot(pl.x - pr.x, pl.y - pr.y) < 1e-9
                assert np.abs(d1l - d1r).max() < 1e-8
                assert np.abs(d2l - d2r).max() < 1e-8

    def test_boundary_headings_honored(self, rng):
        pts = random_support(rng, 6)
        seq = SupportSequence.from_xy(pts)
        theta_start, theta_end = 0.3, -2.2
        chain = fit_spline(seq, theta_start, theta_end)
        _, d1, _ = eval_spline(chain, 0, 0.0)
        assert abs(math.atan2(d1[1], d1[0]) - theta_start) < 1e-8
        _, d1, _ = eval_spline(chain, len(chain) - 1, 1.0)
        assert abs(math.atan2(d1[1], d1[0]) - theta_end) < 1e-8

    def test_end_tangent_magnitude_is_chord_length(self):
        seq = SupportSequence.from_xy([[0, 0], [3, 4], [10, 4]])
        chain = fit_spline(seq, 0.5, 0.0)
        _, d1, _ = eval_spline(chain, 0, 0.0)
        assert np.hypot(*d1) == pytest.approx(5.0, abs=1e-9)
        _, d1, _ = eval_spline(chain, 1, 1.0)
        assert np.hypot(*d1) == pytest.approx(7.0, abs=1e-9)

    def test_matches_independent_dense_solve_on_three_points(self):
        # Same constraint set assembled as a plain dense 8x8 system.
        pts = np.array([[0.0, 0.0], [4.0, 1.0], [6.0, 5.0]])
        theta_start, theta_end = 0.2, 1.1
        c0 = math.hypot(4, 1)
        c1 = math.hypot(2, 4)
        a = np.zeros((8, 8))
        rhs = np.zeros((8, 2))
        a[0, 1] = 1.0
        rhs[0] = c0 * np.array([math.cos(theta_start), math.sin(theta_start)])
        a[1, 0] = 1.0
        rhs[1] = pts[0]
        a[2, 0:4] = 1.0
        rhs[2] = pts[1]
        a[3, 1:4] = [1.0, 2.0, 3.0]
        a[3, 5] = -1.0
        a[4, 2:4] = [2.0, 6.0]
        a[4, 6] = -2.0
        a[5, 4] = 1.0
        rhs[5] = pts[1]
        a[6, 4:8] = 1.0
        rhs[6] = pts[2]
        a[7, 5:8] = [1.0, 2.0, 3.0]
        rhs[7] = c1 * np.array([math.cos(theta_end), math.sin(theta_end)])
        dense = np.linalg.solve(a, rhs)

        chain = fit_spline(SupportSequence.from_xy(pts), theta_start, theta_end)
        fitted = np.concatenate(
            [np.column_stack([seg.ax, seg.ay]) for seg in chain.segments]
        )
        assert np.abs(fitted - dense).max() < 1e-9

    def test_rigid_motion_equivariance(self, rng):
        pts = random_support(rng, 7)
        seq, chain = fit_from_xy(pts)
        path = sample_path(chain, 0.5)

        angle, shift = 0.8, np.array([12.0, -7.0])
        rot = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        moved = pts @ rot.T + shift
        seq2 = SupportSequence.from_xy(moved)
        ts, te = heading_from_neighbors(seq)
        chain2 = fit_spline(seq2, ts + angle, te + angle)
        path2 = sample_path(chain2, 0.5)

        expected = path.pts @ rot.T + shift
        assert np.abs(path2.pts - expected).max() < 1e-9
        assert np.abs(np.abs(path2.kappa) - np.abs(path.kappa)).max() < 1e-9

    def test_mirroring_negates_curvature(self, rng):
        pts = random_support(rng, 6)
        seq, chain = fit_from_xy(pts)
        path = sample_path(chain, 0.5)
        mirrored = pts * np.array([1.0, -1.0])
        seq2 = SupportSequence.from_xy(mirrored)
        ts, te = heading_from_neighbors(seq)
        chain2 = fit_spline(seq2, -ts, -te)
        path2 = sample_path(chain2, 0.5)
        assert np.abs(path2.kappa + path.kappa).max() < 1e-9

    def test_needs_three_points(self):
        with pytest.raises(InvalidInput):
            fit_spline(SupportSequence.from_xy([[0, 0], [1, 0]]), 0.0, 0.0)

    def test_rejects_non_finite_heading(self):
        seq = SupportSequence.from_xy([[0, 0], [1, 0], [2, 0]])
        with pytest.raises(InvalidInput):
            fit_spline(seq, float("inf"), 0.0)


class TestCircleOracle:
    """Nine points on a quarter arc of radius 20; analytic curvature 0.05."""

    RADIUS = 20.0

    def circle_points(self):
        phi = np.linspace(0.0, np.pi / 2, 9)
        return np.column_stack([self.RADIUS * np.cos(phi), self.RADIUS * np.sin(phi)]), phi

    def test_exact_tangent_headings_recover_curvature(self):
        pts, phi = self.circle_points()
        seq = SupportSequence.from_xy(pts)
        chain = fit_spline(seq, np.pi / 2 + phi[0], np.pi / 2 + phi[-1])
        path = sample_path(chain, 0.5)
        interior = np.abs(path.kappa[1:-1])
        assert np.abs(interior - 0.05).max() / 0.05 < 0.02

    def test_chord_headings_recover_curvature_away_from_the_ends(self):
        # Neighbor-chord end headings are off the true tangent by half the
        # subtended angle, which distorts curvature over the outer spans;
        # the central stretch still recovers the analytic value.
        pts, _ = self.circle_points()
        _, chain = fit_from_xy(pts)
        path = sample_path(chain, 0.5)
        mid = (path.s > 0.4 * path.length) & (path.s < 0.6 * path.length)
        assert np.abs(np.abs(path.kappa[mid]) - 0.05).max() / 0.05 < 0.02
        ends = np.abs(np.abs(path.kappa[[1, -2]]) - 0.05) / 0.05
        assert ends.max() > 0.02  # boundary distortion is real, not noise

    def test_arc_length_within_one_percent(self):
        pts, phi = self.circle_points()
        seq = SupportSequence.from_xy(pts)
        chain = fit_spline(seq, np.pi / 2 + phi[0], np.pi / 2 + phi[-1])
        path = sample_path(chain, 0.5)
        assert abs(path.length - 10 * np.pi) / (10 * np.pi) < 0.01


class TestEvalSpline:
    def test_endpoint_values(self, rng):
        pts = random_support(rng, 5)
        seq, chain = fit_from_xy(pts)
        p, d1, _ = eval_spline(chain, 0, 0.0)
        assert (p.x, p.y) == pytest.approx(tuple(pts[0]), abs=1e-9)
        ts, _ = heading_from_neighbors(seq)
        assert math.atan2(d1[1], d1[0]) == pytest.approx(ts, abs=1e-8)
        p, _, _ = eval_spline(chain, len(chain) - 1, 1.0)
        assert (p.x, p.y) == pytest.approx(tuple(pts[-1]), abs=1e-9)

    def test_straight_chain_midpoint(self):
        _, chain = fit_from_xy([[0, 0], [2, 0], [4, 0]])
        p, _, _ = eval_spline(chain, 0, 0.5)
        assert (p.x, p.y) == pytest.approx((1.0, 0.0), abs=1e-9)

    def test_rejects_out_of_range(self):
        _, chain = fit_from_xy([[0, 0], [1, 0], [2, 0]])
        with pytest.raises(InvalidInput):
            eval_spline(chain, 2, 0.5)
        with pytest.raises(InvalidInput):
            eval_spline(chain, -1, 0.5)
        with pytest.raises(InvalidInput):
            eval_spline(chain, 0, 1.5)


class TestCurvature:
    def test_circle_magnitude(self):
        pts, phi = TestCircleOracle().circle_points()
        seq = SupportSequence.from_xy(pts)
        chain = fit_spline(seq, np.pi / 2, np.pi / 2 + phi[-1])
        k = curvature_at(chain, 3, 0.5)
        assert abs(k) == pytest.approx(0.05, rel=0.02)

    def test_degenerate_tangent_raises(self):
        seg = SplineSegment(ax=(0.0, 0.0, 0.0, 1.0), ay=(0.0, 0.0, 0.0, 0.0))
        chain = SplineChain(segments=(seg,), theta_start=0.0, theta_end=0.0, chord_lengths=(1.0,))
        with pytest.raises(DegenerateGeometry):
            curvature_at(chain, 0, 0.0)


class TestSamplePath:
    def test_straight_ten_meters(self):
        _, chain = fit_from_xy([[0, 0], [5, 0], [10, 0]])
        path = sample_path(chain, 0.5)
        assert len(path.s) == 21
        assert np.allclose(path.s, np.arange(21) * 0.5, atol=1e-9)
        assert path.pts[-1] == pytest.approx([10.0, 0.0], abs=1e-9)

    def test_station_spacing_near_step(self, rng):
        for _ in range(3):
            _, chain = fit_from_xy(random_support(rng, 7))
            path = sample_path(chain, 0.5)
            spacing = np.diff(path.s)
            assert np.all(np.abs(spacing - 0.5) <= 0.05 + 1e-12)

    def test_s_strictly_increasing(self, rng):
        for _ in range(5):
            _, chain = fit_from_xy(random_support(rng, 10))
            path = sample_path(chain, 0.5)
            assert np.all(np.diff(path.s) > 0)
            assert path.s[0] == 0.0

    def test_heading_matches_tangent(self):
        pts, phi = TestCircleOracle().circle_points()
        seq = SupportSequence.from_xy(pts)
        chain = fit_spline(seq, np.pi / 2, np.pi / 2 + phi[-1])
        path = sample_path(chain, 0.5)
        assert path.theta[0] == pytest.approx(np.pi / 2, abs=1e-8)

    def test_rejects_non_positive_step(self):
        _, chain = fit_from_xy([[0, 0], [1, 0], [2, 0]])
        with pytest.raises(InvalidInput):
            sample_path(chain, 0.0)
