import numpy as np
import pytest
from scipy.integrate import quad
from scipy.spatial.transform import Rotation

from geometry import (CurvatureProfile, CurveError, PiecewiseSegment, SpaceCurve, circle_curve,
                      compose_segments, curvature_profile, nanobar_segments, reparametrize_arclength,
                      state_count_estimate, total_curvature, trefoil_curvature, trefoil_curve,
                      trefoil_speed)
from potential import PhysParams


@pytest.fixture(scope="module")
def trefoil_profile():
    return curvature_profile(reparametrize_arclength(trefoil_curve(20000), 2048))


class TestSpaceCurve:
    def test_too_few_points(self):
        with pytest.raises(CurveError):
            SpaceCurve(np.zeros((4, 3)) + np.arange(4)[:, None])

    def test_repeated_point(self):
        points = circle_curve(1.0, 16).points
        points[5] = points[4]
        with pytest.raises(CurveError):
            SpaceCurve(points)

    def test_wrong_shape(self):
        with pytest.raises(CurveError):
            SpaceCurve(np.ones((10, 2)))

    def test_closed_curve_repeating_first_point(self):
        points = circle_curve(1.0, 32).points
        with pytest.raises(CurveError, match="coincide"):
            SpaceCurve(np.vstack([points, points[:1]]), closed=True)
        assert len(SpaceCurve(np.vstack([points, points[:1]]), closed=False)) == 33

    def test_closed_length_includes_closing_chord(self):
        curve = circle_curve(1.0, 64)
        assert curve.length() == pytest.approx(64 * 2 * np.sin(np.pi / 64), rel=1e-12)


class TestReparametrize:
    def test_equal_chords(self):
        curve = reparametrize_arclength(trefoil_curve(5000), 1000)
        chords = curve.chords()
        assert np.max(np.abs(chords / chords.mean() - 1.0)) < 1e-6

    def test_open_endpoints_kept(self):
        t = np.linspace(0.0, 1.0, 50) ** 2
        points = np.stack([t, t ** 2, np.zeros_like(t)], axis=1)
        curve = reparametrize_arclength(SpaceCurve(points), 40)
        np.testing.assert_array_equal(curve.points[0], points[0])
        np.testing.assert_array_equal(curve.points[-1], points[-1])
        assert len(curve) == 40

    def test_invalid_count(self):
        with pytest.raises(ValueError):
            reparametrize_arclength(circle_curve(1.0, 32), 3)

    def test_straight_line_spacing(self):
        x = np.array([0.0, 0.02, 0.1, 0.15, 0.4, 0.45, 0.7, 0.93, 1.0])
        points = np.stack([x, np.zeros_like(x), np.zeros_like(x)], axis=1)
        curve = reparametrize_arclength(SpaceCurve(points), 11)
        np.testing.assert_allclose(curve.points[:, 0], np.linspace(0.0, 1.0, 11), atol=1e-9)
        np.testing.assert_allclose(curve.points[:, 1:], 0.0, atol=1e-12)


class TestCurvature:
    def test_circle_curvature(self):
        profile = curvature_profile(circle_curve(2.0, 4096))
        np.testing.assert_allclose(profile.kappa, 0.5, rtol=1e-6)

    def test_circle_curvature_second_order(self):
        errors = [np.max(np.abs(curvature_profile(circle_curve(1.0, n)).kappa - 1.0)) for n in (64, 128)]
        assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.01)

    def test_total_curvature_rigid_motion(self):
        curve = trefoil_curve(3000)
        rotation = Rotation.from_euler("zyx", [0.3, -1.1, 2.0]).as_matrix()
        moved = SpaceCurve(curve.points @ rotation.T + np.array([5.0, -2.0, 0.7]), closed=True)
        assert total_curvature(curvature_profile(moved)) == pytest.approx(
            total_curvature(curvature_profile(curve)), rel=1e-9)

    def test_circle_total_curvature(self):
        profile = curvature_profile(circle_curve(1.0, 8192))
        assert total_curvature(profile) == pytest.approx(2 * np.pi, abs=1e-5)
        assert state_count_estimate(profile) == pytest.approx(0.5, abs=1e-6)

    def test_state_count_independent_of_units(self):
        profile = curvature_profile(circle_curve(1.0, 8192))
        assert state_count_estimate(profile, PhysParams.physical()) == state_count_estimate(profile)

    def test_trefoil_matches_analytic_curvature(self, trefoil_profile):
        exact = quad(lambda t: trefoil_curvature(t) * trefoil_speed(t), 0.0, 2 * np.pi, limit=200)[0]
        length = quad(trefoil_speed, 0.0, 2 * np.pi, limit=200)[0]
        assert trefoil_profile.length == pytest.approx(length, rel=1e-5)
        assert total_curvature(trefoil_profile) == pytest.approx(exact, rel=1e-3)

    def test_trefoil_above_four_pi(self, trefoil_profile):
        assert total_curvature(trefoil_profile) >= 4 * np.pi - 1e-6
        assert state_count_estimate(trefoil_profile) >= 1.0

    def test_open_line_is_flat(self):
        s = np.linspace(0.0, 3.0, 30)
        profile = curvature_profile(SpaceCurve(np.stack([s, 2 * s, -s], axis=1)))
        np.testing.assert_allclose(profile.kappa, 0.0, atol=1e-9)
        assert not profile.closed


class TestProfile:
    def test_negative_curvature_rejected(self):
        with pytest.raises(CurveError):
            CurvatureProfile(np.arange(5.0), np.array([0.0, 1.0, -1.0, 0.0, 0.0]))

    def test_closed_needs_period(self):
        with pytest.raises(CurveError):
            CurvatureProfile(np.arange(5.0), np.ones(5), closed=True, period=2.0)

    def test_periodic_evaluation(self):
        profile = CurvatureProfile(np.array([0.0, 1.0, 2.0, 3.0]), np.array([0.0, 1.0, 2.0, 1.0]),
                                   closed=True, period=4.0)
        assert profile.evaluate(5.5) == pytest.approx(profile.evaluate(1.5))
        assert profile.evaluate(3.5) == pytest.approx(0.5)


class TestSegments:
    def test_arc_defaults_to_quarter_circle(self):
        arc = PiecewiseSegment.arc(2.0)
        assert arc.length == pytest.approx(np.pi)
        assert arc.kappa == 0.5

    def test_invalid_segments(self):
        with pytest.raises(CurveError):
            PiecewiseSegment("spiral", 1.0)
        with pytest.raises(CurveError):
            PiecewiseSegment.arc(-1.0)
        with pytest.raises(CurveError):
            compose_segments([])

    def test_nanobar_plateaus(self):
        radius, d = 2.0, 3.0
        profile = compose_segments(nanobar_segments(radius, d))
        lead, arc = 2 * radius, np.pi * radius / 2
        assert profile.evaluate(lead + arc / 2) == pytest.approx(1 / radius)
        assert profile.evaluate(lead + arc + d / 2) == 0.0
        assert profile.evaluate(lead + 1.5 * arc + d) == pytest.approx(1 / radius)
        assert profile.s[-1] == pytest.approx(2 * lead + 2 * arc + d)

    def test_nanobar_total_curvature(self):
        profile = compose_segments(nanobar_segments(1.5, 0.0))
        assert total_curvature(profile) == pytest.approx(np.pi, rel=1e-9)

    def test_lengths_add_up(self):
        segments = nanobar_segments(2.0, 3.0, lead=1.3)
        profile = compose_segments(segments)
        assert profile.s[-1] == sum(segment.length for segment in segments)
        plateau = profile.s[profile.kappa == 0.5]
        assert plateau[1] - plateau[0] == pytest.approx(np.pi, abs=1e-12)

    def test_negative_bar_rejected(self):
        with pytest.raises(CurveError):
            nanobar_segments(1.0, -1.0)
