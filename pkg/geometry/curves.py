import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.integrate import trapezoid

logger = logging.getLogger(__name__)

MIN_CURVE_POINTS = 8
MIN_PROFILE_POINTS = 5
DEGENERATE_LENGTH = 1e-12


class CurveError(ValueError):
    """Raised for curves that cannot be parameterized or differentiated"""


@dataclass(frozen=True)
class SpaceCurve:
    """ Ordered samples of a centerline in three dimensions

    Args:
        points (np.ndarray): (n, 3) coordinates
        closed (bool): Whether the last point connects back to the first
    """
    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 3:
            raise CurveError(f"Invalid curve shape: {points.shape}, expected (n, 3)")
        if len(points) < MIN_CURVE_POINTS:
            raise CurveError(
                f"Invalid curve: {len(points)} points, at least {MIN_CURVE_POINTS} required")
        if not np.all(np.isfinite(points)):
            raise CurveError("Invalid curve: non-finite coordinates")
        ends = np.vstack([points, points[:1]]) if self.closed else points
        if np.any(np.linalg.norm(np.diff(ends, axis=0), axis=1) == 0):
            raise CurveError("Invalid curve: consecutive points coincide"
                             + (" (closing chord included)" if self.closed else ""))
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.points)

    def chords(self):
        """ Chord lengths between consecutive points, closing chord included if closed """
        pts = np.vstack([self.points, self.points[:1]]) if self.closed else self.points
        return np.linalg.norm(np.diff(pts, axis=0), axis=1)

    def length(self):
        """ Total chord length (period if closed) """
        return float(np.sum(self.chords()))


@dataclass(frozen=True)
class CurvatureProfile:
    """ Curvature sampled along the arclength

    Args:
        s (np.ndarray): Strictly increasing arclength samples
        kappa (np.ndarray): Curvature at each sample (>= 0)
        closed (bool): Whether the profile is periodic
        period (float): Total length of a closed profile (s wraps at s[0] + period)
    """
    s: np.ndarray
    kappa: np.ndarray
    closed: bool = False
    period: float = field(default=None)

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        kappa = np.asarray(self.kappa, dtype=float)
        if s.shape != kappa.shape or s.ndim != 1:
            raise CurveError(f"Invalid profile: s {s.shape} and kappa {kappa.shape} differ")
        if len(s) < 2:
            raise CurveError("Invalid profile: at least two samples required")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(kappa))):
            raise CurveError("Invalid profile: non-finite samples")
        if np.any(np.diff(s) <= 0):
            raise CurveError("Invalid profile: s must be strictly increasing")
        if np.any(kappa < 0):
            raise CurveError("Invalid profile: negative curvature")
        if self.closed:
            period = self.period
            if period is None or not period > s[-1] - s[0]:
                raise CurveError(f"Invalid period for closed profile: {period}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "kappa", kappa)

    @property
    def length(self):
        if self.closed:
            return float(self.period)
        return float(self.s[-1] - self.s[0])

    def evaluate(self, s):
        """ Linear interpolation of kappa, periodic if closed """
        s = np.asarray(s, dtype=float)
        if self.closed:
            s_ext = np.append(self.s, self.s[0] + self.period)
            k_ext = np.append(self.kappa, self.kappa[0])
            return np.interp(self.s[0] + np.mod(s - self.s[0], self.period), s_ext, k_ext)
        return np.interp(s, self.s, self.kappa)


def _spline(curve):
    """ Cubic spline through the curve, parameterized by cumulative chord length """
    chords = curve.chords()
    u = np.concatenate([[0.0], np.cumsum(chords)])
    if curve.closed:
        pts = np.vstack([curve.points, curve.points[:1]])
        return CubicSpline(u, pts, axis=0, bc_type="periodic"), u[-1]
    return CubicSpline(u, curve.points, axis=0), u[-1]


def reparametrize_arclength(curve, n, tol=1e-10, max_iter=100):
    """ Resample a curve with equal chord spacing

    The curve is interpolated by a cubic spline in its chord-length parameter and the new
    samples are moved along the spline until all consecutive chords are equal.

    Args:
        curve (SpaceCurve): Curve to resample
        n (int): Number of output points
        tol (float): Relative tolerance on the chord spread
        max_iter (int): Maximum number of fixed-point sweeps

    Returns:
        SpaceCurve: Equally spaced curve with the same endpoints (or period)
    """
    if n < MIN_CURVE_POINTS:
        raise ValueError(f"Invalid sample count: {n}")
    if curve.length() < DEGENERATE_LENGTH:
        raise CurveError(f"Degenerate curve of length {curve.length():.3e}")

    spline, total = _spline(curve)
    n_chords = n if curve.closed else n - 1
    u = np.linspace(0.0, total, n_chords + 1)

    ### FIXED POINT ON THE CHORD LENGTHS ###
    for _ in range(max_iter):
        points = spline(u)
        chords = np.linalg.norm(np.diff(points, axis=0), axis=1)
        spread = np.max(np.abs(chords / chords.mean() - 1.0))
        if spread < tol:
            break
        cumulative = np.concatenate([[0.0], np.cumsum(chords)])
        target = np.linspace(0.0, cumulative[-1], n_chords + 1)
        u = np.interp(target, cumulative, u)
        u[0], u[-1] = 0.0, total
    else:
        logger.warning("Chord equalization stopped at spread %.3e", spread)

    points = spline(u[:-1]) if curve.closed else spline(u)
    if not curve.closed:
        points[0], points[-1] = curve.points[0], curve.points[-1]
    return SpaceCurve(points, closed=curve.closed)


def curvature_profile(curve):
    """ Curvature of a sampled curve from central differences of the unit tangent

    Open curves use second-order one-sided stencils at the ends; closed curves wrap.

    Args:
        curve (SpaceCurve): Arclength-parameterized curve

    Returns:
        CurvatureProfile: kappa(s) with s the cumulative chord length
    """
    points = curve.points
    if len(points) < MIN_PROFILE_POINTS:
        raise CurveError(f"Invalid curve: {len(points)} points, at least {MIN_PROFILE_POINTS}")
    chords = curve.chords()
    if curve.closed:
        ### PERIODIC STENCIL ###
        period = float(np.sum(chords))
        s = np.concatenate([[0.0], np.cumsum(chords[:-1])])
        padded = np.vstack([points[-2:], points, points[:2]])
        s_padded = np.concatenate([s[-2:] - period, s, s[:2] + period])
        tangent = np.gradient(padded, s_padded, axis=0)
        tangent /= np.linalg.norm(tangent, axis=1, keepdims=True)
        kappa = np.linalg.norm(np.gradient(tangent, s_padded, axis=0), axis=1)[2:-2]
        return CurvatureProfile(s, kappa, closed=True, period=period)

    s = np.concatenate([[0.0], np.cumsum(chords)])
    tangent = np.gradient(points, s, axis=0, edge_order=2)
    tangent /= np.linalg.norm(tangent, axis=1, keepdims=True)
    kappa = np.linalg.norm(np.gradient(tangent, s, axis=0, edge_order=2), axis=1)
    return CurvatureProfile(s, kappa)


def total_curvature(profile):
    """ Trapezoidal integral of kappa over the arclength, closing interval included """
    total = trapezoid(profile.kappa, profile.s)
    if profile.closed:
        gap = profile.period - (profile.s[-1] - profile.s[0])
        total += 0.5 * (profile.kappa[-1] + profile.kappa[0]) * gap
    return float(total)


def state_count_estimate(profile, params=None):
    """ Semiclassical number of bound states (1/4pi) * integral of kappa ds

    Under V = -(hbar^2/2m) kappa^2/4 the phase-space integral of sqrt(-2mV)/(2 pi hbar)
    reduces to this expression for any choice of constants, so params only documents intent.
    """
    return total_curvature(profile) / (4.0 * np.pi)


def circle_curve(radius, n, closed=True, phase=0.0):
    """ Circle of given radius in the xy-plane sampled at n equal angles """
    t = phase + np.linspace(0.0, 2.0 * np.pi, n, endpoint=not closed)
    points = np.stack([radius * np.cos(t), radius * np.sin(t), np.zeros_like(t)], axis=1)
    return SpaceCurve(points, closed=closed)


def trefoil_point(t):
    """ Torus trefoil ((2 + cos 3t) cos 2t, (2 + cos 3t) sin 2t, sin 3t) """
    t = np.asarray(t, dtype=float)
    r = 2.0 + np.cos(3.0 * t)
    return np.stack([r * np.cos(2.0 * t), r * np.sin(2.0 * t), np.sin(3.0 * t)], axis=-1)


def trefoil_curvature(t):
    """ Analytic curvature |r' x r''| / |r'|^3 of the torus trefoil """
    t = np.asarray(t, dtype=float)
    c2, s2, c3, s3 = np.cos(2 * t), np.sin(2 * t), np.cos(3 * t), np.sin(3 * t)
    r = 2.0 + c3
    dr, ddr = -3.0 * s3, -9.0 * c3
    d1 = np.stack([dr * c2 - 2 * r * s2, dr * s2 + 2 * r * c2, 3.0 * c3], axis=-1)
    d2 = np.stack([ddr * c2 - 4 * dr * s2 - 4 * r * c2,
                   ddr * s2 + 4 * dr * c2 - 4 * r * s2,
                   -9.0 * s3], axis=-1)
    speed = np.linalg.norm(d1, axis=-1)
    return np.linalg.norm(np.cross(d1, d2), axis=-1) / speed ** 3


def trefoil_speed(t):
    """ |r'(t)| of the torus trefoil """
    t = np.asarray(t, dtype=float)
    r = 2.0 + np.cos(3.0 * t)
    return np.sqrt(9.0 * np.sin(3.0 * t) ** 2 + 4.0 * r ** 2 + 9.0 * np.cos(3.0 * t) ** 2)


def trefoil_curve(n):
    """ Closed torus trefoil sampled at n equal parameter steps (uneven in arclength) """
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return SpaceCurve(trefoil_point(t), closed=True)
