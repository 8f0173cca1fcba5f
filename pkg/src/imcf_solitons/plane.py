"""Closed-form homothetic soliton curves, cycloid translators and the tilted
cycloid product surfaces, with residual checks against the soliton equations.

Conventions: a plane curve has tangent T = (cos theta, sin theta) and normal
N = T rotated by +pi/2.  A homothetic soliton with constant c satisfies
kappa * (X . N) = -1/c; a translator with velocity V satisfies
kappa * (V . N) = -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .core import PlaneCurve, second_differences
from .errors import CuspPoint, InvalidSpec, SupportVanishes, ZeroCurvature


@dataclass(frozen=True)
class HomotheticCurveParams:
    c: float
    mu1: float
    mu2: float

    def __post_init__(self):
        if self.c == 0 or not math.isfinite(self.c):
            raise InvalidSpec("c must be finite and nonzero")
        if self.mu1 == 0 and self.mu2 == 0:
            raise InvalidSpec("(mu1, mu2) = (0, 0) describes only the origin")

    @property
    def alpha(self) -> float:
        return math.sqrt(abs(1.0 - self.c))


@dataclass(frozen=True)
class CurvatureLawParams:
    c: float
    alpha1: float
    alpha2: float


@dataclass(frozen=True)
class CurvatureLawReport:
    max_poisson_residual: float
    fitted: CurvatureLawParams
    leading: float
    fit_residual: float


def support_function(p: HomotheticCurveParams, theta):
    """nu(theta) = X . N and its theta-derivative; nu'' + (1 - c) nu = 0."""
    th = np.asarray(theta, dtype=float)
    a = p.alpha
    if p.c < 1:
        ca, sa = np.cos(a * th), np.sin(a * th)
        nu = p.mu1 * ca + p.mu2 * sa
        dnu = -a * (p.mu1 * sa - p.mu2 * ca)
    elif p.c == 1:
        nu = p.mu1 + p.mu2 * th
        dnu = np.full_like(th, p.mu2)
    else:
        ch, sh = np.cosh(a * th), np.sinh(a * th)
        nu = p.mu1 * ch + p.mu2 * sh
        dnu = a * (p.mu1 * sh + p.mu2 * ch)
    if np.ndim(nu) == 0:
        return float(nu), float(dnu)
    return nu, dnu


def homothetic_curve_point(p: HomotheticCurveParams, theta):
    """Point of the soliton curve with tangential angle ``theta`` (explicit patch)."""
    th = np.asarray(theta, dtype=float)
    a = p.alpha
    cos, sin = np.cos(th), np.sin(th)
    if p.c < 1:
        ca, sa = np.cos(a * th), np.sin(a * th)
        u = a * (p.mu1 * sa - p.mu2 * ca)
        v = p.mu1 * ca + p.mu2 * sa
        x = u * cos - v * sin
        y = u * sin + v * cos
    elif p.c == 1:
        v = p.mu1 + p.mu2 * th
        x = -p.mu2 * cos - v * sin
        y = -p.mu2 * sin + v * cos
    else:
        ch, sh = np.cosh(a * th), np.sinh(a * th)
        u = a * (p.mu1 * sh + p.mu2 * ch)
        v = p.mu1 * ch + p.mu2 * sh
        x = -u * cos - v * sin
        y = -u * sin + v * cos
    return np.stack([x, y], axis=-1)


def point_from_support(p: HomotheticCurveParams, theta):
    """Same point assembled as X = -nu' T + nu N."""
    th = np.asarray(theta, dtype=float)
    nu, dnu = support_function(p, th)
    cos, sin = np.cos(th), np.sin(th)
    return np.stack([-dnu * cos - nu * sin, -dnu * sin + nu * cos], axis=-1)


def _is_full_circle(p: HomotheticCurveParams, lo: float, hi: float) -> bool:
    return p.c == 1 and p.mu2 == 0 and abs((hi - lo) - 2 * math.pi) < 1e-12


def _check_support(p: HomotheticCurveParams, lo: float, hi: float, n_scan: int) -> None:
    grid = np.linspace(lo, hi, n_scan)
    nu, _ = support_function(p, grid)
    zero = np.flatnonzero(nu == 0)
    if zero.size:
        raise SupportVanishes(grid[zero[0]])
    flips = np.flatnonzero(np.sign(nu[1:]) != np.sign(nu[:-1]))
    if flips.size:
        i = flips[0]
        root = optimize.brentq(lambda t: support_function(p, t)[0], grid[i], grid[i + 1])
        raise SupportVanishes(root)


def sample_homothetic_curve(p: HomotheticCurveParams, theta_range, n_samples: int,
                            closed=None, rtol: float = 1e-10) -> PlaneCurve:
    """Sample the soliton curve at equally spaced tangential angles.

    Arc length comes from adaptive quadrature of |ds/dtheta| = |c nu|.  When
    ds/dtheta = -c nu is negative the samples are stored in order of
    decreasing theta, so that s increases along the tangent direction and
    kappa = d(theta)/ds = -1/(c nu).  A full turn of a circle (c = 1, mu2 = 0)
    is sampled as a closed curve without repeating its first point.
    """
    lo, hi = float(theta_range[0]), float(theta_range[1])
    if not hi > lo:
        raise ValueError("theta_range must be increasing")
    if n_samples < 2:
        raise ValueError("need at least two samples")
    _check_support(p, lo, hi, 10 * n_samples)
    if closed is None:
        closed = _is_full_circle(p, lo, hi)
    theta = np.linspace(lo, hi, n_samples, endpoint=not closed)

    speed = lambda t: abs(p.c * support_function(p, t)[0])
    pieces = [integrate.quad(speed, a, b, epsabs=0.0, epsrel=rtol, limit=200)[0]
              for a, b in zip(theta[:-1], theta[1:])]
    s = np.concatenate(([0.0], np.cumsum(pieces)))

    nu, _ = support_function(p, theta)
    pts = homothetic_curve_point(p, theta)
    if -p.c * nu[0] < 0:
        theta, nu, pts = theta[::-1], nu[::-1], pts[::-1]
        s = s[-1] - s[::-1]
    tangent = np.column_stack([np.cos(theta), np.sin(theta)])
    normal = np.column_stack([-tangent[:, 1], tangent[:, 0]])
    kappa = -1.0 / (p.c * nu)
    return PlaneCurve(s, theta, pts, tangent, normal, kappa, bool(closed))


def _require_nonzero_curvature(curve: PlaneCurve) -> None:
    zero = np.flatnonzero(curve.kappa == 0)
    if zero.size:
        raise ZeroCurvature(zero[0])


def curvature_law_check(curve: PlaneCurve, c: float) -> CurvatureLawReport:
    """Test 1/kappa^2 against the arc-length law (1/kappa^2)'' = 2(c - 1).

    Reports the worst interior finite-difference residual and a free
    least-squares quadratic fit a s^2 + alpha1 s + alpha2 of 1/kappa^2.
    """
    if len(curve) < 5:
        raise ValueError("curvature law check needs at least five samples")
    _require_nonzero_curvature(curve)
    u = 1.0 / curve.kappa**2
    s = curve.s
    poisson = np.max(np.abs(second_differences(s, u) - 2.0 * (c - 1.0)))
    # centre and scale s so the normal equations stay well conditioned
    s0, sc = s.mean(), max(np.ptp(s), 1e-300)
    z = (s - s0) / sc
    A = np.column_stack([z**2, z, np.ones_like(z)])
    coef, *_ = np.linalg.lstsq(A, u, rcond=None)
    a = coef[0] / sc**2
    b = coef[1] / sc - 2 * a * s0
    k = coef[2] - coef[1] * s0 / sc + a * s0**2
    fit_res = float(np.max(np.abs(A @ coef - u)))
    return CurvatureLawReport(float(poisson), CurvatureLawParams(c, float(b), float(k)),
                              float(a), fit_res)


def homothetic_residual(curve: PlaneCurve, c: float) -> float:
    """max |kappa (X . N) + 1/c| over the samples."""
    _require_nonzero_curvature(curve)
    support = np.einsum("ij,ij->i", curve.points, curve.normal)
    return float(np.max(np.abs(curve.kappa * support + 1.0 / c)))


# ---------------------------------------------------------------------------
# translators


@dataclass(frozen=True)
class CycloidPoint:
    point: np.ndarray
    theta: float
    kappa: float


CYCLOID_RADIUS = 0.25


def cycloid_translator(t: float, with_curvature: bool = True) -> CycloidPoint:
    """Unit-speed translator (velocity (0, 1)): the cycloid (t - sin t, 1 - cos t)/4."""
    a = CYCLOID_RADIUS
    point = np.array([a * (t - math.sin(t)), a * (1.0 - math.cos(t))])
    half = math.sin(0.5 * t)
    if half == 0.0 or math.isclose(t / (2 * math.pi), round(t / (2 * math.pi)), abs_tol=1e-15):
        if with_curvature:
            raise CuspPoint(t)
        return CycloidPoint(point, math.nan, math.nan)
    theta = math.atan2(math.sin(t), 1.0 - math.cos(t))
    kappa = -1.0 / abs(half) if with_curvature else math.nan
    return CycloidPoint(point, theta, kappa)


def sample_cycloid(t_range, n_samples: int) -> PlaneCurve:
    """Cycloid arch samples for t inside (0, 2 pi), with exact arc length 1 - cos(t/2)."""
    lo, hi = float(t_range[0]), float(t_range[1])
    if not 0 < lo < hi < 2 * math.pi:
        raise CuspPoint(lo if lo <= 0 else hi)
    t = np.linspace(lo, hi, n_samples)
    a = CYCLOID_RADIUS
    pts = np.column_stack([a * (t - np.sin(t)), a * (1 - np.cos(t))])
    theta = 0.5 * math.pi - 0.5 * t
    tangent = np.column_stack([np.cos(theta), np.sin(theta)])
    normal = np.column_stack([-tangent[:, 1], tangent[:, 0]])
    s = 1.0 - np.cos(0.5 * t)
    s = s - s[0]
    kappa = -1.0 / np.sin(0.5 * t)
    return PlaneCurve(s, theta, pts, tangent, normal, kappa, False)


def translator_residual(curve: PlaneCurve, V) -> float:
    """max |kappa (V . N) + 1| over the samples."""
    _require_nonzero_curvature(curve)
    v = np.asarray(V, dtype=float)
    return float(np.max(np.abs(curve.kappa * (curve.normal @ v) + 1.0)))


def integrate_translator_curve(point0, theta0: float, s_back: float, s_fwd: float,
                               n_samples: int = 2001) -> PlaneCurve:
    """Solve X' = (cos th, sin th), th' = -1/cos th from generic data.

    Independent of the closed-form cycloid; ``theta0`` must lie in
    (-pi/2, pi/2) and the s-interval must stay away from the cusps at
    s = -(1 - sin theta0) and s = 1 + sin theta0.
    """
    def rhs(_, y):
        return [math.cos(y[2]), math.sin(y[2]), -1.0 / math.cos(y[2])]

    y0 = [float(point0[0]), float(point0[1]), float(theta0)]
    s_eval = np.linspace(-s_back, s_fwd, n_samples)
    i0 = int(np.searchsorted(s_eval, 0.0))
    parts = []
    if i0 > 0:
        back = integrate.solve_ivp(rhs, (0.0, -s_back), y0, method="DOP853",
                                   t_eval=s_eval[:i0][::-1], rtol=1e-13, atol=1e-14)
        parts.append(back.y[:, ::-1])
    fwd = integrate.solve_ivp(rhs, (0.0, s_fwd), y0, method="DOP853",
                              t_eval=s_eval[i0:], rtol=1e-13, atol=1e-14)
    parts.append(fwd.y)
    y = np.concatenate(parts, axis=1)
    theta = y[2]
    tangent = np.column_stack([np.cos(theta), np.sin(theta)])
    normal = np.column_stack([-tangent[:, 1], tangent[:, 0]])
    kappa = -1.0 / np.cos(theta)
    return PlaneCurve(s_eval, theta, y[:2].T.copy(), tangent, normal, kappa, False)


def canonical_cycloid_offset(curve: PlaneCurve) -> np.ndarray:
    """Translation carrying the curve's theta = 0 point onto the cycloid arch top."""
    th = curve.theta
    i = int(np.flatnonzero(np.sign(th[1:]) != np.sign(th[:-1]))[0])
    w = th[i] / (th[i] - th[i + 1])
    top = (1 - w) * curve.points[i] + w * curve.points[i + 1]
    # refine with a local cubic through the neighbouring samples
    lo, hi = max(i - 2, 0), min(i + 4, len(th))
    fx = np.polyfit(th[lo:hi], curve.points[lo:hi, 0], 3)
    fy = np.polyfit(th[lo:hi], curve.points[lo:hi, 1], 3)
    top = np.array([np.polyval(fx, 0.0), np.polyval(fy, 0.0)]) if hi - lo >= 4 else top
    return np.array([math.pi * CYCLOID_RADIUS, 2 * CYCLOID_RADIUS]) - top



def fit_cycloid_radius(curve: PlaneCurve) -> tuple:
    """Least-squares generating radius of a translator patch.

    With t = pi - 2 theta every point of a translating cycloid satisfies
    X = a (t - sin t, 1 - cos t) + X0, which is linear in (a, X0).  Returns
    (a, X0, max residual).
    """
    t = math.pi - 2.0 * np.asarray(curve.theta, dtype=float)
    m = len(t)
    A = np.zeros((2 * m, 3))
    A[:m, 0] = t - np.sin(t)
    A[m:, 0] = 1.0 - np.cos(t)
    A[:m, 1] = 1.0
    A[m:, 2] = 1.0
    b = np.concatenate([curve.points[:, 0], curve.points[:, 1]])
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(coef[0]), coef[1:].copy(), float(np.max(np.abs(A @ coef - b)))


# ---------------------------------------------------------------------------
# tilted cycloid products in R^3


def _cycloid_unit_speed(s):
    """(alpha, beta) of the translating cycloid by arc length s in (0, 2) from a cusp."""
    s = np.asarray(s, dtype=float)
    t = 2.0 * np.arccos(1.0 - s)
    a = CYCLOID_RADIUS
    return a * (t - np.sin(t)), a * (1.0 - np.cos(t))


def tilted_cycloid_surface_point(mu: float, s, w):
    """Point of the tilted product  w v1 + cos(mu) (alpha(s) v2 + beta(s) v3).

    v1 = (cos mu, 0, -sin mu), v2 = (0, 1, 0), v3 = (sin mu, 0, cos mu) and
    (alpha, beta) is the unit-speed cycloid translator, so beta'' = -1.  The
    profile is scaled by cos(mu): with that factor the height function has
    Laplace-Beltrami exactly -1 and the surface translates with velocity
    (0, 0, 1).  Accepts broadcastable arrays for ``s`` and ``w``.
    """
    if not -0.5 * math.pi < mu < 0.5 * math.pi:
        raise ValueError("tilt angle must lie in (-pi/2, pi/2)")
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.any((s <= 0) | (s >= 2)):
        bad = s[(s <= 0) | (s >= 2)].flat[0]
        raise CuspPoint(bad)
    s, w = np.broadcast_arrays(s, w)
    al, be = _cycloid_unit_speed(s)
    cm, sm = math.cos(mu), math.sin(mu)
    v1 = np.array([cm, 0.0, -sm])
    v2 = np.array([0.0, 1.0, 0.0])
    v3 = np.array([sm, 0.0, cm])
    return (w[..., None] * v1 + cm * (al[..., None] * v2 + be[..., None] * v3))


def tilted_cycloid_height_laplacian(mu: float, resolution: int = 64,
                                    s_range=(0.2, 1.8), w_range=(-1.0, 1.0)) -> np.ndarray:
    """Discrete Laplace-Beltrami of x3 on a resolution x resolution interior grid.

    The chart (s, w) is flat, so Delta f = g^{ij} f_ij.  The metric comes from
    fourth-order central differences of the embedding; f_ij from second
    differences of the sampled heights.
    """
    m = resolution
    ds = (s_range[1] - s_range[0]) / (m + 1)
    dw = (w_range[1] - w_range[0]) / (m + 1)
    s = s_range[0] + ds * np.arange(1, m + 1)
    w = w_range[0] + dw * np.arange(1, m + 1)
    S, W = np.meshgrid(s, w, indexing="ij")
    X = lambda a, b: tilted_cycloid_surface_point(mu, S + a * ds, W + b * dw)

    def d1(axis):
        sh = (1, 0) if axis == 0 else (0, 1)
        step = ds if axis == 0 else dw
        p1, m1 = X(*sh), X(-sh[0], -sh[1])
        p2, m2 = X(2 * sh[0], 2 * sh[1]), X(-2 * sh[0], -2 * sh[1])
        return (8 * (p1 - m1) - (p2 - m2)) / (12 * step)

    Xs, Xw = d1(0), d1(1)
    E = np.einsum("...k,...k", Xs, Xs)
    F = np.einsum("...k,...k", Xs, Xw)
    G = np.einsum("...k,...k", Xw, Xw)
    det = E * G - F * F

    x3 = lambda a, b: X(a, b)[..., 2]
    f0 = x3(0, 0)
    fss = (x3(1, 0) - 2 * f0 + x3(-1, 0)) / ds**2
    fww = (x3(0, 1) - 2 * f0 + x3(0, -1)) / dw**2
    fsw = (x3(1, 1) - x3(1, -1) - x3(-1, 1) + x3(-1, -1)) / (4 * ds * dw)
    return (G * fss - 2 * F * fsw + E * fww) / det
