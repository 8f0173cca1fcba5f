"""Shooting, bottle construction, regime classification and residual checks
for rotational homothetic expanders of the inverse mean curvature flow.

A profile (r, h) generates a rotational hypersurface in R^{n+1}; it is an
expander with constant C when -H <X, N> = 1/C along it.  The cylinder
constant C = 1/(n-1) separates the qualitative regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (CHART_BY_ID, ChartInterval, EventTag, ProfileTrajectory, Regime,
                   RegimeKind, SolitonSpec)
from .errors import (BottleHypothesisViolated, InvariantViolation, OutsideStatedRegime,
                     SpanTooSmall, SupportDegenerate)
from .profile import (AXIS_RADIUS, AxisShot, Direction, GraphOverH, ProfileIVP, Span, SymmetricCylinder,
                      Tolerances, estimate_asymptote, integrate_profile)

# |h r'/r| at the end of the run below this is "not yet decided"
TAIL_SLOPE_MIN = 1e-2
# r' values below this are integrator noise in a settled tail
SLOPE_NOISE = 1e-11


def _critical(n: int, C: float) -> bool:
    return abs(C * (n - 1) - 1.0) <= 1e-12


# ---------------------------------------------------------------------------
# shooting from the axis


def shoot_from_axis(n: int, C: float, h0: float, span: Span = Span(),
                    tolerances: Tolerances = Tolerances(), exploratory: bool = False,
                    r_eps: float = AXIS_RADIUS) -> ProfileTrajectory:
    """Profile leaving the axis perpendicularly at height h0 < 0.

    Seeded at r = ``r_eps`` (default 1e-6) from the Taylor expansion with h''(0) = -1/(n C h0)
    and integrated in the h(r) chart, switching charts as the curve turns.
    The behaviour is only described for C > 1/n; smaller constants raise
    :class:`OutsideStatedRegime` unless ``exploratory`` is set.
    """
    if not C > 1.0 / n and not exploratory:
        raise OutsideStatedRegime(f"axis shots are described for C > 1/n = {1.0 / n!r}; got C={C!r}")
    ivp = ProfileIVP(SolitonSpec.rotational(n, C), AxisShot(float(h0), float(r_eps)), span, tolerances)
    return integrate_profile(ivp)


def axis_second_derivative(traj: ProfileTrajectory, samples: int = 10) -> float:
    """h''(0) extrapolated from the first ``samples`` steps of an axis shot.

    Fits h(r) = a + b r^2 + c r^4 by least squares to the integrated heights
    after the seed and returns 2b.
    """
    r = traj.r[1:samples + 1]
    h = traj.h[1:samples + 1]
    if len(r) < 3:
        raise ValueError("trajectory too short for the axis fit")
    sc = r.max()
    z = (r / sc) ** 2
    A = np.column_stack([np.ones_like(z), z, z * z])
    coef, *_ = np.linalg.lstsq(A, h - h[0], rcond=None)
    return float(2.0 * coef[1] / sc**2)


# ---------------------------------------------------------------------------
# infinite bottles


@dataclass(frozen=True)
class BottleSolution:
    trajectory: ProfileTrajectory
    h1: float
    r_bot: Optional[float]
    r_top: Optional[float]
    complete: bool = True

    @property
    def regime(self) -> Regime:
        return Regime(RegimeKind.BOTTLE_BETWEEN_CYLINDERS, self.r_bot, self.r_top, self.h1)


def _concat(back: ProfileTrajectory, fwd: ProfileTrajectory) -> ProfileTrajectory:
    """Join a decreasing-h run (reversed) and an increasing-h run from the same start."""
    def cat(a, b):
        return np.concatenate([a[::-1], b[1:]])

    chart = cat(back.chart, fwd.chart)
    log = []
    start = 0
    for i in range(1, len(chart) + 1):
        if i == len(chart) or chart[i] != chart[start]:
            log.append(ChartInterval(CHART_BY_ID[chart[start]], start, i))
            start = i
    return ProfileTrajectory(fwd.spec, cat(back.h, fwd.h), cat(back.r, fwd.r),
                             cat(back.dr_dh, fwd.dr_dh), cat(back.d2r_dh2, fwd.d2r_dh2), chart,
                             cat(back.velocity, fwd.velocity), cat(back.acceleration, fwd.acceleration),
                             tuple(back.events) + tuple(fwd.events), tuple(log))


def critical_rpp_sign(n: int, h, r, rp):
    """Sign of r'' at C = 1/(n-1) from the factored form r'' ∝ r'(-h - r r').

    Free of the cancellation the unfactored right-hand side suffers once r'
    is tiny.
    """
    h, r, rp = (np.asarray(a, dtype=float) for a in (h, r, rp))
    return np.sign(rp) * np.sign(-h - r * rp)


def build_infinite_bottle(n: int, r0: float, h0: float, r0p: float, span: Span = Span(),
                          tolerances: Tolerances = Tolerances()) -> BottleSolution:
    """Entire C = 1/(n-1) profile through (h0, r0) with slope r0p.

    Integrates in both directions, finds the inflection h1 and the limiting
    radii below and above.  Raises :class:`BottleHypothesisViolated` unless
    r0 > 0, h0 < 0 and 0 < r0p < -h0/r0, and :class:`InvariantViolation` if
    the computed profile contradicts the predicted structure (strictly
    increasing, a single inflection in (h0, 0), r'' of the sign of h1 - h).
    """
    if not (r0 > 0 and h0 < 0):
        raise BottleHypothesisViolated("bottle data needs r0 > 0 and h0 < 0")
    if not 0 < r0p < -h0 / r0:
        raise BottleHypothesisViolated(
            f"bottle slope must lie in (0, -h0/r0) = (0, {-h0 / r0!r}); got {r0p!r}"
            + (" (a zero slope gives the constant cylinder)" if r0p == 0 else ""))
    spec = SolitonSpec.rotational(n, 1.0 / (n - 1))
    ivp = ProfileIVP(spec, GraphOverH(float(h0), float(r0), float(r0p)), span, tolerances)
    back = integrate_profile(ivp, Direction.DECREASING_H)
    fwd = integrate_profile(ivp, Direction.INCREASING_H)
    traj = _concat(back, fwd)

    inflections = traj.events_tagged(EventTag.INFLECTION)
    if len(inflections) != 1:
        raise InvariantViolation(f"expected exactly one inflection, found {len(inflections)}")
    h1 = inflections[0].h
    if not h0 < h1 < 0:
        raise InvariantViolation(f"inflection at h={h1!r} lies outside (h0, 0)")
    if np.any(traj.chart != 0):
        raise InvariantViolation("bottle profile left the r(h) chart")
    rp = traj.dr_dh
    slack = SLOPE_NOISE * np.diff(traj.h) + 4 * np.finfo(float).eps * traj.r[1:]
    if np.any(rp < -SLOPE_NOISE) or np.any(np.diff(traj.r) < -slack):
        raise InvariantViolation("bottle profile is not increasing")
    sig = critical_rpp_sign(n, traj.h, traj.r, rp)
    settled = rp > SLOPE_NOISE
    if np.any(settled & (sig * np.sign(h1 - traj.h) < 0)):
        raise InvariantViolation("concavity does not follow sign(h1 - h)")
    outside_barrier_monitor(traj, h_from=h1)

    ends = []
    complete = True
    for part in (back, fwd):
        hits = part.events_tagged(EventTag.ASYMPTOTE_DETECTED)
        if hits:
            ends.append(hits[-1].data)
        else:
            ends.append(None)
            complete = False
    r_bot, r_top = ends
    if complete and not 0 < r_bot < r_top:
        raise InvariantViolation(f"asymptotes out of order: r_bot={r_bot!r}, r_top={r_top!r}")
    return BottleSolution(traj, float(h1), r_bot, r_top, complete)


def outside_barrier_monitor(traj: ProfileTrajectory, h_from: float = -math.inf,
                            rtol: float = 1e-8) -> float:
    """Check that h'(r)/r^(n-1) does not decrease where h' > 0, h'' > 0.

    That is the monotone quantity behind the finite outer radius of
    C = 1/(n-1) profiles; the comparison behind it needs h >= 0.  Samples with
    h >= max(``h_from``, 0) and r' above the noise floor are used; returns the largest relative decrease and raises
    :class:`InvariantViolation` if it exceeds ``rtol``.
    """
    n = traj.spec.n
    rp = traj.dr_dh
    use = (traj.h >= max(h_from, 0.0)) & (rp > SLOPE_NOISE) & (traj.d2r_dh2 < 0) & np.isfinite(rp)
    if use.sum() < 2:
        return 0.0
    # log of h'/r^(n-1) = -log r' - (n-1) log r, in increasing-r order
    q = -np.log(rp[use]) - (n - 1) * np.log(traj.r[use])
    order = np.argsort(traj.r[use], kind="stable")
    drops = -np.diff(q[order])
    worst = float(max(drops.max(), 0.0))
    if worst > rtol:
        raise InvariantViolation(f"barrier quantity decreased by {worst:.3g} (relative)")
    return worst


# ---------------------------------------------------------------------------
# classification


def _tail_slope(traj: ProfileTrajectory) -> float:
    h, r, rp = traj.h[-1], traj.r[-1], traj.dr_dh[-1]
    return float(h * rp / r)


def _sign_pattern_ok(h, rpp, h1, expect_sign_of, exclude: float) -> bool:
    """rpp has the sign of expect_sign_of(h - h1) away from h1."""
    away = np.abs(h - h1) > exclude
    good = np.sign(rpp[away]) * expect_sign_of(h[away] - h1)
    return bool(np.all(good >= 0))


def _single_inflection(traj: ProfileTrajectory) -> float:
    hits = traj.events_tagged(EventTag.INFLECTION)
    if not hits:
        # the run ended on its span before the predicted inflection
        raise SpanTooSmall("no inflection reached within span", traj)
    if len(hits) != 1:
        raise InvariantViolation(f"expected one inflection, found {len(hits)}")
    return float(hits[0].h)


def _require_pattern(ok: bool, what: str):
    if not ok:
        raise InvariantViolation(what)


def _exclusion(traj: ProfileTrajectory, h1: float) -> float:
    # the sample spacing around h1 bounds how well a sign can be attributed
    i = int(np.searchsorted(np.sort(traj.h), h1))
    hs = np.sort(traj.h)
    lo, hi = max(i - 1, 0), min(i + 1, len(hs) - 1)
    return float(hs[hi] - hs[lo])


def classify_hyperplane_expander(n: int, C: float, h0: float, span: Span = Span(),
                                 tolerances: Tolerances = Tolerances()) -> Regime:
    """Regime of the axis shot from height h0.

    The constant C selects the candidate (cylinder limit, unbounded radius,
    or closing to the axis) and the computed profile must show that
    candidate's signature.  Undecided tails raise :class:`SpanTooSmall` with
    the partial trajectory attached.
    """
    if not C > 1.0 / n:
        raise OutsideStatedRegime(f"classification needs C > 1/n = {1.0 / n!r}; got C={C!r}")
    traj = shoot_from_axis(n, C, h0, span, tolerances)
    return _classify_plane(traj, n, C)


def _classify_plane(traj: ProfileTrajectory, n: int, C: float) -> Regime:
    rp, rpp = traj.dr_dh, traj.d2r_dh2
    if traj.events_tagged(EventTag.AXIS_APPROACH) or traj.events_tagged(EventTag.DERIVATIVE_BLOW_UP):
        raise InvariantViolation("axis shot terminated before the span was exhausted")
    crit = C * (n - 1) - 1.0
    if abs(crit) <= 1e-12 or crit > 0:
        if traj.events_tagged(EventTag.INFLECTION):
            raise InvariantViolation("axis shot with C >= 1/(n-1) has an inflection")
        live = rp > SLOPE_NOISE
        _require_pattern(bool(np.all(rp > -SLOPE_NOISE)), "r' changes sign")
        _require_pattern(bool(np.all(rpp[live] <= 0)), "r'' is not negative")
        if abs(crit) <= 1e-12:
            top = estimate_asymptote(traj)
            if top is None:
                raise SpanTooSmall("no cylinder asymptote detected within span", traj)
            return Regime(RegimeKind.CONVERGES_TO_CYLINDER, r_top=top)
        if estimate_asymptote(traj) is not None or _tail_slope(traj) < TAIL_SLOPE_MIN:
            raise SpanTooSmall("radius growth not established within span", traj)
        return Regime(RegimeKind.UNBOUNDED_RADIUS)

    h1 = _single_inflection(traj)
    _require_pattern(_sign_pattern_ok(traj.h, rpp, h1, np.sign, _exclusion(traj, h1)),
                     "r'' does not have the sign of h - h1")
    r_max = traj.r.max()
    closing = rp[-1] < 0 and (_tail_slope(traj) <= -TAIL_SLOPE_MIN or traj.r[-1] < 1e-4 * r_max)
    if not closing:
        raise SpanTooSmall("approach to the axis not established within span", traj)
    return Regime(RegimeKind.CLOSES_TO_AXIS, h1=h1)


def classify_hypercylinder_expander(n: int, C: float, r0: float, span: Span = Span(),
                                    tolerances: Tolerances = Tolerances()) -> Regime:
    """Regime of the profile symmetric about h = 0 with r(0) = r0, r'(0) = 0.

    Only h > 0 is integrated; the other half is the mirror image.
    """
    if not C > 1.0 / n:
        raise OutsideStatedRegime(f"classification needs C > 1/n = {1.0 / n!r}; got C={C!r}")
    ivp = ProfileIVP(SolitonSpec.rotational(n, C), SymmetricCylinder(float(r0)), span, tolerances)
    traj = integrate_profile(ivp)
    return _classify_cylinder(traj, n, C, ivp)


def symmetric_trajectory(n: int, C: float, r0: float, span: Span = Span(),
                         tolerances: Tolerances = Tolerances()) -> ProfileTrajectory:
    ivp = ProfileIVP(SolitonSpec.rotational(n, C), SymmetricCylinder(float(r0)), span, tolerances)
    return integrate_profile(ivp)


def _classify_cylinder(traj: ProfileTrajectory, n: int, C: float, ivp: ProfileIVP) -> Regime:
    crit = C * (n - 1) - 1.0
    r0 = traj.r[0]
    if abs(crit) <= 1e-12:
        max_h, _ = ivp.resolved_span()
        _require_pattern(float(np.max(np.abs(traj.r - r0))) <= ivp.tolerances.abs_tol * max_h,
                         "critical symmetric profile is not constant")
        return Regime(RegimeKind.CONSTANT_CYLINDER)
    if traj.events_tagged(EventTag.AXIS_APPROACH) or traj.events_tagged(EventTag.DERIVATIVE_BLOW_UP):
        raise InvariantViolation("symmetric profile terminated before the span was exhausted")
    h1 = _single_inflection(traj)
    if not h1 > 0:
        raise InvariantViolation(f"inflection at h={h1!r} is not positive")
    ex = _exclusion(traj, h1)
    ah = np.abs(traj.h)
    if crit > 0:
        _require_pattern(_sign_pattern_ok(ah, traj.d2r_dh2, h1, lambda d: -np.sign(d), ex),
                         "r'' does not have the sign of h1 - |h|")
        if _tail_slope(traj) < TAIL_SLOPE_MIN:
            raise SpanTooSmall("radius growth not established within span", traj)
        return Regime(RegimeKind.MIN_AT_ORIGIN_UNBOUNDED, h1=h1)
    _require_pattern(_sign_pattern_ok(ah, traj.d2r_dh2, h1, np.sign, ex),
                     "r'' does not have the sign of |h| - h1")
    closing = traj.dr_dh[-1] < 0 and (_tail_slope(traj) <= -TAIL_SLOPE_MIN
                                      or traj.r[-1] < 1e-4 * traj.r.max())
    if not closing:
        raise SpanTooSmall("approach to the axis not established within span", traj)
    return Regime(RegimeKind.MAX_AT_ORIGIN_CLOSES_TO_AXIS, h1=h1)


# ---------------------------------------------------------------------------
# residuals


def soliton_residual_rotational(traj: ProfileTrajectory) -> float:
    """max |-H <X, N> - 1/C| over samples, with H = kappa + (n-1) h_t/(|v| r).

    Evaluated from the stored velocity and acceleration in the chart active
    at each sample, so vertical and horizontal tangents are both fine.  The
    expression is invariant under reversal of the parametrisation.
    """
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    n, C = traj.spec.n, traj.spec.C
    rt, ht = traj.velocity[:, 0], traj.velocity[:, 1]
    rtt, htt = traj.acceleration[:, 0], traj.acceleration[:, 1]
    speed = np.hypot(rt, ht)
    neg_support = (traj.r * ht - traj.h * rt) / speed  # -<X, N>
    if np.any(neg_support == 0):
        raise SupportDegenerate("the profile tangent passes through the origin")
    kappa = (rt * htt - ht * rtt) / speed**3
    mean_curv = kappa + (n - 1) * ht / (speed * traj.r)
    return float(np.max(np.abs(mean_curv * neg_support - 1.0 / C)))


def divergence_form_residual(traj: ProfileTrajectory) -> float:
    """Discrete check of Delta_g (r^2 + h^2) = 2 (n - 1/C).

    On a rotational hypersurface a function of the profile parameter t has
    Laplacian (r^(n-1) |v|)^-1 d/dt (r^(n-1)/|v| df/dt).  The outer
    derivative is a three-point nonuniform difference taken inside each run
    of samples sharing a chart; the result carries that O(dt^2) error.
    """
    n, C = traj.spec.n, traj.spec.C
    target = 2.0 * (n - 1.0 / C)
    worst = 0.0
    for iv in traj.chart_log:
        sl = slice(iv.start, iv.stop)
        if iv.stop - iv.start < 3:
            continue
        chart = CHART_BY_ID.index(iv.chart)
        r, h = traj.r[sl], traj.h[sl]
        v = traj.velocity[sl]
        if chart == 2:
            # arc-length runs: chord length as parameter, unit tangent as velocity
            seg = np.hypot(np.diff(r), np.diff(h))
            t = np.concatenate(([0.0], np.cumsum(seg)))
            v = v / np.hypot(v[:, 0], v[:, 1])[:, None]
        else:
            t = (traj.h, traj.r)[chart][sl]
        speed = np.hypot(v[:, 0], v[:, 1])
        flux = r ** (n - 1) / speed * 2.0 * (r * v[:, 0] + h * v[:, 1])
        d1 = t[1:-1] - t[:-2]
        d2 = t[2:] - t[1:-1]
        dflux = (-d2 / (d1 * (d1 + d2)) * flux[:-2] + (d2 - d1) / (d1 * d2) * flux[1:-1]
                 + d1 / (d2 * (d1 + d2)) * flux[2:])
        lap = dflux / (r[1:-1] ** (n - 1) * speed[1:-1])
        worst = max(worst, float(np.max(np.abs(lap - target))))
    return worst


def exact_sphere_trajectory(n: int, R: float, samples: int = 2001, margin: float = 1e-3) -> ProfileTrajectory:
    """Half circle r = sqrt(R^2 - h^2), the C = 1/n expander, as an arc-length profile."""
    t = np.linspace(-0.5 * math.pi + margin, 0.5 * math.pi - margin, samples)
    r, h = R * np.cos(t), R * np.sin(t)
    return ProfileTrajectory.from_parametric(SolitonSpec.rotational(n, 1.0 / n), r, h,
                                             -R * np.sin(t), R * np.cos(t), -r, -h)


def exact_cylinder_trajectory(n: int, r0: float, h_extent: float = 10.0, samples: int = 201) -> ProfileTrajectory:
    h = np.linspace(-h_extent, h_extent, samples)
    z = np.zeros_like(h)
    return ProfileTrajectory.from_graph(SolitonSpec.rotational(n, 1.0 / (n - 1)), h, np.full_like(h, r0), z, z)
