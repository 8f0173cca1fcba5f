"""Adaptive integration of rotational soliton profile curves.

The profile (r, h) of a rotational hypersurface in R^{n+1} solves a second
order ODE that can be written in three charts: r as a graph over h, h as a
graph over r, and an arc-length form in the tangent angle.  The integrator
steps with an embedded Dormand-Prince 5(4) pair, switches charts when the
current graph becomes steep and records events along the way.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import _kernels as K
from .core import (CHART_BY_ID, ChartInterval, Event, EventTag, ProfileTrajectory,
                   SolitonKind, SolitonSpec)
from .errors import (InvalidInitialData, InvalidSpec, NonpositiveRadius, StepUnderflow,
                     SupportDegenerate)

AXIS_RADIUS = 1e-6
AXIS_LAYER = 1e-2


# ---------------------------------------------------------------------------
# right-hand sides with typed errors


def profile_rhs_r_of_h(n: int, C: float, h: float, r: float, rp: float) -> float:
    """r'' for a profile written as r(h)."""
    if not r > 0:
        raise NonpositiveRadius(f"r={r!r} must be positive")
    if r - h * rp == 0:
        raise SupportDegenerate(f"r - h r' vanishes at (h, r)=({h!r}, {r!r})")
    return float(K.rhs_graph_h(n, C, h, r, rp))


def profile_rhs_h_of_r(n: int, C: float, r: float, h: float, hp: float) -> float:
    """h'' for a profile written as h(r)."""
    if not r > 0:
        raise NonpositiveRadius(f"r={r!r} must be positive")
    if r * hp - h == 0:
        raise SupportDegenerate(f"r h' - h vanishes at (h, r)=({h!r}, {r!r})")
    return float(K.rhs_graph_r(n, C, r, h, hp))


# ---------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class GraphOverH:
    """Start from r(h0) = r0, r'(h0) = r0p."""

    h0: float
    r0: float
    r0p: float


@dataclass(frozen=True)
class AxisShot:
    """Start on the rotation axis at height h0 < 0, perpendicular to it.

    The singular point is avoided by seeding at r = ``r_eps`` from the
    Taylor expansion of h(r).
    """

    h0: float
    r_eps: float = AXIS_RADIUS


@dataclass(frozen=True)
class SymmetricCylinder:
    """Start at h = 0 with r(0) = r0 and r'(0) = 0."""

    r0: float


StartData = Union[GraphOverH, AxisShot, SymmetricCylinder]


@dataclass(frozen=True)
class Span:
    """Integration stops once |h| >= max_h or r >= max_r (None: 100 x data scale)."""

    max_h: Optional[float] = None
    max_r: Optional[float] = None


@dataclass(frozen=True)
class Tolerances:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    chart_switch_slope: float = 10.0
    min_step: float = 1e-14
    max_steps: int = 2_000_000


class Direction(str, enum.Enum):
    INCREASING_H = "IncreasingH"
    DECREASING_H = "DecreasingH"


@dataclass(frozen=True)
class ProfileIVP:
    spec: SolitonSpec
    start: StartData
    span: Span = field(default_factory=Span)
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.spec.kind is not SolitonKind.ROTATIONAL_HOMOTHETIC:
            raise InvalidSpec("profile integration needs a rotational soliton spec")
        st = self.start
        if isinstance(st, AxisShot):
            if not st.h0 < 0:
                raise InvalidInitialData("an axis shot needs h0 < 0")
            if not 0 < st.r_eps < 1e-3 * abs(st.h0):
                raise InvalidInitialData("the axis seed radius must lie in (0, 1e-3 |h0|)")
        elif isinstance(st, SymmetricCylinder):
            if not st.r0 > 0:
                raise InvalidInitialData("the symmetric start needs r0 > 0")
        elif isinstance(st, GraphOverH):
            if not st.r0 > 0:
                raise InvalidInitialData("the graph start needs r0 > 0")
            if not all(math.isfinite(v) for v in (st.h0, st.r0, st.r0p)):
                raise InvalidInitialData("initial data must be finite")
        else:
            raise TypeError(f"unknown start data {st!r}")
        max_h, max_r = self.resolved_span()
        h_start = 0.0 if isinstance(st, SymmetricCylinder) else st.h0
        r_start = 0.0 if isinstance(st, AxisShot) else st.r0
        if not (abs(h_start) < max_h and r_start < max_r):
            raise InvalidInitialData(f"start (h, r)=({h_start!r}, {r_start!r}) lies outside the span")

    @property
    def scale(self) -> float:
        st = self.start
        if isinstance(st, AxisShot):
            return abs(st.h0)
        if isinstance(st, SymmetricCylinder):
            return st.r0
        return max(abs(st.h0), st.r0)

    def resolved_span(self) -> tuple:
        default = 100.0 * self.scale
        mh = self.span.max_h if self.span.max_h is not None else default
        mr = self.span.max_r if self.span.max_r is not None else default
        return float(mh), float(mr)


def axis_seed(n: int, C: float, h0: float, r_eps: float = AXIS_RADIUS) -> tuple:
    """Second-order Taylor state (h, h') at r = r_eps for an axis shot."""
    hpp0 = -1.0 / (n * C * h0)
    return h0 + 0.5 * hpp0 * r_eps**2, hpp0 * r_eps


# ---------------------------------------------------------------------------
# integrator


def _to_arclength(chart, sigma, x, y0, y1):
    if chart == K.CHART_H:
        return y0, x, math.atan2(sigma, sigma * y1)
    return x, y0, math.atan2(sigma * y1, sigma)


def _curvature_sign_value(chart, sigma, f1, f2):
    """Quantity whose sign is the sign of the geometric curvature along travel."""
    if chart == K.CHART_H:
        return -sigma * f1
    if chart == K.CHART_R:
        return sigma * f1
    return f2


def _hr(chart, x, y0, y1):
    if chart == K.CHART_H:
        return x, y0
    if chart == K.CHART_R:
        return y0, x
    return y1, y0


class _Run:
    """Mutable bookkeeping for one integration; not part of the public API."""

    def __init__(self):
        self.charts = []
        self.xs = []
        self.ys = []
        self.fs = []
        self.sigmas = []
        self.events = []

    def record(self, chart, sigma, x, y, f):
        self.charts.append(chart)
        self.sigmas.append(sigma)
        self.xs.append(x)
        self.ys.append(y)
        self.fs.append(f)


def _error_norm(chart, y, ynew, err, atol, rtol):
    m = 3 if chart == K.CHART_S else 2
    worst = 0.0
    for i in range(m):
        sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
        e = abs(err[i]) / sc
        if not e <= worst:  # also catches NaN
            worst = e
    return worst


def integrate_profile(ivp: ProfileIVP, direction: Direction = Direction.INCREASING_H) -> ProfileTrajectory:
    """Integrate the profile from its start data until the span is exhausted,
    the curve reaches the axis, or the derivative blows up.

    Events recorded: Inflection (sign change of the curvature, located by
    bisection on re-taken steps to 1e-10), ChartSwitch, AxisApproach
    (r < 1e-6), DerivativeBlowUp, AsymptoteDetected and MaxSpanReached.
    Axis shots always move away from the axis; ``direction`` applies to
    graph starts.
    """
    spec = ivp.spec
    n, C = spec.n, spec.C
    tol = ivp.tolerances
    atol, rtol, slope_max = tol.abs_tol, tol.rel_tol, tol.chart_switch_slope
    max_h, max_r = ivp.resolved_span()
    st = ivp.start
    scale = ivp.scale

    axis_shot = isinstance(st, AxisShot)
    if axis_shot:
        chart, sigma, x = K.CHART_R, 1.0, st.r_eps
        h_seed, hp_seed = axis_seed(n, C, st.h0, st.r_eps)
        y = (h_seed, hp_seed, 0.0)
        dx = st.r_eps
    else:
        if isinstance(st, SymmetricCylinder):
            st = GraphOverH(0.0, st.r0, 0.0)
        profile_rhs_r_of_h(n, C, st.h0, st.r0, st.r0p)  # raises on degenerate data
        chart, x = K.CHART_H, st.h0
        sigma = 1.0 if direction is Direction.INCREASING_H else -1.0
        y = (st.r0, st.r0p, 0.0)
        dx = 1e-3 * scale

    f = K.chart_deriv(chart, n, C, x, *y)
    run = _Run()
    run.record(chart, sigma, x, y, f)
    g_prev = _curvature_sign_value(chart, sigma, f[1], f[2])
    err_prev = 1e-4
    steps = 0
    steps_in_chart = 0
    span_reached = False
    terminated = None
    blowup_scale = 1e8 / scale

    while True:
        if steps >= tol.max_steps:
            span_reached = True
            break
        step_sign = sigma if chart != K.CHART_S else 1.0
        limit = math.inf
        if chart == K.CHART_H:
            limit = (max_h - x) if step_sign > 0 else (x + max_h)
        elif chart == K.CHART_R and step_sign < 0:
            limit = x - 0.5 * AXIS_RADIUS
        hit_limit = dx >= limit
        if hit_limit:
            dx = limit
        if dx <= 0:
            span_reached = chart == K.CHART_H
            break

        out = K.dp54_step(chart, n, C, x, y[0], y[1], y[2], f[0], f[1], f[2], step_sign * dx)
        ynew = out[0:3]
        err = _error_norm(chart, y, ynew, out[3:6], atol, rtol)
        fnew = out[6:9]
        if not (err <= 1.0) or not all(math.isfinite(v) for v in fnew):
            fac = 0.2 if not math.isfinite(err) else max(0.2, 0.9 * err ** -0.2)
            dx *= min(fac, 0.9)
            if dx < tol.min_step * max(1.0, abs(x)):
                if chart != K.CHART_S:
                    r_, h_, phi = _to_arclength(chart, sigma, x, y[0], y[1])
                    run.events.append(Event(EventTag.CHART_SWITCH, h_, r_, float(K.CHART_S)))
                    chart, sigma, x = K.CHART_S, 1.0, 0.0
                    y = (r_, h_, phi)
                    f = K.chart_deriv(chart, n, C, x, *y)
                    dx = 1e-6 * scale
                    steps_in_chart = 0
                    continue
                h_, r_ = _hr(chart, x, y[0], y[1])
                if abs(f[2]) > blowup_scale:
                    run.events.append(Event(EventTag.DERIVATIVE_BLOW_UP, h_, r_, float(f[2])))
                    terminated = EventTag.DERIVATIVE_BLOW_UP
                    break
                if abs(r_ * math.sin(y[2]) - h_ * math.cos(y[2])) < 1e-12 * scale:
                    raise SupportDegenerate(f"profile tangent passes through the origin at (h, r)=({h_!r}, {r_!r})")
                raise StepUnderflow(h_, r_)
            continue

        x_old, y_old, f_old = x, y, f
        x = x_old + step_sign * dx if not hit_limit else (
            (max_h if step_sign > 0 else -max_h) if chart == K.CHART_H else 0.5 * AXIS_RADIUS)
        y, f = ynew, fnew
        steps += 1
        steps_in_chart += 1
        run.record(chart, sigma, x, y, f)

        g = _curvature_sign_value(chart, sigma, f[1], f[2])
        # Approaching the axis, the r^(1-n) mode of the singular ODE grows
        # without bound; once it flips the curvature sign the regular branch
        # is no longer resolvable and the curve counts as having reached the axis.
        in_axis_layer = chart == K.CHART_R and step_sign < 0 and x < AXIS_LAYER * scale
        if g != 0.0:
            if g_prev != 0.0 and (g > 0) != (g_prev > 0):
                if in_axis_layer:
                    h_, r_ = _hr(chart, x, y[0], y[1])
                    run.events.append(Event(EventTag.AXIS_APPROACH, h_, r_))
                    terminated = EventTag.AXIS_APPROACH
                    break
                run.events.append(_locate_inflection(chart, sigma, n, C, x_old, y_old, f_old,
                                                     step_sign * dx, g_prev))
            g_prev = g

        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** (-0.7 / 5) * err_prev ** (0.4 / 5)
            fac = min(5.0, max(0.2, fac))
        if axis_shot and steps <= 10:
            fac = min(fac, 2.0)
        err_prev = max(err, 1e-4)
        dx *= fac

        h_, r_ = _hr(chart, x, y[0], y[1])
        if r_ < AXIS_RADIUS:
            run.events.append(Event(EventTag.AXIS_APPROACH, h_, r_))
            terminated = EventTag.AXIS_APPROACH
            break
        if abs(h_) >= max_h * (1 - 1e-15) or r_ >= max_r:
            span_reached = True
            break

        # chart management
        if chart != K.CHART_S:
            if abs(y[1]) > slope_max:
                new_chart = K.CHART_R if chart == K.CHART_H else K.CHART_H
                new_sigma = sigma * math.copysign(1.0, y[1])
                inv = 1.0 / y[1]
                # (x, y0) = (h, r) <-> (r, h); the slope inverts
                x, y = y[0], (x, inv, 0.0)
                # dx rescales with the local length element of the new chart
                dx *= abs(inv)
                chart, sigma = new_chart, new_sigma
                f = K.chart_deriv(chart, n, C, x, *y)
                run.events.append(Event(EventTag.CHART_SWITCH, h_, r_, float(chart)))
                steps_in_chart = 0
        elif steps_in_chart >= 10:
            phi = y[2]
            c_, s_ = math.cos(phi), math.sin(phi)
            if abs(s_) <= abs(c_):
                chart, sigma, x, y = K.CHART_R, math.copysign(1.0, c_), y[0], (y[1], s_ / c_, 0.0)
                dx *= abs(c_)
            else:
                chart, sigma, x, y = K.CHART_H, math.copysign(1.0, s_), y[1], (y[0], c_ / s_, 0.0)
                dx *= abs(s_)
            f = K.chart_deriv(chart, n, C, x, *y)
            run.events.append(Event(EventTag.CHART_SWITCH, h_, r_, float(chart)))
            steps_in_chart = 0

    traj = _assemble(spec, run)
    if terminated is None:
        traj = _finish_tail(traj, span_reached, tol)
    return traj


def _locate_inflection(chart, sigma, n, C, x0, y0, f0, step, g0):
    lo, hi = 0.0, 1.0
    best = None
    while (hi - lo) * abs(step) > 1e-10:
        mid = 0.5 * (lo + hi)
        out = K.dp54_step(chart, n, C, x0, y0[0], y0[1], y0[2], f0[0], f0[1], f0[2], mid * step)
        g = _curvature_sign_value(chart, sigma, out[7], out[8])
        best = (mid, out)
        if g == 0.0:
            break
        if (g > 0) == (g0 > 0):
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    out = K.dp54_step(chart, n, C, x0, y0[0], y0[1], y0[2], f0[0], f0[1], f0[2], mid * step)
    h_, r_ = _hr(chart, x0 + mid * step, out[0], out[1])
    return Event(EventTag.INFLECTION, float(h_), float(r_))


def _assemble(spec, run: _Run) -> ProfileTrajectory:
    charts = np.asarray(run.charts, dtype=np.int64)
    xs = np.asarray(run.xs, dtype=float)
    ys = np.asarray(run.ys, dtype=float).reshape(-1, 3)
    fs = np.asarray(run.fs, dtype=float).reshape(-1, 3)
    m = len(xs)
    h = np.empty(m)
    r = np.empty(m)
    rp = np.empty(m)
    rpp = np.empty(m)
    vel = np.empty((m, 2))
    acc = np.empty((m, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        c0 = charts == K.CHART_H
        h[c0], r[c0], rp[c0], rpp[c0] = xs[c0], ys[c0, 0], ys[c0, 1], fs[c0, 1]
        vel[c0] = np.column_stack([ys[c0, 1], np.ones(c0.sum())])
        acc[c0] = np.column_stack([fs[c0, 1], np.zeros(c0.sum())])

        c1 = charts == K.CHART_R
        hp, hpp = ys[c1, 1], fs[c1, 1]
        h[c1], r[c1] = ys[c1, 0], xs[c1]
        rp[c1] = 1.0 / hp
        rpp[c1] = -hpp / hp**3
        vel[c1] = np.column_stack([np.ones(c1.sum()), hp])
        acc[c1] = np.column_stack([np.zeros(c1.sum()), hpp])

        c2 = charts == K.CHART_S
        phi, dphi = ys[c2, 2], fs[c2, 2]
        cs, sn = np.cos(phi), np.sin(phi)
        r[c2], h[c2] = ys[c2, 0], ys[c2, 1]
        rp[c2] = cs / sn
        rpp[c2] = -dphi / sn**3
        vel[c2] = np.column_stack([cs, sn])
        acc[c2] = np.column_stack([-sn * dphi, cs * dphi])

    log = []
    start = 0
    for i in range(1, m + 1):
        if i == m or charts[i] != charts[start]:
            log.append(ChartInterval(CHART_BY_ID[charts[start]], start, i))
            start = i
    # an axis-terminated run keeps its last (sub-threshold) sample out of r > 0 trouble
    keep = r > 0
    if not keep.all():
        cut = int(np.argmin(keep))
        h, r, rp, rpp, charts, vel, acc = (a[:cut] for a in (h, r, rp, rpp, charts, vel, acc))
        log = [ChartInterval(c.chart, c.start, min(c.stop, cut)) for c in log if c.start < cut]
    return ProfileTrajectory(spec, h, r, rp, rpp, charts, vel, acc, tuple(run.events), tuple(log))


def _finish_tail(traj: ProfileTrajectory, span_reached: bool, tol: Tolerances) -> ProfileTrajectory:
    r = traj.r
    if np.ptp(r) <= 4 * np.finfo(float).eps * np.max(r):
        return traj
    est = estimate_asymptote(traj)
    events = list(traj.events)
    if est is not None:
        events.append(Event(EventTag.ASYMPTOTE_DETECTED, float(traj.h[-1]), float(r[-1]), est))
    elif span_reached:
        events.append(Event(EventTag.MAX_SPAN_REACHED, float(traj.h[-1]), float(r[-1])))
    return ProfileTrajectory(traj.spec, traj.h, traj.r, traj.dr_dh, traj.d2r_dh2, traj.chart,
                             traj.velocity, traj.acceleration, tuple(events), traj.chart_log)


# ---------------------------------------------------------------------------
# asymptotes


def estimate_asymptote(traj: ProfileTrajectory, tail_fraction: float = 0.2,
                       slope_tol: float = 1e-6, range_tol: float = 1e-5,
                       noise: float = 1e-11) -> Optional[float]:
    """Limit of r at the end of the trajectory, or None if the tail has not settled.

    The window is the last ``tail_fraction`` of the h-extent travelled, read
    from r(h)-chart samples.  It must be monotone in r with |r'| not
    increasing, end with |r'| < ``slope_tol`` and span less than
    ``range_tol`` in r.  Monotonicity is judged up to ``noise`` in r', the
    level at which an adaptive integrator leaves a stiff decaying slope.  The limit is then Aitken-extrapolated from three
    equally spaced heights; a correction larger than the window's r-range is
    discarded in favour of the last sample.
    """
    h, r, rp = traj.h, traj.r, traj.dr_dh
    if len(h) == 0:
        return None
    extent = abs(h[-1] - h[0])
    if extent == 0:
        return float(r[-1]) if np.ptp(r) == 0 else None
    in_window = np.abs(h - h[-1]) <= tail_fraction * extent
    # the window is the trailing run of samples inside it
    start = len(h) - 1
    while start > 0 and in_window[start - 1]:
        start -= 1
    wh, wr, wp = h[start:], r[start:], rp[start:]
    if len(wh) < 3 or not np.all(np.isfinite(wp)):
        return None
    if not abs(wp[-1]) < slope_tol or not np.ptp(wr) < range_tol:
        return None
    slack = noise * np.abs(np.diff(wh)) + 4 * np.finfo(float).eps * wr[1:]
    dr = np.diff(wr)
    if not (np.all(dr >= -slack) or np.all(dr <= slack)):
        return None
    if np.any(np.diff(np.abs(wp)) > noise):
        return None
    if not (np.all(np.diff(wh) > 0) or np.all(np.diff(wh) < 0)):
        return float(wr[-1])
    hq = np.array([wh[0], 0.5 * (wh[0] + wh[-1]), wh[-1]])
    sub = ProfileTrajectory.from_graph(traj.spec, wh, wr, wp, np.zeros_like(wh))
    r0, r1, r2 = sub.r_at(hq)
    denom = (r2 - r1) - (r1 - r0)
    if denom == 0:
        return float(r2)
    limit = r2 - (r2 - r1) ** 2 / denom
    if not math.isfinite(limit) or abs(limit - r2) > np.ptp(wr):
        return float(wr[-1])
    return float(limit)
