"""Hot numeric loops.

Each kernel is written in the subset of Python that numba compiles.  With the
numba backend they run compiled; otherwise the same source runs as plain
Python, except where a vectorised numpy formulation is the natural fallback
(Hausdorff distance, polygon frames, flow stepping).
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, kernel

NAN = math.nan

CHART_H = 0  # r as a graph over h: x = h, y = (r, dr/dh)
CHART_R = 1  # h as a graph over r: x = r, y = (h, dh/dr)
CHART_S = 2  # arc length: x = s, y = (r, h, tangent angle)


# ---------------------------------------------------------------------------
# Hausdorff distance


@kernel
def _directed_hausdorff_loops(a, b):
    worst = 0.0
    for i in range(a.shape[0]):
        best = math.inf
        ax = a[i, 0]
        ay = a[i, 1]
        for j in range(b.shape[0]):
            dx = ax - b[j, 0]
            dy = ay - b[j, 1]
            d = dx * dx + dy * dy
            if d < best:
                best = d
        if best > worst:
            worst = best
    return math.sqrt(worst)


def _directed_hausdorff_numpy(a, b, chunk=2048):
    worst = 0.0
    for start in range(0, a.shape[0], chunk):
        blk = a[start:start + chunk]
        d2 = ((blk[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1)
        worst = max(worst, float(d2.min(axis=1).max()))
    return math.sqrt(worst)


def hausdorff(a, b):
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if USE_NUMBA:
        return max(_directed_hausdorff_loops(a, b), _directed_hausdorff_loops(b, a))
    return max(_directed_hausdorff_numpy(a, b), _directed_hausdorff_numpy(b, a))


# ---------------------------------------------------------------------------
# Rotational profile equations.  NaN marks an invalid state (r <= 0 or a
# degenerate support quantity); the stepper treats it as a rejected step.


@kernel
def rhs_graph_h(n, C, h, r, rp):
    """d2r/dh2 for the profile written as r(h)."""
    den = r - h * rp
    if r <= 0.0 or den == 0.0:
        return NAN
    w = 1.0 + rp * rp
    return w * ((n - 1) / r - w / (C * den))


@kernel
def rhs_graph_r(n, C, r, h, hp):
    """d2h/dr2 for the profile written as h(r)."""
    den = r * hp - h
    if r <= 0.0 or den == 0.0:
        return NAN
    w = 1.0 + hp * hp
    return w * (-(n - 1) * hp / r + w / (C * den))


@kernel
def rhs_arclength(n, C, r, h, phi):
    """d(phi)/ds for the unit-speed profile with tangent (cos phi, sin phi)."""
    sp = math.sin(phi)
    den = r * sp - h * math.cos(phi)
    if r <= 0.0 or den == 0.0:
        return NAN
    return -(n - 1) * sp / r + 1.0 / (C * den)


@kernel
def chart_deriv(chart, n, C, x, y0, y1, y2):
    if chart == 0:
        return y1, rhs_graph_h(n, C, x, y0, y1), 0.0
    if chart == 1:
        return y1, rhs_graph_r(n, C, x, y0, y1), 0.0
    return math.cos(y2), math.sin(y2), rhs_arclength(n, C, y0, y1, y2)


@kernel
def dp54_step(chart, n, C, x, y0, y1, y2, f0, f1, f2, dx):
    """One Dormand-Prince 5(4) step.

    Returns the 5th-order state, the embedded error estimate and the
    derivative at the new point (first-same-as-last).
    """
    a0 = y0 + dx * (0.2 * f0)
    a1 = y1 + dx * (0.2 * f1)
    a2 = y2 + dx * (0.2 * f2)
    k20, k21, k22 = chart_deriv(chart, n, C, x + 0.2 * dx, a0, a1, a2)

    a0 = y0 + dx * (3.0 / 40.0 * f0 + 9.0 / 40.0 * k20)
    a1 = y1 + dx * (3.0 / 40.0 * f1 + 9.0 / 40.0 * k21)
    a2 = y2 + dx * (3.0 / 40.0 * f2 + 9.0 / 40.0 * k22)
    k30, k31, k32 = chart_deriv(chart, n, C, x + 0.3 * dx, a0, a1, a2)

    c1 = 44.0 / 45.0
    c2 = -56.0 / 15.0
    c3 = 32.0 / 9.0
    a0 = y0 + dx * (c1 * f0 + c2 * k20 + c3 * k30)
    a1 = y1 + dx * (c1 * f1 + c2 * k21 + c3 * k31)
    a2 = y2 + dx * (c1 * f2 + c2 * k22 + c3 * k32)
    k40, k41, k42 = chart_deriv(chart, n, C, x + 0.8 * dx, a0, a1, a2)

    c1 = 19372.0 / 6561.0
    c2 = -25360.0 / 2187.0
    c3 = 64448.0 / 6561.0
    c4 = -212.0 / 729.0
    a0 = y0 + dx * (c1 * f0 + c2 * k20 + c3 * k30 + c4 * k40)
    a1 = y1 + dx * (c1 * f1 + c2 * k21 + c3 * k31 + c4 * k41)
    a2 = y2 + dx * (c1 * f2 + c2 * k22 + c3 * k32 + c4 * k42)
    k50, k51, k52 = chart_deriv(chart, n, C, x + 8.0 / 9.0 * dx, a0, a1, a2)

    c1 = 9017.0 / 3168.0
    c2 = -355.0 / 33.0
    c3 = 46732.0 / 5247.0
    c4 = 49.0 / 176.0
    c5 = -5103.0 / 18656.0
    a0 = y0 + dx * (c1 * f0 + c2 * k20 + c3 * k30 + c4 * k40 + c5 * k50)
    a1 = y1 + dx * (c1 * f1 + c2 * k21 + c3 * k31 + c4 * k41 + c5 * k51)
    a2 = y2 + dx * (c1 * f2 + c2 * k22 + c3 * k32 + c4 * k42 + c5 * k52)
    k60, k61, k62 = chart_deriv(chart, n, C, x + dx, a0, a1, a2)

    b1 = 35.0 / 384.0
    b3 = 500.0 / 1113.0
    b4 = 125.0 / 192.0
    b5 = -2187.0 / 6784.0
    b6 = 11.0 / 84.0
    n0 = y0 + dx * (b1 * f0 + b3 * k30 + b4 * k40 + b5 * k50 + b6 * k60)
    n1 = y1 + dx * (b1 * f1 + b3 * k31 + b4 * k41 + b5 * k51 + b6 * k61)
    n2 = y2 + dx * (b1 * f2 + b3 * k32 + b4 * k42 + b5 * k52 + b6 * k62)
    k70, k71, k72 = chart_deriv(chart, n, C, x + dx, n0, n1, n2)

    e1 = 71.0 / 57600.0
    e3 = -71.0 / 16695.0
    e4 = 71.0 / 1920.0
    e5 = -17253.0 / 339200.0
    e6 = 22.0 / 525.0
    e7 = -1.0 / 40.0
    err0 = dx * (e1 * f0 + e3 * k30 + e4 * k40 + e5 * k50 + e6 * k60 + e7 * k70)
    err1 = dx * (e1 * f1 + e3 * k31 + e4 * k41 + e5 * k51 + e6 * k61 + e7 * k71)
    err2 = dx * (e1 * f2 + e3 * k32 + e4 * k42 + e5 * k52 + e6 * k62 + e7 * k72)
    return n0, n1, n2, err0, err1, err2, k70, k71, k72


# ---------------------------------------------------------------------------
# Fixed-step RK4 reference for the C = 1/(n-1) graph equation.  Uses the
# rearranged form r'' = (n-1)(1+r'^2) r'(-h-r'r) / (r(r-hr')), algebraically
# distinct from ``rhs_graph_h``.


@kernel
def _critical_rpp(n, h, r, p):
    return (n - 1) * (1.0 + p * p) * p * (-h - p * r) / (r * (r - h * p))


@kernel
def rk4_critical_graph(n, h0, r0, p0, h_end, step):
    """Integrate r(h) from h0 to h_end with classical RK4.

    Returns (r_end, p_end, h_inflection, sign_changes, min_slope, min_r).
    The inflection is the first sign change of r'' on the grid, located by
    linear interpolation.
    """
    nsteps = int(math.ceil(abs(h_end - h0) / step))
    dh = (h_end - h0) / nsteps
    h = h0
    r = r0
    p = p0
    q_prev = _critical_rpp(n, h, r, p)
    h_infl = NAN
    changes = 0
    min_p = p
    min_r = r
    for i in range(nsteps):
        k1r = p
        k1p = _critical_rpp(n, h, r, p)
        k2r = p + 0.5 * dh * k1p
        k2p = _critical_rpp(n, h + 0.5 * dh, r + 0.5 * dh * k1r, k2r)
        k3r = p + 0.5 * dh * k2p
        k3p = _critical_rpp(n, h + 0.5 * dh, r + 0.5 * dh * k2r, k3r)
        k4r = p + dh * k3p
        k4p = _critical_rpp(n, h + dh, r + dh * k3r, k4r)
        r = r + dh / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        p = p + dh / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        h_new = h0 + (i + 1) * dh
        q = _critical_rpp(n, h_new, r, p)
        if q_prev != 0.0 and q != 0.0 and (q > 0.0) != (q_prev > 0.0):
            changes += 1
            if changes == 1:
                h_infl = h + (h_new - h) * q_prev / (q_prev - q)
        if q != 0.0:
            q_prev = q
        h = h_new
        if p < min_p:
            min_p = p
        if r < min_r:
            min_r = r
    return r, p, h_infl, changes, min_p, min_r


# ---------------------------------------------------------------------------
# Polygonal inverse curve shortening flow


@kernel
def _frame_loops(pts, closed, tangent, normal, kappa, ds):
    m = pts.shape[0]
    for i in range(m):
        if closed:
            ia = (i - 1) % m
            ib = (i + 1) % m
            ic = i
        elif i == 0:
            ia, ic, ib = 0, 1, 2
        elif i == m - 1:
            ia, ic, ib = m - 3, m - 2, m - 1
        else:
            ia, ic, ib = i - 1, i, i + 1
        ax = pts[ic, 0] - pts[ia, 0]
        ay = pts[ic, 1] - pts[ia, 1]
        bx = pts[ib, 0] - pts[ic, 0]
        by = pts[ib, 1] - pts[ic, 1]
        la = math.sqrt(ax * ax + ay * ay)
        lb = math.sqrt(bx * bx + by * by)
        cx = pts[ib, 0] - pts[ia, 0]
        cy = pts[ib, 1] - pts[ia, 1]
        lc = math.sqrt(cx * cx + cy * cy)
        k = 2.0 * (ax * by - ay * bx) / (la * lb * lc)
        kappa[i] = k
        if closed or (0 < i < m - 1):
            tx = cx / lc
            ty = cy / lc
            ds[i] = 0.5 * (la + lb)
        else:
            # tangent of the circle through the three end vertices
            if i == 0:
                ex, ey, le, ang = ax, ay, la, -_half_angle(k, la)
            else:
                ex, ey, le, ang = bx, by, lb, _half_angle(k, lb)
            co = math.cos(ang)
            si = math.sin(ang)
            tx = (co * ex - si * ey) / le
            ty = (si * ex + co * ey) / le
            ds[i] = le
        tangent[i, 0] = tx
        tangent[i, 1] = ty
        normal[i, 0] = -ty
        normal[i, 1] = tx
    if not closed and m >= 4:
        kappa[0] = _extrapolate(kappa[1], kappa[2])
        kappa[m - 1] = _extrapolate(kappa[m - 2], kappa[m - 3])


@kernel
def _half_angle(k, chord):
    x = 0.5 * k * chord
    return math.asin(min(1.0, max(-1.0, x)))


@kernel
def _extrapolate(k1, k2):
    # linear extrapolation of the normal speed 1/kappa; falls back to k1
    # when the extrapolated speed would change sign
    if k1 == 0.0 or k2 == 0.0:
        return k1
    v = 2.0 / k1 - 1.0 / k2
    if v == 0.0 or (v > 0.0) != (k1 > 0.0):
        return k1
    return 1.0 / v


def _frame_numpy(pts, closed, tangent, normal, kappa, ds):
    m = pts.shape[0]
    idx = np.arange(m)
    if closed:
        ia, ic, ib = (idx - 1) % m, idx, (idx + 1) % m
    else:
        ic = np.clip(idx, 1, m - 2)
        ia, ib = ic - 1, ic + 1
    a = pts[ic] - pts[ia]
    b = pts[ib] - pts[ic]
    c = pts[ib] - pts[ia]
    la = np.hypot(a[:, 0], a[:, 1])
    lb = np.hypot(b[:, 0], b[:, 1])
    lc = np.hypot(c[:, 0], c[:, 1])
    kappa[:] = 2.0 * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]) / (la * lb * lc)
    t = c / lc[:, None]
    ds[:] = 0.5 * (la + lb)
    if not closed:
        for i, e, le, sgn in ((0, a[0], la[0], -1.0), (m - 1, b[-1], lb[-1], 1.0)):
            ang = sgn * _half_angle(kappa[i], le)
            co, si = math.cos(ang), math.sin(ang)
            t[i] = (co * e[0] - si * e[1], si * e[0] + co * e[1])
            t[i] /= le
            ds[i] = le
        if m >= 4:
            kappa[0] = _extrapolate(kappa[1], kappa[2])
            kappa[-1] = _extrapolate(kappa[-2], kappa[-3])
    tangent[:] = t
    normal[:, 0] = -t[:, 1]
    normal[:, 1] = t[:, 0]


# Fills unit tangent, normal (tangent rotated by +pi/2), signed 3-point
# curvature and local mean edge length at every vertex.
polygon_frame = _frame_loops if USE_NUMBA else _frame_numpy


@kernel
def _euler_block_loops(pts, closed, dt, nsteps, cfl, budget):
    m = pts.shape[0]
    tangent = np.empty((m, 2))
    normal = np.empty((m, 2))
    kappa = np.empty(m)
    kappa_new = np.empty(m)
    ds = np.empty(m)
    old = np.empty((m, 2))
    elapsed = 0.0
    _frame_loops(pts, closed, tangent, normal, kappa, ds)
    for step in range(nsteps):
        if elapsed >= budget:
            return elapsed, step, -1
        limit = math.inf
        for i in range(m):
            q = ds[i] * kappa[i]
            q = cfl * q * q
            if q < limit:
                limit = q
        h = dt if dt < limit else limit
        if h > budget - elapsed:
            h = budget - elapsed
        for i in range(m):
            old[i, 0] = pts[i, 0]
            old[i, 1] = pts[i, 1]
            inv = h / kappa[i]
            pts[i, 0] -= inv * normal[i, 0]
            pts[i, 1] -= inv * normal[i, 1]
        _frame_loops(pts, closed, tangent, normal, kappa_new, ds)
        for i in range(m):
            if kappa_new[i] == 0.0 or (kappa_new[i] > 0.0) != (kappa[i] > 0.0):
                for j in range(m):
                    pts[j, 0] = old[j, 0]
                    pts[j, 1] = old[j, 1]
                return elapsed, step, i
        for i in range(m):
            kappa[i] = kappa_new[i]
        elapsed += h
    return elapsed, nsteps, -1


def _euler_block_numpy(pts, closed, dt, nsteps, cfl, budget):
    m = pts.shape[0]
    tangent = np.empty((m, 2))
    normal = np.empty((m, 2))
    kappa = np.empty(m)
    kappa_new = np.empty(m)
    ds = np.empty(m)
    elapsed = 0.0
    _frame_numpy(pts, closed, tangent, normal, kappa, ds)
    for step in range(nsteps):
        if elapsed >= budget:
            return elapsed, step, -1
        h = min(dt, float(cfl * np.min((ds * kappa) ** 2)), budget - elapsed)
        old = pts.copy()
        pts -= (h / kappa)[:, None] * normal
        _frame_numpy(pts, closed, tangent, normal, kappa_new, ds)
        bad = np.flatnonzero((kappa_new == 0.0) | ((kappa_new > 0.0) != (kappa > 0.0)))
        if bad.size:
            pts[:] = old
            return elapsed, step, int(bad[0])
        kappa[:] = kappa_new
        elapsed += h
    return elapsed, nsteps, -1


def flow_euler_block(pts, closed, dt, nsteps, cfl, budget):
    """Advance ``pts`` in place by at most ``nsteps`` explicit steps
    X <- X - h N / kappa, with h = min(dt, cfl * min(ds^2 kappa^2), time left).

    Stops early when ``budget`` time has elapsed or when some curvature
    changes sign (that step is undone).  Returns
    (elapsed_time, steps_done, bad_index) with bad_index = -1 on success.
    """
    impl = _euler_block_loops if USE_NUMBA else _euler_block_numpy
    return impl(pts, bool(closed), float(dt), int(nsteps), float(cfl), float(budget))
