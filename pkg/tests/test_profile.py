from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from imcf_solitons import _kernels as K
from imcf_solitons.core import Chart, EventTag, ProfileTrajectory, SolitonSpec
from imcf_solitons.errors import (InvalidInitialData, InvalidSpec, NonpositiveRadius,
                                  SupportDegenerate)
from imcf_solitons.profile import (AXIS_RADIUS, AxisShot, Direction, GraphOverH, ProfileIVP, Span,
                                   SymmetricCylinder, Tolerances, axis_seed, estimate_asymptote,
                                   integrate_profile, profile_rhs_h_of_r, profile_rhs_r_of_h)
from imcf_solitons.rotational import shoot_from_axis

SPEC2 = SolitonSpec.rotational(2, 1.0)


# ---------------------------------------------------------------------------
# problem validation


@pytest.mark.parametrize("start", [
    AxisShot(1.0), AxisShot(0.0), AxisShot(-1.0, 0.0), AxisShot(-1.0, 2e-3),
    SymmetricCylinder(0.0), SymmetricCylinder(-1.0),
    GraphOverH(-1.0, 0.0, 0.5), GraphOverH(-1.0, 1.0, math.nan), GraphOverH(math.inf, 1.0, 0.5),
])
def test_invalid_initial_data(start):
    with pytest.raises(InvalidInitialData):
        ProfileIVP(SPEC2, start)


@pytest.mark.parametrize("start, span", [
    (AxisShot(-1.0), Span(max_h=0.5)), (GraphOverH(-1.0, 1.0, 0.5), Span(max_r=1.0)),
])
def test_start_outside_span(start, span):
    with pytest.raises(InvalidInitialData):
        ProfileIVP(SPEC2, start, span)


def test_plane_spec_rejected():
    with pytest.raises(InvalidSpec):
        ProfileIVP(SolitonSpec.homothetic_curve(2.0), GraphOverH(-1.0, 1.0, 0.5))


def test_default_span_scales_with_data():
    assert ProfileIVP(SPEC2, AxisShot(-2.0)).resolved_span() == (200.0, 200.0)
    assert ProfileIVP(SPEC2, GraphOverH(-1.0, 3.0, 0.1), Span(max_h=7.0)).resolved_span() == (7.0, 300.0)


def test_rhs_typed_errors():
    with pytest.raises(NonpositiveRadius):
        profile_rhs_r_of_h(2, 1.0, 0.0, 0.0, 0.0)
    with pytest.raises(NonpositiveRadius):
        profile_rhs_h_of_r(2, 1.0, -1.0, 0.0, 0.0)
    with pytest.raises(SupportDegenerate):
        profile_rhs_r_of_h(2, 1.0, 1.0, 1.0, 1.0)   # r - h r' = 0
    with pytest.raises(SupportDegenerate):
        profile_rhs_h_of_r(2, 1.0, 1.0, 1.0, 1.0)   # r h' - h = 0


@given(n=st.integers(2, 5), r=st.floats(0.1, 5), h=st.floats(-3, 3), p=st.floats(-3, 3))
def test_charts_describe_the_same_curve(n, r, h, p):
    """r'' from the r(h) form and h'' from the h(r) form agree as curvatures."""
    C = 1.0 / (n - 1) + 0.3
    if abs(r - h * p) < 1e-3 or abs(p) < 1e-3:
        return
    rpp = profile_rhs_r_of_h(n, C, h, r, p)
    hp = 1.0 / p
    hpp = profile_rhs_h_of_r(n, C, r, h, hp)
    # signed curvature of (r(h), h) equals minus that of (r, h(r)) up to orientation
    k1 = -rpp / (1 + p * p) ** 1.5
    k2 = hpp / (1 + hp * hp) ** 1.5
    assert k1 * math.copysign(1.0, p) == pytest.approx(k2, rel=1e-9, abs=1e-12)


def test_axis_seed_taylor():
    h, hp = axis_seed(2, 1.0, -1.0, 1e-3)
    assert hp == pytest.approx(0.5e-3, rel=1e-15)
    assert h == pytest.approx(-1.0 + 0.25e-6, rel=1e-15)


# ---------------------------------------------------------------------------
# integration


@pytest.mark.parametrize("n, bound", [(2, 1e-9), (3, 1e-7), (4, 5e-6)])
def test_sphere_shot_closes_on_the_circle(n, bound):
    traj = shoot_from_axis(n, 1.0 / n, -1.0, exploratory=True)
    assert np.max(np.abs(np.hypot(traj.r, traj.h) - 1.0)) <= bound
    tags = [e.tag for e in traj.events]
    assert tags[-1] is EventTag.AXIS_APPROACH
    assert tags.count(EventTag.CHART_SWITCH) == 2      # no chattering between charts
    assert traj.h[-1] == pytest.approx(1.0, abs=1e-5)


def test_chart_log_covers_samples():
    traj = shoot_from_axis(2, 0.5, -1.0, exploratory=True)
    log = traj.chart_log
    assert log[0].start == 0 and log[-1].stop == len(traj)
    assert all(a.stop == b.start for a, b in zip(log, log[1:]))
    assert log[0].chart is Chart.GRAPH_OVER_R
    for iv in log:
        ids = set(traj.chart[iv.start:iv.stop].tolist())
        assert ids == {("GraphOverH", "GraphOverR", "ArcLength").index(iv.chart.value)}


def test_chart_switch_data_is_new_chart():
    traj = shoot_from_axis(2, 0.5, -1.0, exploratory=True)
    for e in traj.events_tagged(EventTag.CHART_SWITCH):
        i = int(np.argmin(np.hypot(traj.h - e.h, traj.r - e.r)))
        assert traj.chart[min(i + 1, len(traj) - 1)] == int(e.data)


def test_seed_radius_insensitive():
    a = shoot_from_axis(2, 2.0, -1.0, Span(max_h=5.0))
    b = shoot_from_axis(2, 2.0, -1.0, Span(max_h=5.0), r_eps=0.5 * AXIS_RADIUS)
    hq = np.linspace(0.0, 4.5, 19)
    assert np.max(np.abs(a.r_at(hq) - b.r_at(hq))) <= 1e-8


def test_symmetric_critical_start_is_constant():
    ivp = ProfileIVP(SPEC2, SymmetricCylinder(1.7), Span(max_h=10.0))
    traj = integrate_profile(ivp)
    assert np.max(np.abs(traj.r - 1.7)) == 0.0
    assert not traj.events_tagged(EventTag.ASYMPTOTE_DETECTED)


def test_direction_decreasing_runs_down():
    ivp = ProfileIVP(SPEC2, GraphOverH(-1.0, 1.0, 0.5), Span(max_h=5.0))
    down = integrate_profile(ivp, Direction.DECREASING_H)
    assert down.h[0] == -1.0 and np.all(np.diff(down.h) < 0)
    assert down.h[-1] == pytest.approx(-5.0)


def test_max_steps_stops_run():
    ivp = ProfileIVP(SPEC2, GraphOverH(-1.0, 1.0, 0.5), Span(max_h=50.0), Tolerances(max_steps=40))
    traj = integrate_profile(ivp)
    assert len(traj) <= 41
    assert traj.events[-1].tag is EventTag.MAX_SPAN_REACHED


def test_tighter_tolerance_converges():
    def top(rtol):
        ivp = ProfileIVP(SPEC2, GraphOverH(-1.0, 1.0, 0.5), Span(max_h=8.0), Tolerances(rel_tol=rtol))
        return integrate_profile(ivp).r_at(6.0)[0]
    coarse, fine, finest = top(1e-6), top(1e-9), top(1e-12)
    assert abs(fine - finest) < abs(coarse - finest)
    assert abs(fine - finest) <= 1e-7


def test_critical_rhs_numba_and_python_agree():
    args = (2, 1.0, -0.3, 1.2, 0.4)
    assert profile_rhs_r_of_h(*args) == pytest.approx(K.rhs_graph_h(*args), rel=1e-15)


# ---------------------------------------------------------------------------
# asymptote estimation


def _graph(h, r):
    rp = np.gradient(r, h)
    return ProfileTrajectory.from_graph(SPEC2, h, r, rp, np.zeros_like(h))


def test_asymptote_exponential_tail():
    h = np.linspace(0.0, 20.0, 4001)
    r = 2.0 - np.exp(-h)
    rp = np.exp(-h)
    traj = ProfileTrajectory.from_graph(SPEC2, h, r, rp, -rp)
    assert estimate_asymptote(traj) == pytest.approx(2.0, abs=1e-9)


def test_asymptote_rejects_growth():
    h = np.linspace(0.0, 20.0, 2001)
    assert estimate_asymptote(_graph(h, 1.0 + 0.1 * h)) is None


def test_asymptote_rejects_oscillation():
    h = np.linspace(0.0, 20.0, 2001)
    assert estimate_asymptote(_graph(h, 1.0 + 1e-7 * np.sin(5 * h))) is None


def test_asymptote_empty_and_constant():
    empty = ProfileTrajectory.from_graph(SPEC2, [], [], [], [])
    assert estimate_asymptote(empty) is None
    h = np.linspace(0.0, 1.0, 101)
    assert estimate_asymptote(_graph(h, np.full(101, 3.0))) == 3.0
