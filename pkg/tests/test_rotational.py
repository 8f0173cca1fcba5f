from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imcf_solitons.core import EventTag, ProfileTrajectory, Regime, RegimeKind, SolitonSpec
from imcf_solitons.errors import (BottleHypothesisViolated, InvariantViolation, OutsideStatedRegime,
                                  SpanTooSmall)
from imcf_solitons.profile import Span
from imcf_solitons.rotational import (axis_second_derivative, build_infinite_bottle,
                                      classify_hypercylinder_expander, classify_hyperplane_expander,
                                      critical_rpp_sign, divergence_form_residual,
                                      exact_cylinder_trajectory, exact_sphere_trajectory,
                                      outside_barrier_monitor, shoot_from_axis,
                                      soliton_residual_rotational, symmetric_trajectory)

# (h1, r_bot, r_top) of the n = 2 bottle through h0 = -1, r0 = 1, r0' = 0.5
BOTTLE_REF = (-0.6380132034838124, 0.6537605921733567, 2.3209061335563046)


@pytest.fixture(scope="module")
def bottle():
    return build_infinite_bottle(2, 1.0, -1.0, 0.5)


# ---------------------------------------------------------------------------
# exact solutions


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("R", [0.3, 1.0, 4.0])
def test_sphere_profile_exact(n, R):
    assert soliton_residual_rotational(exact_sphere_trajectory(n, R)) <= 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("r0", [0.3, 1.0, 4.0])
def test_cylinder_profile_exact(n, r0):
    traj = exact_cylinder_trajectory(n, r0)
    assert soliton_residual_rotational(traj) <= 1e-9
    assert divergence_form_residual(traj) <= 1e-9


def test_sphere_wrong_constant_detected():
    traj = exact_sphere_trajectory(2, 1.0)
    off = ProfileTrajectory.from_parametric(SolitonSpec.rotational(2, 0.6), traj.r, traj.h,
                                            traj.velocity[:, 0], traj.velocity[:, 1],
                                            traj.acceleration[:, 0], traj.acceleration[:, 1])
    assert soliton_residual_rotational(off) == pytest.approx(2.0 - 1 / 0.6, rel=1e-9)


def test_residual_reversal_invariant():
    traj = exact_sphere_trajectory(3, 2.0, samples=101)
    rev = ProfileTrajectory.from_parametric(traj.spec, traj.r[::-1], traj.h[::-1],
                                            -traj.velocity[::-1, 0], -traj.velocity[::-1, 1],
                                            traj.acceleration[::-1, 0], traj.acceleration[::-1, 1])
    assert soliton_residual_rotational(rev) == pytest.approx(soliton_residual_rotational(traj), abs=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sphere_divergence_form(n):
    assert divergence_form_residual(exact_sphere_trajectory(n, 1.0, samples=4001)) <= 1e-4


def test_integrated_bottle_residuals(bottle):
    assert soliton_residual_rotational(bottle.trajectory) <= 1e-8
    assert divergence_form_residual(bottle.trajectory) <= 1e-3


# ---------------------------------------------------------------------------
# bottles


def test_bottle_reference_values(bottle):
    assert bottle.complete
    assert (bottle.h1, bottle.r_bot, bottle.r_top) == pytest.approx(BOTTLE_REF, rel=1e-9)
    assert bottle.regime == Regime(RegimeKind.BOTTLE_BETWEEN_CYLINDERS, *BOTTLE_REF[1:], BOTTLE_REF[0])


def test_bottle_structure(bottle):
    traj = bottle.trajectory
    assert np.all(np.diff(traj.h) > 0)
    # increasing up to the integrator noise floor in the flat tails
    slack = 1e-11 * np.diff(traj.h) + 4 * np.finfo(float).eps * traj.r[1:]
    assert np.all(np.diff(traj.r) >= -slack)
    assert traj.r[-1] - traj.r[0] > 1.6
    assert len(traj.events_tagged(EventTag.INFLECTION)) == 1
    assert -1.0 < bottle.h1 < 0.0
    assert 0 < bottle.r_bot < traj.r.min() + 1e-9
    assert traj.r.max() < bottle.r_top + 1e-9
    sig = critical_rpp_sign(2, traj.h, traj.r, traj.dr_dh)
    live = traj.dr_dh > 1e-6
    assert np.all(sig[live & (traj.h < bottle.h1 - 1e-3)] > 0)
    assert np.all(sig[live & (traj.h > bottle.h1 + 1e-3)] < 0)


@pytest.mark.parametrize("lam", [0.1, 3.0, 10.0])
def test_bottle_dilation(bottle, lam):
    s = build_infinite_bottle(2, lam, -lam, 0.5)
    assert s.h1 == pytest.approx(lam * bottle.h1, rel=1e-8)
    assert s.r_bot == pytest.approx(lam * bottle.r_bot, rel=1e-8)
    assert s.r_top == pytest.approx(lam * bottle.r_top, rel=1e-8)
    hq = np.linspace(-5.0, 5.0, 41)
    np.testing.assert_allclose(s.trajectory.r_at(lam * hq), lam * bottle.trajectory.r_at(hq), rtol=1e-8)


@pytest.mark.parametrize("r0, h0, r0p", [
    (0.0, -1.0, 0.5), (1.0, 0.0, 0.5), (1.0, 0.5, 0.5),
    (1.0, -1.0, 0.0), (1.0, -1.0, -0.1), (1.0, -1.0, 1.0), (2.0, -1.0, 0.6),
])
def test_bottle_hypothesis(r0, h0, r0p):
    with pytest.raises(BottleHypothesisViolated):
        build_infinite_bottle(2, r0, h0, r0p)


def test_bottle_short_span_incomplete():
    sol = build_infinite_bottle(2, 1.0, -1.0, 0.5, Span(max_h=1.5))
    assert not sol.complete
    assert sol.r_top is None or sol.r_bot is None


def test_barrier_monitor(bottle):
    assert outside_barrier_monitor(bottle.trajectory, h_from=bottle.h1) <= 1e-8
    # concave samples whose slope r' grows, so h'/r^(n-1) drops
    h = np.linspace(0.0, 2.0, 50)
    fake = ProfileTrajectory.from_graph(SolitonSpec.rotational(3, 0.5), h, 1.0 + h, 0.1 * np.exp(h),
                                        -np.ones_like(h))
    with pytest.raises(InvariantViolation):
        outside_barrier_monitor(fake)


# ---------------------------------------------------------------------------
# axis shots


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("C", [0.6, 1.0, 2.0])
@pytest.mark.parametrize("h0", [-0.5, -1.0, -2.0])
def test_axis_second_derivative(n, C, h0):
    traj = shoot_from_axis(n, C, h0, Span(max_h=3 * abs(h0)), exploratory=True)
    assert axis_second_derivative(traj) == pytest.approx(-1.0 / (n * C * h0), rel=1e-6)


def test_shot_outside_regime():
    with pytest.raises(OutsideStatedRegime):
        shoot_from_axis(2, 0.5, -1.0)
    with pytest.raises(OutsideStatedRegime):
        classify_hyperplane_expander(3, 0.3, -1.0)
    with pytest.raises(OutsideStatedRegime):
        classify_hypercylinder_expander(3, 0.3, 1.0)


def test_axis_fit_too_short():
    traj = exact_cylinder_trajectory(2, 1.0, samples=3)
    with pytest.raises(ValueError):
        axis_second_derivative(traj)


# ---------------------------------------------------------------------------
# classification

TRICHOTOMY = [
    (2, 0.7, RegimeKind.CLOSES_TO_AXIS, RegimeKind.MAX_AT_ORIGIN_CLOSES_TO_AXIS),
    (2, 1.0, RegimeKind.CONVERGES_TO_CYLINDER, RegimeKind.CONSTANT_CYLINDER),
    (2, 2.0, RegimeKind.UNBOUNDED_RADIUS, RegimeKind.MIN_AT_ORIGIN_UNBOUNDED),
    (3, 0.4, RegimeKind.CLOSES_TO_AXIS, RegimeKind.MAX_AT_ORIGIN_CLOSES_TO_AXIS),
    (3, 0.5, RegimeKind.CONVERGES_TO_CYLINDER, RegimeKind.CONSTANT_CYLINDER),
    (3, 1.0, RegimeKind.UNBOUNDED_RADIUS, RegimeKind.MIN_AT_ORIGIN_UNBOUNDED),
]


@pytest.mark.parametrize("n, C, plane, cyl", TRICHOTOMY)
def test_trichotomy(n, C, plane, cyl):
    assert classify_hyperplane_expander(n, C, -1.0).kind is plane
    assert classify_hypercylinder_expander(n, C, 1.0).kind is cyl


def test_regime_payloads():
    conv = classify_hyperplane_expander(2, 1.0, -1.0)
    assert conv.r_top is not None and conv.r_top > 0
    closes = classify_hyperplane_expander(2, 0.7, -1.0)
    assert closes.h1 is not None
    grow = classify_hypercylinder_expander(2, 2.0, 1.0)
    assert grow.h1 > 0


def test_span_too_small_carries_trajectory():
    with pytest.raises(SpanTooSmall) as info:
        classify_hyperplane_expander(2, 0.7, -1.0, Span(max_h=1.5))
    assert isinstance(info.value.trajectory, ProfileTrajectory)
    assert len(info.value.trajectory) > 0


def test_symmetric_trajectory_mirror_data():
    traj = symmetric_trajectory(2, 2.0, 1.0, Span(max_h=3.0))
    assert traj.h[0] == 0.0 and traj.r[0] == 1.0 and traj.dr_dh[0] == 0.0


@settings(max_examples=10)
@given(C=st.floats(1.05, 4.0), h0=st.floats(-3.0, -0.3))
def test_supercritical_shots_grow(C, h0):
    traj = shoot_from_axis(2, C, h0, Span(max_h=20 * abs(h0)))
    assert not traj.events_tagged(EventTag.INFLECTION)
    assert np.all(traj.dr_dh > -1e-11)
