from __future__ import annotations

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imcf_solitons.core import PlaneCurve
from imcf_solitons.errors import CurvatureDegenerate, EmptyCurve
from imcf_solitons.flow import (FlowState, circle_growth, densify, evolve, fit_circle_radius,
                                fit_dilation, fit_translation, flow_step, interior, kdtree_hausdorff,
                                polyline_distance, resample_uniform, self_similarity_check,
                                translator_check)
from imcf_solitons.plane import HomotheticCurveParams, sample_homothetic_curve


def _circle(samples=128, R=1.0):
    return sample_homothetic_curve(HomotheticCurveParams(1.0, R, 0.0), (0.0, 2 * math.pi), samples)


def test_zero_dt_is_identity():
    state = FlowState(_circle(), dt=0.0)
    assert flow_step(state) is state
    assert evolve(state, 1.0) is state


def test_zero_time_is_identity():
    state = FlowState(_circle())
    assert evolve(state, 0.0) is state
    with pytest.raises(ValueError):
        evolve(state, -1.0)


def test_flow_step_advances_time():
    state = FlowState(_circle(), dt=1e-4)
    nxt = flow_step(state)
    assert nxt.time == pytest.approx(1e-4, rel=1e-12)
    assert nxt.steps_since_resample == 1
    r = np.linalg.norm(nxt.points, axis=1)
    np.testing.assert_allclose(r, 1.0 + 1e-4, rtol=1e-12)


def test_circle_grows_exponentially():
    times, radii = circle_growth(T=1.0, steps=4000, samples=128)
    assert times[-1] == pytest.approx(1.0, abs=1e-12)
    assert abs(radii[-1] / math.e - 1.0) <= 1e-3
    slope = np.polyfit(times, np.log(radii), 1)[0]
    assert slope == pytest.approx(1.0, abs=1e-3)


def test_circle_first_order_in_time():
    def err(steps):
        _, radii = circle_growth(T=1.0, steps=steps, samples=128)
        return abs(radii[-1] - math.e)
    ratio = err(2000) / err(4000)
    assert ratio == pytest.approx(2.0, abs=0.05)


@settings(max_examples=8)
@given(R=st.floats(0.2, 5.0))
def test_circle_scale_covariance(R):
    """Under IMCF a circle of any radius grows by the same factor e^T."""
    _, radii = circle_growth(R=R, T=0.2, steps=4000, samples=64)
    assert radii[-1] / R == pytest.approx(math.exp(0.2), rel=1e-3)


def test_cycloid_drifts_upward():
    res = translator_check(T=0.05, steps=1000, samples=256)
    assert np.max(np.abs(res.drift - np.array([0.0, 1.0]))) <= 1e-3
    assert res.distance <= 1e-3 * 0.05 * 10


@pytest.mark.parametrize("params, theta_range", [
    (HomotheticCurveParams(2.0, 1.0, 1.0), (0.0, 2.0)),
    (HomotheticCurveParams(1.0, 0.0, 1.0), (1.0, 4.0)),
])
def test_self_similarity(params, theta_range):
    res = self_similarity_check(params, theta_range, T=0.1, steps=1000, samples=256, full=True)
    assert res.fitted_scale / res.predicted_scale == pytest.approx(1.0, abs=1e-2)
    assert res.distance <= 1e-2 * res.curve_scale


def test_mixed_curvature_rejected():
    th = np.linspace(0.0, 2 * math.pi, 64, endpoint=False)
    rad = 1.0 + 0.6 * np.cos(3 * th)          # non-convex trefoil-like loop
    curve = PlaneCurve.from_polygon(np.column_stack([rad * np.cos(th), rad * np.sin(th)]), True)
    with pytest.raises(CurvatureDegenerate) as info:
        evolve(FlowState(curve), 0.1)
    assert info.value.time == 0.0


def test_resample_uniform_keeps_shape():
    curve = _circle(64)
    jitter = np.linspace(0.0, 2 * math.pi, 65)[:-1] + 0.02 * np.sin(np.arange(64))
    pts = np.column_stack([np.cos(jitter), np.sin(jitter)])
    out = resample_uniform(pts, True)
    edges = np.hypot(*np.diff(np.vstack([out, out[:1]]), axis=0).T)
    assert np.ptp(edges) / edges.mean() < 1e-3
    np.testing.assert_allclose(np.linalg.norm(out, axis=1), 1.0, atol=1e-5)
    assert len(resample_uniform(curve.points, True, 100)) == 100


def test_hausdorff_and_polyline_distance():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 0.5], [1.0, 0.5]])
    assert kdtree_hausdorff(a, b) == pytest.approx(0.5)
    with pytest.raises(EmptyCurve):
        kdtree_hausdorff(a, np.empty((0, 2)))
    poly = np.array([[0.0, 0.0], [2.0, 0.0]])
    np.testing.assert_allclose(polyline_distance(np.array([[1.0, 0.3], [3.0, 0.0]]), poly), [0.3, 1.0])


def test_interior_and_densify():
    pts = np.column_stack([np.linspace(0, 1, 101), np.zeros(101)])
    inner = interior(pts, False, 0.1)
    assert 0.1 <= inner[0, 0] < 0.12 and 0.88 < inner[-1, 0] <= 0.9
    assert len(interior(pts, True, 0.1)) == 101
    assert len(densify(inner, False, 4)) > 4 * (len(inner) - 1)


def test_fits_recover_known_transforms():
    th = np.linspace(0.2, 2.5, 4001)
    ref = np.column_stack([np.cos(th) * np.exp(th), np.sin(th) * np.exp(th)])
    pts = 1.3 * ref[500:3500:50]
    assert fit_dilation(pts, ref) == pytest.approx(1.3, rel=1e-6)
    shifted = ref[500:3500:50] + np.array([0.01, -0.02])
    np.testing.assert_allclose(fit_translation(shifted, ref), [0.01, -0.02], atol=1e-6)
    circ = 2.5 * np.column_stack([np.cos(th), np.sin(th)]) + 1.0
    assert fit_circle_radius(circ) == pytest.approx(2.5, rel=1e-12)


_BACKEND_SCRIPT = """
import json, math
from imcf_solitons import _accel
from imcf_solitons.flow import FlowState, evolve
from imcf_solitons.plane import HomotheticCurveParams, sample_homothetic_curve
c = sample_homothetic_curve(HomotheticCurveParams(2.0, 1.0, 1.0), (0.0, 2.0), 64)
out = evolve(FlowState(c, dt=1e-4), 0.02).points
print(json.dumps({"backend": _accel.BACKEND, "pts": out.tolist()}))
"""


def test_backends_agree():
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, IMCF_SOLITONS_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", _BACKEND_SCRIPT], env=env, check=True,
                             capture_output=True, text=True).stdout
        data = json.loads(out)
        results[data["backend"]] = np.array(data["pts"])
    assert set(results) == {"numba", "numpy"}
    np.testing.assert_allclose(results["numba"], results["numpy"], rtol=0, atol=1e-12)
