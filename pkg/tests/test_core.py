from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from imcf_solitons import _kernels
from imcf_solitons.core import (PlaneCurve, Regime, RegimeKind, SolitonKind, SolitonSpec,
                                finite_diff_second, hausdorff_distance, second_differences)
from imcf_solitons.errors import EmptyCurve, IndexOutOfRange, InvalidSpec
from imcf_solitons.flow import kdtree_hausdorff


def regular_polygon(m, R=1.0):
    t = np.linspace(0, 2 * np.pi, m, endpoint=False)
    return R * np.column_stack([np.cos(t), np.sin(t)])


class TestSolitonSpec:
    def test_constructors(self):
        assert SolitonSpec.homothetic_curve(2.0).kind is SolitonKind.HOMOTHETIC_CURVE
        spec = SolitonSpec.rotational(3, 0.5)
        assert spec.is_critical
        assert not SolitonSpec.rotational(3, 0.4).is_critical

    @pytest.mark.parametrize("bad", [
        lambda: SolitonSpec.homothetic_curve(0.0),
        lambda: SolitonSpec.rotational(1, 1.0),
        lambda: SolitonSpec.rotational(2, 0.0),
        lambda: SolitonSpec.rotational(2, -1.0),
        lambda: SolitonSpec.translator((0.0, 0.0)),
    ])
    def test_rejects_invalid(self, bad):
        with pytest.raises(InvalidSpec):
            bad()


class TestPlaneCurve:
    def test_regular_polygon_curvature_is_exact(self):
        curve = PlaneCurve.from_polygon(regular_polygon(64, 2.0), closed=True)
        # counterclockwise circle: kappa = +1/R with N = T rotated +pi/2
        np.testing.assert_allclose(curve.kappa, 0.5, rtol=1e-12)
        np.testing.assert_allclose(np.einsum("ij,ij->i", curve.normal, curve.points), -2.0, rtol=1e-12)
        assert curve.length() == pytest.approx(64 * 2 * 2.0 * np.sin(np.pi / 64), rel=1e-12)

    def test_too_few_points(self):
        with pytest.raises(EmptyCurve):
            PlaneCurve.from_polygon(np.zeros((2, 2)))

    def test_subset_is_open(self):
        curve = PlaneCurve.from_polygon(regular_polygon(16), closed=True)
        part = curve.subset(2, 9)
        assert len(part) == 7 and not part.closed

    @given(st.floats(0.1, 10.0), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 2 * np.pi))
    def test_frame_is_rigid_invariant(self, R, dx, dy, rot):
        base = regular_polygon(40, R)
        c, s = math.cos(rot), math.sin(rot)
        moved = base @ np.array([[c, s], [-s, c]]) + [dx, dy]
        k0 = PlaneCurve.from_polygon(base, True).kappa
        k1 = PlaneCurve.from_polygon(moved, True).kappa
        np.testing.assert_allclose(k1, k0, rtol=1e-9)


class TestRegime:
    @pytest.mark.parametrize("regime", [
        Regime(RegimeKind.CONSTANT_CYLINDER),
        Regime(RegimeKind.BOTTLE_BETWEEN_CYLINDERS, r_bot=0.5, r_top=2.0, h1=-0.3),
        Regime(RegimeKind.CONVERGES_TO_CYLINDER, r_top=1.0),
        Regime(RegimeKind.UNBOUNDED_RADIUS),
        Regime(RegimeKind.CLOSES_TO_AXIS, h1=2.0),
        Regime(RegimeKind.MIN_AT_ORIGIN_UNBOUNDED, h1=1.4),
        Regime(RegimeKind.MAX_AT_ORIGIN_CLOSES_TO_AXIS, h1=0.7),
    ])
    def test_round_trip(self, regime):
        assert Regime.from_dict(regime.to_dict()) == regime

    @given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6), st.floats(-1e3, 1e3))
    def test_bottle_round_trip_property(self, a, b, h1):
        lo, hi = sorted((a, b))
        if lo == hi:
            return
        reg = Regime(RegimeKind.BOTTLE_BETWEEN_CYLINDERS, r_bot=lo, r_top=hi, h1=h1)
        assert Regime.from_dict(reg.to_dict()) == reg

    def test_validation(self):
        with pytest.raises(ValueError):
            Regime(RegimeKind.BOTTLE_BETWEEN_CYLINDERS, r_bot=2.0, r_top=1.0, h1=0.0)
        with pytest.raises(ValueError):
            Regime(RegimeKind.UNBOUNDED_RADIUS, h1=1.0)
        with pytest.raises(ValueError):
            Regime(RegimeKind.CLOSES_TO_AXIS)


class TestHausdorff:
    def test_known_value(self):
        a = np.array([[0.0, 0.0], [1.0, 0.0]])
        b = np.array([[0.0, 0.5], [1.0, 0.0], [3.0, 0.0]])
        assert hausdorff_distance(a, b) == pytest.approx(2.0)

    def test_empty(self):
        with pytest.raises(EmptyCurve):
            hausdorff_distance(np.zeros((0, 2)), np.zeros((3, 2)))

    @given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 10_000))
    def test_metric_properties(self, m, k, seed):
        rng = np.random.default_rng(seed)
        a, b, c = rng.normal(size=(m, 2)), rng.normal(size=(k, 2)), rng.normal(size=(7, 2))
        dab = hausdorff_distance(a, b)
        assert hausdorff_distance(a, a) == 0.0
        assert dab == pytest.approx(hausdorff_distance(b, a))
        assert dab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12
        assert dab == pytest.approx(kdtree_hausdorff(a, b), abs=1e-12)

    def test_numpy_fallback_agrees(self):
        rng = np.random.default_rng(1)
        a, b = rng.normal(size=(300, 2)), rng.normal(size=(200, 2))
        slow = max(_kernels._directed_hausdorff_numpy(a, b, 37), _kernels._directed_hausdorff_numpy(b, a, 37))
        assert slow == pytest.approx(hausdorff_distance(a, b), abs=1e-15)


class TestFiniteDifferences:
    def test_quadratic_is_exact_on_nonuniform_grid(self):
        s = np.cumsum(np.r_[0.0, np.linspace(0.1, 0.3, 20)])
        f = 3 * s**2 - s + 2
        np.testing.assert_allclose(second_differences(s, f), 6.0, rtol=1e-9)
        assert finite_diff_second(s, f, 5) == pytest.approx(6.0, rel=1e-9)

    def test_index_bounds(self):
        s = np.arange(5.0)
        with pytest.raises(IndexOutOfRange):
            finite_diff_second(s, s, 0)
        with pytest.raises(IndexOutOfRange):
            finite_diff_second(s, s, 4)
