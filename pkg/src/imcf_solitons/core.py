"""Shared data model: soliton constants, sampled plane curves, rotational
profile trajectories, events and regimes, plus two small numeric helpers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import EmptyCurve, IndexOutOfRange, InvalidSpec


class SolitonKind(str, enum.Enum):
    HOMOTHETIC_CURVE = "HomotheticCurve"
    ROTATIONAL_HOMOTHETIC = "RotationalHomothetic"
    TRANSLATOR = "Translator"


@dataclass(frozen=True)
class SolitonSpec:
    """Which soliton equation a geometry is supposed to satisfy.

    Use the constructors :meth:`homothetic_curve`, :meth:`rotational` and
    :meth:`translator`; only the fields relevant to ``kind`` are set.
    """

    kind: SolitonKind
    c: Optional[float] = None
    C: Optional[float] = None
    n: Optional[int] = None
    V: Optional[tuple] = None

    def __post_init__(self):
        if self.kind is SolitonKind.HOMOTHETIC_CURVE:
            if self.c is None or not math.isfinite(self.c) or self.c == 0:
                raise InvalidSpec("homothetic curve constant c must be finite and nonzero")
        elif self.kind is SolitonKind.ROTATIONAL_HOMOTHETIC:
            if self.C is None or not (self.C > 0 and math.isfinite(self.C)):
                raise InvalidSpec("rotational soliton constant C must be positive")
            if self.n is None or int(self.n) != self.n or self.n < 2:
                raise InvalidSpec("hypersurface dimension n must be an integer >= 2")
        elif self.kind is SolitonKind.TRANSLATOR:
            if self.V is None or len(self.V) not in (2, 3):
                raise InvalidSpec("translator velocity must be a 2- or 3-vector")
            if not np.linalg.norm(np.asarray(self.V, dtype=float)) > 0:
                raise InvalidSpec("translator velocity must be nonzero")

    @classmethod
    def homothetic_curve(cls, c: float) -> "SolitonSpec":
        return cls(SolitonKind.HOMOTHETIC_CURVE, c=float(c))

    @classmethod
    def rotational(cls, n: int, C: float) -> "SolitonSpec":
        return cls(SolitonKind.ROTATIONAL_HOMOTHETIC, C=float(C), n=int(n))

    @classmethod
    def translator(cls, V) -> "SolitonSpec":
        return cls(SolitonKind.TRANSLATOR, V=tuple(float(v) for v in V))

    @property
    def is_critical(self) -> bool:
        """C equals 1/(n-1) to 1e-12 relative (the cylinder constant)."""
        return abs(self.C * (self.n - 1) - 1.0) <= 1e-12


@dataclass(frozen=True, eq=False)
class PlaneCurve:
    """Ordered samples of a planar curve with a Frenet frame.

    ``normal`` is ``tangent`` rotated by +pi/2 and ``kappa`` is the signed
    curvature d(theta)/ds with respect to that normal.  Arrays are treated as
    read-only.
    """

    s: np.ndarray
    theta: np.ndarray
    points: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    kappa: np.ndarray
    closed: bool = False

    def __post_init__(self):
        m = len(self.s)
        if m == 0:
            raise EmptyCurve("a plane curve needs at least one sample")
        for name in ("theta", "kappa"):
            if getattr(self, name).shape != (m,):
                raise ValueError(f"{name} must have shape ({m},)")
        for name in ("points", "tangent", "normal"):
            if getattr(self, name).shape != (m, 2):
                raise ValueError(f"{name} must have shape ({m}, 2)")
        if m > 1 and not np.all(np.diff(self.s) > 0):
            raise ValueError("arc length must be strictly increasing")

    def __len__(self) -> int:
        return len(self.s)

    @classmethod
    def from_polygon(cls, points, closed: bool = False) -> "PlaneCurve":
        """Frame a polygon with 3-point finite differences."""
        pts = np.ascontiguousarray(points, dtype=np.float64)
        m = pts.shape[0]
        if m < 3:
            raise EmptyCurve("a polygon needs at least three vertices")
        tangent = np.empty((m, 2))
        normal = np.empty((m, 2))
        kappa = np.empty(m)
        ds = np.empty(m)
        _kernels.polygon_frame(pts, bool(closed), tangent, normal, kappa, ds)
        edges = np.hypot(*np.diff(pts, axis=0).T)
        s = np.concatenate(([0.0], np.cumsum(edges)))
        theta = np.unwrap(np.arctan2(tangent[:, 1], tangent[:, 0]))
        return cls(s, theta, pts, tangent, normal, kappa, bool(closed))

    def length(self) -> float:
        if self.closed:
            return float(self.s[-1] + np.linalg.norm(self.points[0] - self.points[-1]))
        return float(self.s[-1] - self.s[0])

    def subset(self, start: int, stop: int) -> "PlaneCurve":
        sl = slice(start, stop)
        return PlaneCurve(self.s[sl], self.theta[sl], self.points[sl],
                          self.tangent[sl], self.normal[sl], self.kappa[sl], False)


class EventTag(str, enum.Enum):
    INFLECTION = "Inflection"
    CHART_SWITCH = "ChartSwitch"
    AXIS_APPROACH = "AxisApproach"
    DERIVATIVE_BLOW_UP = "DerivativeBlowUp"
    ASYMPTOTE_DETECTED = "AsymptoteDetected"
    MAX_SPAN_REACHED = "MaxSpanReached"


@dataclass(frozen=True)
class Event:
    tag: EventTag
    h: float
    r: float
    data: Optional[float] = None

    @property
    def location(self) -> tuple:
        return (self.h, self.r)

    def to_dict(self) -> dict:
        return {"tag": self.tag.value, "h": self.h, "r": self.r, "data": self.data}


class Chart(str, enum.Enum):
    GRAPH_OVER_H = "GraphOverH"
    GRAPH_OVER_R = "GraphOverR"
    ARC_LENGTH = "ArcLength"


CHART_BY_ID = (Chart.GRAPH_OVER_H, Chart.GRAPH_OVER_R, Chart.ARC_LENGTH)


@dataclass(frozen=True)
class ChartInterval:
    chart: Chart
    start: int
    stop: int  # exclusive sample index


@dataclass(frozen=True, eq=False)
class ProfileTrajectory:
    """Samples of a rotational profile curve (r, h).

    ``dr_dh`` and ``d2r_dh2`` describe the curve as a graph r(h) (they are
    infinite where the tangent is horizontal in the (r, h) plane).  ``velocity``
    and ``acceleration`` hold (r', h') and (r'', h'') with respect to the
    parameter of the chart active at each sample, so every sample can be
    evaluated without singular divisions.
    """

    spec: SolitonSpec
    h: np.ndarray
    r: np.ndarray
    dr_dh: np.ndarray
    d2r_dh2: np.ndarray
    chart: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    events: tuple = ()
    chart_log: tuple = ()

    def __post_init__(self):
        if np.any(self.r <= 0):
            raise ValueError("profile radius must stay positive")

    def __len__(self) -> int:
        return len(self.h)

    @classmethod
    def from_graph(cls, spec: SolitonSpec, h, r, rp, rpp, events=()) -> "ProfileTrajectory":
        """Wrap samples of a graph r(h) (e.g. an exact solution)."""
        h, r, rp, rpp = (np.asarray(a, dtype=float) for a in (h, r, rp, rpp))
        vel = np.column_stack([rp, np.ones_like(h)])
        acc = np.column_stack([rpp, np.zeros_like(h)])
        chart = np.zeros(len(h), dtype=np.int64)
        log = (ChartInterval(Chart.GRAPH_OVER_H, 0, len(h)),)
        return cls(spec, h, r, rp, rpp, chart, vel, acc, tuple(events), log)

    @classmethod
    def from_parametric(cls, spec: SolitonSpec, r, h, r_t, h_t, r_tt, h_tt) -> "ProfileTrajectory":
        """Wrap samples of a parametrised profile t -> (r(t), h(t))."""
        r, h, r_t, h_t, r_tt, h_tt = (np.asarray(a, dtype=float) for a in (r, h, r_t, h_t, r_tt, h_tt))
        with np.errstate(divide="ignore", invalid="ignore"):
            rp = r_t / h_t
            rpp = (r_tt * h_t - r_t * h_tt) / h_t**3
        chart = np.full(len(h), 2, dtype=np.int64)
        log = (ChartInterval(Chart.ARC_LENGTH, 0, len(h)),)
        return cls(spec, h, r, rp, rpp, chart, np.column_stack([r_t, h_t]),
                   np.column_stack([r_tt, h_tt]), (), log)

    def events_tagged(self, tag: EventTag) -> list:
        return [e for e in self.events if e.tag is tag]

    def r_at(self, hq) -> np.ndarray:
        """Cubic Hermite interpolation of r(h) on graph-chart samples."""
        hq = np.atleast_1d(np.asarray(hq, dtype=float))
        ok = np.isfinite(self.dr_dh)
        h, r, p = self.h[ok], self.r[ok], self.dr_dh[ok]
        order = np.argsort(h)
        h, r, p = h[order], r[order], p[order]
        if np.any(np.diff(h) <= 0):
            raise ValueError("r(h) interpolation needs strictly monotone h samples")
        if np.any((hq < h[0]) | (hq > h[-1])):
            raise ValueError("query outside the sampled h-range")
        i = np.clip(np.searchsorted(h, hq) - 1, 0, len(h) - 2)
        d = h[i + 1] - h[i]
        t = (hq - h[i]) / d
        t2, t3 = t * t, t * t * t
        return ((2 * t3 - 3 * t2 + 1) * r[i] + (t3 - 2 * t2 + t) * d * p[i]
                + (-2 * t3 + 3 * t2) * r[i + 1] + (t3 - t2) * d * p[i + 1])


class RegimeKind(str, enum.Enum):
    CONSTANT_CYLINDER = "ConstantCylinder"
    BOTTLE_BETWEEN_CYLINDERS = "BottleBetweenCylinders"
    CONVERGES_TO_CYLINDER = "ConvergesToCylinder"
    UNBOUNDED_RADIUS = "UnboundedRadius"
    CLOSES_TO_AXIS = "ClosesToAxis"
    MIN_AT_ORIGIN_UNBOUNDED = "MinAtOriginUnbounded"
    MAX_AT_ORIGIN_CLOSES_TO_AXIS = "MaxAtOriginClosesToAxis"


_REGIME_FIELDS = {
    RegimeKind.CONSTANT_CYLINDER: (),
    RegimeKind.BOTTLE_BETWEEN_CYLINDERS: ("r_bot", "r_top", "h1"),
    RegimeKind.CONVERGES_TO_CYLINDER: ("r_top",),
    RegimeKind.UNBOUNDED_RADIUS: (),
    RegimeKind.CLOSES_TO_AXIS: ("h1",),
    RegimeKind.MIN_AT_ORIGIN_UNBOUNDED: ("h1",),
    RegimeKind.MAX_AT_ORIGIN_CLOSES_TO_AXIS: ("h1",),
}


@dataclass(frozen=True)
class Regime:
    """Qualitative behaviour of a rotational profile, with its landmarks."""

    kind: RegimeKind
    r_bot: Optional[float] = None
    r_top: Optional[float] = None
    h1: Optional[float] = None

    def __post_init__(self):
        wanted = _REGIME_FIELDS[self.kind]
        for name in ("r_bot", "r_top", "h1"):
            value = getattr(self, name)
            if name in wanted:
                if value is None or not math.isfinite(value):
                    raise ValueError(f"{self.kind.value} requires a finite {name}")
                if name != "h1" and value <= 0:
                    raise ValueError(f"{name} must be positive")
            elif value is not None:
                raise ValueError(f"{self.kind.value} does not carry {name}")
        if self.kind is RegimeKind.BOTTLE_BETWEEN_CYLINDERS and not self.r_bot < self.r_top:
            raise ValueError("a bottle needs r_bot < r_top")

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        for name in _REGIME_FIELDS[self.kind]:
            out[name] = getattr(self, name)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Regime":
        kind = RegimeKind(data["kind"])
        return cls(kind, **{k: float(data[k]) for k in _REGIME_FIELDS[kind]})


def hausdorff_distance(a, b) -> float:
    """Symmetric Hausdorff distance between the sample point sets of two curves.

    Accepts :class:`PlaneCurve` objects or ``(m, 2)`` point arrays.
    """
    pa = a.points if isinstance(a, PlaneCurve) else np.asarray(a, dtype=float)
    pb = b.points if isinstance(b, PlaneCurve) else np.asarray(b, dtype=float)
    if len(pa) == 0 or len(pb) == 0:
        raise EmptyCurve("Hausdorff distance of an empty curve")
    return float(_kernels.hausdorff(pa, pb))


def finite_diff_second(s_values, f_values, i: int) -> float:
    """Three-point second derivative on a nonuniform grid (exact for quadratics)."""
    s = np.asarray(s_values, dtype=float)
    f = np.asarray(f_values, dtype=float)
    if not 1 <= i <= len(s) - 2:
        raise IndexOutOfRange(f"index {i} has no three-point stencil in a grid of {len(s)}")
    h1 = s[i] - s[i - 1]
    h2 = s[i + 1] - s[i]
    if h1 <= 0 or h2 <= 0:
        raise ValueError("grid must be strictly increasing")
    return float(2.0 * (f[i - 1] / (h1 * (h1 + h2)) - f[i] / (h1 * h2)
                        + f[i + 1] / (h2 * (h1 + h2))))


def second_differences(s, f) -> np.ndarray:
    """Vectorised :func:`finite_diff_second` at every interior index."""
    s = np.asarray(s, dtype=float)
    f = np.asarray(f, dtype=float)
    h1 = s[1:-1] - s[:-2]
    h2 = s[2:] - s[1:-1]
    return 2.0 * (f[:-2] / (h1 * (h1 + h2)) - f[1:-1] / (h1 * h2) + f[2:] / (h2 * (h1 + h2)))
