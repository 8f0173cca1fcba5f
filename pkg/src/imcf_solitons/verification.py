"""Integral and pointwise identity checks on closed hypersurfaces.

Closed rotational hypersurfaces are described by a sampled profile (r, h)
with first and second parameter derivatives.  With N = (-h_t, r_t)/|v| the
profile normal (inward for counterclockwise closed profiles), the principal
curvatures are the profile curvature and, with multiplicity n - 1, the
rotational curvature h_t/(r |v|).  H is their sum, so the mean curvature
vector is H N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import MeanCurvatureVanishes, NotASoliton, NotClosed


@dataclass(frozen=True, eq=False)
class RevolutionProfile:
    """Sampled profile of a rotational hypersurface in R^{n+1}.

    ``closed`` means the hypersurface is closed: either the profile is a
    closed loop (last sample repeats the first) or both ends sit on the axis
    (``axis_ends``), as for spheres and ellipsoids.
    """

    n: int
    t: np.ndarray
    r: np.ndarray
    h: np.ndarray
    r_t: np.ndarray
    h_t: np.ndarray
    r_tt: np.ndarray
    h_tt: np.ndarray
    closed: bool
    axis_ends: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        interior = slice(1, -1) if self.axis_ends else slice(None)
        if np.any(self.r[interior] <= 0):
            raise ValueError("profile radius must be positive away from axis endpoints")
        if self.closed and not self.axis_ends:
            gap = math.hypot(self.r[-1] - self.r[0], self.h[-1] - self.h[0])
            if gap > 1e-10:
                raise ValueError(f"closed profile does not return to its start (gap {gap:.3g})")
        if self.axis_ends and (abs(self.r[0]) > 1e-10 or abs(self.r[-1]) > 1e-10):
            raise ValueError("axis endpoints must have r = 0")

    @classmethod
    def sphere(cls, n: int = 2, R: float = 1.0, nodes: int = 2048) -> "RevolutionProfile":
        t = np.linspace(-0.5 * math.pi, 0.5 * math.pi, _even(nodes) + 1)
        c, s = np.cos(t), np.sin(t)
        c[0] = c[-1] = 0.0
        return cls(n, t, R * c, R * s, -R * s, R * c, -R * c, -R * s, True, True)

    @classmethod
    def ellipsoid(cls, n: int = 2, a: float = 1.0, c: float = 1.5, nodes: int = 4096) -> "RevolutionProfile":
        """Profile r = a cos t, h = c sin t (semi-axes a across, c along the axis)."""
        t = np.linspace(-0.5 * math.pi, 0.5 * math.pi, _even(nodes) + 1)
        co, si = np.cos(t), np.sin(t)
        co[0] = co[-1] = 0.0
        return cls(n, t, a * co, c * si, -a * si, c * co, -a * co, -c * si, True, True)

    @classmethod
    def torus(cls, n: int = 2, a: float = 1.0, b: float = 0.2, nodes: int = 2048) -> "RevolutionProfile":
        """Circle of radius b centred at r = a, run counterclockwise.

        H > 0 everywhere exactly when a > n b; the default b = 0.2 keeps
        that true up to n = 4.
        """
        if not 0 < b < a:
            raise ValueError("torus needs 0 < b < a")
        t = np.linspace(0.0, 2 * math.pi, _even(nodes) + 1)
        co, si = np.cos(t), np.sin(t)
        return cls(n, t, a + b * co, b * si, -b * si, b * co, -b * co, -b * si, True, False)

    def scaled(self, lam: float) -> "RevolutionProfile":
        return RevolutionProfile(self.n, self.t, lam * self.r, lam * self.h, lam * self.r_t,
                                 lam * self.h_t, lam * self.r_tt, lam * self.h_tt,
                                 self.closed, self.axis_ends)


def _even(nodes: int) -> int:
    nodes = int(nodes)
    if nodes < 2:
        raise ValueError("need at least two quadrature intervals")
    return nodes + (nodes % 2)


@dataclass(frozen=True)
class _Geometry:
    weight: np.ndarray     # r^(n-1) |v|: area element up to the sphere factor
    kappa_p: np.ndarray    # profile curvature
    kappa_r: np.ndarray    # rotational curvature (multiplicity n-1)
    H: np.ndarray
    support: np.ndarray    # <X, N>
    valid: np.ndarray      # False at axis endpoints


def _geometry(p: RevolutionProfile) -> _Geometry:
    speed = np.hypot(p.r_t, p.h_t)
    valid = p.r > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa_p = (p.r_t * p.h_tt - p.h_t * p.r_tt) / speed**3
        kappa_r = np.where(valid, p.h_t / (np.where(valid, p.r, 1.0) * speed), 0.0)
    H = kappa_p + (p.n - 1) * kappa_r
    support = (p.h * p.r_t - p.r * p.h_t) / speed
    weight = np.where(valid, p.r ** (p.n - 1) * speed, 0.0)
    return _Geometry(weight, kappa_p, kappa_r, H, support, valid)


def _require_closed(p: RevolutionProfile):
    if not p.closed:
        raise NotClosed("the identity holds on closed hypersurfaces only")


def _average(p: RevolutionProfile, g: _Geometry, integrand) -> float:
    f = np.where(g.valid, integrand * g.weight, 0.0)
    area = integrate.simpson(g.weight, x=p.t)
    return float(integrate.simpson(f, x=p.t) / area)


def minkowski_first_identity(profile: RevolutionProfile, weight: float = None) -> float:
    """Area-normalised integral of 1 + (1/n) <X, H N> (zero on closed hypersurfaces).

    ``weight`` replaces the factor 1/n, which is useful to confirm the check
    has power.
    """
    _require_closed(profile)
    g = _geometry(profile)
    w = 1.0 / profile.n if weight is None else float(weight)
    return _average(profile, g, 1.0 + w * g.H * g.support)


def second_symmetric_curvature(profile: RevolutionProfile) -> np.ndarray:
    """Normalised sigma_2 = (2/n) k_p k_r + ((n-2)/n) k_r^2."""
    g = _geometry(profile)
    n = profile.n
    return (2.0 / n) * g.kappa_p * g.kappa_r + ((n - 2.0) / n) * g.kappa_r**2


def minkowski_second_identity(profile: RevolutionProfile) -> float:
    """Area-normalised integral of H/n + (sigma_2/H) <X, H N>.

    Raises :class:`MeanCurvatureVanishes` when H changes sign or vanishes.
    """
    _require_closed(profile)
    g = _geometry(profile)
    H = g.H[g.valid]
    if np.any(H == 0) or not (np.all(H > 0) or np.all(H < 0)):
        raise MeanCurvatureVanishes("mean curvature vanishes on the profile")
    s2 = second_symmetric_curvature(profile)
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = g.H / profile.n + np.where(g.valid, s2 / g.H, 0.0) * g.H * g.support
    return _average(profile, g, integrand)


def compact_soliton_constant_check(profile: RevolutionProfile, strict: bool = True) -> tuple:
    """(max deviation, area mean) of q = -H <X, N> over the profile.

    A closed expander has q = 1/C constant, and the Minkowski identity then
    forces 1/C = n.  With ``strict`` a sign violation of q raises
    :class:`NotASoliton`; otherwise the (large) deviation is returned.
    """
    _require_closed(profile)
    g = _geometry(profile)
    q = -g.H * g.support
    qv = q[g.valid]
    if strict and (np.any(g.H[g.valid] == 0) or np.any(qv <= 0)):
        raise NotASoliton("-H <X, N> is not positive everywhere")
    mean = _average(profile, g, q)
    return float(np.max(np.abs(qv - mean))), mean


# ---------------------------------------------------------------------------
# Clifford torus


@dataclass(frozen=True, eq=False)
class TorusGrid:
    """Clifford torus (cos u, sin u, cos v, sin v)/sqrt(2) on a periodic grid."""

    resolution: int

    def __post_init__(self):
        if self.resolution < 8:
            raise ValueError("resolution must be at least 8")

    @property
    def spacing(self) -> float:
        return 2 * math.pi / self.resolution

    @property
    def params(self):
        k = np.arange(self.resolution) * self.spacing
        return np.meshgrid(k, k, indexing="ij")

    @property
    def points(self) -> np.ndarray:
        u, v = self.params
        return np.stack([np.cos(u), np.sin(u), np.cos(v), np.sin(v)], axis=-1) / math.sqrt(2.0)


def clifford_laplacian(grid: TorusGrid) -> np.ndarray:
    """Discrete Laplace-Beltrami of the embedding: metric (du^2 + dv^2)/2, so
    Delta = 2 (d_uu + d_vv), with periodic second differences."""
    X = grid.points
    d = grid.spacing
    duu = (np.roll(X, -1, axis=0) - 2 * X + np.roll(X, 1, axis=0)) / d**2
    dvv = (np.roll(X, -1, axis=1) - 2 * X + np.roll(X, 1, axis=1)) / d**2
    return 2.0 * (duu + dvv)


def clifford_expander_residual(grid: TorusGrid) -> float:
    """max | -H/|H|^2 - X/2 | with H the discrete Laplacian of the embedding.

    The torus lies in the unit sphere, so its position vector is already
    normal and X^perp = X.
    """
    H = clifford_laplacian(grid)
    velocity = -H / np.sum(H * H, axis=-1, keepdims=True)
    return float(np.max(np.linalg.norm(velocity - 0.5 * grid.points, axis=-1)))


def clifford_mean_curvature_norm(grid: TorusGrid) -> np.ndarray:
    """|H| from the exact Laplacian 2 (d_uu + d_vv) X = -2 X."""
    X = grid.points
    exact = 2.0 * (-np.concatenate([X[..., :2], np.zeros_like(X[..., 2:])], axis=-1)
                   - np.concatenate([np.zeros_like(X[..., :2]), X[..., 2:]], axis=-1))
    return np.linalg.norm(exact, axis=-1)
