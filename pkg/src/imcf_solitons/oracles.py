"""Independent reference computations used to cross-check the main solvers.

The bottle oracle integrates r(h) with fixed-step classical RK4 using an
algebraically rearranged right-hand side, so it shares neither the
stepper nor the formula with :func:`imcf_solitons.profile.integrate_profile`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels


@dataclass(frozen=True)
class BottleOracle:
    h1: float             # first inflection height
    r_bot: float          # r at h = -h_far
    r_top: float          # r at h = +h_far
    inflections: int      # sign changes of r'' over the whole run
    min_slope: float
    min_radius: float


def bottle_oracle(n: int, r0: float, h0: float, r0p: float,
                  step: float = 1e-5, h_far: float = 50.0) -> BottleOracle:
    """Fixed-step RK4 reference for the bottle started at (h0, r0, r0').

    Bottle tails decay faster than any power, so r(+-h_far) stands in for the
    asymptotic radii.  The inflection is taken from whichever direction
    meets it first (the forward run for data with r'' > 0 at h0 < 0).
    """
    up = _kernels.rk4_critical_graph(n, h0, r0, r0p, h_far, step)
    down = _kernels.rk4_critical_graph(n, h0, r0, r0p, -h_far, step)
    h1 = up[2] if math.isfinite(up[2]) else down[2]
    return BottleOracle(h1=float(h1), r_bot=float(down[0]), r_top=float(up[0]),
                        inflections=int(up[3] + down[3]),
                        min_slope=float(min(up[4], down[4])),
                        min_radius=float(min(up[5], down[5])))


def axis_second_derivative_exact(n: int, C: float, h0: float) -> float:
    """h''(0) = -1/(n C h0) for a profile leaving the axis perpendicularly."""
    return -1.0 / (n * C * h0)

