"""Self-similar solutions of inverse mean curvature flow.

Closed-form plane solitons, rotational expanders from singular shooting and
bottle constructions, integral-identity checks and a polygonal curve flow.
Hot loops are compiled with numba unless ``IMCF_SOLITONS_DISABLE_NUMBA=1``.
"""

from __future__ import annotations

from ._accel import USE_NUMBA
from .core import (Chart, Event, EventTag, PlaneCurve, ProfileTrajectory, Regime, RegimeKind,
                   SolitonKind, SolitonSpec, hausdorff_distance)
from .errors import (BottleHypothesisViolated, CurvatureDegenerate, DomainError, InvariantViolation,
                     MeanCurvatureVanishes, NotASoliton, NotClosed, OutsideStatedRegime,
                     PreconditionError, SolitonError, SpanTooSmall, StepUnderflow, SupportVanishes)
from .flow import FlowState, evolve, flow_step, self_similarity_check, translator_check
from .plane import (CurvatureLawParams, HomotheticCurveParams, curvature_law_check, cycloid_translator,
                    homothetic_curve_point, homothetic_residual, sample_cycloid, sample_homothetic_curve,
                    support_function, tilted_cycloid_height_laplacian, tilted_cycloid_surface_point,
                    translator_residual)
from .profile import (AxisShot, Direction, GraphOverH, ProfileIVP, Span, SymmetricCylinder, Tolerances,
                      estimate_asymptote, integrate_profile)
from .rotational import (BottleSolution, axis_second_derivative, build_infinite_bottle,
                         classify_hypercylinder_expander, classify_hyperplane_expander,
                         divergence_form_residual, outside_barrier_monitor, shoot_from_axis,
                         soliton_residual_rotational)
from .verification import (RevolutionProfile, TorusGrid, clifford_expander_residual,
                           compact_soliton_constant_check, minkowski_first_identity,
                           minkowski_second_identity)

__version__ = "0.1.0"
