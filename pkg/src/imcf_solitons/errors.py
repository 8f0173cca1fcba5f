"""Exception types raised by the soliton library.

Every error carries an ``exit_code`` used by the command-line front end:
2 for violated preconditions, 3 for domain degeneracies, 4 for flow
breakdown and 5 for runs that were inconclusive within the integration span.
"""

from __future__ import annotations


class SolitonError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class PreconditionError(SolitonError, ValueError):
    exit_code = 2


class DomainError(SolitonError, ArithmeticError):
    exit_code = 3


class InvalidSpec(PreconditionError):
    """Soliton constants outside their admissible set (c = 0, C <= 0, ...)."""


class EmptyCurve(PreconditionError):
    pass


class IndexOutOfRange(PreconditionError, IndexError):
    pass


class SupportVanishes(DomainError):
    """The support function nu = X.N vanishes inside the requested range."""

    def __init__(self, theta: float):
        self.theta = float(theta)
        super().__init__(f"support function vanishes at theta={self.theta:.17g}")


class ZeroCurvature(DomainError):
    def __init__(self, index: int):
        self.index = int(index)
        super().__init__(f"curvature vanishes at sample {self.index}")


class CuspPoint(DomainError):
    def __init__(self, where: float):
        self.where = float(where)
        super().__init__(f"cusp of the cycloid at parameter {self.where:.17g}")


class NonpositiveRadius(DomainError):
    pass


class SupportDegenerate(DomainError):
    """The soliton quantity r*h' - h*r' vanished (profile tangent through the origin)."""


class StepUnderflow(DomainError):
    def __init__(self, h: float, r: float):
        self.location = (float(h), float(r))
        super().__init__(f"adaptive step underflow at (h, r)=({h:.17g}, {r:.17g})")


class InvalidInitialData(PreconditionError):
    """Initial data outside the admissible set of the chosen start type."""


class OutsideStatedRegime(PreconditionError):
    pass


class BottleHypothesisViolated(PreconditionError):
    pass


class NotClosed(PreconditionError):
    pass


class MeanCurvatureVanishes(PreconditionError):
    pass


class NotASoliton(DomainError):
    pass


class InvariantViolation(SolitonError):
    """A structural property guaranteed by theory failed numerically."""

    exit_code = 5


class SpanTooSmall(SolitonError):
    """Classification was inconclusive; ``trajectory`` holds the partial run."""

    exit_code = 5

    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class CurvatureDegenerate(SolitonError):
    exit_code = 4

    def __init__(self, time: float, location):
        self.time = float(time)
        self.location = tuple(float(v) for v in location)
        super().__init__(
            f"curvature changes sign at t={self.time:.17g}, "
            f"point=({self.location[0]:.17g}, {self.location[1]:.17g})"
        )
