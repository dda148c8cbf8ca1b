"""Exception hierarchy for the half-plane RBM toolkit."""


class RbmError(Exception):
    """Base class for all package errors."""


class NotTransient(RbmError):
    """The drift/reflection pair does not push the process to the left."""


class BadCovariance(RbmError):
    """Covariance matrix is not symmetric positive definite."""


class BadStart(RbmError):
    """Starting point lies below the abscissa."""


class OnBranchCut(RbmError):
    """Argument sits on a branch cut of the square-root kernel roots."""


class AtPole(RbmError):
    """Evaluation requested at (or too close to) a pole."""


class BoundaryTooClose(RbmError):
    """Density evaluation requested too close to the abscissa."""


class NoConvergence(RbmError):
    """Adaptive quadrature exhausted its node budget."""


class BudgetExceeded(RbmError):
    """All Monte Carlo paths hit the time cap before exiting on the left."""


class AlphaOutOfRange(RbmError):
    """Direction angle outside the open interval (0, pi)."""


class FamilyUnavailable(RbmError):
    """The requested harmonic family does not exist for these parameters."""


class ThetaOutsideConvergence(RbmError):
    """MGF argument outside the convergence domain of the transform."""


class ZeroDriftUnsupportedDirection(RbmError):
    """Tail constant undetermined for vanishing vertical drift."""


class NotImplementedForPositiveDrift(RbmError):
    """Martin kernel limits are only available for negative vertical drift."""


class UnsupportedTailObject(RbmError):
    """No finite tail-law normalization exists for this direction/object pair."""
