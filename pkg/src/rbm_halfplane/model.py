"""Problem parameters, normalization and kernel geometry.

The process is an obliquely reflected Brownian motion in the upper half-plane
with drift ``mu``, reflection vector ``R = (r, 1)`` and covariance ``sigma``.
Everything downstream works on the identity-covariance normalization; this
module owns the change of coordinates and the circle/line geometry of the
kernel ``Q(theta) = |theta|^2/2 + mu . theta``.

Conventions fixed here and used everywhere else:

* ``sqrt`` is the principal square root, cut on ``(-inf, 0]``, ``sqrt(1) = 1``.
* The two kernel roots ``Theta2^{+/-}(theta1) = -mu2 +/- sqrt(|mu|^2 -
  (theta1 + mu1)^2)`` are analytic on the plane cut along
  ``(-inf, theta1m] u [theta1p_branch, inf)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .errors import (
    AlphaOutOfRange,
    BadCovariance,
    BadStart,
    NotTransient,
    OnBranchCut,
)

__all__ = [
    "DriftSign",
    "ModelParams",
    "NormalizedModel",
    "KernelGeometry",
    "validate_and_normalize",
    "kernel_q",
    "theta2_branches",
    "geometry",
]

_BRANCH_TOL = 0.0  # strict: only exactly-real points outside the cut interval
DEGENERACY_TOL = 1e-12  # relative snap for R . theta^{+/-} = 0


class DriftSign(Enum):
    MU2_NEGATIVE = "Mu2Negative"
    MU2_ZERO = "Mu2Zero"
    MU2_POSITIVE = "Mu2Positive"


@dataclass(frozen=True)
class ModelParams:
    """Raw problem instance (possibly anisotropic covariance)."""

    mu: Tuple[float, float]
    r: float
    sigma: Tuple[Tuple[float, float], Tuple[float, float]] = ((1.0, 0.0), (0.0, 1.0))
    x: Tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class NormalizedModel:
    """Identity-covariance instance.

    ``x`` is the starting point expressed in the normalized coordinates
    (``T @ x_raw``); the raw starting point and the normalizing map are kept
    so densities can be transported back to the original frame.
    """

    mu: Tuple[float, float]
    r: float
    drift_sign: DriftSign
    x: Tuple[float, float]
    x_raw: Tuple[float, float]
    T: Tuple[Tuple[float, float], Tuple[float, float]]
    detT: float

    @property
    def mu1(self) -> float:
        return self.mu[0]

    @property
    def mu2(self) -> float:
        return self.mu[1]

    @property
    def m(self) -> float:
        """Drift norm ``|mu|``."""
        return math.hypot(self.mu[0], self.mu[1])

    @property
    def reflection(self) -> Tuple[float, float]:
        return (self.r, 1.0)

    def to_normalized_coords(self, z) -> np.ndarray:
        return np.asarray(self.T, dtype=float) @ np.asarray(z, dtype=float)


@dataclass(frozen=True)
class KernelGeometry:
    """Branch points, pole candidates and the regime angles."""

    theta1_minus: float
    theta1_plus: float
    theta_plus: Tuple[float, float]
    pole_p: Optional[float]
    pole_zero: Optional[float]
    m: float
    alpha_mu: float
    alpha_r: float
    alpha0: float
    alpha1: float
    r_dot_theta_plus: float = field(default=0.0)
    r_dot_theta_minus: float = field(default=0.0)


def _check_covariance(sigma: np.ndarray) -> None:
    if sigma.shape != (2, 2):
        raise BadCovariance("covariance must be 2x2")
    if not np.all(np.isfinite(sigma)):
        raise BadCovariance("covariance entries must be finite")
    if abs(sigma[0, 1] - sigma[1, 0]) > 1e-12 * max(1.0, abs(sigma[0, 1])):
        raise BadCovariance("covariance must be symmetric")
    if sigma[0, 0] <= 0.0 or sigma[1, 1] <= 0.0:
        raise BadCovariance("covariance diagonal must be positive")
    if np.linalg.det(sigma) <= 0.0:
        raise BadCovariance("covariance must be positive definite")


def normalizing_map(sigma: np.ndarray) -> np.ndarray:
    """Boundary-preserving linear map ``T`` with ``T sigma T^T = Id``.

    ``T`` is upper triangular with positive diagonal, so the half-plane
    ``{z2 >= 0}`` maps to itself and ``det T = 1/sqrt(det sigma)``.
    """
    det = float(np.linalg.det(sigma))
    s12, s22 = float(sigma[0, 1]), float(sigma[1, 1])
    t11 = math.sqrt(s22 / det)
    t12 = -s12 / math.sqrt(s22 * det)
    t22 = 1.0 / math.sqrt(s22)
    return np.array([[t11, t12], [0.0, t22]])


def validate_and_normalize(params: ModelParams) -> NormalizedModel:
    """Validate a raw instance and map it to identity covariance.

    Raises :class:`BadCovariance`, :class:`BadStart` or :class:`NotTransient`
    (the transience inequality is strict and checked after normalization).
    """
    sigma = np.asarray(params.sigma, dtype=float)
    _check_covariance(sigma)
    x_raw = np.asarray(params.x, dtype=float)
    if x_raw[1] < 0.0:
        raise BadStart(f"x2 = {x_raw[1]} must be >= 0")

    T = normalizing_map(sigma)
    mu = T @ np.asarray(params.mu, dtype=float)
    s22 = float(sigma[1, 1])
    refl = math.sqrt(s22) * (T @ np.array([params.r, 1.0]))
    if abs(refl[1] - 1.0) > 1e-12:
        raise BadCovariance("normalization failed to produce R2 = 1")
    r = float(refl[0])
    x = T @ x_raw

    mu1, mu2 = float(mu[0]), float(mu[1])
    mu2_minus = max(-mu2, 0.0)
    if not mu1 + r * mu2_minus < 0.0:
        raise NotTransient(
            f"mu1 + r*mu2^- = {mu1 + r * mu2_minus:.6g} must be < 0 "
            "(after normalization)"
        )
    if mu2 < 0.0:
        sign = DriftSign.MU2_NEGATIVE
    elif mu2 > 0.0:
        sign = DriftSign.MU2_POSITIVE
    else:
        sign = DriftSign.MU2_ZERO
    return NormalizedModel(
        mu=(mu1, mu2),
        r=r,
        drift_sign=sign,
        x=(float(x[0]), float(x[1])),
        x_raw=(float(x_raw[0]), float(x_raw[1])),
        T=(
            (float(T[0, 0]), float(T[0, 1])),
            (float(T[1, 0]), float(T[1, 1])),
        ),
        detT=float(np.linalg.det(T)),
    )


def kernel_q(model: NormalizedModel, theta) -> complex:
    """Levy exponent ``Q(theta) = (theta1^2 + theta2^2)/2 + mu . theta``."""
    t1, t2 = complex(theta[0]), complex(theta[1])
    return 0.5 * (t1 * t1 + t2 * t2) + model.mu1 * t1 + model.mu2 * t2


def _on_cut(model: NormalizedModel, theta1: complex) -> bool:
    if theta1.imag != 0.0:
        return False
    m = model.m
    t1m = -model.mu1 - m
    t1p = -model.mu1 + m
    return theta1.real < t1m or theta1.real > t1p


def theta2_branches(model: NormalizedModel, theta1) -> Tuple[complex, complex]:
    """Both roots ``(Theta2^+, Theta2^-)`` of ``Q(theta1, .) = 0``.

    Raises :class:`OnBranchCut` for real ``theta1`` strictly outside the
    branch-point interval.
    """
    t1 = complex(theta1)
    if _on_cut(model, t1):
        raise OnBranchCut(f"theta1 = {theta1} lies on a branch cut")
    disc = model.m**2 - (t1 + model.mu1) ** 2
    root = cmath.sqrt(disc)
    return (-model.mu2 + root, -model.mu2 - root)


def theta2_branches_array(model: NormalizedModel, theta1: np.ndarray):
    """Vectorized branches for quadrature; no cut checking."""
    t1 = np.asarray(theta1, dtype=complex)
    root = np.sqrt(model.m**2 - (t1 + model.mu1) ** 2 + 0j)
    return -model.mu2 + root, -model.mu2 - root


def theta1_pole_candidate(model: NormalizedModel) -> float:
    """First coordinate of the circle/line intersection ``theta1^p``."""
    return 2.0 * (model.r * model.mu2 - model.mu1) / (model.r**2 + 1.0)


def saddle_theta1(model: NormalizedModel, alpha: float) -> float:
    """Abscissa of the saddle point of ``S`` in direction ``alpha``."""
    if not 0.0 < alpha < math.pi:
        raise AlphaOutOfRange(f"alpha = {alpha} must lie in (0, pi)")
    return -model.mu1 + math.cos(alpha) * model.m


def geometry(model: NormalizedModel) -> KernelGeometry:
    """Read the circle/line picture off the normalized parameters."""
    m = model.m
    mu1, mu2, r = model.mu1, model.mu2, model.r
    t1m = -mu1 - m
    t1p = -mu1 + m
    r_dot_tp = r * t1p - mu2  # R . theta^+ with theta^+ = (theta1^+, -mu2)
    r_dot_tm = r * t1m - mu2
    # R . theta^+ = 0 is a structurally distinct (degenerate) case; the
    # comparison must tolerate rounding in r * theta1^+.
    tol = DEGENERACY_TOL * max(1.0, abs(r) * max(abs(t1p), abs(t1m)), abs(mu2))
    if abs(r_dot_tp) <= tol:
        r_dot_tp = 0.0
    if abs(r_dot_tm) <= tol:
        r_dot_tm = 0.0

    pole_zero = 0.0 if mu2 < 0.0 else None
    if mu2 < 0.0:
        has_pole = r_dot_tp > 0.0
    else:
        has_pole = r_dot_tp > 0.0 or r_dot_tm > 0.0
    pole_p = theta1_pole_candidate(model) if has_pole else None

    alpha_mu = math.atan2(-mu2, -mu1)
    alpha_r = math.atan2(1.0, r)
    alpha0 = math.pi - alpha_mu
    alpha1 = math.pi + alpha_mu - 2.0 * alpha_r
    return KernelGeometry(
        theta1_minus=t1m,
        theta1_plus=t1p,
        theta_plus=(t1p, -mu2),
        pole_p=pole_p,
        pole_zero=pole_zero,
        m=m,
        alpha_mu=alpha_mu,
        alpha_r=alpha_r,
        alpha0=alpha0,
        alpha1=alpha1,
        r_dot_theta_plus=r_dot_tp,
        r_dot_theta_minus=r_dot_tm,
    )
