"""Directional asymptotics of the occupancy density.

For ``z = rho * (cos alpha, sin alpha)`` the density obeys
``pi(rho, alpha) ~ a * rho^b * exp(-c * rho)`` where the dominant
contribution comes from either the saddle point of the phase
``S(theta1) = theta1 cos(alpha) + Theta2^+(theta1) sin(alpha)`` or from one
of the poles of the boundary MGF crossed while moving the contour, with the
prefactor halved at exact pole/saddle coincidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .boundary import residue_at_pole_p, residue_at_zero
from .errors import AlphaOutOfRange
from .model import (
    DriftSign,
    KernelGeometry,
    NormalizedModel,
    geometry,
    saddle_theta1,
    theta2_branches,
)

__all__ = [
    "SaddleData",
    "RegimeTag",
    "Regime",
    "AsymptoticLaw",
    "saddle",
    "classify",
    "law",
    "angle_thresholds",
    "DEFAULT_COINCIDE_TOL",
]

DEFAULT_COINCIDE_TOL = 1e-9  # relative to theta1^+
_ALPHA_CLAMP = 1e-6


class RegimeTag(Enum):
    SADDLE = "Saddle"
    POLE_P = "PoleP"
    POLE_ZERO = "PoleZero"
    COINCIDENCE_P = "CoincidenceP"
    COINCIDENCE_ZERO = "CoincidenceZero"
    A3_SADDLE = "A3Saddle"
    A3_POLE = "A3Pole"


@dataclass(frozen=True)
class SaddleData:
    alpha: float
    theta_alpha: Tuple[float, float]
    theta_alpha_tilde: Tuple[float, float]
    s_second: float
    exponent: float


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    theta1_alpha: float
    theta1_p: Optional[float]
    r_dot_theta_plus: float
    r_dot_theta_minus: float


@dataclass(frozen=True)
class AsymptoticLaw:
    prefactor: float
    power: float
    rate: float
    regime: Regime

    def evaluate(self, rho: float) -> float:
        return self.prefactor * rho**self.power * math.exp(-self.rate * rho)


def _check_alpha(alpha: float) -> None:
    if not _ALPHA_CLAMP <= alpha <= math.pi - _ALPHA_CLAMP:
        raise AlphaOutOfRange(
            f"alpha = {alpha} must lie in [{_ALPHA_CLAMP}, pi - {_ALPHA_CLAMP}]"
        )


def saddle(model: NormalizedModel, alpha: float) -> SaddleData:
    """Saddle point of the phase in direction ``alpha``.

    ``S''`` comes from the closed form ``-1 / (|mu| sin^2 alpha)``; the
    finite-difference cross-check lives in the tests.
    """
    _check_alpha(alpha)
    m = model.m
    t1a = saddle_theta1(model, alpha)
    sin_a = math.sin(alpha)
    th2p = -model.mu2 + m * sin_a
    th2m = -model.mu2 - m * sin_a
    exponent = -(model.mu1 * math.cos(alpha) + model.mu2 * sin_a) + m
    return SaddleData(
        alpha=alpha,
        theta_alpha=(t1a, th2p),
        theta_alpha_tilde=(t1a, th2m),
        s_second=-1.0 / (m * sin_a * sin_a),
        exponent=exponent,
    )


def classify(
    model: NormalizedModel,
    alpha: float,
    tol_coincide: float = DEFAULT_COINCIDE_TOL,
) -> Regime:
    """Which singularity dominates the contour-shift in direction ``alpha``."""
    _check_alpha(alpha)
    geo = geometry(model)
    t1a = saddle_theta1(model, alpha)
    tol = tol_coincide * geo.theta1_plus

    def regime(tag: RegimeTag) -> Regime:
        return Regime(
            tag=tag,
            theta1_alpha=t1a,
            theta1_p=geo.pole_p,
            r_dot_theta_plus=geo.r_dot_theta_plus,
            r_dot_theta_minus=geo.r_dot_theta_minus,
        )

    if model.drift_sign is DriftSign.MU2_NEGATIVE:
        if abs(t1a) <= tol:
            return regime(RegimeTag.COINCIDENCE_ZERO)
        if t1a < 0.0:
            return regime(RegimeTag.POLE_ZERO)
        if geo.pole_p is not None:
            if abs(t1a - geo.pole_p) <= tol:
                return regime(RegimeTag.COINCIDENCE_P)
            if t1a > geo.pole_p:
                return regime(RegimeTag.POLE_P)
        return regime(RegimeTag.SADDLE)

    # mu2 >= 0: no pole at zero; a pole (positive or negative theta1^p)
    # is crossed only when the saddle abscissa lies beyond it.
    if geo.pole_p is not None:
        tp = geo.pole_p
        if abs(t1a - tp) <= tol:
            return regime(RegimeTag.COINCIDENCE_P)
        if (tp > 0.0 and t1a > tp) or (tp < 0.0 and t1a < tp):
            return regime(RegimeTag.A3_POLE)
    return regime(RegimeTag.A3_SADDLE)


def _saddle_prefactor(model: NormalizedModel, sd: SaddleData) -> float:
    """``C1(x)`` from the steepest-descent leading term."""
    r = model.r
    x1, x2 = model.x
    ta1, ta2 = sd.theta_alpha
    tt1, tt2 = sd.theta_alpha_tilde
    r_dot_ta = r * ta1 + ta2
    r_dot_tt = r * tt1 + tt2
    bracket = (
        math.exp(ta1 * x1 + ta2 * x2)
        - (r_dot_ta / r_dot_tt) * math.exp(tt1 * x1 + tt2 * x2)
    ) / (ta2 - tt2)
    return math.sqrt(-2.0 / (math.pi * sd.s_second)) * bracket


def _pole_p_constant(model: NormalizedModel, geo: KernelGeometry) -> Tuple[float, float, float]:
    """(C2(x), theta2^p, sign-resolved residue factor) for the pole regime."""
    tp = geo.pole_p
    assert tp is not None
    th2p_at_p, _ = theta2_branches(model, tp)
    res = residue_at_pole_p(model)
    # Crossing to the right of the contour picks up -2*Res; crossing to the
    # left (negative pole, mu2 > 0) picks up +2*Res.
    c2 = -2.0 * res if tp > 0.0 else 2.0 * res
    return c2, th2p_at_p.real, res


def law(
    model: NormalizedModel,
    alpha: float,
    tol_coincide: float = DEFAULT_COINCIDE_TOL,
) -> AsymptoticLaw:
    """Complete asymptotic law ``(a, b, c)`` in direction ``alpha``."""
    reg = classify(model, alpha, tol_coincide)
    geo = geometry(model)
    sd = saddle(model, alpha)
    cos_a, sin_a = math.cos(alpha), math.sin(alpha)

    if reg.tag in (RegimeTag.SADDLE, RegimeTag.A3_SADDLE):
        return AsymptoticLaw(
            prefactor=_saddle_prefactor(model, sd),
            power=-0.5,
            rate=sd.exponent,
            regime=reg,
        )
    if reg.tag in (RegimeTag.POLE_P, RegimeTag.COINCIDENCE_P, RegimeTag.A3_POLE):
        c2, th2p_at_p, _ = _pole_p_constant(model, geo)
        if reg.tag is RegimeTag.COINCIDENCE_P:
            c2 *= 0.5
        assert geo.pole_p is not None
        return AsymptoticLaw(
            prefactor=c2,
            power=0.0,
            rate=geo.pole_p * cos_a + th2p_at_p * sin_a,
            regime=reg,
        )
    # PoleZero / CoincidenceZero: theta^0 = (0, -2 mu2), C3 = 2 Res_0(g).
    c3 = 2.0 * residue_at_zero(model)
    if reg.tag is RegimeTag.COINCIDENCE_ZERO:
        c3 *= 0.5
    return AsymptoticLaw(
        prefactor=c3,
        power=0.0,
        rate=-2.0 * model.mu2 * sin_a,
        regime=reg,
    )


def angle_thresholds(model: NormalizedModel) -> Tuple[float, float]:
    """Regime switch angles ``(alpha1, alpha0)`` for ``mu2 < 0``."""
    if model.drift_sign is not DriftSign.MU2_NEGATIVE:
        raise AlphaOutOfRange("angle thresholds are defined for mu2 < 0 only")
    geo = geometry(model)
    return geo.alpha1, geo.alpha0
