"""Martin kernel limits and the closed-form harmonic families.

The directional limits of the Martin kernel (reference state at the origin)
yield three families of positive harmonic functions for the oblique Neumann
problem: a saddle family indexed by the direction angle, the single
pole-driven exponential ``exp(thetaTilde^p . x)`` and the constant function.
Harmonicity (``L h = 0`` inside, ``R . grad h = 0`` on the abscissa) is
verified numerically by finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional, Tuple

from .asympt import saddle
from .errors import (
    AlphaOutOfRange,
    FamilyUnavailable,
    NotImplementedForPositiveDrift,
)
from .model import DriftSign, NormalizedModel, geometry, theta2_branches

__all__ = [
    "Family",
    "HarmonicFunction",
    "martin_limit",
    "harmonic",
    "check_harmonicity",
    "HarmonicityReport",
]


class Family(Enum):
    SADDLE = "SaddleFamily"
    POLE = "PoleFamily"
    CONSTANT = "ConstantFamily"


@dataclass(frozen=True)
class HarmonicFunction:
    family: Family
    alpha: Optional[float]
    fn: Callable[[float, float], float]

    def __call__(self, x1: float, x2: float) -> float:
        return self.fn(x1, x2)


@dataclass(frozen=True)
class HarmonicityReport:
    interior_residual: float
    boundary_residual: float
    max_abs_h: float


def _require_negative_drift(model: NormalizedModel) -> None:
    if model.drift_sign is not DriftSign.MU2_NEGATIVE:
        raise NotImplementedForPositiveDrift(
            "Martin kernel limits are established for mu2 < 0"
        )


def _saddle_value(model: NormalizedModel, alpha: float, x1: float, x2: float) -> float:
    sd = saddle(model, alpha)
    r = model.r
    ta1, ta2 = sd.theta_alpha
    tt1, tt2 = sd.theta_alpha_tilde
    r_dot_ta = r * ta1 + ta2
    r_dot_tt = r * tt1 + tt2
    return (
        r_dot_ta * math.exp(tt1 * x1 + tt2 * x2)
        - r_dot_tt * math.exp(ta1 * x1 + ta2 * x2)
    ) / (ta2 - tt2)


def _pole_exponent(model: NormalizedModel) -> Tuple[float, float]:
    geo = geometry(model)
    if geo.pole_p is None or geo.alpha1 <= 0.0:
        raise FamilyUnavailable("the pole family requires R . theta^+ > 0")
    _, th2m = theta2_branches(model, geo.pole_p)
    return geo.pole_p, th2m.real


def martin_limit(model: NormalizedModel, alpha: float, x) -> float:
    """Limit of the Martin kernel along direction ``alpha`` at state ``x``."""
    _require_negative_drift(model)
    if not 0.0 < alpha < math.pi:
        raise AlphaOutOfRange(f"alpha = {alpha} must lie in (0, pi)")
    x1, x2 = float(x[0]), float(x[1])
    geo = geometry(model)
    if alpha >= geo.alpha0:
        return 1.0
    if geo.alpha1 > 0.0 and alpha <= geo.alpha1:
        tp1, tp2 = _pole_exponent(model)
        return math.exp(tp1 * x1 + tp2 * x2)
    return _saddle_value(model, alpha, x1, x2)


def harmonic(
    model: NormalizedModel,
    family: Family,
    alpha: Optional[float] = None,
) -> HarmonicFunction:
    """Closed-form member of one of the three harmonic families."""
    _require_negative_drift(model)
    if family is Family.CONSTANT:
        return HarmonicFunction(family, None, lambda x1, x2: 1.0)
    if family is Family.POLE:
        tp1, tp2 = _pole_exponent(model)
        return HarmonicFunction(
            family, None, lambda x1, x2: math.exp(tp1 * x1 + tp2 * x2)
        )
    if alpha is None:
        raise AlphaOutOfRange("the saddle family needs a direction angle")
    geo = geometry(model)
    if not max(geo.alpha1, 0.0) < alpha < geo.alpha0:
        raise AlphaOutOfRange(
            f"saddle family needs alpha in ({max(geo.alpha1, 0.0)}, {geo.alpha0})"
        )
    return HarmonicFunction(
        family, alpha, lambda x1, x2: _saddle_value(model, alpha, x1, x2)
    )


def check_harmonicity(
    model: NormalizedModel,
    h: HarmonicFunction,
    interior_points: Iterable[Tuple[float, float]],
    boundary_points: Iterable[Tuple[float, float]] = (),
    fd_step: float = 1e-3,
) -> HarmonicityReport:
    """Finite-difference residuals of the generator and oblique conditions.

    Interior: ``|0.5 * Lap h + mu . grad h|`` from the 5-point Laplacian and
    central gradients, Richardson-extrapolated over steps ``d`` and ``d/2``
    so the reported residual reflects the function rather than the stencil.
    Boundary: ``|r * d1 h + d2 h|`` with a second-order one-sided vertical
    derivative.
    """
    mu1, mu2, r = model.mu1, model.mu2, model.r

    def generator_residual(x1: float, x2: float, d: float) -> float:
        c = h(x1, x2)
        e, w = h(x1 + d, x2), h(x1 - d, x2)
        n, s = h(x1, x2 + d), h(x1, x2 - d)
        lap = (e + w + n + s - 4.0 * c) / (d * d)
        g1 = (e - w) / (2.0 * d)
        g2 = (n - s) / (2.0 * d)
        return 0.5 * lap + mu1 * g1 + mu2 * g2

    max_h = 0.0
    interior = 0.0
    for x1, x2 in interior_points:
        res_d = generator_residual(x1, x2, fd_step)
        res_h = generator_residual(x1, x2, 0.5 * fd_step)
        interior = max(interior, abs((4.0 * res_h - res_d) / 3.0))
        max_h = max(max_h, abs(h(x1, x2)))
    boundary = 0.0
    d = fd_step
    for x1, x2 in boundary_points:
        g1 = (h(x1 + d, x2) - h(x1 - d, x2)) / (2.0 * d)
        g2 = (-3.0 * h(x1, x2) + 4.0 * h(x1, x2 + d) - h(x1, x2 + 2.0 * d)) / (2.0 * d)
        boundary = max(boundary, abs(r * g1 + g2))
        max_h = max(max_h, abs(h(x1, x2)))
    return HarmonicityReport(
        interior_residual=interior,
        boundary_residual=boundary,
        max_abs_h=max_h,
    )
