"""Boundary occupancy measure: MGF, singular expansions and tail laws.

The boundary MGF is ``g(theta1) = -exp(thetaTilde(theta1) . x) /
(r*theta1 + Theta2^-(theta1))`` with ``thetaTilde(theta1) = (theta1,
Theta2^-(theta1))``; for ``x = 0`` this is ``1 / (-r*theta1 + mu2 +
sqrt(|mu|^2 - (theta1 + mu1)^2))``.  Its poles and the branch expansion at
the right branch point drive the exponential tails of the boundary measure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from .errors import AtPole, UnsupportedTailObject, ZeroDriftUnsupportedDirection
from .model import DriftSign, NormalizedModel, geometry, theta2_branches

__all__ = [
    "SingularityKind",
    "SingularityExpansion",
    "TailDirection",
    "TailObject",
    "TailLaw",
    "g_eval",
    "residues",
    "nu_tail",
]

_POLE_TOL = 1e-14

SQRT_PI = math.sqrt(math.pi)


class SingularityKind(Enum):
    SIMPLE_POLE = "SimplePole"
    SQUARE_ROOT_BRANCH = "SquareRootBranch"


@dataclass(frozen=True)
class SingularityExpansion:
    """Local behavior of ``g`` at one singular point.

    For a simple pole, ``leading_coefficient`` is the residue.  For a branch
    point it is the coefficient of ``sqrt(b - theta1)`` (generic case,
    ``inverse_root=False``) or of ``1/sqrt(b - theta1)`` (degenerate case,
    ``inverse_root=True``), measured toward the interior of the cut plane.
    """

    location: float
    kind: SingularityKind
    constant_term: float
    leading_coefficient: float
    inverse_root: bool = False


class TailDirection(Enum):
    PLUS_INFINITY = "PlusInfinity"
    MINUS_INFINITY = "MinusInfinity"


class TailObject(Enum):
    DENSITY = "Density"
    TAIL = "Tail"


@dataclass(frozen=True)
class TailLaw:
    """``nu1(z1) ~ prefactor * |z1|^power * exp(-rate*|z1|)`` in the stated
    direction (the exponential is ``exp(-rate*z1)`` at ``+inf`` and
    ``exp(rate*z1)`` at ``-inf``)."""

    direction: TailDirection
    prefactor: float
    power: float
    rate: float
    object: TailObject
    derived_by_symmetry: bool = False

    def evaluate(self, z1: float) -> float:
        if self.direction is TailDirection.PLUS_INFINITY:
            return self.prefactor * z1**self.power * math.exp(-self.rate * z1)
        return self.prefactor * (-z1) ** self.power * math.exp(self.rate * z1)


def _denominator(model: NormalizedModel, theta1: complex) -> complex:
    _, th2m = theta2_branches(model, theta1)
    return model.r * complex(theta1) + th2m


def g_eval(model: NormalizedModel, theta1) -> complex:
    """Boundary-measure MGF, meromorphically continued to the cut plane."""
    t1 = complex(theta1)
    den = _denominator(model, t1)
    if abs(den) < _POLE_TOL:
        raise AtPole(f"g has a pole near theta1 = {theta1}")
    x1, x2 = model.x
    _, th2m = theta2_branches(model, t1)
    return -cmath.exp(t1 * x1 + th2m * x2) / den


def _start_factor(model: NormalizedModel, theta1: float) -> float:
    """``exp(thetaTilde(theta1) . x)`` evaluated at a real regular point."""
    _, th2m = theta2_branches(model, theta1)
    x1, x2 = model.x
    return math.exp(theta1 * x1 + th2m.real * x2)


def residue_at_zero(model: NormalizedModel) -> float:
    """Residue of ``g`` at its pole ``theta1 = 0`` (requires ``mu2 < 0``)."""
    base = model.mu2 / (model.mu1 - model.r * model.mu2)
    return base  # thetaTilde(0) = (0, 0): the start factor is 1

def residue_at_pole_p(model: NormalizedModel) -> float:
    """Residue of ``g`` at ``theta1^p``, including the start-point factor."""
    mu1, mu2, r = model.mu1, model.mu2, model.r
    base = ((r * r - 1.0) * mu2 - 2.0 * r * mu1) / ((1.0 + r * r) * (mu1 - r * mu2))
    geo = geometry(model)
    if geo.pole_p is None:
        raise AtPole("theta1^p is not a pole for these parameters")
    return base * _start_factor(model, geo.pole_p)


def _branch_expansion(model: NormalizedModel, at_plus: bool) -> SingularityExpansion:
    geo = geometry(model)
    b = geo.theta1_plus if at_plus else geo.theta1_minus
    span = geo.theta1_plus - geo.theta1_minus
    r_dot = geo.r_dot_theta_plus if at_plus else geo.r_dot_theta_minus
    factor = math.exp(b * model.x[0] - model.mu2 * model.x[1])  # thetaTilde(b) = (b, -mu2)
    if r_dot == 0.0:
        return SingularityExpansion(
            location=b,
            kind=SingularityKind.SQUARE_ROOT_BRANCH,
            constant_term=0.0,
            leading_coefficient=factor / math.sqrt(span),
            inverse_root=True,
        )
    return SingularityExpansion(
        location=b,
        kind=SingularityKind.SQUARE_ROOT_BRANCH,
        constant_term=factor / (-r_dot),
        leading_coefficient=-factor * math.sqrt(span) / (r_dot * r_dot),
        inverse_root=False,
    )


def residues(model: NormalizedModel) -> List[SingularityExpansion]:
    """All singular expansions of ``g`` on the cut plane boundary.

    Returns the pole at ``0`` (``mu2 < 0`` only), the pole at ``theta1^p``
    when present, the branch expansion at ``theta1^+`` and, for
    ``mu2 >= 0``, the symmetric expansion at ``theta1^-``.
    """
    geo = geometry(model)
    out: List[SingularityExpansion] = []
    if model.drift_sign is DriftSign.MU2_NEGATIVE:
        out.append(
            SingularityExpansion(
                location=0.0,
                kind=SingularityKind.SIMPLE_POLE,
                constant_term=0.0,
                leading_coefficient=residue_at_zero(model),
            )
        )
    if geo.pole_p is not None:
        out.append(
            SingularityExpansion(
                location=geo.pole_p,
                kind=SingularityKind.SIMPLE_POLE,
                constant_term=0.0,
                leading_coefficient=residue_at_pole_p(model),
            )
        )
    out.append(_branch_expansion(model, at_plus=True))
    if model.drift_sign is not DriftSign.MU2_NEGATIVE:
        out.append(_branch_expansion(model, at_plus=False))
    return out


def _right_tail(model: NormalizedModel) -> tuple[float, float, float]:
    """(prefactor, power, rate) of the density law at ``+inf``."""
    geo = geometry(model)
    span = geo.theta1_plus - geo.theta1_minus
    rt = geo.r_dot_theta_plus
    if rt > 0.0:
        if geo.pole_p is None or geo.pole_p <= 0.0:
            raise ZeroDriftUnsupportedDirection(
                "no positive dominant pole for the right tail"
            )
        a = -residue_at_pole_p(model)
        return a, 0.0, geo.pole_p
    exp = _branch_expansion(model, at_plus=True)
    if rt == 0.0:
        # k = 1/2 transfer: Gamma(1/2) = sqrt(pi)
        return exp.leading_coefficient / SQRT_PI, -0.5, geo.theta1_plus
    # k = -1/2 transfer: Gamma(-1/2) = -2 sqrt(pi)
    return exp.leading_coefficient / (-2.0 * SQRT_PI), -1.5, geo.theta1_plus


def _left_tail(model: NormalizedModel) -> tuple[float, float, float, bool]:
    """(prefactor, power, rate, derived_by_symmetry) at ``-inf``."""
    geo = geometry(model)
    if model.drift_sign is DriftSign.MU2_NEGATIVE:
        return residue_at_zero(model), 0.0, 0.0, False
    rt = geo.r_dot_theta_minus
    if rt > 0.0:
        if geo.pole_p is None or geo.pole_p >= 0.0:
            raise ZeroDriftUnsupportedDirection(
                "no negative dominant pole for the left tail"
            )
        return residue_at_pole_p(model), 0.0, -geo.pole_p, True
    exp = _branch_expansion(model, at_plus=False)
    if rt == 0.0:
        return exp.leading_coefficient / SQRT_PI, -0.5, -geo.theta1_minus, True
    return (
        exp.leading_coefficient / (-2.0 * SQRT_PI),
        -1.5,
        -geo.theta1_minus,
        True,
    )


def nu_tail(
    model: NormalizedModel,
    direction: TailDirection,
    object: TailObject = TailObject.DENSITY,
) -> TailLaw:
    """Exact tail law of the boundary occupancy measure.

    The tail object ``nu((z1, inf))`` (resp. ``nu((-inf, z1))`` at minus
    infinity) shares the law of the density with the prefactor divided by
    the decay rate.
    """
    if direction is TailDirection.PLUS_INFINITY:
        a, power, rate = _right_tail(model)
        symmetric = False
    else:
        a, power, rate, symmetric = _left_tail(model)
    if object is TailObject.TAIL:
        if rate == 0.0:
            raise UnsupportedTailObject(
                "tail mass diverges for a flat density law"
            )
        a = a / rate
    return TailLaw(
        direction=direction,
        prefactor=a,
        power=power,
        rate=rate,
        object=object,
        derived_by_symmetry=symmetric,
    )
