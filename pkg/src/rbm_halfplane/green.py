"""Occupancy density via contour quadrature of the one-dimensional
inverse transform, plus the closed form of the two-dimensional MGF ``f``.

The density at ``z = (z1, z2)``, ``z2 > 0``, is

    pi(z) = (1 / (i*pi)) * Int_{eps-i inf}^{eps+i inf}
                exp(-z1*theta1 - z2*Theta2^+(theta1)) * g(theta1) dtheta1

for a start at the origin; for a general start the integrand carries the
two-exponential factor from the shifted functional equation.  The vertical
line sits inside ``(0, theta1^p)`` (or ``(0, theta1^+)`` when the pole is
absent) and can be moved next to the saddle abscissa to reduce oscillatory
cancellation at large ``|z|``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import AtPole, BoundaryTooClose, NoConvergence
from .model import (
    NormalizedModel,
    geometry,
    kernel_q,
    saddle_theta1,
    theta2_branches,
    theta2_branches_array,
)
from .boundary import g_eval

__all__ = ["QuadratureResult", "f_transform", "contour_abscissa", "density"]

Z2_MIN = 1e-3
NODE_BUDGET = 200_000
_POLE_TOL = 1e-14

# Gauss 7 / Kronrod 15 rule on [-1, 1]: (node, Gauss weight, Kronrod weight).
_GK15 = np.array(
    [
        (+0.949107912342759, 0.129484966168870, 0.063092092629979),
        (-0.949107912342759, 0.129484966168870, 0.063092092629979),
        (+0.741531185599394, 0.279705391489277, 0.140653259715525),
        (-0.741531185599394, 0.279705391489277, 0.140653259715525),
        (+0.405845151377397, 0.381830050505119, 0.190350578064785),
        (-0.405845151377397, 0.381830050505119, 0.190350578064785),
        (0.000000000000000, 0.417959183673469, 0.209482141084728),
        (+0.991455371120813, 0.000000000000000, 0.022935322010529),
        (-0.991455371120813, 0.000000000000000, 0.022935322010529),
        (+0.864864423359769, 0.000000000000000, 0.104790010322250),
        (-0.864864423359769, 0.000000000000000, 0.104790010322250),
        (+0.586087235467691, 0.000000000000000, 0.169004726639267),
        (-0.586087235467691, 0.000000000000000, 0.169004726639267),
        (+0.207784955007898, 0.000000000000000, 0.204432940075298),
        (-0.207784955007898, 0.000000000000000, 0.204432940075298),
    ]
)
_GK_NODES = _GK15[:, 0]
_GK_WG = _GK15[:, 1]
_GK_WK = _GK15[:, 2]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    nodes_used: int
    contour_abscissa: float
    truncation_height: float


def f_transform(model: NormalizedModel, theta) -> complex:
    """Two-dimensional occupancy MGF ``f(theta)`` in closed form.

    ``f = (-exp(theta . x) - (R . theta) g(theta1)) / Q(theta)``; for a start
    at the origin this is the product form
    ``2 / ((theta2 - Theta2^+)(r theta1 + Theta2^-))``.
    """
    t1, t2 = complex(theta[0]), complex(theta[1])
    q = kernel_q(model, (t1, t2))
    if abs(q) < _POLE_TOL:
        raise AtPole("theta lies on the kernel circle Q = 0")
    gval = g_eval(model, t1)  # raises AtPole on the boundary-MGF pole line
    x1, x2 = model.x
    num = -cmath.exp(t1 * x1 + t2 * x2) - (model.r * t1 + t2) * gval
    return num / q


def contour_abscissa(model: NormalizedModel, alpha: Optional[float] = None) -> float:
    """Abscissa of the vertical integration line.

    Without a direction hint: the midpoint of the admissible band.  With a
    hint, the saddle abscissa for that direction clamped into the band so
    the line passes near the stationary point of the phase.
    """
    geo = geometry(model)
    upper = geo.theta1_plus
    if geo.pole_p is not None and 0.0 < geo.pole_p < upper:
        upper = geo.pole_p
    if alpha is None:
        return 0.5 * upper
    margin = 1e-3 * upper
    t1a = saddle_theta1(model, alpha)
    return min(max(t1a, margin), upper - margin)


def _integrand_origin(model: NormalizedModel, eps: float) -> Callable[[np.ndarray], np.ndarray]:
    r = model.r

    def f(t: np.ndarray, z1: float, z2: float) -> np.ndarray:
        theta1 = eps + 1j * t
        th2p, th2m = theta2_branches_array(model, theta1)
        return -np.exp(-z1 * theta1 - z2 * th2p) / (r * theta1 + th2m)

    return f


def _integrand_shifted(model: NormalizedModel, eps: float) -> Callable[[np.ndarray], np.ndarray]:
    r = model.r
    x1, x2 = model.x

    def f(t: np.ndarray, z1: float, z2: float) -> np.ndarray:
        theta1 = eps + 1j * t
        th2p, th2m = theta2_branches_array(model, theta1)
        start = np.exp(theta1 * x1 + th2p * x2) - (r * theta1 + th2p) / (
            r * theta1 + th2m
        ) * np.exp(theta1 * x1 + th2m * x2)
        return start * np.exp(-z1 * theta1 - z2 * th2p) / (th2p - th2m)

    return f


def _truncation_height(decay: float, shift: float, tol: float) -> float:
    """Smallest ``T`` with ``exp(-decay*(T - shift))/T <= tol/10``."""
    target = max(tol, 1e-300) * 0.1
    t = max(20.0, shift + 1.0)
    for _ in range(200):
        bound = math.exp(-decay * (t - shift)) / t
        if bound <= target:
            break
        t *= 1.25
    return t


def _adaptive_gk(func, breakpoints, tol, budget):
    """Adaptive Gauss-Kronrod bisection with deterministic summation.

    Returns (integral, error_estimate, nodes_used, max_abs_integrand).
    """

    def panel(a, b):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        vals = func(mid + half * _GK_NODES)
        ig = half * np.sum(_GK_WG * vals)
        ik = half * np.sum(_GK_WK * vals)
        # |G7 - K15| is a conservative estimate for the K15 error.
        return (a, b, ik, abs(ig - ik), np.max(np.abs(vals)))

    panels = [panel(breakpoints[i], breakpoints[i + 1]) for i in range(len(breakpoints) - 1)]
    nodes = 15 * len(panels)
    while True:
        total_err = sum(p[3] for p in panels)
        if total_err <= tol:
            break
        if nodes + 30 > budget:
            raise NoConvergence(
                f"node budget {budget} exhausted (error {total_err:.3g} > {tol:.3g})"
            )
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        a, b, _, _, _ = panels[worst]
        mid = 0.5 * (a + b)
        panels[worst : worst + 1] = [panel(a, mid), panel(mid, b)]
        nodes += 30
    panels.sort(key=lambda p: p[0])
    integral = sum((p[2] for p in panels), start=0.0 + 0.0j)
    err = sum(p[3] for p in panels)
    peak = max(p[4] for p in panels)
    return integral, err, nodes, peak


def density(
    model: NormalizedModel,
    z,
    tol: float = 1e-10,
    eps: Optional[float] = None,
) -> QuadratureResult:
    """Occupancy density at a point ``z`` given in the original coordinates.

    For anisotropic covariance the evaluation is transported through the
    normalizing map: ``pi_raw(z) = |det T| * pi_norm(T z)``.  The returned
    error estimate combines the quadrature estimate, the truncation bound
    and a round-off guard proportional to the peak integrand modulus.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    zn = model.to_normalized_coords(z)
    z1, z2 = float(zn[0]), float(zn[1])
    if z2 < Z2_MIN:
        raise BoundaryTooClose(f"z2 = {z2} (normalized) below {Z2_MIN}")
    jac = abs(model.detT)

    if eps is None:
        alpha = math.atan2(z2, z1)
        eps = contour_abscissa(model, alpha)
    x1, x2 = model.x
    origin = x1 == 0.0 and x2 == 0.0
    raw = _integrand_origin(model, eps) if origin else _integrand_shifted(model, eps)

    decay = z2 - (0.0 if origin else x2)
    if decay <= 0.0:
        raise BoundaryTooClose(
            "integrand does not decay: z2 must exceed the starting height x2"
        )
    shift = model.m + abs(model.mu2) + 1.0
    height = _truncation_height(decay, shift, tol)

    # Geometric seed panels: the integrand can be sharply peaked near t = 0
    # when the contour sits next to a pole of g.
    breaks = [0.0]
    step = min(0.01, height / 64.0)
    while breaks[-1] + step < height:
        breaks.append(breaks[-1] + step)
        step *= 2.0
    breaks.append(height)

    func = lambda t: raw(t, z1, z2)
    integral, qerr, nodes, peak = _adaptive_gk(func, breaks, tol * math.pi / 2.0, NODE_BUDGET)

    # pi(z) = (1/pi) Int_{-T}^{T} = (2/pi) Re Int_0^{T} by conjugate symmetry.
    value = (2.0 / math.pi) * integral.real
    # exp(-z1*eps) and exp(x1*eps) enter the integrand modulus uniformly in t.
    trunc = (
        math.exp(-decay * (height - shift))
        / height
        * math.exp(max(0.0, -z1 * eps) + abs(x1) * eps)
    )
    guard = np.finfo(float).eps * peak * 2.0
    err = (2.0 / math.pi) * (qerr + abs(integral.imag) * np.finfo(float).eps) + trunc + guard
    return QuadratureResult(
        value=float(jac * value),
        abs_error_estimate=float(jac * err),
        nodes_used=nodes,
        contour_abscissa=eps,
        truncation_height=height,
    )
