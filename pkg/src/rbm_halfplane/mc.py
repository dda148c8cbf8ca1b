"""Monte Carlo oracle for the reflected process.

Paths follow the exact Skorokhod recursion on the time grid: with free
coordinates ``W(t) = x + B(t) + mu t`` sampled at ``t = n h``, the regulator
is the running maximum ``ell_n = max(0, max_k <= n -(x2 + W2_k))`` and
``Z_n = x + W_n + R ell_n``, so ``Z2 >= 0`` and ``ell`` is nondecreasing by
construction.  Paths stop when ``Z1 < -stop_left`` (transience) or at the
hard time cap.

Reproducibility: path ``i`` (pair ``i // 2`` under antithetic sampling)
draws from a dedicated substream seeded with ``splitmix64(seed, index)``
truncated to 32 bits; the estimate is a fixed-order reduction over the
per-path values, so results are bit-identical for a given configuration
regardless of thread count.  Antithetic sampling negates the first Brownian
coordinate only (the second one drives the reflection and is left alone)
and is restricted to diagonal covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numba import njit, prange

from .errors import BudgetExceeded, ThetaOutsideConvergence
from .model import (
    ModelParams,
    NormalizedModel,
    theta1_pole_candidate,
    theta2_branches,
    validate_and_normalize,
)

__all__ = [
    "SimConfig",
    "McEstimate",
    "MgfKind",
    "PathFunctionals",
    "simulate_paths",
    "estimate_occupancy",
    "estimate_boundary",
    "estimate_mgf",
    "estimate_many",
    "in_convergence_domain",
]


@dataclass(frozen=True)
class SimConfig:
    step: float = 1e-3
    stop_left: float = 30.0
    t_max: float = 1e4
    paths: int = 200_000
    seed: int = 0
    antithetic: bool = True

    def __post_init__(self):
        if not 0.0 < self.step <= 1e-2:
            raise ValueError("step must lie in (0, 1e-2]")
        if self.stop_left < 10.0:
            raise ValueError("stop_left must be >= 10")
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if self.t_max / self.step > 5e7:
            raise ValueError("t_max / step budget too large")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    paths: int
    truncation_fraction: float

    @property
    def flagged(self) -> bool:
        return self.truncation_fraction > 0.01


class MgfKind(Enum):
    TIME_INTEGRAL = "TimeIntegral"
    LOCAL_TIME_INTEGRAL = "LocalTimeIntegral"


@dataclass(frozen=True)
class PathFunctionals:
    """Functionals accumulated in a single pass over the paths."""

    boxes: Sequence[Tuple[float, float, float, float]] = ()  # (a1,b1,a2,b2)
    intervals: Sequence[Tuple[float, float]] = ()  # local-time mass, a < Z1 < b
    thresholds: Sequence[float] = ()  # local-time mass with Z1 > a
    mgf_time: Sequence[Tuple[float, float]] = ()
    mgf_local: Sequence[Tuple[float, float]] = ()

    @property
    def count(self) -> int:
        return (
            len(self.boxes)
            + len(self.intervals)
            + len(self.thresholds)
            + len(self.mgf_time)
            + len(self.mgf_local)
        )


@njit(cache=True)
def _mix_seed(seed, idx):
    z = np.uint64(seed) + np.uint64(0x9E3779B97F4A7C15) * (np.uint64(idx) + np.uint64(1))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return np.uint32(z & np.uint64(0xFFFFFFFF))


@njit(parallel=True, cache=True)
def _simulate_kernel(
    mu1,
    mu2,
    r,
    x1,
    x2,
    c11,
    c21,
    c22,
    h,
    stop_left,
    max_steps,
    n_paths,
    seed,
    antithetic,
    boxes,
    intervals,
    thresholds,
    mgf_time,
    mgf_local,
):
    nb = boxes.shape[0]
    ni = intervals.shape[0]
    nt = thresholds.shape[0]
    nf = mgf_time.shape[0]
    ng = mgf_local.shape[0]
    k = nb + ni + nt + nf + ng
    out = np.zeros((n_paths, k))
    trunc = np.zeros(n_paths, dtype=np.uint8)
    sqh = math.sqrt(h)
    for i in prange(n_paths):
        if antithetic:
            base = i // 2
            negate = i % 2 == 1
        else:
            base = i
            negate = False
        np.random.seed(_mix_seed(seed, base))
        w1 = 0.0
        w2 = 0.0
        ell = 0.0
        done = False
        for n in range(max_steps):
            xi1 = np.random.standard_normal()
            xi2 = np.random.standard_normal()
            if negate:
                xi1 = -xi1
            w1 += c11 * xi1 * sqh + mu1 * h
            w2 += (c21 * xi1 + c22 * xi2) * sqh + mu2 * h
            ell_new = -(x2 + w2)
            if ell_new < ell:
                ell_new = ell
            dl = ell_new - ell
            ell = ell_new
            z1 = x1 + w1 + r * ell
            z2 = x2 + w2 + ell
            col = 0
            for j in range(nb):
                if (
                    boxes[j, 0] <= z1 <= boxes[j, 1]
                    and boxes[j, 2] <= z2 <= boxes[j, 3]
                ):
                    out[i, col] += h
                col += 1
            if dl > 0.0:
                for j in range(ni):
                    if intervals[j, 0] < z1 < intervals[j, 1]:
                        out[i, col + j] += dl
                for j in range(nt):
                    if z1 > thresholds[j]:
                        out[i, col + ni + j] += dl
            col += ni + nt
            for j in range(nf):
                out[i, col] += h * math.exp(mgf_time[j, 0] * z1 + mgf_time[j, 1] * z2)
                col += 1
            if dl > 0.0:
                for j in range(ng):
                    out[i, col + j] += dl * math.exp(
                        mgf_local[j, 0] * z1 + mgf_local[j, 1] * z2
                    )
            if z1 < -stop_left:
                done = True
                break
        if not done:
            trunc[i] = 1
    return out, trunc


def _increments(model: Union[NormalizedModel, ModelParams]):
    """(mu1, mu2, r, x1, x2, chol entries) for the simulation frame."""
    if isinstance(model, NormalizedModel):
        return (*model.mu, model.r, *model.x, 1.0, 0.0, 1.0)
    sigma = np.asarray(model.sigma, dtype=float)
    validate_and_normalize(model)  # raises on invalid parameters
    c = np.linalg.cholesky(sigma)
    return (
        float(model.mu[0]),
        float(model.mu[1]),
        float(model.r),
        float(model.x[0]),
        float(model.x[1]),
        float(c[0, 0]),
        float(c[1, 0]),
        float(c[1, 1]),
    )


def simulate_paths(
    model: Union[NormalizedModel, ModelParams],
    config: SimConfig,
    functionals: PathFunctionals,
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-path functional values and truncation flags.

    Accepts either a normalized model (identity increments) or raw
    parameters (correlated increments from the Cholesky factor of sigma).
    """
    mu1, mu2, r, x1, x2, c11, c21, c22 = _increments(model)
    antithetic = config.antithetic
    if antithetic and c21 != 0.0:
        raise ValueError("antithetic sampling requires diagonal covariance")
    out, trunc = _simulate_kernel(
        mu1,
        mu2,
        r,
        x1,
        x2,
        c11,
        c21,
        c22,
        config.step,
        config.stop_left,
        int(config.t_max / config.step),
        config.paths,
        np.uint64(config.seed & 0xFFFFFFFFFFFFFFFF),
        antithetic,
        np.asarray(functionals.boxes, dtype=float).reshape(-1, 4),
        np.asarray(functionals.intervals, dtype=float).reshape(-1, 2),
        np.asarray(functionals.thresholds, dtype=float).reshape(-1),
        np.asarray(functionals.mgf_time, dtype=float).reshape(-1, 2),
        np.asarray(functionals.mgf_local, dtype=float).reshape(-1, 2),
    )
    if np.all(trunc == 1):
        raise BudgetExceeded("every path hit t_max before exiting on the left")
    return out, trunc


def _reduce(values: np.ndarray, trunc: np.ndarray, config: SimConfig) -> McEstimate:
    n = values.shape[0]
    if config.antithetic and n >= 2:
        m = (n // 2) * 2
        units = 0.5 * (values[0:m:2] + values[1:m:2])
        if m < n:
            units = np.concatenate([units, values[m:]])
    else:
        units = values
    k = units.shape[0]
    mean = float(np.mean(units))
    se = float(np.std(units, ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    return McEstimate(
        value=mean,
        std_error=se,
        paths=n,
        truncation_fraction=float(np.mean(trunc)),
    )


def estimate_many(
    model: Union[NormalizedModel, ModelParams],
    config: SimConfig,
    functionals: PathFunctionals,
) -> list[McEstimate]:
    """All requested functionals from a single pass, in declaration order."""
    out, trunc = simulate_paths(model, config, functionals)
    return [_reduce(out[:, j], trunc, config) for j in range(functionals.count)]


def estimate_occupancy(
    model: Union[NormalizedModel, ModelParams],
    config: SimConfig,
    box: Tuple[float, float, float, float],
) -> McEstimate:
    """Expected total time in the rectangle ``[a1,b1] x [a2,b2]``."""
    a1, b1, a2, b2 = (float(v) for v in box)
    if not (a1 <= b1 and a2 <= b2):
        raise ValueError("box corners must be ordered")
    if a1 < -config.stop_left + 5.0:
        raise ValueError("box extends too close to the left stopping barrier")
    if b1 == a1 or b2 == a2:
        return McEstimate(0.0, 0.0, config.paths, 0.0)
    return estimate_many(model, config, PathFunctionals(boxes=[(a1, b1, a2, b2)]))[0]


def estimate_boundary(
    model: Union[NormalizedModel, ModelParams],
    config: SimConfig,
    interval: Tuple[float, float],
) -> McEstimate:
    """Expected local-time mass deposited with ``Z1`` in ``(a, b)``."""
    a, b = float(interval[0]), float(interval[1])
    if not math.isfinite(a) or not math.isfinite(b):
        raise ValueError("interval must be bounded")
    if b <= a:
        return McEstimate(0.0, 0.0, config.paths, 0.0)
    return estimate_many(model, config, PathFunctionals(intervals=[(a, b)]))[0]


def in_convergence_domain(model: NormalizedModel, theta: Tuple[float, float]) -> bool:
    """Membership of a real ``theta`` in the convergence domain of the MGFs."""
    t1, t2 = float(theta[0]), float(theta[1])
    t1p_line = theta1_pole_candidate(model)
    if 0.0 < t1 < t1p_line and t2 <= 0.0:
        return True
    m = model.m
    if not (-model.mu1 - m) < t1 < (-model.mu1 + m):
        return False
    th2p, th2m = theta2_branches(model, t1)
    lo = max(t2, th2m.real)
    hi = min(-model.r * t1, th2p.real)
    return lo < hi


def estimate_mgf(
    model: Union[NormalizedModel, ModelParams],
    config: SimConfig,
    theta: Tuple[float, float],
    which: MgfKind,
) -> McEstimate:
    """Path estimate of the occupancy or boundary MGF at real ``theta``."""
    check_model = (
        model if isinstance(model, NormalizedModel) else validate_and_normalize(model)
    )
    if not in_convergence_domain(check_model, theta):
        raise ThetaOutsideConvergence(f"theta = {theta} outside the E u F domain")
    th = [(float(theta[0]), float(theta[1]))]
    if which is MgfKind.TIME_INTEGRAL:
        fns = PathFunctionals(mgf_time=th)
    else:
        fns = PathFunctionals(mgf_local=th)
    return estimate_many(model, config, fns)[0]
