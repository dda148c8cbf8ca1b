"""Obliquely reflected Brownian motion in the upper half-plane.

Exact occupancy (Green's) density by contour quadrature, complete
directional asymptotic laws, boundary occupancy measure (MGF, residues,
tail laws), Martin-kernel harmonic functions, and an independent Monte
Carlo path-simulation oracle.
"""

from .errors import (
    AlphaOutOfRange,
    AtPole,
    BadCovariance,
    BadStart,
    BoundaryTooClose,
    BudgetExceeded,
    FamilyUnavailable,
    NoConvergence,
    NotImplementedForPositiveDrift,
    NotTransient,
    OnBranchCut,
    RbmError,
    ThetaOutsideConvergence,
    UnsupportedTailObject,
    ZeroDriftUnsupportedDirection,
)
from .model import (
    DriftSign,
    KernelGeometry,
    ModelParams,
    NormalizedModel,
    geometry,
    kernel_q,
    theta2_branches,
    validate_and_normalize,
)
from .boundary import (
    SingularityExpansion,
    SingularityKind,
    TailDirection,
    TailLaw,
    TailObject,
    g_eval,
    nu_tail,
    residues,
)
from .green import QuadratureResult, contour_abscissa, density, f_transform
from .asympt import (
    AsymptoticLaw,
    Regime,
    RegimeTag,
    SaddleData,
    angle_thresholds,
    classify,
    law,
    saddle,
)
from .martin import (
    Family,
    HarmonicFunction,
    HarmonicityReport,
    check_harmonicity,
    harmonic,
    martin_limit,
)
from .mc import (
    McEstimate,
    MgfKind,
    PathFunctionals,
    SimConfig,
    estimate_boundary,
    estimate_many,
    estimate_mgf,
    estimate_occupancy,
    in_convergence_domain,
    simulate_paths,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
