"""HTTP service exposing the toolkit.

Every endpoint is a thin, stateless wrapper over the library: requests are
pydantic models carrying the problem instance plus operation arguments,
responses are plain records of the computed values.  The command-line front
end calls the same handler functions in-process, so the two surfaces cannot
drift apart.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import asympt, boundary, green, martin, mc, verify as verify_mod
from .errors import RbmError
from .model import ModelParams, NormalizedModel, geometry, validate_and_normalize

__all__ = ["app", "ModelSpec"]

app = FastAPI(
    title="rbm-halfplane",
    description=(
        "Occupancy density, boundary measure, directional asymptotics and "
        "Martin-kernel harmonic functions for obliquely reflected Brownian "
        "motion in the upper half-plane."
    ),
)

_PARAMETER_ERRORS = (
    "NotTransient",
    "BadCovariance",
    "BadStart",
    "AlphaOutOfRange",
    "ThetaOutsideConvergence",
    "BoundaryTooClose",
    "AtPole",
    "OnBranchCut",
    "FamilyUnavailable",
    "NotImplementedForPositiveDrift",
    "ZeroDriftUnsupportedDirection",
    "UnsupportedTailObject",
)


@app.exception_handler(RbmError)
async def _rbm_error_handler(request: Request, exc: RbmError) -> JSONResponse:
    kind = type(exc).__name__
    status = 422 if kind in _PARAMETER_ERRORS else 500
    return JSONResponse(status_code=status, content={"error": kind, "detail": str(exc)})


class ModelSpec(BaseModel):
    """Problem instance in raw (possibly anisotropic) coordinates."""

    mu1: float
    mu2: float
    r: float
    sigma11: float = 1.0
    sigma12: float = 0.0
    sigma22: float = 1.0
    x1: float = 0.0
    x2: float = 0.0

    def to_params(self) -> ModelParams:
        return ModelParams(
            mu=(self.mu1, self.mu2),
            r=self.r,
            sigma=((self.sigma11, self.sigma12), (self.sigma12, self.sigma22)),
            x=(self.x1, self.x2),
        )

    def normalized(self) -> NormalizedModel:
        return validate_and_normalize(self.to_params())


class GeometryResponse(BaseModel):
    drift_sign: str
    theta1_minus: float
    theta1_plus: float
    theta1p: Optional[float]
    pole_zero: Optional[float]
    m: float
    alpha_mu: float
    alpha_r: float
    alpha0: float
    alpha1: float
    r_dot_theta_plus: float
    r_dot_theta_minus: float
    mu1_normalized: float
    mu2_normalized: float
    r_normalized: float
    detT: float


class TransformRequest(BaseModel):
    model: ModelSpec
    theta1: float
    theta2: float = 0.0


class ComplexResponse(BaseModel):
    re: float
    im: float


class DensityRequest(BaseModel):
    model: ModelSpec
    z1: float
    z2: float
    tol: float = Field(default=1e-10, gt=0.0)


class DensityResponse(BaseModel):
    value: float
    abs_error_estimate: float
    nodes_used: int
    contour_abscissa: float
    truncation_height: float


class LawRequest(BaseModel):
    model: ModelSpec
    alpha: float


class LawResponse(BaseModel):
    regime: str
    prefactor: float
    power: float
    rate: float
    theta1_alpha: float
    theta1p: Optional[float]


class TailRequest(BaseModel):
    model: ModelSpec
    direction: Literal["PlusInfinity", "MinusInfinity"]
    object: Literal["Density", "Tail"] = "Density"


class TailResponse(BaseModel):
    direction: str
    object: str
    prefactor: float
    power: float
    rate: float
    derived_by_symmetry: bool


class MartinRequest(BaseModel):
    model: ModelSpec
    alpha: float
    x1: float = 0.0
    x2: float = 0.0


class MartinResponse(BaseModel):
    value: float
    family: str
    interior_residual: float
    boundary_residual: float
    max_abs_h: float


class SimulateRequest(BaseModel):
    model: ModelSpec
    paths: int = 200_000
    step: float = 1e-3
    stop_left: float = 30.0
    t_max: float = 1e4
    seed: int = 0
    antithetic: bool = True
    raw_covariance: bool = False
    box: Optional[Tuple[float, float, float, float]] = None
    interval: Optional[Tuple[float, float]] = None
    theta1: Optional[float] = None
    theta2: float = 0.0
    mgf_kind: Literal["TimeIntegral", "LocalTimeIntegral"] = "TimeIntegral"


class SimulateResponse(BaseModel):
    functional: str
    value: float
    std_error: float
    paths: int
    truncation_fraction: float
    flagged: bool


class VerifyRequest(BaseModel):
    seed: int = 42
    paths: int = 2000


class VerifyResponse(BaseModel):
    passed: bool
    lines: List[str]


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/inspect", response_model=GeometryResponse)
def inspect(model: ModelSpec) -> GeometryResponse:
    nm = model.normalized()
    geo = geometry(nm)
    return GeometryResponse(
        drift_sign=nm.drift_sign.value,
        theta1_minus=geo.theta1_minus,
        theta1_plus=geo.theta1_plus,
        theta1p=geo.pole_p,
        pole_zero=geo.pole_zero,
        m=geo.m,
        alpha_mu=geo.alpha_mu,
        alpha_r=geo.alpha_r,
        alpha0=geo.alpha0,
        alpha1=geo.alpha1,
        r_dot_theta_plus=geo.r_dot_theta_plus,
        r_dot_theta_minus=geo.r_dot_theta_minus,
        mu1_normalized=nm.mu1,
        mu2_normalized=nm.mu2,
        r_normalized=nm.r,
        detT=nm.detT,
    )


@app.post("/g", response_model=ComplexResponse)
def g_endpoint(req: TransformRequest) -> ComplexResponse:
    val = boundary.g_eval(req.model.normalized(), req.theta1)
    return ComplexResponse(re=val.real, im=val.imag)


@app.post("/f", response_model=ComplexResponse)
def f_endpoint(req: TransformRequest) -> ComplexResponse:
    val = green.f_transform(req.model.normalized(), (req.theta1, req.theta2))
    return ComplexResponse(re=val.real, im=val.imag)


@app.post("/density", response_model=DensityResponse)
def density_endpoint(req: DensityRequest) -> DensityResponse:
    res = green.density(req.model.normalized(), (req.z1, req.z2), tol=req.tol)
    return DensityResponse(
        value=res.value,
        abs_error_estimate=res.abs_error_estimate,
        nodes_used=res.nodes_used,
        contour_abscissa=res.contour_abscissa,
        truncation_height=res.truncation_height,
    )


@app.post("/law", response_model=LawResponse)
def law_endpoint(req: LawRequest) -> LawResponse:
    law = asympt.law(req.model.normalized(), req.alpha)
    return LawResponse(
        regime=law.regime.tag.value,
        prefactor=law.prefactor,
        power=law.power,
        rate=law.rate,
        theta1_alpha=law.regime.theta1_alpha,
        theta1p=law.regime.theta1_p,
    )


@app.post("/tail", response_model=TailResponse)
def tail_endpoint(req: TailRequest) -> TailResponse:
    law = boundary.nu_tail(
        req.model.normalized(),
        boundary.TailDirection(req.direction),
        boundary.TailObject(req.object),
    )
    return TailResponse(
        direction=law.direction.value,
        object=law.object.value,
        prefactor=law.prefactor,
        power=law.power,
        rate=law.rate,
        derived_by_symmetry=law.derived_by_symmetry,
    )


def _family_for_alpha(nm: NormalizedModel, alpha: float) -> martin.HarmonicFunction:
    geo = geometry(nm)
    if alpha >= geo.alpha0:
        return martin.harmonic(nm, martin.Family.CONSTANT)
    if geo.alpha1 > 0.0 and alpha <= geo.alpha1:
        return martin.harmonic(nm, martin.Family.POLE)
    return martin.harmonic(nm, martin.Family.SADDLE, alpha=alpha)


@app.post("/martin", response_model=MartinResponse)
def martin_endpoint(req: MartinRequest) -> MartinResponse:
    nm = req.model.normalized()
    value = martin.martin_limit(nm, req.alpha, (req.x1, req.x2))
    h = _family_for_alpha(nm, req.alpha)
    grid = [(0.25 * i, 0.25 * j) for i in range(13) for j in range(1, 13)]
    edge = [(0.25 * i, 0.0) for i in range(13)]
    report = martin.check_harmonicity(nm, h, grid, edge)
    return MartinResponse(
        value=value,
        family=h.family.value,
        interior_residual=report.interior_residual,
        boundary_residual=report.boundary_residual,
        max_abs_h=report.max_abs_h,
    )


@app.post("/simulate", response_model=List[SimulateResponse])
def simulate_endpoint(req: SimulateRequest) -> List[SimulateResponse]:
    cfg = mc.SimConfig(
        step=req.step,
        stop_left=req.stop_left,
        t_max=req.t_max,
        paths=req.paths,
        seed=req.seed,
        antithetic=req.antithetic,
    )
    target = req.model.to_params() if req.raw_covariance else req.model.normalized()
    out: List[SimulateResponse] = []

    def add(name: str, est: mc.McEstimate) -> None:
        out.append(
            SimulateResponse(
                functional=name,
                value=est.value,
                std_error=est.std_error,
                paths=est.paths,
                truncation_fraction=est.truncation_fraction,
                flagged=est.flagged,
            )
        )

    if req.box is not None:
        add("occupancy", mc.estimate_occupancy(target, cfg, req.box))
    if req.interval is not None:
        add("boundary", mc.estimate_boundary(target, cfg, req.interval))
    if req.theta1 is not None:
        kind = mc.MgfKind(req.mgf_kind)
        add(
            f"mgf_{kind.value}",
            mc.estimate_mgf(target, cfg, (req.theta1, req.theta2), kind),
        )
    if not out:
        raise HTTPException(
            status_code=422,
            detail="simulate request names no functional (box/interval/theta1)",
        )
    return out


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    passed, lines = verify_mod.run_battery(seed=req.seed, paths=req.paths)
    return VerifyResponse(passed=passed, lines=lines)
