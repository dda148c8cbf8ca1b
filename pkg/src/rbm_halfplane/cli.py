"""Command-line front end.

Thin client over the same handler layer that backs the HTTP service: each
subcommand builds the corresponding request model, calls the handler
in-process (no network, no config files, no environment variables) and
prints the response as CSV (default, header row mandatory) or JSON lines.
All floating-point output uses ``repr``'s shortest round-trippable form.

Exit codes: 0 success; 2 invalid parameters (including a non-transient
model); 3 numerical failure (quadrature or path budget exhausted);
4 verify-suite failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

from fastapi import HTTPException

from . import verify as verify_mod
from .api import (
    DensityRequest,
    LawRequest,
    MartinRequest,
    ModelSpec,
    SimulateRequest,
    TailRequest,
    TransformRequest,
    density_endpoint,
    f_endpoint,
    g_endpoint,
    inspect,
    law_endpoint,
    martin_endpoint,
    simulate_endpoint,
    tail_endpoint,
)
from .errors import (
    BudgetExceeded,
    NoConvergence,
    RbmError,
)

__all__ = ["main"]

Row = Dict[str, object]


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _emit(rows: List[Row], fmt: str) -> None:
    if not rows:
        return
    if fmt == "json":
        for row in rows:
            sys.stdout.write(json.dumps(row) + "\n")
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow([_fmt(v) for v in row.values()])


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mu1", type=float, required=True, help="first drift component")
    p.add_argument("--mu2", type=float, required=True, help="second drift component")
    p.add_argument("--r", type=float, required=True, help="reflection slope, R=(r,1)")
    p.add_argument("--sigma11", type=float, default=1.0)
    p.add_argument("--sigma12", type=float, default=0.0)
    p.add_argument("--sigma22", type=float, default=1.0)
    p.add_argument("--x1", type=float, default=0.0, help="starting point, first coord")
    p.add_argument("--x2", type=float, default=0.0, help="starting point, second coord")


def _add_format_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _model(args: argparse.Namespace) -> ModelSpec:
    return ModelSpec(
        mu1=args.mu1,
        mu2=args.mu2,
        r=args.r,
        sigma11=args.sigma11,
        sigma12=args.sigma12,
        sigma22=args.sigma22,
        x1=args.x1,
        x2=args.x2,
    )


def _floats(text: str) -> List[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_inspect(args: argparse.Namespace) -> List[Row]:
    return [inspect(_model(args)).model_dump()]


def _cmd_g(args: argparse.Namespace) -> List[Row]:
    rows = []
    for t1 in _floats(args.theta1):
        res = g_endpoint(TransformRequest(model=_model(args), theta1=t1))
        rows.append({"theta1": t1, "re": res.re, "im": res.im})
    return rows


def _cmd_f(args: argparse.Namespace) -> List[Row]:
    res = f_endpoint(
        TransformRequest(model=_model(args), theta1=args.theta1, theta2=args.theta2)
    )
    return [
        {"theta1": args.theta1, "theta2": args.theta2, "re": res.re, "im": res.im}
    ]


def _cmd_density(args: argparse.Namespace) -> List[Row]:
    model = _model(args)
    if args.rho is not None:
        if args.alpha is None:
            raise ValueError("--rho requires --alpha (radians)")
        rows: List[Row] = []
        for rho in _floats(args.rho):
            z1 = rho * math.cos(args.alpha)
            z2 = rho * math.sin(args.alpha)
            d = density_endpoint(
                DensityRequest(model=model, z1=z1, z2=z2, tol=args.tol)
            )
            law = law_endpoint(LawRequest(model=model, alpha=args.alpha))
            law_value = (
                law.prefactor * rho**law.power * math.exp(-law.rate * rho)
            )
            rows.append(
                {
                    "rho": rho,
                    "alpha": args.alpha,
                    "value": d.value,
                    "abs_err": d.abs_error_estimate,
                    "regime": law.regime,
                    "law_value": law_value,
                    "ratio": d.value / law_value if law_value != 0.0 else math.nan,
                }
            )
        return rows
    if args.z1 is None or args.z2 is None:
        raise ValueError("density needs either --z1/--z2 or --alpha/--rho")
    d = density_endpoint(
        DensityRequest(model=model, z1=args.z1, z2=args.z2, tol=args.tol)
    )
    return [
        {
            "z1": args.z1,
            "z2": args.z2,
            "value": d.value,
            "abs_err": d.abs_error_estimate,
            "nodes_used": d.nodes_used,
            "contour_abscissa": d.contour_abscissa,
            "truncation_height": d.truncation_height,
        }
    ]


def _cmd_law(args: argparse.Namespace) -> List[Row]:
    rows = []
    for alpha in _floats(args.alpha):
        law = law_endpoint(LawRequest(model=_model(args), alpha=alpha))
        rows.append(
            {
                "alpha": alpha,
                "regime": law.regime,
                "prefactor": law.prefactor,
                "power": law.power,
                "rate": law.rate,
                "theta1_alpha": law.theta1_alpha,
                "theta1p": law.theta1p,
            }
        )
    return rows


def _cmd_tail(args: argparse.Namespace) -> List[Row]:
    rows: List[Row] = []
    for direction in ("PlusInfinity", "MinusInfinity"):
        for obj in ("Density", "Tail"):
            try:
                res = tail_endpoint(
                    TailRequest(model=_model(args), direction=direction, object=obj)
                )
            except RbmError as exc:
                print(
                    f"tail {direction}/{obj} unavailable: {exc}", file=sys.stderr
                )
                continue
            rows.append(res.model_dump())
    return rows


def _cmd_martin(args: argparse.Namespace) -> List[Row]:
    rows = []
    for alpha in _floats(args.alpha):
        res = martin_endpoint(
            MartinRequest(model=_model(args), alpha=alpha, x1=args.z1, x2=args.z2)
        )
        row: Row = {"alpha": alpha, "z1": args.z1, "z2": args.z2}
        row.update(res.model_dump())
        rows.append(row)
    return rows


def _cmd_simulate(args: argparse.Namespace) -> List[Row]:
    req = SimulateRequest(
        model=_model(args),
        paths=args.paths,
        step=args.step,
        stop_left=args.stop_left,
        t_max=args.tmax,
        seed=args.seed,
        antithetic=not args.no_antithetic,
        raw_covariance=args.raw_covariance,
        box=tuple(_floats(args.box)) if args.box else None,
        interval=tuple(_floats(args.interval)) if args.interval else None,
        theta1=args.theta1,
        theta2=args.theta2,
        mgf_kind=args.mgf_kind,
    )
    return [res.model_dump() for res in simulate_endpoint(req)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbm-halfplane",
        description=(
            "Occupancy density, boundary measure, asymptotic laws and "
            "harmonic functions for reflected Brownian motion in the "
            "upper half-plane."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("inspect", help="kernel geometry and regime angles")
    _add_model_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("g", help="boundary-measure MGF at real theta1")
    _add_model_flags(p)
    p.add_argument("--theta1", type=str, required=True, help="value or comma list")
    _add_format_flag(p)

    p = sub.add_parser("f", help="occupancy MGF at real (theta1, theta2)")
    _add_model_flags(p)
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, default=0.0)
    _add_format_flag(p)

    p = sub.add_parser("density", help="occupancy density at a point or along a ray")
    _add_model_flags(p)
    p.add_argument("--z1", type=float, default=None)
    p.add_argument("--z2", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None, help="ray angle, radians")
    p.add_argument("--rho", type=str, default=None, help="radius or comma list")
    p.add_argument("--tol", type=float, default=1e-10)
    _add_format_flag(p)

    p = sub.add_parser("law", help="asymptotic law a*rho^b*exp(-c*rho) by direction")
    _add_model_flags(p)
    p.add_argument("--alpha", type=str, required=True, help="radians, comma list ok")
    _add_format_flag(p)

    p = sub.add_parser("tail", help="boundary-measure tail laws, both directions")
    _add_model_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("martin", help="Martin kernel limit and harmonicity residuals")
    _add_model_flags(p)
    p.add_argument("--alpha", type=str, required=True, help="radians, comma list ok")
    p.add_argument("--z1", type=float, default=0.0, help="evaluation state, first")
    p.add_argument("--z2", type=float, default=0.0, help="evaluation state, second")
    _add_format_flag(p)

    p = sub.add_parser("simulate", help="Monte Carlo estimates with std errors")
    _add_model_flags(p)
    p.add_argument("--paths", type=int, default=200_000)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--stop-left", type=float, default=30.0)
    p.add_argument("--tmax", type=float, default=1e4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-antithetic", action="store_true")
    p.add_argument(
        "--raw-covariance",
        action="store_true",
        help="simulate in the original coordinates with correlated increments",
    )
    p.add_argument("--box", type=str, default=None, help="a1,b1,a2,b2 occupancy box")
    p.add_argument("--interval", type=str, default=None, help="a,b boundary interval")
    p.add_argument("--theta1", type=float, default=None, help="MGF argument")
    p.add_argument("--theta2", type=float, default=0.0)
    p.add_argument(
        "--mgf-kind",
        choices=("TimeIntegral", "LocalTimeIntegral"),
        default="TimeIntegral",
    )
    _add_format_flag(p)

    p = sub.add_parser("verify", help="run the deterministic self-check battery")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--paths", type=int, default=2000)
    return parser


_COMMANDS = {
    "inspect": _cmd_inspect,
    "g": _cmd_g,
    "f": _cmd_f,
    "density": _cmd_density,
    "law": _cmd_law,
    "tail": _cmd_tail,
    "martin": _cmd_martin,
    "simulate": _cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand == "verify":
        passed, lines = verify_mod.run_battery(seed=args.seed, paths=args.paths)
        for line in lines:
            sys.stdout.write(line + "\n")
        return 0 if passed else 4
    try:
        rows = _COMMANDS[args.subcommand](args)
    except (NoConvergence, BudgetExceeded) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (RbmError, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    except HTTPException as exc:
        print(f"invalid parameters: {exc.detail}", file=sys.stderr)
        return 2
    _emit(rows, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
