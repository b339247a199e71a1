"""Command-line driver with JSON input and output.

Exit codes follow one contract everywhere: 0 means constructed or
verified, 1 means a verification or condition check failed (the report
carries the witness), 2 means malformed input.  All numbers are exact
rational strings; nothing is ever printed in decimal.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .mpoly import parse_rat
from .schur import ChargedPoly, DomainError
from .fock import FockVector, alpha, psi_minus, psi_plus, shift_charge
from .grassmann import (GeneratorConditionError, GrassmannError, GrPoint,
                        companions, dtk_decomposition, generate_from_matrix,
                        stable_subspace, tau_of)
from .hirota import required_vars, verify_suite
from .psdo import dress_from_tau, verify_constraint, verify_flows


@dataclass
class RunConfig:
    D: int | None = None
    window: int = 8
    truncation: int = 5
    seed: int = 0
    trials: int = 20

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        cfg = cls()
        if path:
            with open(path) as fh:
                data = json.load(fh)
            for key in ("D", "window", "truncation", "seed", "trials"):
                if key in data:
                    setattr(cfg, key, int(data[key]))
        if cfg.window < 1 or cfg.truncation < 1 or cfg.trials < 1:
            raise ValueError("window, truncation and trials must be positive")
        return cfg


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_charged_poly(path: str) -> ChargedPoly:
    data = _load_json(path)
    try:
        return ChargedPoly.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad polynomial payload ({exc})") from exc


def _load_grpoint(path: str) -> GrPoint:
    data = _load_json(path)
    try:
        return GrPoint.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad point payload ({exc})") from exc


def _load_matrix(path: str) -> list[list[Fraction]]:
    data = _load_json(path)
    try:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = [[parse_rat(v) for v in row] for row in data["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad matrix payload ({exc})") from exc
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise InputError(f"{path}: entry grid does not match rows x cols")
    return entries


def _load_fock(path: str) -> FockVector:
    data = _load_json(path)
    try:
        return FockVector.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad vector payload ({exc})") from exc


def _emit(payload, pretty: bool) -> None:
    if pretty:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _suite_vars(tau, rhos, sigmas, k, requested: int | None) -> int | None:
    """Honor a requested variable count, raising it when provably short."""
    if requested is None:
        return None
    shifted = ChargedPoly(tau.poly, tau.charge - k)
    needed = max([required_vars(tau, tau), required_vars(tau, shifted)]
                 + [required_vars(tau, r) for r in rhos]
                 + [required_vars(s, shifted) for s in sigmas])
    if requested < needed:
        print(f"notice: raising variable count {requested} -> {needed} "
              "to keep residues exact", file=sys.stderr)
        return needed
    return requested


def cmd_tau_from_matrix(args, cfg: RunConfig) -> int:
    entries = _load_matrix(args.matrix)
    try:
        point, tau, report = generate_from_matrix(entries, args.k, args.n, cfg.D)
    except GeneratorConditionError as exc:
        _emit({"error": str(exc), "report": exc.report.to_json()}, args.pretty)
        return 1
    except (GrassmannError, DomainError) as exc:
        _emit({"error": str(exc)}, args.pretty)
        return 1
    _emit({"tau": tau.to_json(), "report": report.to_json(),
           "grpoint": point.to_json()}, args.pretty)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    tau = _load_charged_poly(args.tau)
    rhos = [_load_charged_poly(p) for p in args.rho]
    sigmas = [_load_charged_poly(p) for p in args.sigma]
    try:
        D = _suite_vars(tau, rhos, sigmas, args.k, cfg.D)
        report = verify_suite(tau, rhos, sigmas, args.k, D)
    except (ValueError, DomainError) as exc:
        raise InputError(str(exc)) from exc
    _emit(report.to_json(), args.pretty)
    return 0 if report.all_pass else 1


def cmd_grass(args, cfg: RunConfig) -> int:
    point = _load_grpoint(args.grpoint)
    try:
        if args.action == "min-n":
            sub, n = stable_subspace(point, args.k)
            _emit({"n": n, "stable": sub.to_json(),
                   "charge": point.charge}, args.pretty)
        elif args.action == "companions":
            tau, rhos, sigmas = companions(point, args.k, cfg.D)
            _emit({"tau": tau.to_json(),
                   "rho": [r.to_json() for r in rhos],
                   "sigma": [s.to_json() for s in sigmas]}, args.pretty)
        else:
            parts = dtk_decomposition(point, args.k, cfg.D)
            _emit({"parts": [p.to_json() for p in parts]}, args.pretty)
    except (GrassmannError, DomainError) as exc:
        raise InputError(str(exc)) from exc
    return 0


def cmd_dress(args, cfg: RunConfig) -> int:
    tau = _load_charged_poly(args.tau)
    order = args.order if args.order is not None else cfg.truncation
    try:
        pair = dress_from_tau(tau, order, cfg.D)
    except (ValueError, DomainError) as exc:
        raise InputError(str(exc)) from exc
    _emit({"P": pair.P.to_json(), "L": pair.L.to_json()}, args.pretty)
    return 0


def cmd_lax(args, cfg: RunConfig) -> int:
    tau = _load_charged_poly(args.tau)
    rhos = [_load_charged_poly(p) for p in args.rho]
    sigmas = [_load_charged_poly(p) for p in args.sigma]
    order = args.order if args.order is not None else cfg.truncation
    seed = args.seed if args.seed is not None else cfg.seed
    trials = args.trials if args.trials is not None else cfg.trials
    try:
        constraint = verify_constraint(tau, rhos, sigmas, args.k, order,
                                       trials=trials, seed=seed, D=cfg.D)
        flows = verify_flows(tau, rhos, sigmas, args.k, min(order, 3),
                             trials=trials, seed=seed, D=cfg.D)
    except (ValueError, DomainError) as exc:
        raise InputError(str(exc)) from exc
    payload = {"constraint": constraint.to_json(),
               "flows": [f.to_json() for f in flows]}
    _emit(payload, args.pretty)
    ok = constraint.all_pass and all(f.all_pass for f in flows)
    return 0 if ok else 1


def cmd_fock_apply(args, cfg: RunConfig) -> int:
    vec = _load_fock(args.vector)
    op = args.op
    try:
        if op in ("psi+", "psi-"):
            index = Fraction(args.index)
            out = psi_plus(index, vec) if op == "psi+" else psi_minus(index, vec)
        elif op == "alpha":
            out = alpha(int(args.index), vec)
        elif op == "Q":
            out = shift_charge(int(args.index), vec)
        else:
            raise InputError(f"unknown operator {op}")
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    _emit({"result": out.to_json()}, args.pretty)
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON run configuration")
    shared.add_argument("--pretty", action="store_true", help="indent output")
    parser = argparse.ArgumentParser(
        prog="tauforge",
        description="construct and verify polynomial tau-functions of the "
                    "vector k-constrained KP hierarchy")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau-from-matrix", parents=[shared],
                       help="build tau from chain-matrix data")
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=0, help="allowed chain violations")
    p.set_defaults(fn=cmd_tau_from_matrix)

    p = sub.add_parser("verify", parents=[shared],
                       help="run the bilinear identity suite")
    p.add_argument("--tau", required=True)
    p.add_argument("--rho", action="append", default=[])
    p.add_argument("--sigma", action="append", default=[])
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("grass", parents=[shared],
                       help="filtration data of a point")
    p.add_argument("action", choices=["min-n", "companions", "dtk"])
    p.add_argument("--grpoint", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=cmd_grass)

    p = sub.add_parser("dress", parents=[shared],
                       help="dressing and Lax operators of tau")
    p.add_argument("--tau", required=True)
    p.add_argument("--order", type=int)
    p.set_defaults(fn=cmd_dress)

    p = sub.add_parser("lax", parents=[shared],
                       help="constraint and flow checks on the Lax side")
    p.add_argument("--tau", required=True)
    p.add_argument("--rho", action="append", default=[])
    p.add_argument("--sigma", action="append", default=[])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=cmd_lax)

    p = sub.add_parser("fock-apply", parents=[shared],
                       help="apply a fermion-side operator")
    p.add_argument("--op", required=True, choices=["psi+", "psi-", "alpha", "Q"])
    p.add_argument("--index", required=True)
    p.add_argument("--vector", required=True)
    p.set_defaults(fn=cmd_fock_apply)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.load(args.config)
        return args.fn(args, cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
