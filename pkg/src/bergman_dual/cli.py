"""Command line entry point: ``verify <suite> [flags]``."""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigInvalid, UnknownSuite
from .quad import QuadSpec
from .report import emit
from .suites import SUITES, SuiteConfig, run_suite


def _parse_lambda(text: str) -> complex:
    """``re,im`` or ``re`` -> complex."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im for --lambda, got {text!r}")


def _parse_tol(text: str):
    key, sep, value = text.partition("=")
    if not sep:
        return ("__global__", float(key))
    return (key.strip(), float(value))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="verify",
        description="Numerical verification suites for the L^1 Bergman space of the upper half-plane "
                    "and its little-Bloch predual.",
    )
    p.add_argument("suite", help="one of: " + ", ".join(SUITES))
    p.add_argument("--alpha", type=float, default=0.0, help="weight exponent alpha > -1 (default 0)")
    p.add_argument("--t", type=float, action="append", help="group parameter; repeat for several")
    p.add_argument("--lambda", dest="lambdas", type=_parse_lambda, action="append",
                   help="spectral parameter as re,im; repeat for several")
    p.add_argument("--battery", help="battery file, one expression literal per line")
    p.add_argument("--probes", help="probe-point file, one complex literal per line (spectral)")
    p.add_argument("--tol", type=_parse_tol, action="append", default=[],
                   help="quadrature tolerance (a bare number) or a check tolerance key=value")
    p.add_argument("--radial-nodes", type=int, default=64)
    p.add_argument("--angular-nodes", type=int, default=128)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--include-timing", action="store_true",
                   help="add wall time to the JSON report (breaks byte-stability)")
    return p


def config_from_args(args) -> SuiteConfig:
    tolerances = dict(t for t in args.tol if t[0] != "__global__")
    quad_tol = [v for k, v in args.tol if k == "__global__"]
    q = QuadSpec(radial_nodes=args.radial_nodes, angular_nodes=args.angular_nodes, eps=args.eps,
                 **({"tol": quad_tol[-1]} if quad_tol else {}))
    kwargs = dict(suite=args.suite, alpha=args.alpha, quad=q, battery=args.battery, probes=args.probes,
                  tolerances=tolerances, out=args.out, fmt=args.fmt, seed=args.seed)
    if args.t:
        kwargs["t"] = tuple(args.t)
    if args.lambdas:
        kwargs["lambdas"] = tuple(args.lambdas)
    return SuiteConfig(**kwargs)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = run_suite(cfg)
    except (UnknownSuite, ConfigInvalid) as exc:
        print(f"verify: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = emit(report, cfg.fmt, cfg.out, include_timing=args.include_timing)
    if cfg.out is None:
        sys.stdout.write(text)
    for w in report.warnings:
        print(f"verify: warning: {w}", file=sys.stderr)
    failed = sum(not r.passed for r in report.records)
    print(f"verify {cfg.suite}: {len(report.records) - failed}/{len(report.records)} checks passed",
          file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
