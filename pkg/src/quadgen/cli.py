"""``quadgen`` command-line front end.

Subcommands: ``nodes``, ``weights``, ``study``, ``asym`` and ``balayage``.
Exit codes: 0 success, 1 a study verdict failed, 2 invalid configuration,
3 admissibility failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .diagnostics import run_study
from .measures import (
    DiscreteMeasure,
    EquilibriumMeasure,
    as_rational,
    balayage_density,
    balayage_tail,
    load_measure_config,
)
from .nodes import NodeScheme, admissibility_check, perturb_nodes, phase_targets
from .orthopoly import compare_asymptotics
from .quadrature import PositivePolynomial, interpolatory_rule, varying_measure_weights

EXIT_OK, EXIT_VERDICT, EXIT_CONFIG, EXIT_ADMISSIBILITY = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    a: Fraction
    measure: DiscreteMeasure | None
    n_values: list[int]
    A: float = 0.0
    ell: float = 1.0
    seed: int | None = None
    out: Path | None = None
    fmt: str = "json"
    tol: float = 1e-12
    options: dict = field(default_factory=dict)


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _parse_n(args) -> list[int]:
    if args.n_range:
        try:
            parts = [int(p) for p in args.n_range.split(":")]
        except ValueError as exc:
            raise ConfigError(f"bad --n-range {args.n_range!r}; expected a:b[:step]") from exc
        if len(parts) == 2:
            parts.append(1)
        if len(parts) != 3 or parts[2] < 1:
            raise ConfigError(f"bad --n-range {args.n_range!r}; expected a:b[:step]")
        vals = list(range(parts[0], parts[1] + 1, parts[2]))
    elif args.n:
        try:
            vals = [int(p) for p in args.n.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad --n {args.n!r}") from exc
    else:
        raise ConfigError("one of --n or --n-range is required")
    if not vals or min(vals) < 1:
        raise ConfigError("n must be >= 1")
    return vals


def build_config(args) -> RunConfig:
    a = None
    measure = None
    if args.masses:
        measure, a = load_measure_config(args.masses)
    elif args.zeta is not None:
        measure = DiscreteMeasure.single(args.zeta)
    if args.a is not None:
        a = as_rational(args.a)
    if a is None and args.command == "balayage":
        a = Fraction(0)
    if a is None:
        raise ConfigError("--a is required (or an 'a' entry in the masses file)")
    if measure is None and a != 1 and args.command != "balayage":
        raise ConfigError("a < 1 needs --zeta or --masses")
    if args.A < 0 or args.ell <= 0:
        raise ConfigError("need --A >= 0 and --ell > 0")
    n_values = _parse_n(args) if args.command != "balayage" else []
    opts = {k: v for k, v in vars(args).items()
            if k not in {"command", "a", "zeta", "masses", "n", "n_range", "A", "ell", "seed", "out", "format", "tol"}}
    return RunConfig(args.command, a, measure, n_values, args.A, args.ell, args.seed,
                     Path(args.out) if args.out else None, args.format, args.tol, opts)


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        cfg.out.write_text(text)


def _table_csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def _scheme(cfg: RunConfig) -> NodeScheme:
    kind = cfg.options.get("kind") or ("closed-form" if cfg.options.get("closed_form") else "phase")
    return NodeScheme(kind, cfg.a, cfg.measure, cfg.A, cfg.ell)


def cmd_nodes(cfg: RunConfig) -> int:
    scheme = _scheme(cfg)
    pf = scheme.phase_function()
    tables = []
    failed = False
    for n in cfg.n_values:
        x = np.asarray(scheme.nodes(n), dtype=float)
        if cfg.seed is not None and cfg.A > 0:
            x = perturb_nodes(x, n, cfg.A, cfg.ell, cfg.seed)
        rep = admissibility_check(x, pf, cfg.A, cfg.ell, n, floor=cfg.tol)
        failed |= not rep.passed
        phase = np.atleast_1d(pf(x))
        tables.append((n, x, phase, rep))
    if cfg.fmt == "csv":
        rows = [[n, j + 1, _fmt(x[j]), _fmt(phase[j]), _fmt(phase_targets(n)[j]), _fmt(rep.deviations[j])]
                for n, x, phase, rep in tables for j in range(n)]
        _write(cfg, _table_csv(["n", "j", "x_j", "phase", "target", "deviation"], rows))
    else:
        doc = {
            "scheme": scheme.describe(),
            "tables": [{
                "n": n,
                "nodes": [_fmt(v) for v in x],
                "phase": [_fmt(v) for v in phase],
                "target": [_fmt(v) for v in phase_targets(n)],
                "deviation": [_fmt(v) for v in rep.deviations],
                "max_deviation": _fmt(rep.max_deviation),
                "budget": _fmt(rep.budget),
                "admissible": rep.passed,
            } for n, x, phase, rep in tables],
        }
        _write(cfg, json.dumps(doc, indent=2))
    if failed:
        print("admissibility check failed", file=sys.stderr)
        return EXIT_ADMISSIBILITY
    return EXIT_OK


def cmd_weights(cfg: RunConfig) -> int:
    if len(cfg.n_values) != 1:
        raise ConfigError("weights takes a single --n")
    n = cfg.n_values[0]
    if cfg.options.get("method") == "varying":
        rule = varying_measure_weights(PositivePolynomial(cfg.measure, cfg.a, n))
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rule = interpolatory_rule(_scheme(cfg), n, precision=cfg.options.get("precision", "auto"))
    _write(cfg, rule.to_csv() if cfg.fmt == "csv" else rule.to_json())
    return EXIT_OK


def cmd_study(cfg: RunConfig) -> int:
    report = run_study(_scheme(cfg), cfg.n_values)
    for r in report.records:
        status = "failed: " + r.failure if r.failure else (
            f"sum|w|={r.sum_abs_weights:.6g} neg={r.num_negative} exact={r.measured_exactness}")
        print(f"n={r.n}: {status}", file=sys.stderr)
    _write(cfg, report.to_csv() if cfg.fmt == "csv" else report.to_json())
    return EXIT_OK if report.passed else EXIT_VERDICT


def cmd_asym(cfg: RunConfig) -> int:
    rep = compare_asymptotics(cfg.measure, cfg.a, cfg.n_values)
    _write(cfg, rep.to_csv() if cfg.fmt == "csv" else rep.to_json())
    return EXIT_OK


def cmd_balayage(cfg: RunConfig) -> int:
    if cfg.measure is None:
        raise ConfigError("balayage needs --zeta or --masses")
    points = int(cfg.options.get("points") or 101)
    if points < 2:
        raise ConfigError("--points must be at least 2")
    # interior Chebyshev-spaced grid, avoiding the endpoint singularities
    x = np.cos((2 * np.arange(points, 0, -1) - 1) * np.pi / (2 * points))
    dens = np.asarray(balayage_density(cfg.measure, x))
    tail = np.asarray(balayage_tail(cfg.measure, x))
    em = EquilibriumMeasure.from_measure(cfg.measure, cfg.a)
    cdf = np.asarray(em.cdf(x))
    if cfg.fmt == "csv":
        rows = [[_fmt(a), _fmt(b), _fmt(c), _fmt(d)] for a, b, c, d in zip(x, dens, tail, cdf)]
        _write(cfg, _table_csv(["x", "density", "tail", "equilibrium_tail"], rows))
    else:
        _write(cfg, json.dumps({
            "masses": cfg.measure.to_json(), "a": str(cfg.a),
            "x": [_fmt(v) for v in x], "density": [_fmt(v) for v in dens],
            "tail": [_fmt(v) for v in tail], "equilibrium_tail": [_fmt(v) for v in cdf],
        }, indent=2))
    return EXIT_OK


COMMANDS = {"nodes": cmd_nodes, "weights": cmd_weights, "study": cmd_study,
            "asym": cmd_asym, "balayage": cmd_balayage}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", help="exact rational weight p/q in [0, 1]")
    p.add_argument("--zeta", type=float, help="single real mass point")
    p.add_argument("--masses", help='JSON file {"masses": [[re, im], ...], "a": "p/q"}')
    p.add_argument("--n", help="degree, or a comma-separated list")
    p.add_argument("--n-range", dest="n_range", help="a:b[:step], inclusive")
    p.add_argument("--A", type=float, default=0.0, help="phase budget amplitude")
    p.add_argument("--ell", type=float, default=1.0, help="phase budget decay rate")
    p.add_argument("--seed", type=int, help="seed for node perturbation (used when A > 0)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=float, default=1e-12, help="admissibility floor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadgen", description="Convergent interpolatory quadrature for the arcsine measure.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("nodes", help="generate a node table")
    _common(p)
    p.add_argument("--closed-form", dest="closed_form", action="store_true", help="use the explicit node families")
    p.add_argument("--kind", choices=("phase", "closed-form", "equispaced", "chebyshev"))
    p = sub.add_parser("weights", help="compute a quadrature rule")
    _common(p)
    p.add_argument("--method", choices=("interpolatory", "varying"), default="interpolatory")
    p.add_argument("--closed-form", dest="closed_form", action="store_true")
    p.add_argument("--kind", choices=("phase", "closed-form", "equispaced", "chebyshev"))
    p.add_argument("--precision", choices=("auto", "double", "extended"), default="auto")
    p = sub.add_parser("study", help="convergence study over n")
    _common(p)
    p.add_argument("--closed-form", dest="closed_form", action="store_true")
    p.add_argument("--kind", choices=("phase", "closed-form", "equispaced", "chebyshev"))
    p = sub.add_parser("asym", help="zeros of varying-measure polynomials vs phase nodes")
    _common(p)
    p = sub.add_parser("balayage", help="balayage density and tail table")
    _common(p)
    p.add_argument("--points", type=int, default=101)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"quadgen {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
