"""Command-line harness.

Subcommands
-----------
solve     fixed-point exponent and critical quantities for one parameter point
simulate  Monte-Carlo sweep over a parameter grid, written as CSV
figure1   fixed-point curves and the kappa-star plane, written as two CSVs
verify    run named acceptance suites

Exit codes: 0 success, 1 usage or I/O error, 2 infeasible parameters (r <= beta).
Any flag may also be given in a ``--config`` file of ``key = value`` lines;
flags on the command line win.
"""

import argparse
from dataclasses import dataclass
import csv
import itertools
import math
import os
import sys

import numpy as np

from . import instance, metrics, theory, tgg
from ._validation import DomainError, InfeasibleError, derive_seed

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2

CSV_FIELDS = [
    "n", "beta", "r", "gamma", "procedure", "q", "kappa_star", "fdr", "fdr_se", "fnr",
    "fnr_se", "risk", "predicted_risk_exponent", "tau_min", "r_min", "feasible", "trials",
    "seed",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _int_list(text):
    return [int(float(v)) for v in str(text).split(",") if v.strip()]


def fmt(value, short=False):
    """CSV cell: 17 significant digits for reals (shortest round-trip form
    when ``short``), blank for missing."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value) if short else format(value, ".17g")


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


# -- solve ---------------------------------------------------------------------

def cmd_solve(args):
    try:
        kappa_star = theory.solve_kappa_star(args.beta, args.r, args.gamma)
    except InfeasibleError:
        print(f"infeasible: r <= beta (r={args.r}, beta={args.beta})", file=sys.stderr)
        print("feasible=false")
        return EXIT_INFEASIBLE
    print(f"kappa_star={fmt(kappa_star, short=True)}")
    print("feasible=true")
    if args.n is None:
        return EXIT_OK
    z = args.z
    q = args.q
    if q is None:
        c_star = args.c_star if args.c_star is not None else theory.q_cap(z)
        q = theory.optimal_q_star(args.beta, args.r, args.gamma, args.n, c_star, z_lower=z)
    params = theory.TheoryParams.build(args.beta, args.r, args.gamma, args.n, q=q, z_lower=z,
                                       z_upper=z, r_max=args.r_max)
    report = theory.rate_report(params)
    checks = theory.check_assumptions(params)
    lower, upper = theory.fnr_bounds_at_tau(args.beta, params.kappa, args.r, args.gamma, z, z,
                                            args.n)
    rows = [
        ("n", args.n), ("q", q), ("kappa", params.kappa),
        ("r_min", report.r_min), ("r_min_branch", report.r_min_branch),
        ("tau_min", report.tau_min), ("tau_min_degenerate", report.tau_min_degenerate),
        ("in_critical_regime", report.in_critical_regime),
        ("fnr_lower_minimax", report.fnr_lower), ("prefactor_c", report.prefactor_c),
        ("fnr_upper_bh", report.fnr_upper),
        ("fnr_upper_bc", theory.procedure_fnr_upper(args.beta, q, args.r, args.gamma, z, z,
                                                   args.n, "bc")),
        ("fnr_fixed_lower", lower), ("fnr_fixed_upper", upper),
        ("n_min_lower", report.n_min_lower), ("n_min_upper", report.n_min_upper),
    ]
    rows += [(f"assume_{k}", v) for k, v in vars(checks).items()]
    for key, value in rows:
        print(f"{key}={fmt(value, short=True)}")
    return EXIT_OK


# -- simulate --------------------------------------------------------------------

@dataclass
class SweepSpec:
    """Grid axes and Monte-Carlo settings for one sweep.

    Exactly one of ``beta`` and ``pi1`` is set. When ``q`` is None the target
    FDR is the rate-optimal ``c_star * n ** -kappa_star``.
    """

    n: list
    beta: list
    pi1: list
    r: list
    gamma: list
    procedure: str = "bh"
    q: float = None
    c_star: float = 1.0 / 24.0
    threshold: float = None
    trials: int = 100
    seed: int = 0

    def validate(self):
        if (self.beta is None) == (self.pi1 is None):
            raise UsageError("give exactly one of --beta and --pi1")
        for name in ("n", "r", "gamma"):
            if not getattr(self, name):
                raise UsageError(f"--{name} needs at least one value")
        if not (self.beta or self.pi1):
            raise UsageError("sparsity axis is empty")
        if self.trials < 2:
            raise UsageError("--trials must be at least 2")
        if self.procedure not in ("fixed", "bh", "bc"):
            raise UsageError(f"unknown procedure {self.procedure!r}")
        if self.procedure == "fixed" and self.threshold is None:
            raise UsageError("--procedure fixed needs --threshold")


def sweep_rows(sweep, n_jobs=1):
    sweep.validate()
    sparsity = sweep.beta if sweep.beta is not None else sweep.pi1
    cells = itertools.product(sweep.n, sparsity, sweep.r, sweep.gamma)
    for index, (n, s, r, gamma) in enumerate(cells):
        if sweep.beta is not None:
            cfg = instance.make_config(n, s, r, gamma)
        else:
            cfg = instance.from_pi1(n, s, r, gamma)
        spec = tgg.DistributionSpec(gamma)
        feasible = cfg.r > cfg.beta
        kappa_star = theory.solve_kappa_star(cfg.beta, cfg.r, gamma) if feasible else None
        q = tau = rmin = None
        if sweep.procedure == "fixed":
            level = sweep.threshold
        else:
            if sweep.q is not None:
                q = sweep.q
            else:
                q = sweep.c_star * (n ** -kappa_star if feasible else 1.0)
            level = q
            tau = theory.tau_min(cfg.beta, n, gamma, spec.z_lower, q=q)
            rmin = theory.r_min(cfg.beta, theory.kappa_from_q(q, n), n, spec.z_lower)
        cell_seed = derive_seed(sweep.seed, index)
        est = metrics.estimate_risk(cfg, spec, sweep.procedure, level, sweep.trials, cell_seed,
                                    n_jobs=n_jobs)
        yield {
            "n": n, "beta": cfg.beta, "r": cfg.r, "gamma": gamma,
            "procedure": sweep.procedure, "q": q, "kappa_star": kappa_star,
            "fdr": est.fdr, "fdr_se": est.fdr_se, "fnr": est.fnr, "fnr_se": est.fnr_se,
            "risk": est.risk,
            "predicted_risk_exponent": -kappa_star if feasible else None,
            "tau_min": tau, "r_min": rmin, "feasible": feasible, "trials": est.trials,
            "seed": cell_seed,
        }


def run_sweep(sweep, out_path, n_jobs=1):
    """Evaluate every grid cell and write the CSV in grid order."""
    rows = list(sweep_rows(sweep, n_jobs=n_jobs))
    write_csv(out_path, CSV_FIELDS, rows)
    return rows


def write_csv(path, fields, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([fmt(row[f]) for f in fields])


def cmd_simulate(args):
    sweep = SweepSpec(
        n=args.n, beta=args.beta, pi1=args.pi1, r=args.r, gamma=args.gamma,
        procedure=args.procedure or "bh", q=args.q,
        c_star=args.c_star if args.c_star is not None else 1.0 / 24.0,
        threshold=args.threshold, trials=args.trials or 100, seed=args.seed or 0,
    )
    if not args.out:
        raise UsageError("--out is required")
    run_sweep(sweep, args.out, n_jobs=args.jobs or 1)
    return EXIT_OK


# -- figure1 ---------------------------------------------------------------------

CURVE_FIELDS = ["beta", "r", "gamma", "kappa", "lhs", "rhs"]
PLANE_FIELDS = ["r", "beta", "gamma", "kappa_star"]


def figure1_rows(betas, rs, gammas, kappa_points=101, plane_step=0.05):
    """Rows for the fixed-point curves and the kappa-star plane.

    Each curve spans ``kappa`` in ``[0, 1]`` and carries one extra row at the
    fixed point itself.
    """
    curves = []
    for beta, r, gamma in itertools.product(betas, rs, gammas):
        grid = list(np.linspace(0.0, 1.0, kappa_points))
        if r > beta:
            grid.append(theory.solve_kappa_star(beta, r, gamma))
        for kappa in sorted(grid):
            curves.append({"beta": beta, "r": r, "gamma": gamma, "kappa": kappa, "lhs": kappa,
                           "rhs": theory.d_gamma(beta + kappa, r, gamma)})
    axis = np.round(np.arange(plane_step, 1.0, plane_step), 12)
    plane = []
    for gamma in gammas:
        for beta in axis:
            for r in axis:
                k = theory.solve_kappa_star(beta, r, gamma) if r > beta else None
                plane.append({"r": r, "beta": beta, "gamma": gamma, "kappa_star": k})
    return curves, plane


def cmd_figure1(args):
    if not args.out:
        raise UsageError("--out DIR is required")
    os.makedirs(args.out, exist_ok=True)
    curves, plane = figure1_rows(args.beta or [0.1, 0.3], args.r or [0.6, 0.9],
                                 args.gamma or [1.0, 2.0], args.kappa_points or 101,
                                 args.plane_step or 0.05)
    write_csv(os.path.join(args.out, "fixed_point_curves.csv"), CURVE_FIELDS, curves)
    write_csv(os.path.join(args.out, "kappa_star_plane.csv"), PLANE_FIELDS, plane)
    return EXIT_OK


# -- verify ----------------------------------------------------------------------

def cmd_verify(args):
    from .verification import SUITES

    names = list(SUITES) if args.suite == ["all"] else args.suite
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; known: {', '.join(SUITES)}")
    failed = 0
    for name in names:
        result = SUITES[name]()
        print(result.line(), flush=True)
        failed += not result.passed
    return 1 if failed else EXIT_OK


# -- parser ------------------------------------------------------------------------

_CONVERTERS = {}


def _add(parser, flag, conv, **kw):
    dest = flag.lstrip("-").replace("-", "_")
    _CONVERTERS[dest] = conv
    parser.add_argument(flag, type=conv, default=None, dest=dest, **kw)


def _threshold(text):
    return float(text)  # accepts "inf"


def build_parser():
    parser = _Parser(prog="tggfdr", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="fixed-point exponent and critical quantities")
    _add(p, "--beta", float, help="sparsity exponent")
    _add(p, "--r", float, help="signal exponent")
    _add(p, "--gamma", float, help="tail degree")
    _add(p, "--n", int, help="number of hypotheses (enables r_min, tau_min, bounds)")
    _add(p, "--q", float, help="target FDR (default: rate-optimal)")
    _add(p, "--c-star", float, help="prefactor of the rate-optimal q")
    _add(p, "--z", float, help="tail constant for both sides (default 2, the sampler's)")
    _add(p, "--r-max", float, help="cap on r used by the sample-size thresholds (default 0.9)")
    p.set_defaults(func=cmd_solve, required=("beta", "r", "gamma"),
                   fallback={"z": tgg.EXACT_Z, "r_max": 0.9})

    p = sub.add_parser("simulate", help="Monte-Carlo sweep to CSV")
    _add(p, "--n", _int_list, help="comma-separated sample sizes")
    sparsity = p.add_mutually_exclusive_group()
    _add(sparsity, "--beta", _float_list, help="comma-separated sparsity exponents")
    _add(sparsity, "--pi1", _float_list, help="comma-separated signal fractions")
    _add(p, "--r", _float_list, help="comma-separated signal exponents")
    _add(p, "--gamma", _float_list, help="comma-separated tail degrees")
    _add(p, "--procedure", str, choices=("fixed", "bh", "bc"))
    _add(p, "--q", float, help="fixed target FDR (default: rate-optimal per cell)")
    _add(p, "--c-star", float, help="prefactor of the rate-optimal q (default 1/24)")
    _add(p, "--threshold", _threshold, help="threshold for --procedure fixed")
    _add(p, "--trials", int)
    _add(p, "--seed", int)
    _add(p, "--jobs", int, help="worker processes; output does not depend on it")
    _add(p, "--out", str, help="output CSV path")
    p.set_defaults(func=cmd_simulate, required=("n", "r", "gamma"), fallback={})

    p = sub.add_parser("figure1", help="fixed-point curves and kappa-star plane")
    _add(p, "--beta", _float_list)
    _add(p, "--r", _float_list)
    _add(p, "--gamma", _float_list)
    _add(p, "--kappa-points", int)
    _add(p, "--plane-step", float)
    _add(p, "--out", str, help="output directory")
    p.set_defaults(func=cmd_figure1, required=(), fallback={})

    p = sub.add_parser("verify", help="run acceptance suites")
    p.add_argument("suite", nargs="+", help="suite id(s) or 'all'")
    p.set_defaults(func=cmd_verify, required=(), fallback={})

    for sp in sub.choices.values():
        if sp.prog.endswith("verify"):
            continue
        sp.add_argument("--config", default=None, help="key = value file; flags override it")
    return parser


def _merge_config(args):
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            if not hasattr(args, key) or key in ("config", "func", "command"):
                raise UsageError(f"unknown config key {key!r}")
            if getattr(args, key) is None:
                setattr(args, key, _CONVERTERS[key](value))
    for key, value in args.fallback.items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    missing = [k for k in args.required if getattr(args, k) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-")
                                                                     for m in missing))


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already reported
        return exc.code
    try:
        _merge_config(args)
        return args.func(args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"tggfdr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tggfdr {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
