"""Command-line entry point: parameter sweeps, data tables and ``verify``.

Output is CSV (``#``-prefixed metadata lines, one header line) or JSON with
the same content.  Floats are written with 17 significant digits, so reading
a file back reproduces the table exactly; the literal ``NA`` (JSON ``null``)
marks values that do not exist, e.g. Theta beyond the N00N window.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from . import __version__
from .dicke import N_MAX, NonInformativeError, measure_parity
from .dynamics import IntegrityError, VariationalState, eom_rhs, evolve
from .interferometry import fig3_data, mean_parity, variance_parity
from .nonlinear import fig4_data, theta_max
from .numerics import OdeError, OdeSettings, QuadratureError, QuadratureSettings
from .states import (OutsideWindowError, SuperpositionSpec, log_cat_size, overlap_X,
                     scs_normalization, to_dicke)
from .stationary import lambda_critical, set1_solution, set2_solution
from .variational import ALPHA, ModelParams, lambda_param
from .verification import run_checks

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
NA = "NA"


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- tables

@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]
    metadata: dict[str, Any] = field(default_factory=dict)


def format_cell(v) -> str:
    if v is None:
        return NA
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        s = format(float(v), ".17g")
        if re.fullmatch(r"-?\d+", s):
            s += ".0"
        return s
    return str(v)


def parse_cell(s: str):
    if s == NA:
        return None
    if s in ("true", "false"):
        return s == "true"
    if re.fullmatch(r"-?\d+", s):
        return int(s)
    try:
        return float(s)
    except ValueError:
        return s


def render_csv(table: Table) -> str:
    out = io.StringIO()
    for key, value in table.metadata.items():
        out.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    out.write(",".join(table.columns) + "\n")
    for row in table.rows:
        out.write(",".join(format_cell(v) for v in row) + "\n")
    return out.getvalue()


def _json_value(v):
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def render_json(table: Table) -> str:
    doc = {"metadata": table.metadata, "columns": table.columns,
           "rows": [[_json_value(v) for v in row] for row in table.rows]}
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def read_table(text: str, fmt: str = "csv") -> Table:
    if fmt == "json":
        doc = json.loads(text)
        return Table(doc["columns"], doc["rows"], doc["metadata"])
    meta, lines = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = json.loads(value)
        elif line:
            lines.append(line)
    columns = lines[0].split(",")
    rows = [[parse_cell(c) for c in line.split(",")] for line in lines[1:]]
    return Table(columns, rows, meta)


# ---------------------------------------------------------------- parsing helpers

_PI_TOKEN = re.compile(r"^\s*(?P<coef>[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?|[-+])?\s*\*?\s*pi\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$")


def parse_real(text: str) -> float:
    """Float literal or a multiple of pi such as ``pi``, ``-pi/2``, ``0.5pi``."""
    m = _PI_TOKEN.match(text)
    if m:
        coef = m.group("coef")
        c = -1.0 if coef == "-" else 1.0 if coef in (None, "+") else float(coef)
        den = float(m.group("den")) if m.group("den") else 1.0
        return c * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def parse_grid(text: str) -> np.ndarray:
    """``start:end:count`` (inclusive) or a comma-separated list."""
    parts = text.split(":")
    if len(parts) == 3:
        start, end = parse_real(parts[0]), parse_real(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"grid count must be an integer: {text!r}") from None
        if count < 1:
            raise ConfigError(f"grid must be nonempty: {text!r}")
        return np.linspace(start, end, count)
    if len(parts) != 1:
        raise ConfigError(f"grid must be start:end:count or a list: {text!r}")
    values = [parse_real(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ConfigError("grid must be nonempty")
    return np.array(values)


def parse_int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers: {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise ConfigError(f"particle numbers must be positive integers: {text!r}")
    return values


def _pmap(fn: Callable, items: Iterable, threads: int) -> list:
    items = list(items)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _resolve_lambda(args) -> float:
    triple = (args.U, args.kappa, args.N)
    given = [v is not None for v in triple]
    if args.lam is not None and any(given):
        raise ConfigError("give either --lambda or --U/--kappa/--N, not both")
    if args.lam is None:
        if not all(given):
            raise ConfigError("give --lambda, or all of --U, --kappa and --N")
        try:
            params = ModelParams(N=args.N, U=args.U, kappa=args.kappa, M=args.M)
            return lambda_param(params)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return args.lam


def _echo(args) -> dict:
    skip = {"out", "threads", "func", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _ode_settings(args) -> OdeSettings:
    kw = {}
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    if getattr(args, "max_step", None) is not None:
        kw["max_step"] = args.max_step
    try:
        return OdeSettings(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _quad_settings(args) -> QuadratureSettings:
    kw = {}
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    try:
        return QuadratureSettings(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------- commands

def cmd_dynamics(args) -> Table:
    lam = _resolve_lambda(args)
    if not lam > 0:
        raise ConfigError("Λ must be positive")
    if not abs(args.p0) <= 1:
        raise ConfigError(f"--p0 must satisfy |p0| <= 1, got {args.p0}")
    if not args.t_end > 0:
        raise ConfigError("--t-end must be positive")
    settings = _ode_settings(args)
    traj = evolve(VariationalState(args.p0, args.theta0, lam, args.M), args.t_end, settings)
    h0 = traj.energy[0]
    scale = max(abs(h0), 1.0)
    rows = [[t, p, th, h, abs(h - h0) / scale]
            for t, p, th, h in zip(traj.t_prime, traj.p, traj.theta, traj.energy)]
    meta = {"lambda": lam, "max_energy_drift": traj.energy_drift}
    return Table(["t_prime", "p", "theta", "energy", "energy_drift"], rows, meta)


def cmd_stationary(args) -> Table:
    if args.lambda_grid is not None:
        if args.lam is not None or args.U is not None:
            raise ConfigError("--lambda-grid excludes --lambda and --U/--kappa/--N")
        lams = [float(x) for x in parse_grid(args.lambda_grid)]
    else:
        lams = [_resolve_lambda(args)]
    if any(not lam >= 0 for lam in lams):
        raise ConfigError("Λ must be non-negative")
    rows = []
    for lam in lams:
        points = []
        if args.branch in ("all", "set1"):
            points += set1_solution(lam, args.M)
        if args.branch in ("all", "set2"):
            points += set2_solution(lam, args.M)
        for pt in points:
            residual = max(abs(v) for v in eom_rhs(pt.as_state()))
            rows.append([pt.branch.value, lam, args.M, pt.p0, pt.theta0, residual])
    meta = {"lambda_critical": lambda_critical()}
    return Table(["branch", "lambda", "M", "p0", "theta0", "residual"], rows, meta)


def cmd_catsize(args) -> Table:
    Ns = parse_int_list(args.N)
    grid = parse_grid(args.p0_grid)
    if np.any(grid < 0) or np.any(grid > 1):
        raise ConfigError("|p0| grid must lie in [0, 1]")
    qs = _quad_settings(args)

    def row(item):
        n, p0 = item
        x_par = overlap_X(p0, "parabolic")
        x_exact = overlap_X(p0, "exact_quadrature", settings=qs) if args.exact else None
        lc = log_cat_size(p0, n)
        size = math.exp(lc) if lc < 709.0 else math.inf
        return [n, p0, x_par, x_exact, lc, size, scs_normalization(p0, n)]

    items = [(n, float(p)) for n in Ns for p in grid]
    rows = _pmap(row, items, args.threads)
    cols = ["N", "p0", "X", "X_exact", "log_cat_size", "cat_size", "normalization"]
    return Table(cols, rows, {"alpha": ALPHA})


def _mzi_state(args) -> SuperpositionSpec:
    if args.state == "scs":
        if args.p0 is None or args.theta_N is not None or args.lam is not None:
            raise ConfigError("scs needs --p0 (and no --theta-N/--lambda)")
        if not 0 <= args.p0 <= 1:
            raise ConfigError("--p0 must lie in [0, 1]")
        return SuperpositionSpec.scs(args.N, args.p0)
    if (args.theta_N is None) == (args.lam is None):
        raise ConfigError("noon needs exactly one of --theta-N or --lambda")
    if args.theta_N is not None:
        return SuperpositionSpec.noon(args.N, parse_real(args.theta_N))
    try:
        return SuperpositionSpec.noon_from_lambda(args.N, args.lam)
    except OutsideWindowError as exc:
        raise ConfigError(str(exc)) from None


def cmd_mzi_sweep(args) -> Table:
    if args.N < 1:
        raise ConfigError("--N must be >= 1")
    spec = _mzi_state(args)
    grid = parse_grid(args.phi_grid)
    cols = ["phi", "mean", "variance"]
    if args.oracle:
        if args.N > N_MAX:
            raise ConfigError(f"--oracle supports N <= {N_MAX}")
        state = to_dicke(spec)
        cols += ["oracle_mean", "oracle_variance"]

    def row(phi):
        r = [float(phi), float(mean_parity(spec, phi)), float(variance_parity(spec, phi))]
        if args.oracle:
            m = measure_parity(state, float(phi))
            r += [m.mean, m.variance]
        return r

    meta = {"state": spec.kind.value, "N": spec.N, "p0": spec.p0_abs, "theta_N": spec.theta_N}
    return Table(cols, _pmap(row, grid, args.threads), meta)


def cmd_sensitivity(args) -> Table:
    if not 1 <= args.N_min <= args.N_max:
        raise ConfigError("need 1 <= --N-min <= --N-max")
    Ns = range(args.N_min, args.N_max + 1)
    if args.state == "scs":
        p0s = [float(v) for v in parse_grid(args.p0)]
        if any(not 0 < p <= 1 for p in p0s):
            raise ConfigError("SCS sensitivity needs 0 < |p0| <= 1")
        data = fig3_data(Ns, p0s)
    else:
        data = fig3_data(Ns, [], include_noon=True)
    rows = [[r.series, r.N, r.p0, r.sigma_phi, r.reduced] for r in data]
    return Table(["series", "N", "p0", "sigma_phi", "sqrtN_sigma_phi"], rows, {})


def _theta_grid(Ns: list[int], base: np.ndarray | None) -> np.ndarray:
    """The requested grid (default 101 points up to Theta_max(1)) plus every window edge."""
    if base is None:
        base = np.linspace(0.0, theta_max(1), 101)
    return np.unique(np.concatenate([base, [theta_max(n) for n in Ns]]))


def cmd_theta_sweep(args) -> Table:
    Ns = parse_int_list(args.N)
    grid = _theta_grid(Ns, parse_grid(args.theta_grid) if args.theta_grid else None)
    if np.any(grid < 0):
        raise ConfigError("Theta must be non-negative")
    per_n = _pmap(lambda n: fig4_data([n], grid), Ns, args.threads)
    rows = [[r.N, r.theta_param, r.theta_max, r.sigma_theta, r.sigma_theta_linear,
             r.at_boundary, r.beats_single_particle] for chunk in per_n for r in chunk]
    cols = ["N", "Theta", "Theta_max", "sigma_theta", "sigma_theta_linear",
            "at_boundary", "beats_single_particle"]
    return Table(cols, rows, {"alpha": ALPHA})


def cmd_verify(args) -> Table:
    if not 1 <= args.N_max <= N_MAX:
        raise ConfigError(f"--N-max must lie in [1, {N_MAX}]")
    results = run_checks(args.N_max, alpha=args.alpha, threads=args.threads)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("ALL PASS" if ok else "VERIFICATION FAILED: " + ", ".join(r.name for r in results if not r.passed))
    rows = [[r.name, r.max_deviation, r.threshold, "PASS" if r.passed else "FAIL"] for r in results]
    return Table(["check", "max_deviation", "threshold", "status"], rows, {"all_pass": ok})


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let values such as "-pi:pi:201" or "-0.5,1" through as arguments
        self._negative_number_matcher = re.compile(r"^-(\d|\.\d|pi)")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_lambda_args(p):
    p.add_argument("--lambda", dest="lam", type=float, help="dimensionless coupling Λ")
    p.add_argument("--U", type=float, help="two-body interaction magnitude")
    p.add_argument("--kappa", type=float, help="inter-well tunnelling rate")
    p.add_argument("--N", type=int, help="total particle number")
    p.add_argument("--M", type=int, choices=(-1, 1), default=1, help="effective mass sign")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--rel-tol", type=float, help="relative tolerance (ODE / quadrature)")
    common.add_argument("--abs-tol", type=float, help="absolute tolerance (ODE / quadrature)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")

    parser = _Parser(prog="soliton-metrology", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dynamics", parents=[common], help="integrate (p, theta) trajectories")
    _add_lambda_args(p)
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--theta0", type=parse_real, default=0.0)
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--max-step", type=float)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("stationary", parents=[common], help="stationary points (Set 1 / Set 2)")
    _add_lambda_args(p)
    p.add_argument("--lambda-grid", help="sweep Λ over start:end:count")
    p.add_argument("--branch", choices=("all", "set1", "set2"), default="all")
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("catsize", parents=[common], help="cat size 1/eps versus |p0|")
    p.add_argument("--N", default="100,1000,10000")
    p.add_argument("--p0-grid", default="0:1:101")
    p.add_argument("--exact", action="store_true", help="also emit the quadrature overlap")
    p.set_defaults(func=cmd_catsize)

    p = sub.add_parser("mzi-sweep", parents=[common], help="mean parity and variance versus phi")
    p.add_argument("--state", choices=("scs", "noon"), required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p0", type=float)
    p.add_argument("--theta-N", dest="theta_N")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--phi-grid", default="-pi:pi:201")
    p.add_argument("--oracle", action="store_true", help="add exact Dicke-space columns")
    p.set_defaults(func=cmd_mzi_sweep)

    p = sub.add_parser("sensitivity", parents=[common], help="sqrt(N) sigma_phi table")
    p.add_argument("--state", choices=("scs", "noon"), default="scs")
    p.add_argument("--N-min", dest="N_min", type=int, default=1)
    p.add_argument("--N-max", dest="N_max", type=int, default=100)
    p.add_argument("--p0", default="0.1,0.3,0.5,0.7,1.0")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("theta-sweep", parents=[common], help="sigma_Theta versus Theta")
    p.add_argument("--N", default="1,2,3,4")
    p.add_argument("--theta-grid", help="Theta values (start:end:count or list); window edges are always added")
    p.set_defaults(func=cmd_theta_sweep)

    p = sub.add_parser("verify", parents=[common], help="oracle vs closed-form checks")
    p.add_argument("--N-max", dest="N_max", type=int, default=12)
    p.add_argument("--alpha", type=float, default=ALPHA, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(table: Table, args, command: str):
    table.metadata = {"version": __version__, "command": command,
                      "params": _echo(args), **table.metadata}
    text = render_json(table) if args.format == "json" else render_csv(table)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    elif args.command != "verify":
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, OdeError, IntegrityError, NonInformativeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(table, args, args.command)
    if args.command == "verify" and not table.metadata["all_pass"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
