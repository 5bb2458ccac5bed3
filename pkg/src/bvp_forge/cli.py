"""Command-line front end: ``bvp-forge solve | tables | compare``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from .errors import (BVPError, ConfigError, ConvergenceError, DivergenceError, ExprDomainError, ParseError,
                     SolverError)
from .ivp import Integrator
from .linsys import Linearization
from .mesh import DScheme, format_float, make_mesh, write_columns_csv
from .problem import load_problem
from .relaxation import RelaxConfig, relax_solve
from .shooting import Path, RhsMode, ShootConfig, ShootMethod, spi_solve

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_DIVERGED = 4
EXIT_NOT_CONVERGED = 5
EXIT_SOLVER = 6

METHODS = {
    "relax-newton": ("relax", Linearization.NEWTON),
    "relax-picard": ("relax", Linearization.PICARD),
    "relax-slope": ("relax", Linearization.CONSTANT_SLOPE),
    "shoot-newton": ("shoot", ShootMethod.NEWTON),
    "shoot-picard": ("shoot", ShootMethod.PICARD),
    "shoot-slope": ("shoot", ShootMethod.CONSTANT_SLOPE),
    "shoot-newton-df": ("shoot", ShootMethod.NEWTON_DF),
}

DEFAULT_SHOOT_TOL = 1e-3
DEFAULT_RELAX_TOL = 1e-10

# (v_a^k, E_k) rows of the two published runs of the cube problem
NEWTON_TABLE = [(0.0, -0.433349035739307),
                (0.379948530223661, 0.026009489270876),
                (0.359783026933729, 0.000100006717963)]
DERIVATIVE_FREE_TABLE = [(0.0, -0.433349035739307),
                         (0.379942276669709, 0.026001423439514),
                         (0.359786457564626, 0.000104397665347)]


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, DivergenceError):
        return EXIT_DIVERGED
    if isinstance(exc, ConvergenceError):
        return EXIT_NOT_CONVERGED
    return EXIT_SOLVER


def failure_class(exc: BaseException) -> str:
    return {EXIT_PARSE: "parse-error", EXIT_CONFIG: "config-error", EXIT_DIVERGED: "diverged",
            EXIT_NOT_CONVERGED: "not-converged", EXIT_SOLVER: "solver-failure"}[exit_code_for(exc)]


def run_method(spec, method, n=1001, tol=None, max_iter=50, va0=0.0, scheme="central",
               integrator="paper-euler", rhs="endpoint", path="formula"):
    """Run one method selector; returns a result dict with the trace and final grid data.

    Solver exceptions propagate; a relaxation that stops at ``max_iter``
    is turned into ConvergenceError so both families fail the same way.
    """
    try:
        family, kind = METHODS[method]
    except KeyError:
        raise ConfigError(f"unknown method {method!r}; choose from {', '.join(METHODS)}") from None
    if family == "relax":
        cfg = RelaxConfig(variant=kind, scheme=scheme, N=n,
                          tol=DEFAULT_RELAX_TOL if tol is None else tol, max_iter=max_iter)
        report = relax_solve(spec, cfg)
        result = {
            "family": family, "trace": report.trace, "trace_header": ("k", "initial_slope", "residual"),
            "x": report.solution.mesh.x, "u": report.solution.values,
            "converged": report.converged, "iterations": report.iterations,
            "final": report.trace[-1].residual, "initial_slope": report.solution.initial_slope(),
            "dominance": report.dominance.status.value, "h": report.solution.mesh.h,
        }
        if not report.converged:
            raise ConvergenceError(f"{method}: no convergence after {max_iter} iterations, "
                                   f"residual {result['final']:.3e}", trace=report.trace)
        return result
    cfg = ShootConfig(method=kind, path=path, integrator=integrator, N=n, v_a0=va0,
                      tol=DEFAULT_SHOOT_TOL if tol is None else tol, max_iter=max_iter,
                      rhs=rhs, scheme=scheme)
    state, trace = spi_solve(spec, cfg)
    return {
        "family": family, "trace": trace, "trace_header": ("k", "v_a", "E"),
        "x": state.mesh.x, "u": state.traj.u,
        "converged": True, "iterations": trace.iterations,
        "final": state.E, "initial_slope": state.v_a, "h": state.mesh.h,
    }


def _write_trace(trace, header, path):
    write_columns_csv(path, header, ([r.k for r in trace], [r.value for r in trace],
                                     [r.residual for r in trace]))


def _print_trace(trace, header, out):
    print(f"{header[0]:>4}  {header[1]:>22}  {header[2]:>22}", file=out)
    for r in trace:
        print(f"{r.k:>4}  {r.value:>22.15g}  {r.residual:>22.15g}", file=out)


def _write_report(report, path, fmt):
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in report.items():
            w.writerow([k, format_float(v) if isinstance(v, float) else v])


# ---------------------------------------------------------------------------
# subcommands

def cmd_solve(args, out=sys.stdout) -> int:
    t0 = time.perf_counter()
    spec = load_problem(args.problem)
    report = {"problem": spec.name, "method": args.method, "n": args.n}
    try:
        res = run_method(spec, args.method, n=args.n, tol=args.tol, max_iter=args.max_iter,
                         va0=args.va0, scheme=args.d_scheme, integrator=args.integrator,
                         rhs=args.rhs, path=args.path)
    except ConvergenceError as exc:
        report.update(converged=False, error=str(exc), status=failure_class(exc),
                      iterations=exc.trace.iterations if exc.trace is not None else None,
                      wall_time=time.perf_counter() - t0)
        if exc.trace is not None and args.trace:
            header = ("k", "initial_slope", "residual") if args.method.startswith("relax") else ("k", "v_a", "E")
            _write_trace(exc.trace, header, args.trace)
        if args.report:
            _write_report(report, args.report, args.format)
        raise
    report.update(converged=True, status="converged", iterations=res["iterations"], h=res["h"],
                  final=res["final"], initial_slope=res["initial_slope"],
                  wall_time=time.perf_counter() - t0)
    if "dominance" in res:
        report["dominance"] = res["dominance"]
    _print_trace(res["trace"], res["trace_header"], out)
    print(f"converged in {res['iterations']} iteration(s), h = {res['h']:g}", file=out)
    if args.trace:
        _write_trace(res["trace"], res["trace_header"], args.trace)
    if args.trajectory:
        write_columns_csv(args.trajectory, ("x", "u"), (res["x"], res["u"]))
    if args.report:
        _write_report(report, args.report, args.format)
    return EXIT_OK


def reproduce_tables(n=1001, integrator="paper-euler", out=sys.stdout):
    """Rerun the two published cube-problem runs and compare cell by cell.

    Returns ``(ok, cells)`` where each cell is
    ``(table, k, column, computed, expected, diff, tol)``.
    """
    spec = load_problem("cube")
    h = make_mesh(spec.a, spec.b, n).h
    print(f"N = {n}, h = {h:g}, integrator = {integrator}", file=out)
    runs = [("newton", "shoot-newton", NEWTON_TABLE, 1e-9, 1e-9),
            ("derivative-free", "shoot-newton-df", DERIVATIVE_FREE_TABLE, 1e-6, 1e-9)]
    cells = []
    ok = True
    for name, method, expected, tol, tol_row0 in runs:
        print(f"\n{name} table ({method})", file=out)
        print(f"{'k':>2} {'col':>4} {'computed':>20} {'expected':>20} {'|diff|':>10}", file=out)
        try:
            res = run_method(spec if method == "shoot-newton" else spec.without_partials(),
                             method, n=n, integrator=integrator, tol=DEFAULT_SHOOT_TOL, va0=0.0)
            rows = [(r.value, r.residual) for r in res["trace"]]
        except BVPError as exc:
            print(f"run failed: {exc}", file=out)
            rows = []
        if len(rows) != len(expected):
            print(f"row count {len(rows)} != {len(expected)}", file=out)
            ok = False
        for k, exp_row in enumerate(expected):
            for col, idx in (("v_a", 0), ("E", 1)):
                got = rows[k][idx] if k < len(rows) else float("nan")
                diff = abs(got - exp_row[idx])
                cell_tol = tol_row0 if k == 0 else tol
                passed = diff <= cell_tol
                ok &= passed
                cells.append((name, k, col, got, exp_row[idx], diff, cell_tol))
                flag = "" if passed else f"  <-- exceeds {cell_tol:g}"
                print(f"{k:>2} {col:>4} {got:>20.15f} {exp_row[idx]:>20.15f} {diff:>10.2e}{flag}", file=out)
    print("\nall cells within tolerance" if ok else "\nMISMATCH", file=out)
    return ok, cells


def cmd_tables(args, out=sys.stdout) -> int:
    ok, _ = reproduce_tables(n=args.n, integrator=args.integrator, out=out)
    return EXIT_OK if ok else EXIT_MISMATCH


def compare(problems, methods, **options):
    """Run every (problem, method) pair; failures are recorded per cell."""
    if not problems or not methods:
        raise ConfigError("compare needs at least one problem and one method")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ConfigError(f"unknown method(s): {', '.join(unknown)}")
    cells = []
    for prob in problems:
        try:
            spec = load_problem(prob)
        except BVPError as exc:
            for m in methods:
                cells.append({"problem": prob, "method": m, "status": failure_class(exc),
                              "iterations": None, "final": None, "error": str(exc)})
            continue
        for m in methods:
            cell = {"problem": prob, "method": m}
            try:
                res = run_method(spec, m, **options)
                cell.update(status="converged", iterations=res["iterations"], final=res["final"], error="")
            except ConvergenceError as exc:
                its = exc.trace.iterations if exc.trace is not None else None
                final = exc.trace[-1].residual if exc.trace is not None and len(exc.trace) else None
                cell.update(status="not-converged", iterations=its, final=final, error=str(exc))
            except (BVPError, ExprDomainError) as exc:
                cell.update(status=failure_class(exc), iterations=None, final=None, error=str(exc))
            cells.append(cell)
    return cells


_COMPARE_FIELDS = ("problem", "method", "status", "iterations", "final", "error")


def write_compare_csv(cells, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_COMPARE_FIELDS)
        for c in cells:
            w.writerow(["" if c[f] is None else (format_float(c[f]) if isinstance(c[f], float) else c[f])
                        for f in _COMPARE_FIELDS])


def cmd_compare(args, out=sys.stdout) -> int:
    methods = [m for m in (args.methods or "").split(",") if m]
    problems = [p for p in (args.problems or "").split(",") if p]
    cells = compare(problems, methods, n=args.n, tol=args.tol, max_iter=args.max_iter, va0=args.va0,
                    integrator=args.integrator)
    print(f"{'problem':<16} {'method':<16} {'status':<14} {'iters':>5} {'final':>12}", file=out)
    for c in cells:
        its = "" if c["iterations"] is None else c["iterations"]
        fin = "" if c["final"] is None else f"{c['final']:.3e}"
        print(f"{c['problem']:<16} {c['method']:<16} {c['status']:<14} {its!s:>5} {fin:>12}", file=out)
    if args.csv:
        write_compare_csv(cells, args.csv)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(cells, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bvp-forge",
                                     description="Relaxation and shooting solvers for u'' = f(x, u, u').")
    sub = parser.add_subparsers(dest="command", required=True)

    def numeric(p, tol_help):
        p.add_argument("--n", type=int, default=1001, help="mesh points (h = (b-a)/(n-1))")
        p.add_argument("--tol", type=float, default=None, help=tol_help)
        p.add_argument("--max-iter", type=int, default=50)
        p.add_argument("--va0", type=float, default=0.0, help="starting initial slope for shooting")
        p.add_argument("--integrator", choices=[i.value for i in Integrator], default="paper-euler")

    s = sub.add_parser("solve", help="run one method on one problem")
    s.add_argument("--problem", required=True, help="builtin name or JSON problem file")
    s.add_argument("--method", required=True, choices=list(METHODS))
    numeric(s, f"stopping tolerance (default {DEFAULT_SHOOT_TOL:g} on |E| for shooting, "
               f"{DEFAULT_RELAX_TOL:g} on the residual for relaxation)")
    s.add_argument("--d-scheme", choices=[d.value for d in DScheme], default="central")
    s.add_argument("--rhs", choices=[r.value for r in RhsMode], default="endpoint",
                   help="projection right-hand side")
    s.add_argument("--path", choices=[p.value for p in Path], default="formula",
                   help="slope update route for shooting")
    s.add_argument("--trace", help="write the iteration trace CSV here")
    s.add_argument("--trajectory", help="write the final x,u CSV here")
    s.add_argument("--report", help="write a machine-readable report here")
    s.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("tables", help="reproduce the published cube-problem iteration tables")
    t.add_argument("--n", type=int, default=1001)
    t.add_argument("--integrator", choices=[i.value for i in Integrator], default="paper-euler")
    t.set_defaults(func=cmd_tables)

    c = sub.add_parser("compare", help="grid of problems x methods")
    c.add_argument("--problems", required=True, help="comma-separated builtin names or files")
    c.add_argument("--methods", required=True, help="comma-separated method selectors")
    numeric(c, "stopping tolerance (family default if omitted)")
    c.add_argument("--csv")
    c.add_argument("--json")
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out=out)
    except (BVPError, ExprDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
