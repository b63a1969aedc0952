"""Command line entry point: ``solve``, ``sweep`` and ``verify``.

Exit codes: 0 ok, 1 parse error, 2 infeasible scenario, 3 I/O error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import mckp, oracle, solve
from .discretize import breakpoints, level_count, lower_bound_L
from .errors import ConfigurationError, GuardError, InfeasibleError, ScenarioParseError
from .model import utility
from .objective import feo_objective, is_feasible, price_of_efficiency, price_of_fairness
from .scenario_file import load_scenario_document

EXIT_OK, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3, 4

CSV_HEADER = ["axis_value", "solver", "f_p", "f_min", "f_total", "pof", "poe",
              "wall_time_s", "n_users", "seed"]
SOLVERS = ("fptas", "greedy", "oracle")
AXES = ("alpha", "epsilon", "n_users", "bandwidth")


def fmt(value):
    """Locale-free float text with 17 significant digits; blanks for ``None``."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def run_solver(name, scenario, epsilon=None):
    if name == "fptas":
        return solve.fptas(scenario, epsilon)
    if name == "greedy":
        return solve.greedy(scenario)
    if name == "oracle":
        res = oracle.grid_optimum(scenario)
        return solve.SolveReport(allocation=res.allocation,
                                 objective=feo_objective(res.allocation, scenario),
                                 phi_selected=None, epsilon_used=None, delta_target=None,
                                 wall_time_s=0.0, solver="oracle")
    raise ConfigurationError(f"unknown solver {name!r}")


def _row(axis_value, solver, report, n_users, seed, pof=None, poe=None):
    obj = report.objective
    return [fmt(axis_value), solver, fmt(obj.f_p), fmt(obj.f_min), fmt(obj.f_total),
            fmt(pof), fmt(poe), fmt(report.wall_time_s), str(n_users), fmt(seed)]


def _csv_text(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    return buf.getvalue()


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _overrides(args):
    out = {}
    if args.alpha is not None:
        out["alpha"] = args.alpha
    if args.p is not None:
        out["p"] = args.p
    if args.delta is not None:
        out["delta"] = args.delta
    return out


def cmd_solve(args, out=sys.stdout):
    doc = load_scenario_document(args.scenario)
    sc = doc.build(**_overrides(args))
    report = run_solver(args.solver, sc)
    obj = report.objective
    print(f"solver      {args.solver}", file=out)
    print(f"users       {sc.n_users}", file=out)
    print("allocation  " + " ".join(fmt(v) for v in report.allocation), file=out)
    print(f"F_p         {fmt(obj.f_p)}", file=out)
    print(f"F_min       {fmt(obj.f_min)}", file=out)
    print(f"F           {fmt(obj.f_total)}", file=out)
    print(f"wall time   {report.wall_time_s:.6f} s", file=out)
    text = _csv_text([_row(sc.alpha, args.solver, report, sc.n_users, doc.seed)])
    out.write(text)
    if args.out:
        _write(args.out, text)
    return EXIT_OK


def _parse_values(text, axis):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ScenarioParseError(f"cannot parse {text!r} as a list of numbers",
                                 field="--values") from None
    if not vals:
        raise ScenarioParseError("no values given", field="--values")
    if axis == "n_users":
        if any(v != int(v) or v < 1 for v in vals):
            raise ScenarioParseError("n_users values must be positive integers",
                                     field="--values")
        vals = [int(v) for v in vals]
    return vals


def sweep_rows(doc, axis, values, solvers, base_overrides=None):
    """Rows of the sweep CSV, in axis order.

    Alpha sweeps also solve each solver at alpha 0 and 1 and fill the
    price-of-fairness and price-of-efficiency columns against them.
    """
    base_overrides = dict(base_overrides or {})
    if "oracle" in solvers:
        largest = max(values) if axis == "n_users" else doc.build(**base_overrides).n_users
        if largest > oracle.MAX_GRID_USERS:
            raise ConfigurationError("the oracle solver needs at most 3 users")
    rows = []
    refs = {}
    if axis == "alpha":
        base = doc.build(**base_overrides)
        for name in solvers:
            refs[name] = (run_solver(name, base.with_(alpha=1.0)),
                          run_solver(name, base.with_(alpha=0.0)))
    for value in values:
        kw = dict(base_overrides)
        n_users, epsilon = None, None
        if axis == "alpha":
            kw["alpha"] = value
        elif axis == "bandwidth":
            kw["total_bandwidth"] = value
        elif axis == "n_users":
            n_users = value
        elif axis == "epsilon":
            epsilon = value
        sc = doc.build(n_users=n_users, **kw)
        for name in solvers:
            rep = run_solver(name, sc, epsilon)
            pof = poe = None
            if name in refs:
                one, zero = refs[name]
                pof = price_of_fairness(one.objective.f_p, rep.objective.f_p)
                poe = price_of_efficiency(zero.objective.f_min, rep.objective.f_min)
            rows.append(_row(value, name, rep, sc.n_users, doc.seed, pof, poe))
    return rows


def cmd_sweep(args, out=sys.stdout):
    if args.axis not in AXES:
        raise ScenarioParseError(f"axis must be one of {', '.join(AXES)}", field="--axis")
    solvers = [s.strip() for s in args.solver.split(",") if s.strip()]
    for s in solvers:
        if s not in SOLVERS:
            raise ScenarioParseError(f"unknown solver {s!r}", field="--solver")
    values = _parse_values(args.values, args.axis)
    doc = load_scenario_document(args.scenario)
    text = _csv_text(sweep_rows(doc, args.axis, values, solvers, _overrides(args)))
    if args.out:
        _write(args.out, text)
        print(f"wrote {len(text.splitlines()) - 1} rows to {args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK


# verification suites -------------------------------------------------------

def suite_dp(rng, cases):
    """DP optimum on scaled profits against enumeration, and the rounding bound."""
    for _ in range(cases):
        inst = oracle.random_mckp_instance(rng)
        eps = float(rng.choice([0.05, 0.1, 0.25, 0.5]))
        Z = mckp.lp_relaxation_value(inst, prune=True)
        if Z <= 0:
            continue
        scaled = mckp.scale(inst, eps, Z, theta_mode="safe")
        res = mckp.dp_solve(scaled, inst)
        exact = oracle.mckp_enumerate(
            mckp.MckpInstance(inst.demands, scaled.scaled_profits, inst.capacity))
        if res.scaled_profit != round(exact.profit):
            return False
        if res.total_demand > inst.capacity:
            return False
        if res.profit < (1 - eps) * oracle.mckp_enumerate(inst).profit - 1e-9:
            return False
    return True


def suite_fptas(rng, cases):
    """Approximation ratio against the grid oracle on small scenarios."""
    for _ in range(cases):
        sc = oracle.random_small_scenario(rng)
        rep = solve.fptas(sc)
        grid = oracle.grid_optimum(sc, resolution=400)
        if rep.objective.f_total < (1 - sc.delta) * grid.objective:
            return False
    return True


def suite_invariants(rng, cases):
    """Feasibility of both solvers and the per-level discretization error."""
    for _ in range(cases):
        sc = oracle.random_small_scenario(rng)
        for rep in (solve.fptas(sc), solve.greedy(sc)):
            if not is_feasible(rep.allocation, sc):
                return False
        L = lower_bound_L(sc)
        for user in sc.users:
            b = breakpoints(user, sc.epsilon, L, sc.n_users, sc.p)
            if b.K != level_count(user, sc.epsilon, L, sc.n_users, sc.p):
                return False
            got = utility(b.roots, user)
            want = b.levels[: b.roots.size]
            if np.any(np.abs(got - want) > sc.epsilon * want):
                return False
    return True


SUITES = (("dp", suite_dp, 1), ("fptas", suite_fptas, 50), ("invariants", suite_invariants, 50))


def cmd_verify(args, out=sys.stdout):
    """Run every suite with a fixed seed; ``cases`` is the DP case count.

    The slower suites run ``cases // 50`` scenarios each (at least one).
    """
    failed = []
    for i, (name, fn, divisor) in enumerate(SUITES):
        n = max(1, args.cases // divisor)
        rng = np.random.default_rng([args.seed, i])
        try:
            ok = fn(rng, n)
        except Exception as exc:  # a crash inside a suite is a failure too
            print(f"{name:<11} ERROR {type(exc).__name__}: {exc}", file=out)
            ok = False
        print(f"{name:<11} {'PASS' if ok else 'FAIL'}  cases={n}", file=out)
        if not ok:
            failed.append(name)
    if failed:
        print(f"verification failed for seed {args.seed}: {', '.join(failed)}", file=out)
        return EXIT_VERIFY
    print(f"all suites passed for seed {args.seed}", file=out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # bad command lines are parse errors, not argparse's default status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="fairband",
                                     description="Fair and efficient bandwidth allocation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scenario", help="scenario file (JSON)")
        p.add_argument("--alpha", type=float)
        p.add_argument("--p", type=int)
        p.add_argument("--delta", type=float)
        p.add_argument("--out", help="write the CSV here")

    p = sub.add_parser("solve", help="solve one scenario")
    common(p)
    p.add_argument("--solver", choices=SOLVERS, default="fptas")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve a scenario over a range of one parameter")
    common(p)
    p.add_argument("--solver", default="fptas,greedy",
                   help="comma-separated subset of fptas, greedy, oracle")
    p.add_argument("--axis", required=True, help=", ".join(AXES))
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the randomized self-checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out=out)
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, GuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
