"""End-to-end acceptance criteria, one test per criterion.

Each test checks every clause of its criterion at the stated tolerance and
reports all failing clauses together.  A one-line PASS/FAIL summary per
criterion is printed at the end of the pytest run.  Run just this file with
``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from fairband.discretize import breakpoints, lower_bound_L
from fairband.maxmin import max_min_value
from fairband.mckp import MckpInstance, dp_solve, lp_relaxation_value, scale
from fairband.model import Scenario, UserModel, sample_physical_users, utility
from fairband.objective import is_feasible, price_of_efficiency, price_of_fairness
from fairband.oracle import (grid_optimum, mckp_enumerate, random_mckp_instance,
                             random_small_scenario)
from fairband.solve import fptas, greedy


def check(failures, ok, message):
    if not ok:
        failures.append(message)


def table_scenario(**kw):
    kw.setdefault("alpha", 0.5)
    kw.setdefault("p", 2)
    kw.setdefault("delta", 0.6)
    return Scenario(sample_physical_users(5, seed=1), kw.pop("total_bandwidth", 1e7), **kw)


@pytest.mark.acceptance("1 two-user trade-off")
def test_two_user_tradeoff():
    t0 = time.perf_counter()
    users = [UserModel(1.0, 1.0, 0.5, 1e-3, 1 - 1e-3), UserModel(2.0, 1.0, 0.5, 1e-3, 1 - 1e-3)]
    sc = Scenario(users, 1.0, alpha=1.0, p=1, delta=0.1)
    fails = []

    res = grid_optimum(sc, resolution=2000)
    x1 = res.allocation[0]
    check(fails, 0.37 <= x1 <= 0.39, f"(a) optimum x1={x1:.4f} outside [0.37, 0.39]")
    check(fails, 2.18 <= res.objective <= 2.22,
          f"(a) efficiency {res.objective:.4f} outside [2.18, 2.22]")

    phi = max_min_value(sc)
    check(fails, abs(phi - 1.38) <= 0.02, f"(b) max-min value {phi:.4f} not 1.38 +- 0.02")

    u = sc.utilities(res.allocation)
    check(fails, abs(u[0] - 0.81) <= 0.02, f"(c) u1={u[0]:.4f} not 0.81 +- 0.02")
    check(fails, abs(u[1] - 1.06) <= 0.02, f"(c) u2={u[1]:.4f} not 1.06 +- 0.02")

    elapsed = time.perf_counter() - t0
    check(fails, elapsed < 5.0, f"runtime {elapsed:.2f} s >= 5 s")
    assert not fails, "; ".join(fails)


@pytest.mark.acceptance("2 non-concavity witness")
def test_non_concavity_witness():
    t0 = time.perf_counter()
    user = UserModel(1.0, 1.0, 2.0, 1e-3, 10.0)

    def second_derivative(x):
        h = 1e-5 * x
        g = lambda y: utility(y, user) ** 2
        return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h)

    a, b = second_derivative(1.0 / 3.0), second_derivative(1.0)
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"runtime {elapsed:.2f} s"
    assert a * b < 0, f"second derivatives {a:.4f} at 1/3 and {b:.4f} at 1 share a sign"


@pytest.mark.acceptance("3 approximation guarantee")
def test_approximation_guarantee():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    fails = []
    cases = 0
    for rep in range(3):
        for n in (1, 2, 3):
            for alpha in (0.0, 0.5, 1.0):
                for p in (1, 2):
                    for delta in (0.3, 0.6):
                        sc = random_small_scenario(rng, n_users=n, alpha=alpha, p=p,
                                                   delta=delta)
                        got = fptas(sc)
                        best = grid_optimum(sc, resolution=2000).objective
                        cases += 1
                        check(fails, is_feasible(got.allocation, sc),
                              f"case {cases}: infeasible allocation")
                        check(fails, got.objective.f_total >= (1 - delta) * best,
                              f"case {cases} (n={n}, alpha={alpha}, p={p}, delta={delta}): "
                              f"{got.objective.f_total:.6g} < (1-delta)*{best:.6g}")
    elapsed = time.perf_counter() - t0
    check(fails, cases >= 100, f"only {cases} cases")
    check(fails, elapsed < 120.0, f"runtime {elapsed:.1f} s >= 120 s")
    assert not fails, "; ".join(fails[:10])


@pytest.mark.acceptance("4 DP exactness")
def test_dp_exactness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(777)
    fails = []
    for case in range(1000):
        inst = random_mckp_instance(rng, max_classes=3, max_items=4)
        eps = float(rng.choice([0.05, 0.1, 0.25, 0.5]))
        Z = lp_relaxation_value(inst, prune=True)
        if Z <= 0:
            # every profit is zero; the scaled problem is trivially exact
            continue
        scaled = scale(inst, eps, Z, theta_mode="safe")
        res = dp_solve(scaled, inst)
        exact_scaled = mckp_enumerate(MckpInstance(inst.demands, scaled.scaled_profits,
                                                   inst.capacity)).profit
        exact = mckp_enumerate(inst).profit
        check(fails, res.scaled_profit == exact_scaled,
              f"case {case}: scaled profit {res.scaled_profit} != {exact_scaled}")
        check(fails, res.profit >= (1 - eps) * exact,
              f"case {case}: profit {res.profit:.6g} < (1-{eps})*{exact:.6g}")
    elapsed = time.perf_counter() - t0
    check(fails, elapsed < 30.0, f"runtime {elapsed:.1f} s >= 30 s")
    assert not fails, "; ".join(fails[:10])


@pytest.mark.acceptance("5 discretization soundness")
def test_discretization_soundness():
    rng = np.random.default_rng(55)
    users = []
    while len(users) < 50:
        lower = float(rng.uniform(1.0, 3.0))
        u = UserModel(float(rng.uniform(0.5, 5.0)), float(rng.uniform(0.5, 5.0)),
                      float(rng.uniform(0.25, 1.0)), lower, lower + float(rng.uniform(2, 50)))
        if utility(u.lower, u) >= 1.0:
            users.append(u)
    sc = Scenario(users, sum(u.lower for u in users) + 10.0, p=2)
    N, p = sc.n_users, sc.p
    L = lower_bound_L(sc)
    fails = []
    for eps in (0.1, 0.25):
        for i, u in enumerate(users):
            b = breakpoints(u, eps, L, N, p, i)
            want_k = math.ceil(math.log(N ** (1 / p) * utility(u.upper, u) / (eps * L))
                               / math.log(1 + eps))
            check(fails, b.K == want_k, f"user {i}, eps {eps}: K={b.K} != {want_k}")
            levels = b.levels[: b.roots.size]
            err = np.abs(utility(b.roots, u) - levels)
            check(fails, bool(np.all(err <= eps * levels)),
                  f"user {i}, eps {eps}: worst error ratio {np.max(err / levels):.4f}")
    assert not fails, "; ".join(fails[:10])


@pytest.mark.acceptance("6 trade-off trends")
def test_tradeoff_trends():
    t0 = time.perf_counter()
    base = table_scenario()
    delta = base.delta
    alphas = (0.0, 0.25, 0.5, 0.75, 1.0)
    reports = {a: fptas(base.with_(alpha=a)) for a in alphas}
    fp = [reports[a].objective.f_p for a in alphas]
    fm = [reports[a].objective.f_min for a in alphas]
    slack = 2 * delta * reports[1.0].objective.f_p
    fails = []
    for (a0, a1), (p0, p1), (m0, m1) in zip(zip(alphas, alphas[1:]), zip(fp, fp[1:]),
                                            zip(fm, fm[1:])):
        check(fails, p1 >= p0 - slack, f"F_p drops from alpha {a0} to {a1}")
        check(fails, m1 <= m0 + slack, f"F_min rises from alpha {a0} to {a1}")

    one, zero = reports[1.0].objective, reports[0.0].objective
    pof = {a: price_of_fairness(one.f_p, reports[a].objective.f_p) for a in alphas}
    poe = {a: price_of_efficiency(zero.f_min, reports[a].objective.f_min) for a in alphas}
    check(fails, 0.5 <= pof[0.0] <= 0.95, f"POF(0)={pof[0.0]:.4f} outside [0.5, 0.95]")
    check(fails, 0.2 <= poe[1.0] <= 0.6, f"POE(1)={poe[1.0]:.4f} outside [0.2, 0.6]")
    check(fails, pof[0.5] <= 0.35, f"POF(0.5)={pof[0.5]:.4f} > 0.35")
    check(fails, poe[0.5] <= 0.25, f"POE(0.5)={poe[0.5]:.4f} > 0.25")
    elapsed = time.perf_counter() - t0
    check(fails, elapsed < 300.0, f"runtime {elapsed:.1f} s >= 300 s")
    assert not fails, "; ".join(fails)


@pytest.mark.acceptance("7 epsilon refinement")
def test_epsilon_refinement():
    sc = table_scenario()
    eps_values = (0.5, 0.25, 0.1, 0.05)
    vals = [fptas(sc, epsilon=e).objective.f_total for e in eps_values]
    fails = []
    for (e0, v0), (e1, v1) in zip(zip(eps_values, vals), zip(eps_values[1:], vals[1:])):
        check(fails, v1 >= v0 - 1e-6 * abs(v0),
              f"objective falls from {v0:.10g} (eps {e0}) to {v1:.10g} (eps {e1})")
    rel = abs(vals[3] - vals[2]) / abs(vals[2])
    check(fails, rel <= 0.01, f"eps 0.05 differs from eps 0.1 by {100 * rel:.2f}% > 1%")
    assert not fails, "; ".join(fails)


@pytest.mark.acceptance("8 greedy scaling")
def test_greedy_scaling():
    sizes = np.array([100, 1000, 10000])
    times = []
    fails = []
    for n in sizes:
        sc = Scenario(sample_physical_users(int(n), seed=3), float(n) * 2e6)
        best = math.inf
        for _ in range(7):
            t = time.perf_counter()
            rep = greedy(sc)
            best = min(best, time.perf_counter() - t)
        check(fails, is_feasible(rep.allocation, sc), f"N={n}: infeasible allocation")
        check(fails, best < 1.0, f"N={n}: {best:.3f} s >= 1 s")
        times.append(best)
    times = np.array(times)
    slope, intercept = np.polyfit(sizes, times, 1)
    fit = intercept + slope * sizes
    ratio = np.maximum(times / fit, fit / times)
    check(fails, bool(np.all(fit > 0) and np.all(ratio <= 3.0)),
          f"times {times} vs linear fit {fit}")
    assert not fails, "; ".join(fails)


@pytest.mark.acceptance("9 bandwidth monotonicity")
def test_bandwidth_monotonicity():
    fails = []
    for name, solver in (("fptas", fptas), ("greedy", greedy)):
        vals = [solver(table_scenario(total_bandwidth=B)).objective.f_total
                for B in (5e6, 1e7, 1.4e7)]
        check(fails, vals[0] < vals[1] < vals[2], f"{name}: {vals} not strictly increasing")
    assert not fails, "; ".join(fails)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
