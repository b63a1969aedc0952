import numpy as np
import pytest

from fairband.errors import ConfigurationError, InfeasibleError
from fairband.mckp import (MckpInstance, PhiInfeasible, ScaledInstance, dp_solve,
                           lp_relaxation_value, prune_unfit, scale, solve_mckp)
from fairband.oracle import mckp_enumerate, random_mckp_instance


def two_class():
    return MckpInstance([[1, 2], [1, 3]], [[2, 3], [1, 4]], 3.0)


def test_lp_value_examples():
    assert lp_relaxation_value(MckpInstance([[1]], [[5]], 1.0)) == 5.0
    assert lp_relaxation_value(two_class()) == pytest.approx(4.5, rel=1e-15)
    roomy = MckpInstance([[1, 2], [1, 3]], [[2, 3], [1, 4]], 10.0)
    assert lp_relaxation_value(roomy) == 7.0


def test_lp_value_matches_linprog():
    scipy_optimize = pytest.importorskip("scipy.optimize")
    rng = np.random.default_rng(11)
    for _ in range(200):
        inst = random_mckp_instance(rng, max_classes=4, max_items=5)
        sizes = [d.size for d in inst.demands]
        c = -np.concatenate(inst.profits)
        a_ub = np.concatenate(inst.demands)[None, :]
        a_eq = np.zeros((len(sizes), sum(sizes)))
        start = 0
        for i, k in enumerate(sizes):
            a_eq[i, start:start + k] = 1.0
            start += k
        res = scipy_optimize.linprog(c, A_ub=a_ub, b_ub=[inst.capacity], A_eq=a_eq,
                                     b_eq=np.ones(len(sizes)), bounds=(0, 1), method="highs")
        assert lp_relaxation_value(inst) == pytest.approx(-res.fun, rel=1e-9, abs=1e-9)


def test_lp_value_bounds_integer_optimum():
    rng = np.random.default_rng(3)
    for _ in range(200):
        inst = random_mckp_instance(rng)
        best = mckp_enumerate(inst).profit
        assert lp_relaxation_value(inst) >= best - 1e-12
        pruned = lp_relaxation_value(inst, prune=True)
        assert best - 1e-12 <= pruned <= lp_relaxation_value(inst) + 1e-12
        assert pruned <= 2 * best + 1e-12


def test_lp_infeasible():
    with pytest.raises(InfeasibleError):
        lp_relaxation_value(MckpInstance([[2], [2]], [[1], [1]], 3.0))


def test_empty_class_is_phi_infeasible():
    with pytest.raises(PhiInfeasible):
        MckpInstance([[1.0], []], [[1.0], []], 3.0)


def test_prune_keeps_lightest():
    inst = prune_unfit(MckpInstance([[1, 5], [1, 3]], [[1, 9], [1, 4]], 3.0))
    np.testing.assert_array_equal(inst.demands[0], [1.0])
    np.testing.assert_array_equal(inst.demands[1], [1.0])


def test_scale_examples():
    s = scale(MckpInstance([[1]], [[10]], 1.0), 1.0, 10.0)
    assert (s.theta, s.scaled_profits[0].tolist(), s.n_prime) == (10.0, [1], 1)
    s = scale(MckpInstance([[1]], [[3]], 1.0), 0.5, 10.0)
    assert s.scaled_profits[0].tolist() == [0]
    s = scale(two_class(), 0.5, 4.5)
    assert s.theta == 1.125
    assert [q.tolist() for q in s.scaled_profits] == [[1, 2], [0, 3]]
    assert s.n_prime == 4


def test_scale_modes():
    s = scale(two_class(), 0.5, 4.5, theta_mode="safe")
    assert s.theta == pytest.approx(0.5625) and s.n_prime == 8
    s = scale(two_class(), 0.5, 4.5, theta_mode="max")
    assert s.theta == pytest.approx(0.5 * 4 / 2) and s.n_prime == 8
    with pytest.raises(ConfigurationError):
        scale(two_class(), 0.5, 4.5, theta_mode="other")
    with pytest.raises(ConfigurationError):
        scale(two_class(), 0.5, 0.0)


def _scaled(profits, n_prime):
    return ScaledInstance(1.0, [np.asarray(p, dtype=np.int64) for p in profits], n_prime)


def test_dp_single_class():
    inst = MckpInstance([[1.0]], [[1.0]], 1.0)
    res = dp_solve(_scaled([[1]], 1), inst)
    assert res.scaled_profit == 1 and res.demands.tolist() == [1.0]


def test_dp_two_class():
    inst = MckpInstance([[1, 2], [1, 3]], [[1, 2], [0, 3]], 3.0)
    res = dp_solve(_scaled([[1, 2], [0, 3]], 4), inst)
    assert res.scaled_profit == 2
    assert res.demands.tolist() == [2.0, 1.0]
    assert res.total_demand == res.zeta[-1, res.scaled_profit] <= 3.0


def test_dp_table_boundary():
    inst = MckpInstance([[1, 2], [1, 3]], [[1, 2], [0, 3]], 3.0)
    res = dp_solve(_scaled([[1, 2], [0, 3]], 4), inst)
    assert res.zeta[0, 0] == 0.0
    assert np.all(res.zeta[0, 1:] == 4.0)


def test_dp_ample_capacity_takes_argmax_lightest():
    # second class has two items with the top scaled profit; the lighter wins
    inst = MckpInstance([[1, 2], [3, 1, 2]], [[1, 2], [2, 2, 0]], 100.0)
    res = dp_solve(_scaled([[1, 2], [2, 2, 0]], 10), inst)
    assert res.choice.tolist() == [1, 1]


def test_dp_infeasible():
    inst = MckpInstance([[2.0], [2.0]], [[1.0], [1.0]], 3.0)
    with pytest.raises(InfeasibleError):
        dp_solve(_scaled([[1], [1]], 4), inst)


def test_literal_lp_theta_can_lose_everything():
    # the unfittable (3.5, 9) item inflates the LP value, so theta = eps*Z/N
    # floors the only useful profit to zero; the pruned safe mode does not
    inst = MckpInstance([[1.5, 1.0], [3.5, 1.0]], [[1.0, 0.0], [9.0, 0.0]], 4.0)
    Z = lp_relaxation_value(inst)
    assert Z == pytest.approx(7.2)
    assert dp_solve(scale(inst, 0.5, Z), inst).profit == 0.0
    assert mckp_enumerate(inst).profit == 1.0
    assert solve_mckp(inst, 0.5).profit == 1.0


def test_dp_matches_enumeration_on_random_instances():
    rng = np.random.default_rng(1234)
    for _ in range(300):
        inst = random_mckp_instance(rng)
        eps = float(rng.choice([0.05, 0.1, 0.25, 0.5]))
        for mode in ("lp", "safe", "max"):
            Z = lp_relaxation_value(inst, prune=mode == "safe")
            if Z <= 0:
                continue
            s = scale(inst, eps, Z, theta_mode=mode)
            res = dp_solve(s, inst)
            exact = mckp_enumerate(MckpInstance(inst.demands, s.scaled_profits,
                                                inst.capacity))
            assert res.scaled_profit == exact.profit
            assert res.scaled_profit <= s.n_prime
            assert res.total_demand <= inst.capacity
            assert res.total_demand == res.zeta[-1, res.scaled_profit]
