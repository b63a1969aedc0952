"""Profit scaling on a tiny multiple-choice knapsack.

Shows the LP bound, the scaled profits and the dynamic program's choice for
both the literal and the safe scaling, next to brute-force enumeration.
"""

import numpy as np

from fairband.mckp import MckpInstance, dp_solve, lp_relaxation_value, scale
from fairband.oracle import mckp_enumerate, random_mckp_instance

inst = MckpInstance([[1.0, 2.0], [1.0, 3.0]], [[1.0, 2.0], [0.5, 3.0]], 3.0)
print("LP bound", lp_relaxation_value(inst), " pruned", lp_relaxation_value(inst, prune=True))
for mode in ("lp", "safe"):
    Z = lp_relaxation_value(inst, prune=mode == "safe")
    s = scale(inst, 0.5, Z, theta_mode=mode)
    res = dp_solve(s, inst)
    print(f"{mode:5s} theta={s.theta:.4f}  scaled={[list(map(int, u)) for u in s.scaled_profits]}"
          f"  choice={res.choice}  profit={res.profit}")
print("exact", mckp_enumerate(inst))

# a case where the literal scaling rounds the only useful item to zero
tricky = MckpInstance([[1.5, 1.0], [3.5, 1.0]], [[1.0, 0.0], [9.0, 0.0]], 4.0)
for mode in ("lp", "safe"):
    Z = lp_relaxation_value(tricky, prune=mode == "safe")
    res = dp_solve(scale(tricky, 0.5, Z, theta_mode=mode), tricky)
    print(f"{mode:5s} profit {res.profit}  (optimum {mckp_enumerate(tricky).profit})")

rng = np.random.default_rng(0)
worst = 1.0
for _ in range(500):
    inst = random_mckp_instance(rng)
    opt = mckp_enumerate(inst).profit
    if opt > 0:
        Z = lp_relaxation_value(inst, prune=True)
        worst = min(worst, dp_solve(scale(inst, 0.25, Z, "safe"), inst).profit / opt)
print(f"\nworst ratio over 500 random instances at eps=0.25: {worst:.4f}")
