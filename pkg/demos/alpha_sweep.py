"""Fairness/efficiency sweep on five users with the default radio parameters.

Prints the norm and min components and the prices of fairness and
efficiency against the alpha=1 and alpha=0 solutions.
"""

from fairband import Scenario, fptas, sample_physical_users
from fairband.objective import price_of_efficiency, price_of_fairness

users = sample_physical_users(5, seed=1)
base = Scenario(users, 1e7, p=2, delta=0.6)

reports = {a: fptas(base.with_(alpha=a)) for a in (0.0, 0.25, 0.5, 0.75, 1.0)}
one, zero = reports[1.0].objective, reports[0.0].objective

print("alpha   F_p            F_min          POF      POE      time [s]")
for alpha, rep in reports.items():
    o = rep.objective
    pof = price_of_fairness(one.f_p, o.f_p)
    poe = price_of_efficiency(zero.f_min, o.f_min)
    print(f"{alpha:4.2f}   {o.f_p:.6e}   {o.f_min:.6e}   {pof:.4f}   {poe:.4f}   "
          f"{rep.wall_time_s:.2f}")

# with near-identical saturated users every alpha lands on the same split
print("\nallocation at alpha=0.5:", reports[0.5].allocation)
