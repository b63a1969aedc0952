"""Refining the accuracy and growing the bandwidth budget.

A finer epsilon never lowers the objective, and more bandwidth helps both
the approximation scheme and the greedy heuristic.
"""

from fairband import Scenario, fptas, greedy, sample_physical_users

users = sample_physical_users(5, seed=1)
base = Scenario(users, 1e7, alpha=0.5, p=2, delta=0.6)

print("epsilon   F             grid size   time [s]")
for eps in (0.5, 0.25, 0.1, 0.05):
    rep = fptas(base, epsilon=eps)
    print(f"{eps:6.2f}    {rep.objective.f_total:.6e}   {rep.phi_grid_size:5d}      "
          f"{rep.wall_time_s:.2f}")

print("\nB [Hz]     fptas F        greedy F")
for B in (5e6, 1e7, 1.4e7):
    sc = base.with_(total_bandwidth=B)
    print(f"{B:.1e}   {fptas(sc).objective.f_total:.6e}   {greedy(sc).objective.f_total:.6e}")
