"""Run time of the greedy heuristic as the number of users grows."""

import time

import numpy as np

from fairband import Scenario, greedy, sample_physical_users
from fairband.objective import is_feasible

sizes = [100, 1000, 10000, 100000]
times = []
for n in sizes:
    sc = Scenario(sample_physical_users(n, seed=3), n * 2e6)
    best = np.inf
    for _ in range(5):
        t = time.perf_counter()
        rep = greedy(sc)
        best = min(best, time.perf_counter() - t)
    times.append(best)
    print(f"N={n:6d}   {best * 1e3:8.3f} ms   feasible={is_feasible(rep.allocation, sc)}")

slope, intercept = np.polyfit(sizes, times, 1)
print(f"\nlinear fit: {intercept * 1e3:.3f} ms + {slope * 1e9:.2f} ns per user")
