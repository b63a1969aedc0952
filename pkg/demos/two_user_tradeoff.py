"""Two users sharing one unit of bandwidth.

The second user has the stronger link, so the efficient split leans towards
it while the max-min split evens out the utilities.  Sweeping alpha shows
how the combined objective moves between the two.
"""

import numpy as np

from fairband import Scenario, UserModel, fptas, grid_optimum, max_min_value

users = [UserModel(1.0, 1.0, 0.5, 1e-3, 1 - 1e-3),
         UserModel(2.0, 1.0, 0.5, 1e-3, 1 - 1e-3)]
base = Scenario(users, 1.0, alpha=1.0, p=1, delta=0.1)

best = grid_optimum(base, resolution=2000)
print("efficient split      x =", np.round(best.allocation, 4),
      " u =", np.round(base.utilities(best.allocation), 4),
      " F_1 =", round(best.objective, 4))
print("max-min value        phi* =", round(max_min_value(base), 4))

print("\nalpha   x1       x2       F_p      F_min")
for alpha in np.linspace(0.0, 1.0, 5):
    rep = fptas(base.with_(alpha=float(alpha)))
    o = rep.objective
    print(f"{alpha:4.2f}   {rep.allocation[0]:.4f}   {rep.allocation[1]:.4f}   "
          f"{o.f_p:.4f}   {o.f_min:.4f}")
