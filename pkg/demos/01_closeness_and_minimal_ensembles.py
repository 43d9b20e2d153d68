"""How close can n pure states in dimension d be forced apart?

Run:  python demos/01_closeness_and_minimal_ensembles.py
"""
import numpy as np

from qcloseness import c_min, closeness, closeness_via_gram, gram_matrix, haar_ensemble, minimal_ensemble

# Closeness is the average pairwise fidelity. Random states in d dimensions
# have fidelity 1/d on average, so random ensembles sit near 1/d.
rng = np.random.default_rng(0)
for n, d in [(3, 2), (5, 3)]:
    cs = [closeness(haar_ensemble(n, d, rng)) for _ in range(2000)]
    print(f"n={n} d={d}: random ensembles  mean C={np.mean(cs):.4f}  min C={np.min(cs):.4f}  "
          f"lower bound c_min={c_min(n, d):.4f}")

# The bound is attained by Fourier-type states whose phases step by a root of
# unity of order n (not d).
print("\n n  d   c_min      C(minimal)  Gram spectrum")
for n, d in [(3, 2), (4, 2), (5, 3), (7, 4)]:
    e = minimal_ensemble(n, d)
    lam = gram_matrix(e).eigenvalues
    print(f"{n:2d} {d:2d}  {c_min(n, d):.6f}   {closeness(e):.6f}    {np.round(lam, 6)}")

# The same number comes out of the Gram spectrum: C = (sum lambda^2 - n) / (n (n-1)).
e = minimal_ensemble(6, 4)
print(f"\npairwise C = {closeness(e):.15f}\nspectral C = {closeness_via_gram(e):.15f}")
