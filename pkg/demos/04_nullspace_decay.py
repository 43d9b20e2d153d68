"""Sampling product states from each side of the threshold.

For 0 < A < 1 the sampled products quickly span everything (nothing left for
an unambiguous detector to live on). At A = 1 the identical-state products only
span the symmetric subspace, and the leftover is exactly where the comparison
measurement lives.

Run:  python demos/04_nullspace_decay.py
"""
import math

from qcloseness import nullspace_decay
from qcloseness.nogo import S1, S2

for n, d in [(2, 2), (3, 2), (2, 3)]:
    below = nullspace_decay(n, d, 0.5, S2, 40, seed=1)
    above = nullspace_decay(n, d, 0.5, S1, 40, seed=1)
    exact = nullspace_decay(n, d, 1.0, S1, 40, seed=1)
    hit = next(k for k, dim in below.samples if dim == 0)
    print(f"n={n} d={d} (D={d ** n}): S2 at A=0.5 spans after {hit} samples; "
          f"S1 at A=0.5 leaves {above.final_dimension}; "
          f"S1 at A=1 leaves {exact.final_dimension} "
          f"(= D - dim Sym = {d ** n - math.comb(n + d - 1, d - 1)})")

curve = nullspace_decay(3, 2, 1.0, S1, 12, seed=1)
print("\nA=1, n=3, d=2:", " ".join(f"{k}:{dim}" for k, dim in curve.samples))
