"""Why no measurement can unambiguously report "C >= A" for 0 < A < 1.

Start from states with C < A, tilt each one slightly in every orthogonal
direction, and check that all d^n tilted products still have C < A. These
products span the whole composite space, so any positive operator that never
fires on them is zero.

Run:  python demos/03_nogo_witness.py
"""
from qcloseness import build_family, c_min, closeness, spanning_certificate, witness
from qcloseness.nogo import S1, S2

for n, d in [(2, 2), (3, 2), (3, 3)]:
    a = (c_min(n, d) + 1) / 2
    fam, cert = witness(n, d, a, side=S2, seed=1)
    print(f"n={n} d={d} A={a:.3f}: base C={closeness(fam.base):.3f}, eps={fam.epsilon}, "
          f"largest member C'={fam.member_closeness.max():.3f} < A, "
          f"rank {cert.rank}/{d ** n}, sigma_min/sigma_max={cert.sigma_min / cert.sigma_max:.1e}, "
          f"forced residual={cert.residual:g}")

# The mirrored argument: perturb identical copies, stay above A, span again.
print()
for n, d in [(2, 2), (3, 2)]:
    fam, cert = witness(n, d, 0.5, side=S1, seed=1)
    print(f"S1 side n={n} d={d} A=0.5: smallest member C'={fam.member_closeness.min():.3f} >= A, "
          f"verdict={cert.verdict}")

# At epsilon = 0 the family collapses to one product vector and nothing is forced.
fam, _ = witness(2, 2, 0.5, seed=1)
flat = spanning_certificate(build_family(fam.base, 0.5, 0.0))
print(f"\neps=0: rank {flat.rank}, verdict={flat.verdict}")
