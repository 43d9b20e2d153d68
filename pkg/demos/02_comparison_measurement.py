"""Testing "are all n states identical?" (threshold A = 1) does work.

The projector onto the complement of the symmetric subspace never fires on
|psi>^n, so whenever it clicks the states were certainly different.

Run:  python demos/02_comparison_measurement.py
"""
import numpy as np

from qcloseness import basis_state, comparison_povm, haar_state, kron_state, make_state, validate_povm

n, d = 3, 2
povm = comparison_povm(n, d)
report = validate_povm(povm)
print(f"comparison POVM n={n} d={d}: labels={povm.labels} valid={report.passed}")
for row in report.rows:
    print(f"  {row.label:3s} min eigenvalue {row.min_eigenvalue:+.2e}  completeness residue {row.completeness_residue:.1e}")

rng = np.random.default_rng(1)
psi = haar_state(d, rng)
print("\nidentical copies     :", povm.probabilities(kron_state([psi] * n)))

ket0, ket1 = basis_state(0, d), basis_state(1, d)
print("|0>|0>|1>            :", povm.probabilities(kron_state([ket0, ket0, ket1])))

# Nearly identical states: the detection probability shrinks with the noise.
centre = haar_state(d, rng).amplitudes
for noise in [0.3, 0.1, 0.01]:
    states = [make_state(centre + noise * rng.standard_normal(d)) for _ in range(n)]
    p = povm.probabilities(kron_state(states))
    print(f"noise {noise:5.2f}          : P(R2) = {p['R2']:.2e}")
