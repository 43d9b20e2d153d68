import itertools
import math

import numpy as np
import pytest

from qcloseness.errors import DimensionError, EmptyInputError, NonHermitianError, SizeCapError
from qcloseness.povm import (
    R2,
    R_INCONCLUSIVE,
    CompositeOperator,
    Povm,
    comparison_povm,
    kron_state,
    outcome_probability,
    permutation_operator,
    symmetric_projector,
    unambiguity_violation,
    validate_povm,
)
from qcloseness.states import basis_state, haar_state, make_state

from . import oracles

ket0, ket1 = basis_state(0, 2), basis_state(1, 2)
plus = make_state([1, 1])


class TestKronState:
    def test_zero_zero(self):
        np.testing.assert_array_equal(kron_state([ket0, ket0]).composite, [1, 0, 0, 0])

    def test_index_order(self):
        np.testing.assert_array_equal(kron_state([ket1, ket0]).composite, [0, 0, 1, 0])

    def test_superposition(self):
        np.testing.assert_allclose(kron_state([plus, ket1]).composite, [0, 2 ** -0.5, 0, 2 ** -0.5], atol=1e-15)

    def test_matches_digit_oracle(self):
        rng = np.random.default_rng(2)
        fs = [haar_state(3, rng) for _ in range(3)]
        s = kron_state(fs)
        np.testing.assert_allclose(s.composite, oracles.kron_entries([f.amplitudes for f in fs]), atol=1e-14)
        assert abs(np.linalg.norm(s.composite) - 1) <= 1e-10

    def test_cap(self):
        with pytest.raises(SizeCapError):
            kron_state([ket0] * 13)

    def test_mixed_dims(self):
        with pytest.raises(DimensionError):
            kron_state([ket0, basis_state(0, 3)])


class TestOutcomeProbability:
    def test_identity_and_zero(self):
        s = kron_state([plus, haar_state(2, 0)])
        assert outcome_probability(CompositeOperator.identity(2, 2), s) == pytest.approx(1.0, abs=1e-15)
        assert outcome_probability(CompositeOperator.zero(2, 2), s) == 0.0

    def test_antisymmetric_part(self):
        r2 = comparison_povm(2, 2)[R2]
        assert outcome_probability(r2, kron_state([ket0, ket1])) == pytest.approx(0.5, abs=1e-12)

    def test_non_hermitian(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 1] = 1j
        # <++|m|++> = 1j/4
        with pytest.raises(NonHermitianError):
            outcome_probability(CompositeOperator(2, 2, m), kron_state([plus, plus]))

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            outcome_probability(CompositeOperator.identity(3, 2), kron_state([ket0, ket0]))


class TestValidate:
    def test_identity(self):
        assert validate_povm(Povm({"I": CompositeOperator.identity(2, 2)})).passed

    def test_halves(self):
        half = 0.5 * CompositeOperator.identity(2, 2)
        assert validate_povm(Povm({"a": half, "b": half})).passed

    def test_double_identity_fails(self):
        i = CompositeOperator.identity(2, 2)
        report = validate_povm(Povm({"a": i, "b": i}))
        assert not report.passed
        assert report.completeness_residue == pytest.approx(1.0)
        assert [r.completeness_residue for r in report.rows] == [1.0, 1.0]

    def test_negative_element_fails(self):
        i = CompositeOperator.identity(2, 2)
        m = np.diag([2.0, 1, 1, 1])
        report = validate_povm(Povm({"a": CompositeOperator(2, 2, m), "b": i - CompositeOperator(2, 2, m)}))
        assert report.completeness_residue == 0
        assert not report.passed
        assert report.rows[1].min_eigenvalue == pytest.approx(-1.0)

    def test_non_hermitian_fails(self):
        m = np.eye(4, dtype=complex) / 2
        m[0, 1] = 1e-6
        report = validate_povm(Povm({"a": CompositeOperator(2, 2, m), "b": CompositeOperator(2, 2, np.eye(4) - m)}))
        assert not report.rows[0].hermitian
        assert not report.passed

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            Povm({})

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(9)
        p = comparison_povm(3, 2)
        for _ in range(20):
            s = kron_state([haar_state(2, rng) for _ in range(3)])
            probs = p.probabilities(s)
            assert all(0 <= v <= 1 for v in probs.values())
            assert sum(probs.values()) == pytest.approx(1.0, abs=1e-10)


class TestSymmetricProjector:
    @pytest.mark.parametrize("n, d, trace", [(2, 2, 3), (2, 3, 6), (3, 2, 4), (4, 3, 15)])
    def test_trace(self, n, d, trace):
        assert trace == oracles.symmetric_dim(n, d)
        assert np.trace(symmetric_projector(n, d).matrix).real == pytest.approx(trace, abs=1e-10)

    @pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
    def test_matches_dicke_oracle(self, n, d):
        np.testing.assert_allclose(symmetric_projector(n, d).matrix, oracles.dicke_projector(n, d), atol=1e-12)

    @pytest.mark.parametrize("n, d", [(2, 3), (3, 2), (4, 2)])
    def test_idempotent_hermitian(self, n, d):
        p = symmetric_projector(n, d).matrix
        assert np.max(np.abs(p @ p - p)) <= 1e-10
        assert np.max(np.abs(p - p.conj().T)) == 0

    def test_fixes_product_powers(self):
        rng = np.random.default_rng(4)
        p = symmetric_projector(3, 3).matrix
        for _ in range(10):
            psi = haar_state(3, rng)
            v = kron_state([psi] * 3).composite
            assert np.max(np.abs(p @ v - v)) <= 1e-10

    @pytest.mark.parametrize("n, d", [(3, 2), (3, 3)])
    def test_permutation_covariance(self, n, d):
        p = symmetric_projector(n, d).matrix
        for perm in itertools.permutations(range(n)):
            u = permutation_operator(perm, n, d).matrix
            assert np.max(np.abs(u @ p @ u.conj().T - p)) <= 1e-12

    def test_permutation_operator_moves_factors(self):
        a, b, c = (basis_state(k, 3) for k in range(3))
        u = permutation_operator((2, 0, 1), 3, 3).matrix
        # factor 0 goes to slot 2, factor 1 to slot 0, factor 2 to slot 1
        np.testing.assert_array_equal(u @ kron_state([a, b, c]).composite, kron_state([b, c, a]).composite)

    def test_too_many_factors(self):
        with pytest.raises(SizeCapError):
            symmetric_projector(7, 2)

    def test_composite_cap(self):
        with pytest.raises(SizeCapError):
            symmetric_projector(6, 5)


class TestComparisonPovm:
    @pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 2)])
    def test_valid(self, n, d):
        p = comparison_povm(n, d)
        assert p.labels == [R2, R_INCONCLUSIVE]
        assert validate_povm(p).passed
        np.testing.assert_array_equal(p[R2].matrix + p[R_INCONCLUSIVE].matrix, np.eye(d ** n))

    def test_never_fires_on_identical(self):
        rng = np.random.default_rng(100)
        r2 = comparison_povm(2, 2)[R2]
        for _ in range(100):
            psi = haar_state(2, rng)
            assert outcome_probability(r2, kron_state([psi, psi])) <= 1e-12

    def test_two_qubit_basis_pair(self):
        # 1 - |<01|triplet_0>|^2 with triplet_0 = (|01> + |10>)/sqrt(2)
        expected = 1 - abs(np.vdot([0, 1, 1, 0], [0, 1, 0, 0]) / math.sqrt(2)) ** 2
        assert expected == pytest.approx(0.5)
        assert outcome_probability(comparison_povm(2, 2)[R2], kron_state([ket0, ket1])) == pytest.approx(expected, abs=1e-12)

    def test_three_qubit_single_excitation(self):
        v = np.zeros(8)
        v[1] = 1.0
        expected = 1 - np.vdot(v, oracles.dicke_projector(3, 2) @ v).real
        assert expected == pytest.approx(2 / 3, abs=1e-14)
        p = comparison_povm(3, 2)
        s = kron_state([ket0, ket0, ket1])
        assert outcome_probability(p[R2], s) == pytest.approx(expected, abs=1e-12)
        assert outcome_probability(p[R_INCONCLUSIVE], s) == pytest.approx(1 / 3, abs=1e-12)


class TestUnambiguityViolation:
    def test_symmetric_products(self):
        rng = np.random.default_rng(50)
        for n in (2, 3):
            states = [kron_state([psi] * n) for psi in (haar_state(2, rng) for _ in range(50))]
            assert unambiguity_violation(comparison_povm(n, 2)[R2], states) <= 1e-12

    def test_identity_and_zero(self):
        states = [kron_state([ket0, plus]), kron_state([ket1, ket1])]
        assert unambiguity_violation(CompositeOperator.identity(2, 2), states) == pytest.approx(1.0)
        assert unambiguity_violation(CompositeOperator.zero(2, 2), states) == 0.0

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            unambiguity_violation(CompositeOperator.identity(2, 2), [])
