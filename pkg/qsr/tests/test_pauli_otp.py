import math

import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st

from qsr.exceptions import DimensionError, GuardError
from qsr.gf2 import BitVector
from qsr.pauli_otp import (
    PauliKey,
    SubsampledScheme,
    all_pauli_keys,
    apply_pauli,
    epsilon_estimate,
    pauli_matrix,
    randomize_full,
)
from qsr.qstate import DensityOperator, fully_mixed, random_density, random_pure_state, trace_distance


class PauliKeyTests(SimpleTestCase):
    def test_message_encoding(self):
        key = PauliKey.from_message(BitVector.from_string("1001"), 2)
        self.assertEqual((key.a.value, key.b.value), (2, 1))
        self.assertEqual(str(key.message), "1001")

    def test_message_length_checked(self):
        with self.assertRaises(DimensionError):
            PauliKey.from_message(BitVector.from_string("101"), 2)
        with self.assertRaises(DimensionError):
            PauliKey(BitVector(1, 0), BitVector(2, 0))

    def test_matrices_are_unitary(self):
        for key in all_pauli_keys(2):
            p = key.matrix()
            np.testing.assert_allclose(p @ p.conj().T, np.eye(4), atol=1e-15)

    def test_qubit_zero_is_the_leading_bit(self):
        x_on_first = pauli_matrix(0b10, 0, 2)
        self.assertEqual(np.argmax(np.abs(x_on_first[:, 0])), 2)

    def test_all_keys(self):
        self.assertEqual(len(all_pauli_keys(1)), 4)
        self.assertEqual(len(set(all_pauli_keys(2))), 16)

    @override_settings(QSRLAB={"MAX_PAULI_QUBITS": 2})
    def test_qubit_guard(self):
        with self.assertRaisesMessage(GuardError, "q ≤ 2"):
            all_pauli_keys(3)


class ApplyPauliTests(SimpleTestCase):
    def test_identity_key(self):
        rho = random_density(2, np.random.default_rng(1))
        out = apply_pauli(PauliKey.from_values(0, 0, 1), rho)
        np.testing.assert_allclose(out.entries, rho.entries)

    def test_bit_flip(self):
        out = apply_pauli(PauliKey.from_values(1, 0, 1), DensityOperator.basis(0, 2))
        np.testing.assert_allclose(out.entries, DensityOperator.basis(1, 2).entries)

    def test_phase_flip_fixes_basis_states(self):
        out = apply_pauli(PauliKey.from_values(0, 1, 1), DensityOperator.basis(1, 2))
        np.testing.assert_allclose(out.entries, DensityOperator.basis(1, 2).entries)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            apply_pauli(PauliKey.from_values(0, 0, 1), fully_mixed(dim=4))

    @given(q=st.integers(1, 2), seed=st.integers(0, 2 ** 32 - 1), data=st.data())
    def test_self_inverse(self, q, seed, data):
        rho = random_density(1 << q, np.random.default_rng(seed))
        key = PauliKey.from_values(data.draw(st.integers(0, (1 << q) - 1)),
                                   data.draw(st.integers(0, (1 << q) - 1)), q)
        np.testing.assert_allclose(apply_pauli(key, apply_pauli(key, rho)).entries, rho.entries, atol=1e-14)


class RandomizeFullTests(SimpleTestCase):
    @settings(max_examples=50)
    @given(seed=st.integers(0, 2 ** 32 - 1))
    def test_pure_qubit_goes_to_fully_mixed(self, seed):
        rho = random_pure_state(2, np.random.default_rng(seed))
        self.assertLessEqual(trace_distance(randomize_full(rho, 1), fully_mixed(dim=2)), 1e-12)

    def test_two_qubits_against_sixteen_term_sum(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            rho = random_density(4, rng)
            direct = sum(p @ rho.entries @ p.conj().T
                         for p in (pauli_matrix(a, b, 2) for a in range(4) for b in range(4))) / 16
            out = randomize_full(rho, 2)
            np.testing.assert_allclose(out.entries, direct, atol=1e-14)
            self.assertLessEqual(trace_distance(out, fully_mixed(dim=4)), 1e-11)

    def test_fixed_point(self):
        np.testing.assert_allclose(randomize_full(fully_mixed(dim=8), 3).entries, np.eye(8) / 8, atol=1e-15)


class SubsampledSchemeTests(SimpleTestCase):
    def test_full_pad_is_perfect(self):
        estimate = epsilon_estimate(SubsampledScheme.full(1), 50, np.random.default_rng(0))
        self.assertLessEqual(estimate, 1e-11)

    def test_single_key_cannot_mix(self):
        rng = np.random.default_rng(3)
        pad = SubsampledScheme.sample(1, 1, rng)
        self.assertAlmostEqual(epsilon_estimate(pad, 200, rng), 1.0, places=9)

    def test_key_entropy(self):
        rng = np.random.default_rng(0)
        self.assertEqual(SubsampledScheme.full(2).key_entropy, 4.0)
        self.assertEqual(SubsampledScheme.sample(2, 8, rng).key_entropy, 3.0)
        self.assertAlmostEqual(sum(SubsampledScheme.sample(1, 3, rng).key_probs), 1.0)

    def test_sample_size_checked(self):
        with self.assertRaises(GuardError):
            SubsampledScheme.sample(1, 5, np.random.default_rng(0))
        with self.assertRaises(GuardError):
            epsilon_estimate(SubsampledScheme.full(1), 0, np.random.default_rng(0))

    def test_distinct_keys(self):
        key = PauliKey.from_values(0, 0, 1)
        with self.assertRaises(DimensionError):
            SubsampledScheme(1, (key, key))

    def test_nested_pads_contain_each_other(self):
        pads = SubsampledScheme.nested(2, (2, 4, 8, 16), np.random.default_rng(4))
        for small, large in zip(pads, pads[1:]):
            self.assertTrue(set(small.keys) <= set(large.keys))
        self.assertEqual([math.log2(len(p.keys)) for p in pads], [1.0, 2.0, 3.0, 4.0])

    def test_estimate_shrinks_along_a_nested_family(self):
        rng = np.random.default_rng(8)
        pads = SubsampledScheme.nested(2, (1, 16), rng)
        coarse = epsilon_estimate(pads[0], 50, rng)
        self.assertGreater(coarse, epsilon_estimate(pads[1], 50, rng))
