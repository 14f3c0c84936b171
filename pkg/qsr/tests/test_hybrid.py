import itertools
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from qsr.analysis import distance_to_fully_mixed, randomization_epsilon_exact
from qsr.exceptions import DimensionError, GuardError, InvalidStateError
from qsr.gf2 import BitMatrix
from qsr.hybrid import (
    HybridCipher,
    asymptotic_ratio,
    hybrid_cipher_state,
    hybrid_decrypt,
    hybrid_encrypt,
    hybrid_randomization_distance,
    hybrid_report,
    keysize_accounting,
    message_qubits,
)
from qsr.pauli_otp import PauliKey, SubsampledScheme, apply_pauli, epsilon_estimate
from qsr.qstate import (
    BlockState,
    DensityOperator,
    block_distance,
    fully_mixed,
    mixture,
    random_density,
    random_pure_state,
)
from qsr.scheme import CipherInstance, SchemeParams, averaged_cipher, decrypt, flip_registers, keygen


def classical_reference(params, t1):
    # Classical registers with the inner key s averaged uniformly
    gamma = averaged_cipher(params, [0] * params.t)
    shifted = [flip_registers(gamma, params, s) for s in itertools.product(range(1 << params.m), repeat=t1)]
    return float(distance_to_fully_mixed(mixture(shifted, [Fraction(1, len(shifted))] * len(shifted))))


class EncryptionTests(SimpleTestCase):
    def test_message_qubits(self):
        self.assertEqual(message_qubits(2, 2), 1)
        with self.assertRaisesMessage(DimensionError, "m = 2q"):
            message_qubits(3, 2)
        with self.assertRaises(DimensionError):
            message_qubits(2, 3)

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(1, 4), q=st.integers(1, 2), seed=st.integers(0, 2 ** 32 - 1))
    def test_round_trip(self, n, q, seed):
        rng = np.random.default_rng(seed)
        a = BitMatrix.from_index(int(rng.integers(0, 1 << (2 * q * n))), 2 * q, n)
        sigma = random_density(1 << q, rng)
        cipher = hybrid_encrypt(a, sigma, rng)
        np.testing.assert_allclose(hybrid_decrypt(a, cipher).entries, sigma.entries, atol=1e-13)

    def test_classical_part_carries_the_pad_key(self):
        rng = np.random.default_rng(5)
        a = BitMatrix.from_rows(["10", "11"])
        sigma = DensityOperator.basis(0, 2)
        cipher = hybrid_encrypt(a, sigma, rng)
        key = PauliKey.from_message(decrypt(a, cipher.classical_part), 1)
        np.testing.assert_allclose(cipher.quantum_part.entries, apply_pauli(key, sigma).entries)

    def test_fully_mixed_message_is_untouched(self):
        rng = np.random.default_rng(1)
        a = BitMatrix.identity(2)
        cipher = hybrid_encrypt(a, fully_mixed(dim=2), rng)
        np.testing.assert_allclose(cipher.quantum_part.entries, np.eye(2) / 2)

    def test_odd_m_rejected(self):
        with self.assertRaises(DimensionError):
            hybrid_encrypt(BitMatrix.identity(3), fully_mixed(dim=2), np.random.default_rng(0))

    def test_decrypt_with_subsampled_pad(self):
        rng = np.random.default_rng(9)
        pad = SubsampledScheme.sample(1, 2, rng)
        a = BitMatrix.from_rows(["01", "10"])
        sigma = random_pure_state(2, rng)
        cipher = hybrid_encrypt(a, sigma, rng, pad)
        self.assertIsInstance(cipher, HybridCipher)
        self.assertIsInstance(cipher.classical_part, CipherInstance)
        np.testing.assert_allclose(hybrid_decrypt(a, cipher).entries, sigma.entries, atol=1e-13)


class CipherStateTests(SimpleTestCase):
    def test_fixed_key_pure_message(self):
        a = BitMatrix.from_rows(["10", "01"])
        sigma = random_pure_state(2, np.random.default_rng(2))
        state = hybrid_cipher_state(a, sigma)
        self.assertAlmostEqual(state.trace(), 1.0, places=12)
        self.assertEqual(len(state.blocks), 16)
        # each (y, x) string occurs for exactly one s once A is fixed
        for block in state.blocks.values():
            self.assertAlmostEqual(np.trace(block).real, 1 / 16, places=12)
            self.assertAlmostEqual(np.linalg.matrix_rank(block, tol=1e-10), 1)

    def test_average_over_keys(self):
        state = hybrid_cipher_state(SchemeParams(2, 1, 1), random_pure_state(2, np.random.default_rng(4)))
        self.assertAlmostEqual(state.trace(), 1.0, places=12)
        weights = state.classical_weights()
        for key, block in state.blocks.items():
            if key & 1:
                # x = 1: Ax runs over every pad key, so the block is fully mixed
                np.testing.assert_allclose(block, np.eye(2) * weights[key] / 2, atol=1e-12)
            else:
                # x = 0: y is the pad key itself
                self.assertEqual(np.linalg.matrix_rank(block, tol=1e-10), 1)

    def test_sampled_ciphers_match_the_exact_state(self):
        rng = np.random.default_rng(11)
        sigma = random_pure_state(2, rng)
        draws = 10 ** 5
        totals = {}
        for _ in range(draws):
            cipher = hybrid_encrypt(keygen(2, 2, rng), sigma, rng)
            code = (cipher.classical_part.y.value << 2) | cipher.classical_part.x.value
            totals[code] = totals.get(code, 0) + cipher.quantum_part.entries
        empirical = BlockState(4, 2, {code: total / draws for code, total in totals.items()})
        exact = hybrid_cipher_state(SchemeParams(2, 2, 1), sigma)
        self.assertLessEqual(block_distance(empirical, exact), 0.05)


class DistanceTests(SimpleTestCase):
    def test_no_ciphers_is_the_key_copy_distance(self):
        params = SchemeParams(2, 3, 2)
        expected = float(randomization_epsilon_exact(params).epsilon_exact)
        self.assertAlmostEqual(hybrid_randomization_distance(params, [], 0), expected, places=12)

    def test_no_registers(self):
        self.assertEqual(hybrid_randomization_distance(SchemeParams(2, 2, 0), [], 0), 0.0)

    def test_fully_mixed_messages_match_the_classical_distance(self):
        for n, t in ((1, 1), (2, 2), (3, 2), (2, 3)):
            params = SchemeParams(2, n, t)
            for t1 in range(t + 1):
                distance = hybrid_randomization_distance(params, [fully_mixed(dim=2)] * t1, t1)
                self.assertAlmostEqual(distance, classical_reference(params, t1), delta=1e-11)

    @settings(max_examples=15, deadline=None)
    @given(n=st.integers(1, 3), t=st.integers(1, 3), seed=st.integers(0, 2 ** 32 - 1), data=st.data())
    def test_perfect_pad_stays_within_classical_epsilon(self, n, t, seed, data):
        rng = np.random.default_rng(seed)
        params = SchemeParams(2, n, t)
        t1 = data.draw(st.integers(0, t))
        eps1 = randomization_epsilon_exact(params).epsilon_exact
        sigmas = [random_pure_state(2, rng) for _ in range(t1)]
        self.assertLessEqual(hybrid_randomization_distance(params, sigmas, t1), float(eps1) + 1e-9)

    def test_subsampled_pad_within_composition_bound(self):
        rng = np.random.default_rng(6)
        pad = SubsampledScheme.sample(1, 2, rng)
        eps2 = epsilon_estimate(pad, 200, rng)
        for n, t in ((2, 1), (2, 2), (3, 3)):
            params = SchemeParams(2, n, t)
            eps1 = randomization_epsilon_exact(params).epsilon_exact
            sigmas = [random_pure_state(2, rng) for _ in range(t)]
            report = hybrid_report(params, sigmas, t, eps1, pad, eps2)
            self.assertTrue(report.holds, report.as_dict())
            self.assertGreaterEqual(report.eps2, max(report.message_eps2))

    def test_checks(self):
        params = SchemeParams(2, 2, 2)
        with self.assertRaises(DimensionError):
            hybrid_randomization_distance(params, [fully_mixed(dim=2)], 2)
        with self.assertRaises(DimensionError):
            hybrid_randomization_distance(params, [], 3)
        with self.assertRaises(DimensionError):
            hybrid_randomization_distance(SchemeParams(1, 2, 1), [fully_mixed(dim=2)], 1)
        skewed = SchemeParams(2, 1, 1, key_probs=((0, Fraction(1, 2)), (1, Fraction(1, 2))))
        with self.assertRaises(InvalidStateError):
            hybrid_randomization_distance(skewed, [], 0)

    def test_cell_guard(self):
        with self.assertRaisesMessage(GuardError, "≤ 16777216"):
            hybrid_randomization_distance(SchemeParams(4, 1, 3), [fully_mixed(dim=4)] * 3, 3)


class KeysizeTests(SimpleTestCase):
    def test_sixty_bits(self):
        budget = keysize_accounting(2, 4, 2 ** -3, 2 ** -4)
        self.assertEqual(budget.entropy_bits, 60)
        self.assertEqual(budget.security_bits, 6)
        self.assertEqual(budget.message_bits, 10)
        self.assertEqual(budget.pauli_entropy_bits, 24)
        self.assertAlmostEqual(budget.lower_bound_bits, (1 - 8 * (1 / 8 + 2 / 16)) * 4 - 2)
        self.assertEqual(budget.ratio, 15)

    def test_floor_never_exceeds_entropy(self):
        for t in range(1, 17):
            for log_d in range(1, 11):
                budget = keysize_accounting(t, 1 << log_d, 2 ** -4, 2 ** -4)
                self.assertLessEqual(budget.lower_bound_bits, budget.entropy_bits)

    def test_ranges(self):
        for args in ((0, 4, 0.5, 0.5), (1, 1, 0.5, 0.5), (1, 4, 0.0, 0.5), (1, 4, 0.5, 1.5)):
            with self.assertRaises(GuardError):
                keysize_accounting(*args)

    def test_asymptotic_ratio_approaches_the_limit(self):
        point = asymptotic_ratio(1 << 12, 1 << 12, 0.5, 0.5)
        self.assertEqual(point.limit, 2.25)
        self.assertLess(point.relative_gap, 0.05)
        finite = asymptotic_ratio(16, 10, 0.5, 0.5)
        self.assertGreater(finite.relative_gap, point.relative_gap)

    def test_asymptotic_matches_direct_accounting(self):
        t, log_d = 8, 6
        point = asymptotic_ratio(t, log_d, 0.5, 0.5)
        budget = keysize_accounting(t, 1 << log_d, 2 ** -(0.5 * t), (1 << log_d) ** -0.5)
        self.assertAlmostEqual(point.ratio, budget.ratio, places=12)
