import itertools
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from qsr.exceptions import DimensionError, GuardError
from qsr.gf2 import (
    BitMatrix,
    BitVector,
    images_for,
    matvec,
    rank,
    rank_distribution,
    rank_distribution_bruteforce,
)


def naive_matvec(a, x):
    # Per-bit oracle: y_i = sum_j A[i, j] x_j mod 2
    bits = x.bits
    return BitVector.from_bits([sum(a[i, j] & bits[j] for j in range(a.cols)) % 2 for i in range(a.rows)])


def span_rank(vectors):
    # Oracle: rank = log2 of the number of distinct subset sums
    if not vectors:
        return 0
    span = set()
    for choice in itertools.product((0, 1), repeat=len(vectors)):
        value = 0
        for pick, v in zip(choice, vectors):
            if pick:
                value ^= v.value
        span.add(value)
    return len(span).bit_length() - 1


class BitVectorTests(SimpleTestCase):
    def test_string_round_trip_is_msb_first(self):
        v = BitVector.from_string("100")
        self.assertEqual(v.value, 4)
        self.assertEqual(v.bits, (1, 0, 0))
        self.assertEqual(str(v), "100")

    def test_xor_requires_equal_lengths(self):
        with self.assertRaises(DimensionError):
            BitVector.from_string("10") ^ BitVector.from_string("1")

    def test_rejects_non_bits(self):
        with self.assertRaises(DimensionError):
            BitVector.from_string("102")
        with self.assertRaises(DimensionError):
            BitVector.from_bits([0, 2])

    def test_word_limit(self):
        with self.assertRaises(GuardError):
            BitVector(25, 0)


class MatvecTests(SimpleTestCase):
    def test_zero_matrix(self):
        self.assertEqual(matvec(BitMatrix.zeros(2, 2), BitVector.from_string("11")), BitVector.from_string("00"))

    def test_identity(self):
        self.assertEqual(matvec(BitMatrix.identity(2), BitVector.from_string("10")), BitVector.from_string("10"))

    def test_upper_triangular(self):
        a = BitMatrix.from_rows(["11", "01"])
        self.assertEqual(matvec(a, BitVector.from_string("11")), BitVector.from_string("01"))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            matvec(BitMatrix.identity(2), BitVector.from_string("101"))

    @given(m=st.integers(1, 5), n=st.integers(1, 5), data=st.data())
    def test_matches_per_bit_oracle(self, m, n, data):
        a = BitMatrix.from_index(data.draw(st.integers(0, (1 << (m * n)) - 1)), m, n)
        x = BitVector(n, data.draw(st.integers(0, (1 << n) - 1)))
        self.assertEqual(matvec(a, x), naive_matvec(a, x))

    @given(m=st.integers(1, 4), n=st.integers(1, 4), data=st.data())
    def test_index_round_trip_and_image_table(self, m, n, data):
        index = data.draw(st.integers(0, (1 << (m * n)) - 1))
        a = BitMatrix.from_index(index, m, n)
        self.assertEqual(a.index, index)
        table = a.image_table()
        for x in range(1 << n):
            self.assertEqual(int(table[x]), matvec(a, BitVector(n, x)).value)

    def test_images_for_stacks_many_matrices(self):
        images = images_for(range(16), 2, 2)
        self.assertEqual(images.shape, (16, 4))
        for index in range(16):
            self.assertEqual(images[index].tolist(), BitMatrix.from_index(index, 2, 2).image_table().tolist())


class RankTests(SimpleTestCase):
    def test_examples(self):
        vectors = BitVector.from_string
        self.assertEqual(rank([vectors("00")]), 0)
        self.assertEqual(rank([vectors("10"), vectors("01")]), 2)
        self.assertEqual(rank([vectors("11"), vectors("11"), vectors("00")]), 1)
        self.assertEqual(rank([]), 0)

    def test_mixed_lengths_rejected(self):
        with self.assertRaises(DimensionError):
            rank([BitVector.from_string("1"), BitVector.from_string("10")])

    @given(n=st.integers(1, 6), data=st.data())
    def test_matches_span_oracle(self, n, data):
        values = data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=6))
        vectors = [BitVector(n, v) for v in values]
        self.assertEqual(rank(vectors), span_rank(vectors))


class RankDistributionTests(SimpleTestCase):
    def test_two_vectors_in_two_dimensions(self):
        self.assertEqual(rank_distribution(2, 2).probs, (Fraction(1, 16), Fraction(9, 16), Fraction(3, 8)))

    def test_full_rank_product(self):
        self.assertEqual(rank_distribution(3, 2)[2], Fraction(21, 32))

    def test_empty_tuple(self):
        for n in range(1, 6):
            self.assertEqual(rank_distribution(n, 0).probs, (Fraction(1),))

    def test_bruteforce_single_bit(self):
        self.assertEqual(rank_distribution_bruteforce(1, 1).probs, (Fraction(1, 2), Fraction(1, 2)))

    def test_bruteforce_matches_recurrence_at_four_by_four(self):
        self.assertEqual(rank_distribution_bruteforce(4, 4), rank_distribution(4, 4))

    def test_bruteforce_guard_names_the_limit(self):
        with self.assertRaisesMessage(GuardError, "nt ≤ 24"):
            rank_distribution_bruteforce(5, 5)

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(1, 4), t=st.integers(0, 3))
    def test_recurrence_equals_enumeration(self, n, t):
        self.assertEqual(rank_distribution(n, t), rank_distribution_bruteforce(n, t))

    @given(n=st.integers(1, 12), t=st.integers(0, 12))
    def test_sums_to_one_and_full_rank_product(self, n, t):
        dist = rank_distribution(n, t)
        self.assertEqual(sum(dist), 1)
        expected = Fraction(1)
        for i in range(t):
            expected *= 1 - Fraction(1, 1 << (n - i)) if i < n else 0
        self.assertEqual(dist[t], expected)
