"""
Exact linear algebra over GF(2).

Vectors and matrix rows are packed into Python ints, most significant bit
first: the string "100" is the vector (1, 0, 0) and has value 4. Matrix
products and elimination are word-level XOR and popcount.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DimensionError, GuardError

logger = logging.getLogger(__name__)

# Rows and vectors must fit one machine word
MAX_BITS = 24

# Exhaustive tuple enumeration limit for the rank-distribution oracle (n*t)
BRUTEFORCE_MAX_BITS = 24


def _check_width(width, what):
    if not 1 <= width <= MAX_BITS:
        raise GuardError(f"{what} must satisfy 1 ≤ {what} ≤ {MAX_BITS}, got {width}")


def parity(word):
    return word.bit_count() & 1


# VECTORS

@dataclass(frozen=True)
class BitVector:
    length: int
    value: int

    def __post_init__(self):
        _check_width(self.length, "len")
        if not 0 <= self.value < (1 << self.length):
            raise DimensionError(f"value {self.value} does not fit {self.length} bits")

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise DimensionError(f"not a bit string: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_bits(cls, bits):
        bits = list(bits)
        value = 0
        for bit in bits:
            if bit not in (0, 1):
                raise DimensionError(f"entry {bit!r} is not in GF(2)")
            value = (value << 1) | bit
        return cls(len(bits), value)

    @classmethod
    def zeros(cls, length):
        return cls(length, 0)

    @property
    def bits(self):
        return tuple((self.value >> (self.length - 1 - i)) & 1 for i in range(self.length))

    def __str__(self):
        return format(self.value, f"0{self.length}b")

    def __xor__(self, other):
        if self.length != other.length:
            raise DimensionError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.length, self.value ^ other.value)

    def concat(self, other):
        return BitVector(self.length + other.length, (self.value << other.length) | other.value)


# MATRICES

@dataclass(frozen=True)
class BitMatrix:
    # m x n matrix over GF(2); row i is packed into row_words[i]
    rows: int
    cols: int
    row_words: tuple

    def __post_init__(self):
        _check_width(self.rows, "m")
        _check_width(self.cols, "n")
        if len(self.row_words) != self.rows:
            raise DimensionError(f"expected {self.rows} rows, got {len(self.row_words)}")
        limit = 1 << self.cols
        for word in self.row_words:
            if not 0 <= word < limit:
                raise DimensionError(f"row {word} does not fit {self.cols} columns")

    @classmethod
    def from_rows(cls, rows):
        vectors = [r if isinstance(r, BitVector) else
                   BitVector.from_string(r) if isinstance(r, str) else
                   BitVector.from_bits(r) for r in rows]
        if not vectors:
            raise DimensionError("a matrix needs at least one row")
        widths = {v.length for v in vectors}
        if len(widths) != 1:
            raise DimensionError(f"ragged rows: widths {sorted(widths)}")
        return cls(len(vectors), widths.pop(), tuple(v.value for v in vectors))

    @classmethod
    def zeros(cls, m, n):
        return cls(m, n, (0,) * m)

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(1 << (n - 1 - i) for i in range(n)))

    @classmethod
    def from_index(cls, index, m, n):
        # Inverse of .index: row 0 occupies the most significant n bits
        mask = (1 << n) - 1
        return cls(m, n, tuple((index >> ((m - 1 - i) * n)) & mask for i in range(m)))

    @property
    def index(self):
        value = 0
        for word in self.row_words:
            value = (value << self.cols) | word
        return value

    def __getitem__(self, position):
        i, j = position
        return (self.row_words[i] >> (self.cols - 1 - j)) & 1

    def __xor__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("matrix shapes differ")
        return BitMatrix(self.rows, self.cols,
                         tuple(a ^ b for a, b in zip(self.row_words, other.row_words)))

    def row(self, i):
        return BitVector(self.cols, self.row_words[i])

    def image_table(self):
        # Ax for every x in {0,1}^n, indexed by x
        return images_for(np.array([self.index], dtype=np.int64), self.rows, self.cols)[0]

    def __str__(self):
        return "\n".join(format(w, f"0{self.cols}b") for w in self.row_words)


def matvec(a, x):
    if x.length != a.cols:
        raise DimensionError(f"x has length {x.length}, matrix has {a.cols} columns")
    value = 0
    for word in a.row_words:
        value = (value << 1) | parity(word & x.value)
    return BitVector(a.rows, value)


def images_for(indices, m, n):
    """
    Vectorised matvec over many matrices at once.

    ``indices`` holds matrix indices (see ``BitMatrix.index``); the result has
    shape (len(indices), 2**n) and entry [k, x] is the packed value of A_k x.
    """
    indices = np.asarray(indices, dtype=np.int64)
    xs = np.arange(1 << n, dtype=np.int64)
    mask = (1 << n) - 1
    out = np.zeros((indices.size, xs.size), dtype=np.int64)
    for i in range(m):
        row = (indices >> ((m - 1 - i) * n)) & mask
        bit = np.bitwise_count(row[:, None] & xs[None, :]).astype(np.int64) & 1
        out = (out << 1) | bit
    return out


# RANK

def rank_of_words(words):
    # Gaussian elimination on packed ints, pivot = leading bit
    pivots = {}
    for word in words:
        while word:
            top = word.bit_length() - 1
            pivot = pivots.get(top)
            if pivot is None:
                pivots[top] = word
                break
            word ^= pivot
    return len(pivots)


def rank(vectors):
    vectors = list(vectors)
    if not vectors:
        return 0
    lengths = {v.length for v in vectors}
    if len(lengths) > 1:
        raise DimensionError(f"vectors of different lengths: {sorted(lengths)}")
    return rank_of_words(v.value for v in vectors)


@dataclass(frozen=True)
class RankDistribution:
    # probs[d] = P[exactly d of t uniform vectors in GF(2)^n are independent]
    n: int
    t: int
    probs: tuple

    def __getitem__(self, d):
        return self.probs[d]

    def __iter__(self):
        return iter(self.probs)


def rank_distribution(n, t):
    """
    Exact rank distribution of t uniform vectors in GF(2)^n.

    Markov chain on the rank: from rank d the next vector falls inside the
    current span with probability 2^(d-n).
    """
    if n < 1 or t < 0:
        raise DimensionError(f"need n ≥ 1 and t ≥ 0, got n={n}, t={t}")
    probs = [Fraction(1)] + [Fraction(0)] * t
    for _ in range(t):
        step = [Fraction(0)] * (t + 1)
        for d, p in enumerate(probs):
            if not p:
                continue
            dependent = Fraction(1, 1 << (n - d))
            step[d] += p * dependent
            if d < n:
                step[d + 1] += p * (1 - dependent)
        probs = step
    return RankDistribution(n, t, tuple(probs))


def rank_distribution_bruteforce(n, t):
    # Exhaustive oracle for rank_distribution
    if n < 1 or t < 0:
        raise DimensionError(f"need n ≥ 1 and t ≥ 0, got n={n}, t={t}")
    if n * t > BRUTEFORCE_MAX_BITS:
        raise GuardError(f"exhaustive enumeration needs nt ≤ {BRUTEFORCE_MAX_BITS}, got nt = {n * t}")
    logger.debug("enumerating %d tuples for n=%d t=%d", 1 << (n * t), n, t)
    counts = Counter(rank_of_words(tup) for tup in itertools.product(range(1 << n), repeat=t))
    total = 1 << (n * t)
    return RankDistribution(n, t, tuple(Fraction(counts.get(d, 0), total) for d in range(t + 1)))
