"""
The matrix scheme for classical messages.

Decryption keys are m x n matrices A over GF(2). The encryption key is the
uniform mixture of basis strings (Ax || x); the cipher of a message s is
the uniform mixture of (Ax ⊕ s || x). A composite string lists the
registers left to right: cipher 1, cipher 2, ..., then key copies.

The encryption unitary is never built as a matrix: it acts on basis
strings as (y, x, s) -> (y ⊕ s, x, s).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .conf import qsr_setting
from .decorators import enumeration_guard
from .exceptions import DimensionError, GuardError, InvalidStateError
from .gf2 import BitMatrix, BitVector, images_for, matvec
from .qstate import (
    DiagonalState,
    dyadic_exponent,
    entropy,
    mixture,
    tensor_diag,
)

logger = logging.getLogger(__name__)

# Upper bound on (keys x tuples) cells held in memory per enumeration batch
BATCH_CELLS = 1 << 20


# PARAMETERS

@dataclass(frozen=True)
class SchemeParams:
    m: int
    n: int
    t: int
    delta: float = None
    # ((matrix index, dyadic probability), ...); None means uniform
    key_probs: tuple = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1 or self.t < 0:
            raise GuardError(f"need m ≥ 1, n ≥ 1, t ≥ 0; got m={self.m}, n={self.n}, t={self.t}")
        if self.delta is not None and not 0 < self.delta < 1:
            raise GuardError(f"delta must lie in (0, 1), got {self.delta}")
        if self.key_probs is not None:
            total = sum(Fraction(p) for _, p in self.key_probs)
            if total != 1:
                raise InvalidStateError(f"key distribution sums to {total}")
            for index, p in self.key_probs:
                dyadic_exponent(p)
                if not 0 <= index < (1 << (self.m * self.n)):
                    raise InvalidStateError(f"key index {index} is not an {self.m}x{self.n} matrix")

    @classmethod
    def from_delta(cls, m, n, delta):
        # t = floor((1 - delta) n)
        if not 0 < delta < 1:
            raise GuardError(f"delta must lie in (0, 1), got {delta}")
        return cls(m, n, math.floor((1 - delta) * n + 1e-12), delta)

    @property
    def cipher_bits(self):
        return self.m + self.n

    @property
    def register_bits(self):
        return self.t * (self.m + self.n)

    @property
    def key_bits(self):
        return self.m * self.n

    @property
    def uniform_keys(self):
        return self.key_probs is None

    def check_guards(self):
        limits = [
            (self.m, qsr_setting("MAX_MESSAGE_BITS"), "m"),
            (self.n, qsr_setting("MAX_SECURITY_BITS"), "n"),
            (self.register_bits, qsr_setting("MAX_REGISTER_BITS"), "t(m+n)"),
            (self.key_bits, qsr_setting("MAX_KEY_BITS"), "mn"),
        ]
        for value, limit, name in limits:
            if value > limit:
                raise GuardError(f"exact enumeration requires {name} ≤ {limit}, got {name} = {value}")

    def key_distribution(self):
        # (indices, numerators, exponent) with P(A_i) = numerators[i] / 2**exponent
        if self.key_probs is None:
            size = 1 << self.key_bits
            return np.arange(size, dtype=np.int64), np.ones(size, dtype=np.int64), self.key_bits
        pairs = [(i, Fraction(p)) for i, p in self.key_probs if p]
        exponent = max(dyadic_exponent(p) for _, p in pairs)
        return (np.array([i for i, _ in pairs], dtype=np.int64),
                np.array([int(p * (1 << exponent)) for _, p in pairs], dtype=np.int64),
                exponent)

    def key_entropy(self):
        if self.key_probs is None:
            return float(self.key_bits)
        return entropy([Fraction(p) for _, p in self.key_probs]).shannon_bits

    def as_dict(self):
        return {"m": self.m, "n": self.n, "t": self.t, "delta": self.delta}


@dataclass(frozen=True)
class KeyInstance:
    # One basis term |Ax, x> of the encryption key
    a_x: BitVector
    x: BitVector


@dataclass(frozen=True)
class CipherInstance:
    # One basis term |Ax ⊕ s, x> of a cipher
    y: BitVector
    x: BitVector


def message_value(s, m):
    if isinstance(s, BitVector):
        if s.length != m:
            raise DimensionError(f"message has length {s.length}, expected m = {m}")
        return s.value
    if not 0 <= s < (1 << m):
        raise DimensionError(f"message value {s} does not fit m = {m} bits")
    return int(s)


# KEYS AND SINGLE CIPHERS

def keygen(m, n, rng):
    SchemeParams(m, n, 0).check_guards()
    index = int(rng.integers(0, 1 << (m * n)))
    return BitMatrix.from_index(index, m, n)


def _register_state(a, s_value):
    n = a.cols
    xs = np.arange(1 << n, dtype=np.int64)
    ys = a.image_table() ^ s_value
    return DiagonalState(a.rows + n, (ys << n) | xs, np.ones(xs.size, dtype=np.int64), n)


def encryption_key_state(a):
    return _register_state(a, 0)


def cipher_state(a, s):
    return _register_state(a, message_value(s, a.rows))


def sample_key_instance(a, rng):
    # Measuring one copy of the encryption key in the computational basis
    x = BitVector(a.cols, int(rng.integers(0, 1 << a.cols)))
    return KeyInstance(matvec(a, x), x)


def encrypt_instance(key, s):
    if not isinstance(s, BitVector):
        s = BitVector(key.a_x.length, message_value(s, key.a_x.length))
    if s.length != key.a_x.length:
        raise DimensionError(f"message has length {s.length}, key instance encrypts {key.a_x.length} bits")
    return CipherInstance(key.a_x ^ s, key.x)


def decrypt(a, cipher):
    if cipher.x.length != a.cols or cipher.y.length != a.rows:
        raise DimensionError(
            f"cipher ({cipher.y.length}+{cipher.x.length} bits) does not match a {a.rows}x{a.cols} key"
        )
    return cipher.y ^ matvec(a, cipher.x)


# AVERAGED STATES

def _enumerate(params, register_messages):
    # Exact sum over keys A and x-tuples of point masses on (..., Ax_i ⊕ s_i || x_i, ...)
    m, n = params.m, params.n
    t = len(register_messages)
    width = m + n
    if t == 0:
        return DiagonalState(0, np.array([0]), np.array([1]), 0)
    keys, key_weights, key_exponent = params.key_distribution()

    xs = np.arange(1 << n, dtype=np.int64)
    tuples = [g.ravel() for g in np.meshgrid(*([xs] * t), indexing="ij")]
    cells = tuples[0].size
    batch = max(1, BATCH_CELLS // cells)
    logger.debug("enumerating %d keys x %d tuples (m=%d n=%d t=%d)", keys.size, cells, m, n, t)

    counts = np.zeros(1 << (t * width), dtype=np.int64)
    for start in range(0, keys.size, batch):
        chunk = keys[start:start + batch]
        images = images_for(chunk, m, n)
        codes = np.zeros((chunk.size, cells), dtype=np.int64)
        for x_i, s_i in zip(tuples, register_messages):
            y = images[:, x_i] ^ s_i
            codes = (codes << width) | (y << n) | x_i[None, :]
        if params.uniform_keys:
            counts += np.bincount(codes.ravel(), minlength=counts.size)
        else:
            weights = np.repeat(key_weights[start:start + batch], cells).astype(np.float64)
            counts += np.rint(np.bincount(codes.ravel(), weights=weights, minlength=counts.size)).astype(np.int64)
    return DiagonalState.from_dense(t * width, counts, key_exponent + t * n)


@enumeration_guard
def averaged_cipher(params, s_tuple):
    """
    gamma_s: the t-fold cipher of s_tuple averaged over all decryption keys.

    Computed by exhaustive enumeration of (A, x_1, ..., x_t), exact.
    """
    if len(s_tuple) != params.t:
        raise DimensionError(f"expected {params.t} messages, got {len(s_tuple)}")
    return _enumerate(params, [message_value(s, params.m) for s in s_tuple])


@enumeration_guard
def adversary_state(params, t1, s_tuple):
    """
    The eavesdropper's state after t1 ciphers of s_tuple plus the t - t1
    unused key copies, built key by key as a mixture of tensor products.
    """
    if not 0 <= t1 <= params.t:
        raise DimensionError(f"t1 must lie in 0..{params.t}, got {t1}")
    if len(s_tuple) != t1:
        raise DimensionError(f"expected {t1} messages, got {len(s_tuple)}")
    values = [message_value(s, params.m) for s in s_tuple]
    if params.t == 0:
        return DiagonalState(0, np.array([0]), np.array([1]), 0)

    keys, key_weights, key_exponent = params.key_distribution()
    num_bits = params.register_bits
    counts = np.zeros(1 << num_bits, dtype=np.int64)
    exponent = key_exponent + params.t * params.n
    for index, weight in zip(keys, key_weights):
        a = BitMatrix.from_index(int(index), params.m, params.n)
        factors = [cipher_state(a, s) for s in values]
        factors += [encryption_key_state(a)] * (params.t - t1)
        state = factors[0]
        for factor in factors[1:]:
            state = tensor_diag(state, factor)
        np.add.at(counts, state.indices, state.numerators * int(weight) << (exponent - key_exponent - state.exponent))
    return DiagonalState.from_dense(num_bits, counts, exponent)


def flip_mask(params, s_tuple):
    # XOR mask that moves gamma_0 to gamma_s (y registers only)
    mask = 0
    width = params.cipher_bits
    registers = len(s_tuple)
    for i, s in enumerate(s_tuple):
        mask |= (message_value(s, params.m) << params.n) << ((registers - 1 - i) * width)
    return mask


def flip_registers(state, params, s_tuple):
    # Bit-flip covariance: y_i -> y_i ⊕ s_i on each cipher register
    registers = state.num_bits // params.cipher_bits
    s_tuple = list(s_tuple) + [0] * (registers - len(s_tuple))
    return state.xor_indices(flip_mask(params, s_tuple))


# RELATIONS AMONG x-TUPLES
# Over uniform keys, (Ax_1, ..., Ax_t) is uniform on the subspace of
# ({0,1}^m)^t cut out by the relations sum_{i in c} x_i = 0. A relation set
# is a mask with bit c set when the register subset c (bit t-1-i for
# register i) is a relation.

def register_parts(packed, width, registers):
    # Split packed tuples into per-register arrays, register 0 first
    mask = (1 << width) - 1
    return [(packed >> ((registers - 1 - i) * width)) & mask for i in range(registers)]


def subset_sum(parts, c):
    registers = len(parts)
    out = np.zeros_like(parts[0])
    for i in range(registers):
        if (c >> (registers - 1 - i)) & 1:
            out ^= parts[i]
    return out


def relation_masks(parts):
    # Relation mask of every tuple given as per-register arrays
    t = len(parts)
    masks = np.zeros(parts[0].size, dtype=np.int64)
    for c in range(1 << t):
        masks |= (subset_sum(parts, c) == 0).astype(np.int64) << c
    return masks


def relation_groups(params):
    # {relation mask: number of x-tuples with exactly those relations}
    n, t = params.n, params.t
    tuples = register_parts(np.arange(1 << (t * n), dtype=np.int64), n, t)
    values, counts = np.unique(relation_masks(tuples), return_counts=True)
    return dict(zip(values.tolist(), counts.tolist()))


def consistent_images(params, relation_mask):
    # Every packed (v_1, ..., v_t) in ({0,1}^m)^t satisfying the relations
    m, t = params.m, params.t
    candidates = np.arange(1 << (t * m), dtype=np.int64)
    parts = register_parts(candidates, m, t)
    keep = np.ones(candidates.size, dtype=bool)
    for c in range(1, 1 << t):
        if (relation_mask >> c) & 1:
            keep &= subset_sum(parts, c) == 0
    return candidates[keep]


# GENERIC CLASSICAL SCHEMES
# Both expose: key_probs, message_count, cipher_bits, cipher(key, s),
# averaged(s_tuple), key_entropy(), is_invertible().

class MatrixScheme:
    def __init__(self, params):
        params.check_guards()
        self.params = params
        self.message_count = 1 << params.m
        self.cipher_bits = params.cipher_bits
        self._gamma_zero = {}

    @property
    def key_probs(self):
        keys, weights, exponent = self.params.key_distribution()
        return {int(k): Fraction(int(w), 1 << exponent) for k, w in zip(keys, weights)}

    def key_entropy(self):
        return self.params.key_entropy()

    def cipher(self, key, s):
        return cipher_state(BitMatrix.from_index(key, self.params.m, self.params.n), s)

    def averaged(self, s_tuple):
        # gamma_s = flip(gamma_0, s); gamma_0 enumerated once per tuple length
        t = len(s_tuple)
        if t not in self._gamma_zero:
            params = SchemeParams(self.params.m, self.params.n, t, key_probs=self.params.key_probs)
            self._gamma_zero[t] = averaged_cipher(params, [0] * t)
        return flip_registers(self._gamma_zero[t], self.params, s_tuple)

    def is_invertible(self):
        return _supports_disjoint(self)


class ToyScheme:
    """
    A hand-specified classical-message scheme: explicit key distribution and
    cipher map. Used to exercise the key-size bound beyond the matrix scheme.
    """

    def __init__(self, key_probs, message_count, cipher_bits, cipher):
        if sum(Fraction(p) for p in key_probs.values()) != 1:
            raise InvalidStateError("key distribution does not sum to 1")
        self.key_probs = {k: Fraction(p) for k, p in key_probs.items() if p}
        self.message_count = message_count
        self.cipher_bits = cipher_bits
        self._cipher = cipher

    def key_entropy(self):
        return entropy(list(self.key_probs.values())).shannon_bits

    def cipher(self, key, s):
        return self._cipher(key, s)

    def averaged(self, s_tuple):
        states = []
        for key in self.key_probs:
            factors = [self.cipher(key, s) for s in s_tuple]
            state = factors[0]
            for factor in factors[1:]:
                state = tensor_diag(state, factor)
            states.append(state)
        return mixture(states, list(self.key_probs.values()))

    def is_invertible(self):
        return _supports_disjoint(self)


def _supports_disjoint(scheme):
    # Ciphers of distinct messages under one key must be orthogonal
    for key in scheme.key_probs:
        seen = set()
        for s in range(scheme.message_count):
            support = set(scheme.cipher(key, s).indices.tolist())
            if seen & support:
                return False
            seen |= support
    return True


def biased_one_time_pad(m, key_probs):
    # Classical one-time pad on m bits with an arbitrary key distribution
    def cipher(key, s):
        return DiagonalState.point_mass(BitVector(m, key ^ s))

    return ToyScheme(key_probs, 1 << m, m, cipher)


def repetition_scheme(m, key_probs):
    # Non-invertible toy: the cipher ignores the message
    def cipher(key, s):
        return DiagonalState.point_mass(BitVector(m, key))

    return ToyScheme(key_probs, 1 << m, m, cipher)
