"""
Pauli one-time pad over q qubits, and subsampled variants of it.

A key (a, b) acts as rho -> X^a Z^b rho Z^b X^a. Qubit 0 is the most
significant bit of a basis index, matching the bit order of BitVector.
The 2q-bit classical message encoding of a key is s = (a || b).
"""

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .conf import qsr_setting
from .exceptions import DimensionError, GuardError
from .gf2 import BitVector
from .qstate import DensityOperator, fully_mixed, random_pure_state, trace_distance

logger = logging.getLogger(__name__)

_I = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def check_qubits(q):
    limit = qsr_setting("MAX_PAULI_QUBITS")
    if not 1 <= q <= limit:
        raise GuardError(f"Pauli pad requires 1 ≤ q ≤ {limit}, got q = {q}")


@dataclass(frozen=True)
class PauliKey:
    a: BitVector
    b: BitVector

    def __post_init__(self):
        if self.a.length != self.b.length:
            raise DimensionError(f"X mask has {self.a.length} bits, Z mask has {self.b.length}")

    @property
    def q(self):
        return self.a.length

    @classmethod
    def from_values(cls, a, b, q):
        return cls(BitVector(q, a), BitVector(q, b))

    @classmethod
    def from_message(cls, s, q):
        # s = (a || b) of length 2q
        value = s.value if isinstance(s, BitVector) else int(s)
        if isinstance(s, BitVector) and s.length != 2 * q:
            raise DimensionError(f"a {q}-qubit pad key needs {2 * q} bits, got {s.length}")
        mask = (1 << q) - 1
        return cls.from_values(value >> q, value & mask, q)

    @property
    def message(self):
        return self.a.concat(self.b)

    def matrix(self):
        return pauli_matrix(self.a.value, self.b.value, self.q)


@functools.lru_cache(maxsize=None)
def pauli_matrix(a, b, q):
    out = np.ones((1, 1), dtype=np.complex128)
    for i in range(q):
        shift = q - 1 - i
        factor = _I
        if (a >> shift) & 1:
            factor = _X
        if (b >> shift) & 1:
            factor = factor @ _Z
        out = np.kron(out, factor)
    out.flags.writeable = False
    return out


def all_pauli_keys(q):
    check_qubits(q)
    return [PauliKey.from_values(a, b, q) for a in range(1 << q) for b in range(1 << q)]


def apply_pauli(key, rho):
    if rho.dim != 1 << key.q:
        raise DimensionError(f"{key.q}-qubit key cannot act on dimension {rho.dim}")
    p = key.matrix()
    return DensityOperator.trusted(p @ rho.entries @ p.conj().T)


def _average(keys, rho):
    total = np.zeros_like(rho.entries)
    for key in keys:
        p = key.matrix()
        total += p @ rho.entries @ p.conj().T
    return DensityOperator.trusted(total / len(keys))


def randomize_full(rho, q):
    # Average over all 4^q Paulis: the fully mixed state
    check_qubits(q)
    if rho.dim != 1 << q:
        raise DimensionError(f"expected dimension {1 << q}, got {rho.dim}")
    return _average(all_pauli_keys(q), rho)


@dataclass(frozen=True)
class SubsampledScheme:
    # Uniform distribution over K distinct Pauli keys
    q: int
    keys: tuple

    def __post_init__(self):
        check_qubits(self.q)
        if not self.keys:
            raise GuardError("a subsampled scheme needs at least one key")
        if len(set(self.keys)) != len(self.keys):
            raise DimensionError("subsampled keys must be distinct")
        if any(key.q != self.q for key in self.keys):
            raise DimensionError(f"every key must act on {self.q} qubits")

    @classmethod
    def full(cls, q):
        return cls(q, tuple(all_pauli_keys(q)))

    @classmethod
    def sample(cls, q, size, rng):
        keys = all_pauli_keys(q)
        if not 1 <= size <= len(keys):
            raise GuardError(f"need 1 ≤ K ≤ {len(keys)}, got K = {size}")
        chosen = sorted(rng.choice(len(keys), size=size, replace=False).tolist())
        return cls(q, tuple(keys[i] for i in chosen))

    @classmethod
    def nested(cls, q, sizes, rng):
        # Prefixes of one random key order, so each set contains the previous
        keys = all_pauli_keys(q)
        order = rng.permutation(len(keys)).tolist()
        return [cls(q, tuple(keys[i] for i in order[:size])) for size in sizes]

    @property
    def key_probs(self):
        return [1 / len(self.keys)] * len(self.keys)

    @property
    def key_entropy(self):
        return math.log2(len(self.keys))

    def average(self, rho):
        return _average(self.keys, rho)


def epsilon_estimate(scheme, trials, rng):
    """
    Empirical epsilon of a subsampled pad: the largest trace distance to
    I/2^q seen over ``trials`` random pure states. A lower estimate of the
    true supremum, never a certified bound.
    """
    if trials < 1:
        raise GuardError(f"trials must be ≥ 1, got {trials}")
    dim = 1 << scheme.q
    target = fully_mixed(dim=dim)
    worst = 0.0
    for _ in range(trials):
        worst = max(worst, trace_distance(scheme.average(random_pure_state(dim, rng)), target))
    logger.debug("epsilon estimate over %d trials with K=%d: %.6g", trials, len(scheme.keys), worst)
    return worst
