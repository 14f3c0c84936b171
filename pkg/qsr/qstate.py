"""
Quantum states and metrics.

Two representations live here. ``DiagonalState`` is an exact sparse
distribution over basis strings whose weights are dyadic rationals
(integer numerators over a shared power of two); every state of the matrix
scheme is of this kind. ``DensityOperator`` is a dense complex matrix used
for quantum messages. ``BlockState`` joins them: a classical register whose
basis strings each carry an unnormalised operator block.
"""

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .exceptions import DimensionError, GuardError, InvalidStateError

logger = logging.getLogger(__name__)

# Numerators are int64, so weights need exponents below 63
MAX_EXPONENT = 62
MAX_STATE_BITS = 40

MAX_JACOBI_DIM = 64
JACOBI_TOL = 1e-13
MAX_SWEEPS = 100

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGEN_FLOOR = -1e-10


def dyadic_exponent(value):
    # k such that value * 2**k is an integer; rejects non-dyadic rationals
    value = Fraction(value)
    den = value.denominator
    if den & (den - 1):
        raise InvalidStateError(f"{value} is not a dyadic rational")
    return den.bit_length() - 1


def format_rational(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# DIAGONAL STATES

@dataclass(frozen=True, eq=False)
class DiagonalState:
    # weight of basis index indices[i] is numerators[i] / 2**exponent
    num_bits: int
    indices: np.ndarray
    numerators: np.ndarray
    exponent: int

    def __post_init__(self):
        if not 0 <= self.num_bits <= MAX_STATE_BITS:
            raise GuardError(f"num_bits must be ≤ {MAX_STATE_BITS}, got {self.num_bits}")
        if self.exponent > MAX_EXPONENT:
            raise GuardError(f"weights below 2^-{MAX_EXPONENT} are not representable")
        indices = np.asarray(self.indices, dtype=np.int64)
        numerators = np.asarray(self.numerators, dtype=np.int64)
        if indices.shape != numerators.shape or indices.ndim != 1:
            raise InvalidStateError("indices and numerators must be matching 1-d arrays")
        if numerators.size and numerators.min() <= 0:
            raise InvalidStateError("stored weights must be positive")
        if indices.size and (indices.min() < 0 or indices.max() >= (1 << self.num_bits)):
            raise InvalidStateError(f"basis index outside {self.num_bits} bits")
        if indices.size > 1 and np.any(np.diff(indices) <= 0):
            order = np.argsort(indices, kind="stable")
            indices, numerators = indices[order], numerators[order]
            if np.any(np.diff(indices) == 0):
                raise InvalidStateError("duplicate basis index")
        if int(numerators.sum()) != (1 << self.exponent):
            raise InvalidStateError("weights do not sum to 1")
        indices.flags.writeable = False
        numerators.flags.writeable = False
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "numerators", numerators)
        self._reduce()

    def _reduce(self):
        # Smallest exponent, so equal states have equal representations
        numerators, exponent = self.numerators, self.exponent
        if exponent == 0 or not numerators.size:
            return
        shift = min(exponent, int(np.bitwise_and(numerators, -numerators).min()).bit_length() - 1)
        if shift:
            numerators = numerators >> shift
            numerators.flags.writeable = False
            object.__setattr__(self, "numerators", numerators)
            object.__setattr__(self, "exponent", exponent - shift)

    # constructors

    @classmethod
    def from_dense(cls, num_bits, numerators, exponent):
        numerators = np.asarray(numerators, dtype=np.int64)
        support = np.flatnonzero(numerators)
        return cls(num_bits, support, numerators[support], exponent)

    @classmethod
    def from_weights(cls, num_bits, weights):
        # weights: mapping from bit string or index to a dyadic rational
        items = []
        for key, weight in weights.items():
            weight = Fraction(weight)
            if weight < 0:
                raise InvalidStateError(f"negative weight {weight}")
            if weight == 0:
                continue
            if isinstance(key, str):
                if len(key) != num_bits or set(key) - {"0", "1"}:
                    raise InvalidStateError(f"{key!r} is not a {num_bits}-bit string")
                key = int(key, 2) if key else 0
            items.append((key, weight))
        if sum(w for _, w in items) != 1:
            raise InvalidStateError("weights do not sum to 1")
        exponent = max((dyadic_exponent(w) for _, w in items), default=0)
        items.sort()
        return cls(num_bits,
                   np.array([k for k, _ in items], dtype=np.int64),
                   np.array([int(w * (1 << exponent)) for _, w in items], dtype=np.int64),
                   exponent)

    @classmethod
    def point_mass(cls, bits):
        if isinstance(bits, str):
            return cls(len(bits), np.array([int(bits, 2) if bits else 0]), np.array([1]), 0)
        return cls(bits.length, np.array([bits.value]), np.array([1]), 0)

    # accessors

    @property
    def support_size(self):
        return int(self.indices.size)

    def weight(self, key):
        if isinstance(key, str):
            key = int(key, 2) if key else 0
        pos = int(np.searchsorted(self.indices, key))
        if pos < self.indices.size and self.indices[pos] == key:
            return Fraction(int(self.numerators[pos]), 1 << self.exponent)
        return Fraction(0)

    @property
    def weights(self):
        width = self.num_bits
        return {format(int(i), f"0{width}b") if width else "": Fraction(int(w), 1 << self.exponent)
                for i, w in zip(self.indices, self.numerators)}

    def probabilities(self):
        return self.numerators.astype(np.float64) / float(1 << self.exponent)

    def to_dense(self, exponent=None):
        # Integer numerators over 2**exponent for every basis index
        exponent = self.exponent if exponent is None else exponent
        if exponent < self.exponent:
            raise InvalidStateError("cannot lower the exponent below the state's own")
        out = np.zeros(1 << self.num_bits, dtype=np.int64)
        out[self.indices] = self.numerators << (exponent - self.exponent)
        return out

    def spectrum(self):
        # Nonzero weights with multiplicities, largest first
        values, counts = np.unique(self.numerators, return_counts=True)
        return [(Fraction(int(v), 1 << self.exponent), int(c))
                for v, c in sorted(zip(values, counts), reverse=True)]

    def xor_indices(self, mask):
        return DiagonalState(self.num_bits, self.indices ^ np.int64(mask), self.numerators, self.exponent)

    def marginal(self, keep_bits, leading=True):
        # Sum out the other register; leading=True keeps the high-order bits
        if not 0 <= keep_bits <= self.num_bits:
            raise DimensionError(f"cannot keep {keep_bits} of {self.num_bits} bits")
        if leading:
            keys = self.indices >> (self.num_bits - keep_bits)
        else:
            keys = self.indices & ((1 << keep_bits) - 1)
        uniq, inverse = np.unique(keys, return_inverse=True)
        sums = np.zeros(uniq.size, dtype=np.int64)
        np.add.at(sums, inverse, self.numerators)
        return DiagonalState(keep_bits, uniq, sums, self.exponent)

    def to_density(self):
        if self.num_bits > 12:
            raise GuardError("dense embedding is limited to 12 bits")
        return DensityOperator(np.diag(self.to_dense().astype(np.float64) / float(1 << self.exponent)))

    def __eq__(self, other):
        if not isinstance(other, DiagonalState):
            return NotImplemented
        return (self.num_bits == other.num_bits and self.exponent == other.exponent
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.numerators, other.numerators))

    __hash__ = None

    def __repr__(self):
        return f"DiagonalState(num_bits={self.num_bits}, support={self.support_size}, exponent={self.exponent})"


def tensor_diag(a, b):
    exponent = a.exponent + b.exponent
    if exponent > MAX_EXPONENT:
        raise GuardError(f"tensor product needs weights below 2^-{MAX_EXPONENT}")
    indices = (a.indices[:, None] << b.num_bits) | b.indices[None, :]
    numerators = a.numerators[:, None] * b.numerators[None, :]
    return DiagonalState(a.num_bits + b.num_bits, indices.ravel(), numerators.ravel(), exponent)


def mixture(states, weights):
    # Exact convex combination sum_k weights[k] * states[k]
    states, weights = list(states), [Fraction(w) for w in weights]
    if not states or len(states) != len(weights):
        raise DimensionError("need one weight per state")
    if sum(weights) != 1 or min(weights) < 0:
        raise InvalidStateError("mixture weights must form a distribution")
    if len({s.num_bits for s in states}) != 1:
        raise DimensionError("mixed states must have equal num_bits")
    pairs = [(s, w) for s, w in zip(states, weights) if w]
    exponent = max(s.exponent + dyadic_exponent(w) for s, w in pairs)
    if exponent > MAX_EXPONENT:
        raise GuardError(f"mixture needs weights below 2^-{MAX_EXPONENT}")
    chunks_idx, chunks_num = [], []
    for state, weight in pairs:
        scale = int(weight * (1 << (exponent - state.exponent)))
        chunks_idx.append(state.indices)
        chunks_num.append(state.numerators * scale)
    uniq, inverse = np.unique(np.concatenate(chunks_idx), return_inverse=True)
    sums = np.zeros(uniq.size, dtype=np.int64)
    np.add.at(sums, inverse, np.concatenate(chunks_num))
    return DiagonalState(states[0].num_bits, uniq, sums, exponent)


def l1_distance(a, b):
    # Trace norm of a - b for commuting diagonal states, exact
    if a.num_bits != b.num_bits:
        raise DimensionError(f"size mismatch: {a.num_bits} vs {b.num_bits} bits")
    exponent = max(a.exponent, b.exponent)
    values = np.concatenate([a.numerators << (exponent - a.exponent),
                             -(b.numerators << (exponent - b.exponent))])
    uniq, inverse = np.unique(np.concatenate([a.indices, b.indices]), return_inverse=True)
    sums = np.zeros(uniq.size, dtype=np.int64)
    np.add.at(sums, inverse, values)
    return Fraction(int(np.abs(sums).sum()), 1 << exponent)


def dense_l1(numerators_a, numerators_b, exponent):
    # l1 distance of two dense numerator vectors over a shared 2**exponent
    return Fraction(int(np.abs(numerators_a - numerators_b).sum()), 1 << exponent)


# DENSITY OPERATORS

@dataclass(frozen=True, eq=False)
class DensityOperator:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or not entries.shape[0]:
            raise DimensionError(f"density operator must be square, got shape {entries.shape}")
        if np.abs(entries - entries.conj().T).max() > HERMITIAN_TOL:
            raise InvalidStateError("matrix is not Hermitian")
        if abs(np.trace(entries) - 1) > TRACE_TOL:
            raise InvalidStateError(f"trace is {np.trace(entries).real:.17g}, expected 1")
        if jacobi_eigvalsh(entries).min() < EIGEN_FLOOR:
            raise InvalidStateError("matrix has a negative eigenvalue")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @classmethod
    def trusted(cls, entries):
        # For outputs of unitary conjugation or averaging of valid operators
        op = object.__new__(cls)
        entries = np.array(entries, dtype=np.complex128)
        entries.flags.writeable = False
        object.__setattr__(op, "entries", entries)
        return op

    @classmethod
    def pure(cls, vector):
        vector = np.asarray(vector, dtype=np.complex128)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InvalidStateError("zero vector")
        vector = vector / norm
        return cls(np.outer(vector, vector.conj()))

    @classmethod
    def basis(cls, index, dim):
        vector = np.zeros(dim)
        vector[index] = 1
        return cls.pure(vector)

    @property
    def dim(self):
        return self.entries.shape[0]

    def eigenvalues(self):
        return jacobi_eigvalsh(self.entries)


def fully_mixed(num_bits=None, *, dim=None):
    if (num_bits is None) == (dim is None):
        raise DimensionError("give exactly one of num_bits or dim")
    if dim is not None:
        if dim < 1:
            raise DimensionError(f"dim must be ≥ 1, got {dim}")
        return DensityOperator.trusted(np.eye(dim) / dim)
    if num_bits < 0:
        raise DimensionError(f"num_bits must be ≥ 0, got {num_bits}")
    size = 1 << num_bits
    return DiagonalState(num_bits, np.arange(size, dtype=np.int64), np.ones(size, dtype=np.int64), num_bits)


def random_pure_state(dim, rng):
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return DensityOperator.pure(vector)


def random_density(dim, rng, rank=None):
    # Normalised Wishart-type mixed state
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityOperator(rho / np.trace(rho).real)


# EIGENVALUES

def jacobi_eigvalsh(matrix, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """
    Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Accepts a single (d, d) matrix or a stack (k, d, d); every matrix in the
    stack is rotated in lockstep. Each rotation first removes the phase of
    the (p, q) entry, then applies the real symmetric Jacobi rotation.
    Stops once every off-diagonal Frobenius norm is below ``tol`` (scaled by
    the matrix norm when that exceeds 1).
    """
    h = np.array(matrix, dtype=np.complex128)
    single = h.ndim == 2
    if single:
        h = h[None]
    d = h.shape[-1]
    if h.ndim != 3 or h.shape[-2] != d:
        raise DimensionError(f"expected square matrices, got shape {np.shape(matrix)}")
    if d > MAX_JACOBI_DIM:
        raise GuardError(f"Jacobi solver is limited to dim ≤ {MAX_JACOBI_DIM}")
    if d == 1 or not h.shape[0]:
        values = h[:, np.arange(d), np.arange(d)].real
        return values[0] if single else values

    scale = np.maximum(1.0, np.sqrt((np.abs(h) ** 2).sum(axis=(1, 2))))
    off_mask = ~np.eye(d, dtype=bool)
    for sweep in range(max_sweeps):
        off = np.sqrt((np.abs(h[:, off_mask]) ** 2).sum(axis=1))
        if np.all(off < tol * scale):
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = h[:, p, q]
                r = np.abs(apq)
                active = r > 1e-300
                if not active.any():
                    continue
                safe_r = np.where(active, r, 1.0)
                phase = np.where(active, np.conj(apq) / safe_r, 1.0)
                tau = (h[:, q, q].real - h[:, p, p].real) / (2.0 * safe_r)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                col_p = h[:, :, p].copy()
                col_q = h[:, :, q].copy()
                h[:, :, p] = c[:, None] * col_p - (s * phase)[:, None] * col_q
                h[:, :, q] = s[:, None] * col_p + (c * phase)[:, None] * col_q
                row_p = h[:, p, :].copy()
                row_q = h[:, q, :].copy()
                h[:, p, :] = c[:, None] * row_p - (s * np.conj(phase))[:, None] * row_q
                h[:, q, :] = s[:, None] * row_p + (c * np.conj(phase))[:, None] * row_q
                h[:, p, q] = 0.0
                h[:, q, p] = 0.0
    else:
        logger.warning("Jacobi solver stopped after %d sweeps without converging", max_sweeps)

    values = h[:, np.arange(d), np.arange(d)].real
    return values[0] if single else values


def trace_norm(matrix):
    values = jacobi_eigvalsh(matrix)
    return np.abs(values).sum(axis=-1)


def trace_distance(a, b):
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(trace_norm(a.entries - b.entries))


# BLOCK (CLASSICAL-QUANTUM) STATES

@dataclass(frozen=True, eq=False)
class BlockState:
    # blocks[z] = p(z) * rho_z for classical basis index z (absent => 0)
    num_bits: int
    dim: int
    blocks: dict

    def __post_init__(self):
        for key, block in self.blocks.items():
            if not 0 <= key < (1 << self.num_bits):
                raise InvalidStateError(f"classical index {key} outside {self.num_bits} bits")
            if np.shape(block) != (self.dim, self.dim):
                raise DimensionError(f"block {key} has shape {np.shape(block)}, expected {self.dim}x{self.dim}")

    def trace(self):
        return float(sum(np.trace(b).real for b in self.blocks.values()))

    def classical_weights(self):
        return {key: float(np.trace(b).real) for key, b in self.blocks.items()}

    def block(self, key):
        block = self.blocks.get(key)
        return np.zeros((self.dim, self.dim), dtype=np.complex128) if block is None else block


def block_distance(a, b):
    # Trace norm of a - b; the classical register is diagonal so blocks separate
    if (a.num_bits, a.dim) != (b.num_bits, b.dim):
        raise DimensionError("block states have different shapes")
    keys = sorted(set(a.blocks) | set(b.blocks))
    if not keys:
        return 0.0
    stack = np.stack([a.block(k) - b.block(k) for k in keys])
    return float(trace_norm(stack).sum())


# ENTROPY

@dataclass(frozen=True)
class EntropyReport:
    shannon_bits: float
    source: str


def _shannon(probs):
    probs = np.asarray(probs, dtype=np.float64)
    probs = probs[probs > 0]
    return max(0.0, float(-(probs * np.log2(probs)).sum()))


def binary_entropy(p):
    p = float(p)
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@functools.singledispatch
def entropy(x):
    # A plain distribution: sequence or mapping of probabilities
    values = list(x.values()) if isinstance(x, dict) else list(x)
    if values and all(isinstance(v, Rational) for v in values):
        total = sum(Fraction(v) for v in values)
        if total != 1:
            raise InvalidStateError(f"distribution sums to {total}")
    elif abs(math.fsum(float(v) for v in values) - 1.0) > TRACE_TOL:
        raise InvalidStateError("distribution does not sum to 1")
    if any(float(v) < 0 for v in values):
        raise InvalidStateError("negative probability")
    return EntropyReport(_shannon([float(v) for v in values]), "distribution")


@entropy.register
def _(x: DiagonalState):
    return EntropyReport(_shannon(x.probabilities()), "diagonal")


@entropy.register
def _(x: DensityOperator):
    return EntropyReport(_shannon(np.clip(x.eigenvalues(), 0.0, None)), "von_neumann")


@entropy.register
def _(x: BlockState):
    if not x.blocks:
        raise InvalidStateError("empty block state")
    values = jacobi_eigvalsh(np.stack(list(x.blocks.values())))
    return EntropyReport(_shannon(np.clip(values.ravel(), 0.0, None)), "block")
