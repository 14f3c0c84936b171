"""
Quantum messages through the matrix scheme.

A message sigma is padded with a random Pauli key s, and s itself is
encrypted under the matrix scheme; both parts travel together. The Pauli
pad needs 2q classical bits, so the matrix scheme runs with m = 2q.

Registers of the eavesdropper's state are ordered classical ciphers first,
then unused key copies, then the padded quantum messages.
"""

import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DimensionError, GuardError, InvalidStateError
from .gf2 import BitMatrix
from .pauli_otp import PauliKey, SubsampledScheme, apply_pauli, check_qubits
from .qstate import BlockState, DensityOperator, format_rational, fully_mixed, trace_distance, trace_norm
from .scheme import (
    CipherInstance,
    SchemeParams,
    consistent_images,
    decrypt,
    encrypt_instance,
    register_parts,
    relation_groups,
    sample_key_instance,
)

logger = logging.getLogger(__name__)

# Largest (y, v, block) array the hybrid distance may build
MAX_HYBRID_CELLS = 1 << 24


@dataclass(frozen=True)
class HybridCipher:
    classical_part: CipherInstance
    quantum_part: DensityOperator


def message_qubits(m, dim):
    # q with m = 2q and dim = 2^q, or a rejection naming the mismatch
    q = dim.bit_length() - 1
    if dim != 1 << q or q < 1:
        raise DimensionError(f"message dimension must be a power of two, got {dim}")
    if m != 2 * q:
        raise DimensionError(f"hybrid encryption needs m = 2q: m = {m}, q = {q}")
    check_qubits(q)
    return q


def _pad_for(q, pad):
    pad = SubsampledScheme.full(q) if pad is None else pad
    if pad.q != q:
        raise DimensionError(f"pad acts on {pad.q} qubits, message has {q}")
    return pad


# ENCRYPTION

def hybrid_encrypt(a, sigma, rng, pad=None, pad_key=None):
    # pad_key fixes the Pauli key; otherwise it is drawn from the pad
    q = message_qubits(a.rows, sigma.dim)
    if pad_key is None:
        pad = _pad_for(q, pad)
        key = pad.keys[int(rng.integers(0, len(pad.keys)))]
    elif pad_key.q != q:
        raise DimensionError(f"pad key acts on {pad_key.q} qubits, message has {q}")
    else:
        key = pad_key
    instance = sample_key_instance(a, rng)
    return HybridCipher(encrypt_instance(instance, key.message), apply_pauli(key, sigma))


def hybrid_decrypt(a, cipher):
    q = message_qubits(a.rows, cipher.quantum_part.dim)
    s = decrypt(a, cipher.classical_part)
    return apply_pauli(PauliKey.from_message(s, q), cipher.quantum_part)


def hybrid_cipher_state(key, sigma, pad=None):
    """
    The exact cipher of sigma averaged over the Pauli key s (and over the
    decryption key when ``key`` is a SchemeParams rather than a BitMatrix).

    One block per classical string (y || x); the block is
    sum over s and A of P(A) P(s) [y = Ax ⊕ s] 2^-n F_s(sigma).
    """
    if isinstance(key, SchemeParams):
        key.check_guards()
        keys, weights, exponent = key.key_distribution()
        matrices = [(BitMatrix.from_index(int(k), key.m, key.n), int(w) / float(1 << exponent))
                    for k, w in zip(keys, weights)]
        m, n = key.m, key.n
    else:
        matrices = [(key, 1.0)]
        m, n = key.rows, key.cols
    q = message_qubits(m, sigma.dim)
    pad = _pad_for(q, pad)
    padded = [(k.message.value, apply_pauli(k, sigma).entries) for k in pad.keys]
    scale = 1.0 / (len(pad.keys) * (1 << n))

    blocks = {}
    xs = np.arange(1 << n)
    for a, p_a in matrices:
        images = a.image_table()
        for s, padded_sigma in padded:
            codes = ((images ^ s) << n) | xs
            for code in codes.tolist():
                block = blocks.get(code)
                if block is None:
                    block = blocks[code] = np.zeros((sigma.dim, sigma.dim), dtype=np.complex128)
                block += (p_a * scale) * padded_sigma
    return BlockState(m + n, sigma.dim, blocks)


# DISTANCE OF THE EAVESDROPPER'S STATE


def hybrid_randomization_distance(params, sigmas, t1, pad=None):
    """
    ||rho^E - tau_1 ⊗ tau_2^{⊗t1}|| for t1 hybrid ciphers of ``sigmas`` plus
    t - t1 unused key copies, where tau_1 is fully mixed on the classical
    registers and tau_2 = I/2^q. Exact up to the eigensolver tolerance.
    """
    params.check_guards()
    if not params.uniform_keys:
        raise InvalidStateError("the hybrid distance assumes uniformly random decryption keys")
    if not 0 <= t1 <= params.t:
        raise DimensionError(f"t1 must lie in 0..{params.t}, got {t1}")
    if len(sigmas) != t1:
        raise DimensionError(f"expected {t1} messages, got {len(sigmas)}")
    m, n, t = params.m, params.n, params.t
    if t == 0:
        return 0.0
    q = m // 2
    if m != 2 * q:
        raise DimensionError(f"hybrid encryption needs m = 2q, got m = {m}")
    for sigma in sigmas:
        message_qubits(m, sigma.dim)
    pad = _pad_for(q, pad)
    d = 1 << q

    # tables[i][s] = P(s) F_s(sigma_i), zero for strings outside the pad
    tables = []
    for sigma in sigmas:
        table = np.zeros((1 << m, d, d), dtype=np.complex128)
        for key in pad.keys:
            table[key.message.value] = apply_pauli(key, sigma).entries / len(pad.keys)
        tables.append(table)

    big_d = d ** t1
    target = np.eye(big_d) / (float(1 << params.register_bits) * big_d)
    ys = np.arange(1 << (t * m), dtype=np.int64)
    y_parts = register_parts(ys, m, t)
    cells = ys.size * ys.size * big_d * big_d
    if cells > MAX_HYBRID_CELLS:
        raise GuardError(f"hybrid distance needs 4^(tm) d^(2 t1) ≤ {MAX_HYBRID_CELLS}, got {cells}")

    total = 0.0
    for relation_mask, count in relation_groups(params).items():
        images = consistent_images(params, relation_mask)
        v_parts = register_parts(images, m, t)
        # key-copy registers must show y_j = Ax_j exactly
        mask = np.ones((ys.size, images.size), dtype=bool)
        for j in range(t1, t):
            mask &= y_parts[j][:, None] == v_parts[j][None, :]
        prod = np.ones((ys.size, images.size, 1, 1), dtype=np.complex128)
        for i in range(t1):
            factor = tables[i][y_parts[i][:, None] ^ v_parts[i][None, :]]
            prod = np.einsum("yvab,yvcd->yvacbd", prod, factor)
            side = prod.shape[2] * prod.shape[3]
            prod = prod.reshape(ys.size, images.size, side, side)
        weight = 1.0 / (float(1 << (t * n)) * images.size)
        blocks = weight * np.einsum("yv,yvab->yab", mask.astype(np.float64), prod)
        total += count * float(trace_norm(blocks - target).sum())
    logger.debug("hybrid distance m=%d n=%d t=%d t1=%d K=%d: %.17g", m, n, t, t1, len(pad.keys), total)
    return total


@dataclass(frozen=True)
class HybridReport:
    params: SchemeParams
    t1: int
    pad_size: int
    distance: float
    eps1: Fraction
    eps2: float
    message_eps2: tuple
    bound: float
    holds: bool

    def as_dict(self):
        return {
            "params": self.params.as_dict(),
            "t1": self.t1,
            "pad_size": self.pad_size,
            "distance": self.distance,
            "eps1": format_rational(self.eps1),
            "eps2": self.eps2,
            "message_eps2": list(self.message_eps2),
            "bound": self.bound,
            "holds": self.holds,
        }


def hybrid_report(params, sigmas, t1, eps1, pad=None, eps2=None, tol=1e-9):
    """
    Check the composition bound distance ≤ eps1 + t1 * eps2.

    ``eps2`` is the pad's randomization figure (an estimate for subsampled
    pads); it is raised to at least the exact figure of each tested message
    so the comparison is never against a value below what the data shows.
    """
    q = params.m // 2
    pad = _pad_for(q, pad)
    target = fully_mixed(dim=1 << q)
    per_message = tuple(trace_distance(pad.average(sigma), target) for sigma in sigmas)
    eps2 = max([0.0 if eps2 is None else float(eps2), *per_message])
    distance = hybrid_randomization_distance(params, sigmas, t1, pad)
    bound = float(eps1) + t1 * eps2
    holds = distance <= bound + tol
    if not holds:
        logger.warning("composition bound fails: %.17g > %.17g", distance, bound)
    return HybridReport(params, t1, len(pad.keys), distance, Fraction(eps1), eps2, per_message, bound, holds)


# KEY-SIZE ACCOUNTING

@dataclass(frozen=True)
class KeyBudget:
    t: int
    d: int
    eps1: float
    eps2: float
    security_bits: float      # n = t + log 1/eps1 + 1
    message_bits: float       # log d + log 1/eps2 + 4
    entropy_bits: float       # product of the two
    pauli_entropy_bits: float  # same with the perfect pad, 2 log d message bits
    lower_bound_bits: float   # (1 - 8 eps) t log d - 2, eps = eps1 + t eps2
    ratio: float              # entropy_bits / (t log d)

    def as_dict(self):
        return asdict(self)


def keysize_accounting(t, d, eps1, eps2):
    if t < 1:
        raise GuardError(f"t must be ≥ 1, got {t}")
    if d < 2:
        raise GuardError(f"d must be ≥ 2, got {d}")
    for name, eps in (("eps1", eps1), ("eps2", eps2)):
        if not 0 < eps <= 1:
            raise GuardError(f"{name} must lie in (0, 1], got {eps}")
    log_d = math.log2(d)
    security = t + math.log2(1 / eps1) + 1
    message = log_d + math.log2(1 / eps2) + 4
    eps = eps1 + t * eps2
    return KeyBudget(
        t=t,
        d=d,
        eps1=eps1,
        eps2=eps2,
        security_bits=security,
        message_bits=message,
        entropy_bits=security * message,
        pauli_entropy_bits=security * 2 * log_d,
        lower_bound_bits=(1 - 8 * eps) * t * log_d - 2,
        ratio=security * message / (t * log_d),
    )


@dataclass(frozen=True)
class AsymptoticPoint:
    t: int
    log_d: float
    delta1: float
    delta2: float
    ratio: float
    limit: float
    relative_gap: float

    def as_dict(self):
        return asdict(self)


def asymptotic_ratio(t, log_d, delta1, delta2):
    # eps1 = 2^(-delta1 t), eps2 = d^(-delta2); worked in log space so d may be huge
    if t < 1 or log_d <= 0:
        raise GuardError("need t ≥ 1 and log d > 0")
    entropy_bits = (t + delta1 * t + 1) * (log_d + delta2 * log_d + 4)
    ratio = entropy_bits / (t * log_d)
    limit = (1 + delta1) * (1 + delta2)
    return AsymptoticPoint(t, float(log_d), delta1, delta2, ratio, limit, ratio / limit - 1)
