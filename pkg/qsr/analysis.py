"""
Security figures and bound checks for the matrix scheme.

Every figure that can be exact is exact: trace distances between diagonal
states are rationals over a power of two, and entropies are converted to
floats only inside log2.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import ConsistencyError, DimensionError, GuardError, InvalidStateError
from .gf2 import MAX_BITS, rank_distribution, rank_of_words
from .qstate import (
    BlockState,
    DiagonalState,
    binary_entropy,
    block_distance,
    entropy,
    format_rational,
    l1_distance,
)
from .scheme import (
    MatrixScheme,
    adversary_state,
    averaged_cipher,
    message_value,
    register_parts,
    relation_groups,
    subset_sum,
)

logger = logging.getLogger(__name__)

# Slack on float-valued inequalities
BOUND_TOL = 1e-10
ALICKI_FANNES_TOL = 1e-9

# Dense joint-state arithmetic stays in int64 below this
MAX_DENSE_EXPONENT = 62

# Largest message-tuple space scanned by the two-point profile
MAX_PROFILE_BITS = 20


def distance_to_fully_mixed(state):
    # ||state - I/2^k|| exactly, touching only the support
    bits = state.num_bits
    exponent = max(state.exponent, bits)
    numerators = state.numerators << (exponent - state.exponent)
    tau = 1 << (exponent - bits)
    on_support = int(np.abs(numerators - tau).sum())
    off_support = ((1 << bits) - state.support_size) * tau
    return Fraction(on_support + off_support, 1 << exponent)


def _regime(params):
    return {"m": params.m, "n": params.n, "t": params.t, "delta": params.delta}


# RANDOMIZATION

def spectrum_law(params):
    """
    Predicted nonzero weights of gamma_0 with multiplicities: weight
    2^(-dm-tn) occurs 2^(tn) P_D(d) 2^(dm) times, for each rank d with
    nonzero probability.
    """
    m, n, t = params.m, params.n, params.t
    law = []
    for d, p in enumerate(rank_distribution(n, t)):
        if not p:
            continue
        count = p * (1 << (t * n)) * (1 << (d * m))
        if count.denominator != 1:
            raise ConsistencyError(f"multiplicity {count} at rank {d} is not an integer")
        law.append((Fraction(1, 1 << (d * m + t * n)), int(count)))
    return sorted(law, reverse=True)


def closed_form_epsilon(m, n, t):
    # 2 sum_d P_D(d) (1 - 2^(-(t-d)m))
    return 2 * sum((p * (1 - Fraction(1, 1 << ((t - d) * m)))
                    for d, p in enumerate(rank_distribution(n, t))), Fraction(0))


def union_bound(n, t):
    # 2 (1 - P_D(t)); P_D(t) = prod_{i<t} (1 - 2^(i-n)) by the rank recurrence
    return 2 * (1 - rank_distribution(n, t)[t])


@dataclass(frozen=True)
class SecurityReport:
    params: object
    epsilon_exact: Fraction
    bound: Fraction
    union_bound: Fraction
    spectrum: list
    holds: bool
    chain_holds: bool
    regime: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "params": self.params.as_dict(),
            "epsilon_exact": format_rational(self.epsilon_exact),
            "bound": format_rational(self.bound),
            "union_bound": format_rational(self.union_bound),
            "spectrum": [[format_rational(w), c] for w, c in self.spectrum],
            "regime": self.regime,
            "holds": self.holds,
            "chain_holds": self.chain_holds,
        }


def randomization_epsilon_exact(params):
    """
    Exact ||gamma_0 - I/2^(t(m+n))|| by enumeration, checked against the
    closed form from the rank distribution and against the spectrum law.
    By bit-flip covariance the value is the same for every message tuple.
    """
    if not params.uniform_keys:
        raise InvalidStateError("the closed form assumes uniformly random decryption keys")
    m, n, t = params.m, params.n, params.t
    gamma = averaged_cipher(params, [0] * t)
    enumerated = distance_to_fully_mixed(gamma)
    closed = closed_form_epsilon(m, n, t)
    if enumerated != closed:
        logger.error("epsilon mismatch at m=%d n=%d t=%d: enumeration %s, closed form %s",
                     m, n, t, enumerated, closed)
        raise ConsistencyError(f"enumeration gives {enumerated}, closed form gives {closed}")
    spectrum = gamma.spectrum()
    if spectrum != spectrum_law(params):
        raise ConsistencyError(f"spectrum of gamma_0 departs from the rank law at m={m} n={n} t={t}")

    bound = Fraction(2) ** (t - n + 1)
    chain = union_bound(n, t)
    holds = enumerated <= bound
    chain_holds = enumerated <= chain <= bound
    logger.info("randomization m=%d n=%d t=%d: epsilon %s, bound %s", m, n, t, enumerated, bound)
    if not holds:
        logger.warning("randomization bound fails at m=%d n=%d t=%d", m, n, t)
    return SecurityReport(params, enumerated, bound, chain, spectrum, holds, chain_holds, _regime(params))


@dataclass(frozen=True)
class EpsilonEstimate:
    value: float
    stderr: float
    samples: int
    label: str = "estimate"

    def as_dict(self):
        return {"estimate": self.value, "stderr": self.stderr, "samples": self.samples, "label": self.label}


def randomization_epsilon_estimate(params, samples, rng):
    # Monte Carlo over x-tuples; usable where exact enumeration is refused
    if samples < 1:
        raise GuardError(f"samples must be ≥ 1, got {samples}")
    if params.n > MAX_BITS:
        raise GuardError(f"n must be ≤ {MAX_BITS}, got {params.n}")
    m, n, t = params.m, params.n, params.t
    if t == 0:
        return EpsilonEstimate(0.0, 0.0, samples)
    draws = rng.integers(0, 1 << n, size=(samples, t))
    ranks = np.array([rank_of_words(row) for row in draws.tolist()])
    values = 2.0 * (1.0 - np.exp2(-((t - ranks) * m).astype(np.float64)))
    stderr = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return EpsilonEstimate(float(values.mean()), stderr, samples)


@dataclass(frozen=True)
class IndistinguishabilityReport:
    params: object
    per_t1: tuple
    epsilon: Fraction

    def as_dict(self):
        return {
            "params": self.params.as_dict(),
            "per_t1": [format_rational(e) for e in self.per_t1],
            "epsilon": format_rational(self.epsilon),
        }


def indistinguishability_epsilon(params, s_tuple):
    # Largest distance to I over all splits into t1 ciphers and t - t1 key copies
    if len(s_tuple) != params.t:
        raise DimensionError(f"expected {params.t} messages, got {len(s_tuple)}")
    per_t1 = tuple(distance_to_fully_mixed(adversary_state(params, t1, list(s_tuple[:t1])))
                   for t1 in range(params.t + 1))
    return IndistinguishabilityReport(params, per_t1, max(per_t1))


# SECURITY OF THE JOINT MESSAGE-CIPHER STATE

def normalize_distribution(dist, t, m):
    """
    Check a message-tuple distribution and put it over one denominator.

    Returns (tuples as a (k, t) int array, integer weights, denominator).
    """
    items = []
    for key, p in dist.items():
        p = Fraction(p)
        if p < 0:
            raise InvalidStateError(f"negative probability {p}")
        if not p:
            continue
        key = tuple(key)
        if len(key) != t:
            raise DimensionError(f"message tuple {key!r} has length {len(key)}, expected {t}")
        items.append((tuple(message_value(s, m) for s in key), p))
    total = sum((p for _, p in items), Fraction(0))
    if total != 1:
        raise InvalidStateError(f"message distribution sums to {total}")
    denominator = math.lcm(*(p.denominator for _, p in items))
    tuples = np.array([k for k, _ in items], dtype=np.int64).reshape(len(items), t)
    weights = [int(p * denominator) for _, p in items]
    return tuples, weights, denominator


def joint_product_distance(states, weights, denominator):
    """
    sum_s P(s) ||gamma_s - sum_r P(r) gamma_r||, the trace distance of the
    block-diagonal joint state from the product of its marginals. Exact.

    Returns (distance, average, exponent) with the cipher marginal held as
    integers over denominator * 2^exponent.
    """
    bits = states[0].num_bits
    if any(s.num_bits != bits for s in states):
        raise DimensionError("states must share one register size")
    if bits > 24:
        raise GuardError(f"joint distance is limited to 24 cipher bits, got {bits}")
    exponent = max(s.exponent for s in states)
    if exponent + denominator.bit_length() > MAX_DENSE_EXPONENT:
        raise GuardError("message distribution denominators are too large for exact arithmetic")

    # average[i] = denominator * 2^exponent * rho^C[i]
    average = np.zeros(1 << bits, dtype=np.int64)
    for state, w in zip(states, weights):
        np.add.at(average, state.indices, (state.numerators << (exponent - state.exponent)) * w)
    total_average = int(average.sum())

    total = 0
    for state, w in zip(states, weights):
        scaled = (state.numerators << (exponent - state.exponent)) * denominator
        local = average[state.indices]
        # |g - r| on the support of gamma_s plus r everywhere else
        contribution = int((np.abs(scaled - local) - local).sum()) + total_average
        total += w * contribution
    return Fraction(total, denominator * denominator * (1 << exponent)), average, exponent


def _coset_collision(tuples, weights, relation_mask):
    # sum over cosets of the relation subspace of (mass of the coset)^2, times D^2
    t = tuples.shape[1]
    parts = [tuples[:, i] for i in range(t)]
    relations = [c for c in range(1, 1 << t) if (relation_mask >> c) & 1]
    if not relations:
        return sum(weights) ** 2
    labels = np.stack([subset_sum(parts, c) for c in relations], axis=1)
    _, inverse = np.unique(labels, axis=0, return_inverse=True)
    mass = [0] * (int(inverse.max()) + 1)
    for label, w in zip(inverse.ravel().tolist(), weights):
        mass[label] += w
    return sum(x * x for x in mass)


def secure_epsilon(params, message_dist):
    """
    Exact ||rho^{S^t C^t} - rho^{S^t} ⊗ rho^{C^t}|| for a distribution over
    message tuples.

    With uniform keys the cipher restricted to an x-tuple is uniform on a
    coset of that tuple's image subspace V_x, which gives
    2 (1 - E_x sum_cosets P(s + V_x)^2). Other key distributions go through
    the dense block decomposition.
    """
    params.check_guards()
    m, n, t = params.m, params.n, params.t
    tuples, weights, denominator = normalize_distribution(message_dist, t, m)
    if t == 0:
        return Fraction(0)
    if not params.uniform_keys:
        return secure_epsilon_direct(params, message_dist)
    collision = sum(count * _coset_collision(tuples, weights, mask)
                    for mask, count in relation_groups(params).items())
    return 2 * (1 - Fraction(collision, (1 << (t * n)) * denominator * denominator))


def secure_epsilon_direct(params, message_dist):
    # Same figure from the block decomposition over gamma_s = flip(gamma_0, s)
    m, t = params.m, params.t
    tuples, weights, denominator = normalize_distribution(message_dist, t, m)
    if t == 0:
        return Fraction(0)
    scheme = MatrixScheme(params)
    states = [scheme.averaged(row) for row in tuples.tolist()]
    distance, _, _ = joint_product_distance(states, weights, denominator)
    return distance


@dataclass(frozen=True)
class Lemma1Report:
    params: object
    epsilon_randomization: Fraction
    epsilon_secure: Fraction
    worst_distribution: str
    two_point_max: Fraction
    secure_within_twice: bool
    randomization_within_twice: bool

    @property
    def holds(self):
        return self.secure_within_twice and self.randomization_within_twice

    def as_dict(self):
        return {
            "params": self.params.as_dict(),
            "epsilon_randomization": format_rational(self.epsilon_randomization),
            "epsilon_secure": format_rational(self.epsilon_secure),
            "worst_distribution": self.worst_distribution,
            "two_point_max": format_rational(self.two_point_max),
            "secure_within_twice": self.secure_within_twice,
            "randomization_within_twice": self.randomization_within_twice,
            "holds": self.holds,
        }


def uniform_distribution(m, t):
    space = 1 << (t * m)
    if t == 0:
        return {(): 1}
    rows = np.stack(register_parts(np.arange(space, dtype=np.int64), m, t), axis=1).tolist()
    return {tuple(row): Fraction(1, space) for row in rows}


def two_point_profile(params):
    """
    Secure epsilon of every two-point distribution {0, r} with weight 1/2
    each, as 1 - hits[r] / 2^(tn): hits[r] counts the x-tuples whose image
    subspace contains r.
    """
    m, n, t = params.m, params.n, params.t
    if t * m > MAX_PROFILE_BITS:
        raise GuardError(f"two-point profile needs tm ≤ {MAX_PROFILE_BITS}, got tm = {t * m}")
    space = 1 << (t * m)
    parts = register_parts(np.arange(space, dtype=np.int64), m, t)
    hits = np.zeros(space, dtype=np.int64)
    for mask, count in relation_groups(params).items():
        inside = np.ones(space, dtype=bool)
        for c in range(1, 1 << t):
            if (mask >> c) & 1:
                inside &= subset_sum(parts, c) == 0
        hits += count * inside
    return hits


def lemma1_crosscheck(params):
    """
    Compare the randomization epsilon with the secure epsilon maximised
    over a point mass, the uniform distribution (when tm ≤ 16) and every
    two-point distribution {0, r}.
    """
    params.check_guards()
    m, n, t = params.m, params.n, params.t
    eps_r = randomization_epsilon_exact(params).epsilon_exact
    eps_s, worst = Fraction(0), "point"
    two_point = Fraction(0)
    if t:
        if t * m <= 16:
            uniform = secure_epsilon(params, uniform_distribution(m, t))
            if uniform > eps_s:
                eps_s, worst = uniform, "uniform"
        hits = two_point_profile(params)[1:]
        r = int(np.argmin(hits)) + 1
        two_point = 1 - Fraction(int(hits[r - 1]), 1 << (t * n))
        if two_point > eps_s:
            eps_s, worst = two_point, f"two-point {r:0{t * m}b}"
    report = Lemma1Report(params, eps_r, eps_s, worst, two_point, eps_s <= 2 * eps_r, eps_r <= 2 * eps_s)
    if not report.holds:
        logger.warning("factor-2 sandwich fails at %s: eps_r %s, eps_s %s", params.as_dict(), eps_r, eps_s)
    return report


# KEY-SIZE LOWER BOUND

def theorem1_rhs(h_st, h_k, t, message_count):
    # (H(S^t) - H(K) - 2) / (4 t log|S|); no constraint with a single message
    if message_count < 2:
        return -math.inf
    return (h_st - h_k - 2) / (4 * t * math.log2(message_count))


@dataclass(frozen=True)
class BoundReport:
    lhs_exact: Fraction
    lhs: float
    rhs: float
    h_st: float
    h_k: float
    holevo_bits: float
    satisfied: bool
    holevo_holds: bool

    def as_dict(self):
        return {
            "lhs_exact": format_rational(self.lhs_exact),
            "lhs": self.lhs,
            "rhs": self.rhs if math.isfinite(self.rhs) else None,
            "h_st": self.h_st,
            "h_k": self.h_k,
            "holevo_bits": self.holevo_bits,
            "satisfied": self.satisfied,
            "holevo_holds": self.holevo_holds,
        }


def theorem1_check(scheme, message_dist):
    """
    Check the key-size lower bound on a classical scheme for one message
    distribution. ``scheme`` is a MatrixScheme or ToyScheme.
    """
    if not scheme.is_invertible():
        raise InvalidStateError("the key-size bound applies to invertible schemes only")
    lengths = {len(tuple(k)) for k in message_dist}
    if len(lengths) != 1:
        raise DimensionError("message tuples must share one length")
    t = lengths.pop()
    if t < 1:
        raise DimensionError("need at least one message per tuple")
    items = [(tuple(int(s) for s in k), Fraction(p)) for k, p in message_dist.items() if Fraction(p)]
    for key, _ in items:
        if any(not 0 <= s < scheme.message_count for s in key):
            raise DimensionError(f"message tuple {key} outside the message set")
    total = sum((p for _, p in items), Fraction(0))
    if total != 1:
        raise InvalidStateError(f"message distribution sums to {total}")
    denominator = math.lcm(*(p.denominator for _, p in items))
    weights = [int(p * denominator) for _, p in items]

    states = [scheme.averaged(key) for key, _ in items]
    lhs, average, exponent = joint_product_distance(states, weights, denominator)
    h_st = entropy([p for _, p in items]).shannon_bits
    h_k = scheme.key_entropy()
    rhs = theorem1_rhs(h_st, h_k, t, scheme.message_count)

    # mutual information of the (classical) joint state
    average_probs = average[average > 0].astype(np.float64) / float(denominator << exponent)
    h_c = entropy(average_probs / average_probs.sum()).shannon_bits
    conditional = sum(float(p) * entropy(state).shannon_bits for (_, p), state in zip(items, states))
    holevo = h_c - conditional

    report = BoundReport(
        lhs_exact=lhs,
        lhs=float(lhs),
        rhs=rhs,
        h_st=h_st,
        h_k=h_k,
        holevo_bits=holevo,
        satisfied=float(lhs) >= rhs - BOUND_TOL,
        holevo_holds=holevo >= h_st - h_k - BOUND_TOL,
    )
    if not report.satisfied:
        logger.warning("key-size bound fails: lhs %.17g < rhs %.17g", report.lhs, rhs)
    return report


@dataclass(frozen=True)
class AlickiFannesReport:
    delta: float
    lhs: float
    rhs: float
    holds: bool


def _conditional_entropy(state, a_bits):
    # S(A|B) = S(AB) - S(B)
    if isinstance(state, BlockState):
        weights = np.array(list(state.classical_weights().values()))
        return entropy(state).shannon_bits - entropy(weights / weights.sum()).shannon_bits
    b_bits = state.num_bits - a_bits
    return entropy(state).shannon_bits - entropy(state.marginal(b_bits, leading=False)).shannon_bits


def alicki_fannes_gap(rho, sigma, a_bits=None):
    """
    Both sides of |S(A|B)_rho - S(A|B)_sigma| ≤ 4 delta log dA + 2 h(delta).

    Diagonal states carry A in the leading ``a_bits`` bits; block states
    carry A in the blocks and B in the classical register. delta is the
    trace norm of rho - sigma and must not exceed 1.
    """
    if isinstance(rho, BlockState) and isinstance(sigma, BlockState):
        delta = block_distance(rho, sigma)
        log_da = math.log2(rho.dim)
    elif isinstance(rho, DiagonalState) and isinstance(sigma, DiagonalState):
        if a_bits is None or not 0 <= a_bits <= rho.num_bits:
            raise DimensionError("diagonal states need a_bits within the register")
        delta = float(l1_distance(rho, sigma))
        log_da = float(a_bits)
    else:
        raise DimensionError("compare two diagonal states or two block states")
    if delta > 1 + BOUND_TOL:
        raise InvalidStateError(f"trace distance {delta:.17g} exceeds 1")
    delta = min(delta, 1.0)
    lhs = abs(_conditional_entropy(rho, a_bits) - _conditional_entropy(sigma, a_bits))
    rhs = 4 * delta * log_da + 2 * binary_entropy(delta)
    if lhs > rhs + ALICKI_FANNES_TOL:
        logger.error("continuity bound violated: %.17g > %.17g", lhs, rhs)
        raise ConsistencyError(f"conditional entropy gap {lhs:.17g} exceeds {rhs:.17g}")
    return AlickiFannesReport(delta, lhs, rhs, True)


@dataclass(frozen=True)
class MinEntropyFloor:
    bits: float
    raw_bits: float
    vacuous: bool

    def as_dict(self):
        return {"bits": self.bits, "raw_bits": self.raw_bits, "vacuous": self.vacuous}


def corollary1_min_entropy(t, d, eps):
    # (1 - 8 eps) t log d - 2, clamped at 0
    if eps < 0:
        raise InvalidStateError(f"epsilon must be ≥ 0, got {eps}")
    if t < 1 or d < 1:
        raise DimensionError(f"need t ≥ 1 and d ≥ 1, got t={t}, d={d}")
    raw = (1 - 8 * float(eps)) * t * math.log2(d) - 2
    return MinEntropyFloor(max(raw, 0.0), raw, raw <= 0)
