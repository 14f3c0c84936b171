"""
The acceptance suite run by ``manage.py verify``.

Each check is a function taking (grid, rng) and returning (holds, detail);
``run_checks`` collects CheckResult rows and logs each timing to the
``qsr`` logger, keeping stdout reproducible. A check that raises is
reported as failed rather than aborting the run.
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import (
    distance_to_fully_mixed,
    lemma1_crosscheck,
    randomization_epsilon_exact,
    theorem1_check,
    uniform_distribution,
)
from .exceptions import ConsistencyError
from .gf2 import BitMatrix, rank_distribution, rank_distribution_bruteforce
from .hybrid import (
    asymptotic_ratio,
    hybrid_decrypt,
    hybrid_encrypt,
    hybrid_randomization_distance,
    hybrid_report,
    keysize_accounting,
)
from .pauli_otp import SubsampledScheme, epsilon_estimate, randomize_full
from .qstate import (
    fully_mixed,
    mixture,
    random_density,
    random_pure_state,
    trace_distance,
)
from .scheme import (
    MatrixScheme,
    SchemeParams,
    adversary_state,
    averaged_cipher,
    biased_one_time_pad,
    cipher_state,
    encryption_key_state,
    flip_registers,
)

logger = logging.getLogger(__name__)

RANK_ORACLE_BITS = 16
PAULI_TOL = 1e-11
HYBRID_TOL = 1e-9
EQUALITY_TOL = 1e-11
THEOREM1_TOL = 1e-10
ASYMPTOTIC_GAP = 0.05

# Uniform-message key-size bound checks stay below this many (tuple, support) cells
THEOREM1_UNIFORM_CELLS = 1 << 22


@dataclass(frozen=True)
class CheckResult:
    name: str
    holds: bool
    detail: str

    def as_dict(self):
        return {"name": self.name, "holds": self.holds, "detail": self.detail}


def _first_failure(failures):
    return f"{len(failures)} failure(s), first: {failures[0]}" if failures else ""


# RANDOMIZATION

def check_spectrum_law(grid, rng):
    # randomization_epsilon_exact raises on any departure from the rank law
    for params in grid:
        randomization_epsilon_exact(params)
    return True, f"{len(grid)} grid points"


def check_randomization_bound(grid, rng):
    failures = []
    eps = randomization_epsilon_exact(SchemeParams(1, 2, 2)).epsilon_exact
    if eps != Fraction(21, 32):
        failures.append(f"m=1 n=2 t=2 gives {eps}, expected 21/32")
    for m in (1, 2, 3):
        params = SchemeParams.from_delta(m, 4, 0.5)
        eps = randomization_epsilon_exact(params).epsilon_exact
        if params.t != 2 or eps > Fraction(1, 2):
            failures.append(f"m={m} n=4 delta=1/2: t={params.t}, epsilon {eps}")
    for params in grid:
        report = randomization_epsilon_exact(params)
        if not (report.holds and report.chain_holds):
            failures.append(f"{params.as_dict()}: {report.epsilon_exact} vs {report.bound}")
    return not failures, _first_failure(failures) or f"21/32 reproduced; {len(grid)} grid points within bound"


def check_rank_oracle(grid, rng):
    failures = []
    cases = 0
    for n in range(1, RANK_ORACLE_BITS + 1):
        for t in range(RANK_ORACLE_BITS // n + 1):
            cases += 1
            recurrence = rank_distribution(n, t)
            if recurrence.probs != rank_distribution_bruteforce(n, t).probs:
                failures.append(f"n={n} t={t}: recurrence departs from enumeration")
            # t > n vectors can never be independent
            product = math.prod((1 - Fraction(1, 1 << (n - i)) if i < n else Fraction(0) for i in range(t)),
                                start=Fraction(1))
            if recurrence[t] != product:
                failures.append(f"n={n} t={t}: P(t) = {recurrence[t]}, product gives {product}")
    return not failures, _first_failure(failures) or f"{cases} (n, t) pairs with nt ≤ {RANK_ORACLE_BITS}"


def check_invertibility(grid, rng):
    failures = [f"m={m} n={n}" for m in (1, 2, 3) for n in (1, 2, 3)
                if not MatrixScheme(SchemeParams(m, n, 1)).is_invertible()]
    return not failures, _first_failure(failures) or "every key separates every message pair, m, n ≤ 3"


def check_key_copy_identity(grid, rng):
    failures = []
    for m, n in sorted({(p.m, p.n) for p in grid}):
        for index in range(1 << (m * n)):
            a = BitMatrix.from_index(index, m, n)
            if cipher_state(a, 0) != encryption_key_state(a):
                failures.append(f"key {index} at m={m} n={n}")
                break
    for params in grid:
        top = (1 << params.m) - 1
        for t1 in range(params.t + 1):
            messages = [top - i % 2 for i in range(t1)]
            padded = messages + [0] * (params.t - t1)
            if adversary_state(params, t1, messages) != averaged_cipher(params, padded):
                failures.append(f"{params.as_dict()} t1={t1}")
    return not failures, _first_failure(failures) or "unused key copies act as ciphers of 0"


def check_lemma1_sandwich(grid, rng):
    failures = []
    for params in grid:
        report = lemma1_crosscheck(params)
        if not report.holds:
            failures.append(f"{params.as_dict()}: eps_r {report.epsilon_randomization}, "
                            f"eps_s {report.epsilon_secure}")
    return not failures, _first_failure(failures) or f"{len(grid)} grid points"


# KEY-SIZE LOWER BOUND

def _support_bound(params):
    return params.t * params.n + min(params.t, params.n) * params.m


def check_keysize_bound(grid, rng):
    failures = []
    params = SchemeParams(4, 1, 3)
    headline = theorem1_check(MatrixScheme(params), uniform_distribution(4, 3))
    if headline.lhs < 1 / 8 - THEOREM1_TOL or abs(headline.rhs - 1 / 8) > 1e-12:
        failures.append(f"m=4 n=1 t=3: lhs {headline.lhs:.17g}, rhs {headline.rhs:.17g}")

    instances = 0
    for params in grid:
        if not params.t:
            continue
        scheme = MatrixScheme(params)
        top = tuple([(1 << params.m) - 1] * params.t)
        dists = {"two-point": {(0,) * params.t: Fraction(1, 2), top: Fraction(1, 2)}}
        if (1 << (params.t * params.m + _support_bound(params))) <= THEOREM1_UNIFORM_CELLS:
            dists["uniform"] = uniform_distribution(params.m, params.t)
        for label, dist in dists.items():
            instances += 1
            report = theorem1_check(scheme, dist)
            if not (report.satisfied and report.holevo_holds):
                failures.append(f"{params.as_dict()} {label}")

    key_probs = {0: Fraction(1, 2), 1: Fraction(1, 4), 2: Fraction(1, 8), 3: Fraction(1, 8)}
    toy = biased_one_time_pad(2, key_probs)
    for t in (1, 2, 3):
        instances += 1
        report = theorem1_check(toy, uniform_distribution(2, t))
        if not (report.satisfied and report.holevo_holds):
            failures.append(f"biased pad t={t}")
    for t in (1, 2):
        skewed = SchemeParams(2, 2, t, key_probs=((0, Fraction(1, 2)), (5, Fraction(1, 4)), (10, Fraction(1, 4))))
        instances += 1
        report = theorem1_check(MatrixScheme(skewed), uniform_distribution(2, t))
        if not (report.satisfied and report.holevo_holds):
            failures.append(f"skewed matrix keys t={t}")
    detail = f"lhs {headline.lhs:.17g} ≥ 1/8 at m=4 n=1 t=3; {instances} further instances"
    return not failures, _first_failure(failures) or detail


# QUANTUM MESSAGES

def check_pauli_pad(grid, rng):
    worst = 0.0
    for q in (1, 2):
        target = fully_mixed(dim=1 << q)
        for _ in range(100):
            rho = random_density(1 << q, rng)
            worst = max(worst, trace_distance(randomize_full(rho, q), target))
    return worst <= PAULI_TOL, f"largest distance {worst:.3g} over 200 states"


def _classical_reference(params, t1):
    # Distance of the classical registers with every inner key s averaged out
    gamma = averaged_cipher(params, [0] * params.t)
    shifted = [flip_registers(gamma, params, s_tuple)
               for s_tuple in itertools.product(range(1 << params.m), repeat=t1)]
    weight = Fraction(1, len(shifted))
    return distance_to_fully_mixed(mixture(shifted, [weight] * len(shifted)))


def check_hybrid_composition(grid, rng):
    failures = []
    q = 1
    dim = 1 << q
    full = SubsampledScheme.full(q)
    small = SubsampledScheme.sample(q, 2, rng)
    small_eps2 = epsilon_estimate(small, 200, rng)
    instances = 0
    for n in range(1, 5):
        for t in range(4):
            params = SchemeParams(2 * q, n, t)
            eps1 = randomization_epsilon_exact(params).epsilon_exact
            for t1 in range(t + 1):
                instances += 1
                sigmas = [random_pure_state(dim, rng) for _ in range(t1)]
                for pad, eps2 in ((full, 0.0), (small, small_eps2)):
                    report = hybrid_report(params, sigmas, t1, eps1, pad, eps2, tol=HYBRID_TOL)
                    if not report.holds:
                        failures.append(f"n={n} t={t} t1={t1} K={len(pad.keys)}: "
                                        f"{report.distance:.17g} > {report.bound:.17g}")
                mixed = hybrid_randomization_distance(params, [fully_mixed(dim=dim)] * t1, t1, full)
                reference = float(_classical_reference(params, t1))
                if abs(mixed - reference) > EQUALITY_TOL:
                    failures.append(f"n={n} t={t} t1={t1}: fully mixed {mixed:.17g} vs classical {reference:.17g}")

    for _ in range(20):
        a = BitMatrix.from_index(int(rng.integers(0, 1 << (2 * q * 3))), 2 * q, 3)
        sigma = random_density(dim, rng)
        recovered = hybrid_decrypt(a, hybrid_encrypt(a, sigma, rng))
        if np.abs(recovered.entries - sigma.entries).max() > EQUALITY_TOL:
            failures.append("hybrid decryption does not recover the message")
            break
    detail = f"{instances} instances, K=2 pad measured eps2 {small_eps2:.6g}"
    return not failures, _first_failure(failures) or detail


def check_keysize_accounting(grid, rng):
    failures = []
    budget = keysize_accounting(2, 4, 2 ** -3, 2 ** -4)
    if budget.entropy_bits != 60:
        failures.append(f"t=2 d=4 gives {budget.entropy_bits} bits, expected 60")
    for delta1, delta2 in ((0.25, 0.25), (0.5, 0.5), (1.0, 1.0), (0.5, 1.0)):
        point = asymptotic_ratio(1 << 12, 1 << 12, delta1, delta2)
        if point.relative_gap > ASYMPTOTIC_GAP:
            failures.append(f"delta=({delta1}, {delta2}): gap {point.relative_gap:.3g} at t = log d = 4096")
    for t in range(1, 17):
        for log_d in range(1, 11):
            for eps1 in (2 ** -1, 2 ** -3, 2 ** -6):
                for eps2 in (2 ** -1, 2 ** -4, 2 ** -8):
                    budget = keysize_accounting(t, 1 << log_d, eps1, eps2)
                    if budget.lower_bound_bits > budget.entropy_bits:
                        failures.append(f"t={t} d=2^{log_d}: floor above key entropy")
    finite = asymptotic_ratio(16, 10, 0.5, 0.5)
    detail = f"60 bits reproduced; t=16 d=2^10 ratio {finite.ratio:.6g} vs limit {finite.limit:.6g}"
    return not failures, _first_failure(failures) or detail


CHECKS = (
    ("spectrum_law", check_spectrum_law),
    ("randomization_bound", check_randomization_bound),
    ("rank_oracle", check_rank_oracle),
    ("invertibility", check_invertibility),
    ("key_copy_identity", check_key_copy_identity),
    ("lemma1_sandwich", check_lemma1_sandwich),
    ("keysize_bound", check_keysize_bound),
    ("pauli_pad", check_pauli_pad),
    ("hybrid_composition", check_hybrid_composition),
    ("keysize_accounting", check_keysize_accounting),
)


def run_checks(grid, rng, names=None):
    results = []
    for name, check in CHECKS:
        if names and name not in names:
            continue
        start = time.perf_counter()
        try:
            holds, detail = check(grid, rng)
        except ConsistencyError as exc:
            holds, detail = False, f"consistency failure: {exc}"
        except Exception as exc:
            logger.exception("check %s raised", name)
            holds, detail = False, f"unexpected {type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        logger.info("%s: %s in %.2fs", name, "holds" if holds else "FAILS", elapsed)
        if not holds:
            logger.warning("check %s failed: %s", name, detail)
        results.append(CheckResult(name, holds, detail))
    return results


def summarize(results):
    return {
        "checks": [r.as_dict() for r in results],
        "passed": sum(r.holds for r in results),
        "failed": sum(not r.holds for r in results),
        "holds": all(r.holds for r in results),
    }
