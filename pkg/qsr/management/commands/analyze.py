"""
qsr/management/commands/analyze.py - Security Analysis Reports

Runs one analysis and prints its report. Exits with status 2 when the
checked bound fails.

Usage:
    python manage.py analyze randomization --m 1 --n 2 --t 2 --format json
    python manage.py analyze secure --m 1 --n 2 --t 2 --dist two-point:01,10
    python manage.py analyze secure --m 1 --n 2 --t 2 --dist-file dist.txt
    python manage.py analyze randomization --m 1 --n 2 --t 2 --dump-state gamma.txt
    python manage.py analyze theorem1 --m 4 --n 1 --t 3
    python manage.py analyze keysize --t 2 --d 4 --eps1 0.125 --eps2 0.0625
    python manage.py analyze hybrid --m 2 --n 3 --t 2 --t1 1 --pad-size 2

Kinds:
    randomization        exact epsilon of t ciphers and its bound
    estimate             Monte Carlo epsilon beyond the enumeration guards
    indistinguishability epsilon with unused key copies, for every split t1
    secure               joint message-cipher distance for --dist
    theorem1             key-size lower bound for --dist
    corollary1           minimum key entropy implied by epsilon
    lemma1               factor-2 sandwich of the secure and randomization epsilons
    keysize              key entropy of the hybrid scheme
    pauli                Pauli pad epsilon (full or subsampled)
    hybrid               composition bound for quantum messages

A --dist-file holds a distribution over the concatenated message tuple as
"bitstring p/q" lines; --dump-state writes the averaged ciphers of the
all-zero tuple in the same format.
"""

import math
from fractions import Fraction

from django.core.management.base import CommandError

from qsr import analysis, hybrid
from qsr.formats import format_diagonal, parse_diagonal
from qsr.forms import KeysizeForm, form_errors, parse_distribution
from qsr.gf2 import BitVector
from qsr.management.base import QSRCommand
from qsr.models import Certificate
from qsr.pauli_otp import SubsampledScheme, epsilon_estimate
from qsr.qstate import format_rational, random_pure_state
from qsr.scheme import MatrixScheme, averaged_cipher

KINDS = (
    "randomization",
    "estimate",
    "indistinguishability",
    "secure",
    "theorem1",
    "corollary1",
    "lemma1",
    "keysize",
    "pauli",
    "hybrid",
)

# Perfect-pad epsilon slack
PAULI_TOL = 1e-11


class Command(QSRCommand):
    help = "Run one security analysis and report whether its bound holds"

    def add_command_arguments(self, parser):
        parser.add_argument("kind", choices=KINDS)
        parser.add_argument("--m", type=int)
        parser.add_argument("--n", type=int)
        parser.add_argument("--t", type=int)
        parser.add_argument("--delta", type=float)
        parser.add_argument("--dist", default="uniform",
                            help="uniform, point, two-point:R or 's1,s2=p;...'")
        parser.add_argument("--dist-file", help="message distribution file, overrides --dist")
        parser.add_argument("--dump-state", help="write the averaged cipher state here (randomization)")
        parser.add_argument("--messages", help="comma-separated message tuple (indistinguishability)")
        parser.add_argument("--t1", type=int, help="number of hybrid ciphers (default t)")
        parser.add_argument("--pad-size", type=int, help="subsampled Pauli pad size K")
        parser.add_argument("--eps2-trials", type=int, default=200)
        parser.add_argument("--samples", type=int, default=10000)
        parser.add_argument("--q", type=int, help="qubits (pauli)")
        parser.add_argument("--trials", type=int, default=100, help="random states tried (pauli)")
        parser.add_argument("--d", type=int, help="message dimension")
        parser.add_argument("--eps", type=str, help="epsilon for corollary1, e.g. 1/8")
        parser.add_argument("--eps1", type=float)
        parser.add_argument("--eps2", type=float)
        parser.add_argument("--delta1", type=float)
        parser.add_argument("--delta2", type=float)
        parser.add_argument("--record", action="store_true", help="store the outcome in the ledger")

    def handle(self, *args, **options):
        kind = options["kind"]
        outcome = getattr(self, f"analyze_{kind}")(options)
        payload, holds = outcome["payload"], outcome["holds"]
        self.write(self.render(kind, payload, options), options)
        if options["record"]:
            Certificate.record(
                command="analyze",
                kind=kind,
                payload=payload,
                holds=holds,
                params=outcome.get("params", {}),
                epsilon=outcome.get("epsilon", ""),
                bound=outcome.get("bound", ""),
            )
        self.certify(holds, f"{kind}: bound does not hold")

    # helpers

    def _messages(self, options, params):
        if not options["messages"]:
            return [0] * params.t
        values = [BitVector.from_string(s) for s in options["messages"].split(",")]
        if len(values) != params.t or any(v.length != params.m for v in values):
            raise CommandError(f"--messages needs {params.t} strings of {params.m} bits")
        return values

    def _distribution(self, options, params):
        if options["dist_file"]:
            return self._distribution_file(options["dist_file"], params)
        try:
            return parse_distribution(options["dist"], params.m, params.t)
        except Exception as exc:
            messages = getattr(exc, "messages", [str(exc)])
            raise CommandError("; ".join(messages)) from exc

    def _distribution_file(self, path, params):
        state = parse_diagonal(self.read_text(path))
        m, t = params.m, params.t
        if state.num_bits != m * t:
            raise CommandError(f"{path}: expected strings of tm = {m * t} bits, got {state.num_bits}")
        return {tuple(int(bits[j * m:(j + 1) * m], 2) for j in range(t)): weight
                for bits, weight in state.weights.items()}

    def _distribution_label(self, options):
        return options["dist_file"] or options["dist"]

    def _pad(self, options, q, rng):
        if options["pad_size"] is None:
            return SubsampledScheme.full(q)
        return SubsampledScheme.sample(q, options["pad_size"], rng)

    # kinds

    def analyze_randomization(self, options):
        params = self.scheme_params(options)
        report = analysis.randomization_epsilon_exact(params)
        if options["dump_state"]:
            self.write_file(options["dump_state"], format_diagonal(averaged_cipher(params, [0] * params.t)))
        return {
            "payload": report.as_dict(),
            "holds": report.holds and report.chain_holds,
            "params": params.as_dict(),
            "epsilon": format_rational(report.epsilon_exact),
            "bound": format_rational(report.bound),
        }

    def analyze_estimate(self, options):
        params = self.scheme_params(options, guarded=False)
        estimate = analysis.randomization_epsilon_estimate(params, options["samples"], self.rng(options))
        bound = Fraction(2) ** (params.t - params.n + 1)
        payload = {"params": params.as_dict(), **estimate.as_dict(), "bound": format_rational(bound)}
        return {"payload": payload, "holds": True, "params": params.as_dict(), "bound": format_rational(bound)}

    def analyze_indistinguishability(self, options):
        params = self.scheme_params(options)
        report = analysis.indistinguishability_epsilon(params, self._messages(options, params))
        eps_r = analysis.randomization_epsilon_exact(params).epsilon_exact
        bound = Fraction(2) ** (params.t - params.n + 1)
        payload = {
            **report.as_dict(),
            "epsilon_randomization": format_rational(eps_r),
            "bound": format_rational(bound),
        }
        holds = report.epsilon <= bound and all(e == eps_r for e in report.per_t1)
        return {"payload": payload, "holds": holds, "params": params.as_dict(),
                "epsilon": format_rational(report.epsilon), "bound": format_rational(bound)}

    def analyze_secure(self, options):
        params = self.scheme_params(options)
        eps_s = analysis.secure_epsilon(params, self._distribution(options, params))
        eps_r = analysis.randomization_epsilon_exact(params).epsilon_exact
        payload = {
            "params": params.as_dict(),
            "distribution": self._distribution_label(options),
            "epsilon_secure": format_rational(eps_s),
            "epsilon_randomization": format_rational(eps_r),
            "bound": format_rational(2 * eps_r),
        }
        return {"payload": payload, "holds": eps_s <= 2 * eps_r, "params": params.as_dict(),
                "epsilon": format_rational(eps_s), "bound": format_rational(2 * eps_r)}

    def analyze_theorem1(self, options):
        params = self.scheme_params(options)
        if params.t < 1:
            raise CommandError("theorem1 needs t ≥ 1")
        report = analysis.theorem1_check(MatrixScheme(params), self._distribution(options, params))
        payload = {"params": params.as_dict(), "distribution": self._distribution_label(options), **report.as_dict()}
        return {"payload": payload, "holds": report.satisfied and report.holevo_holds,
                "params": params.as_dict(), "epsilon": format_rational(report.lhs_exact)}

    def analyze_corollary1(self, options):
        if options["eps"] is not None:
            if options["t"] is None or options["d"] is None:
                raise CommandError("--eps needs --t and --d")
            eps = Fraction(options["eps"])
            floor = analysis.corollary1_min_entropy(options["t"], options["d"], eps)
            payload = {"t": options["t"], "d": options["d"], "eps": format_rational(eps), **floor.as_dict()}
            return {"payload": payload, "holds": True}
        params = self.scheme_params(options)
        if params.t < 1:
            raise CommandError("corollary1 needs t ≥ 1")
        eps = analysis.randomization_epsilon_exact(params).epsilon_exact
        floor = analysis.corollary1_min_entropy(params.t, 1 << params.m, eps)
        key_bits = params.key_entropy()
        payload = {
            "params": params.as_dict(),
            "eps": format_rational(eps),
            **floor.as_dict(),
            "key_entropy_bits": key_bits,
        }
        return {"payload": payload, "holds": key_bits >= floor.bits, "params": params.as_dict(),
                "epsilon": format_rational(eps)}

    def analyze_lemma1(self, options):
        params = self.scheme_params(options)
        report = analysis.lemma1_crosscheck(params)
        return {"payload": report.as_dict(), "holds": report.holds, "params": params.as_dict(),
                "epsilon": format_rational(report.epsilon_secure),
                "bound": format_rational(2 * report.epsilon_randomization)}

    def analyze_keysize(self, options):
        form = KeysizeForm({name: options.get(name) for name in ("t", "d", "eps1", "eps2")})
        if not form.is_valid():
            raise CommandError(form_errors(form))
        data = form.cleaned_data
        budget = hybrid.keysize_accounting(data["t"], data["d"], data["eps1"], data["eps2"])
        payload = budget.as_dict()
        if options["delta1"] is not None and options["delta2"] is not None:
            point = hybrid.asymptotic_ratio(data["t"], math.log2(data["d"]), options["delta1"], options["delta2"])
            payload["asymptotic"] = point.as_dict()
        return {"payload": payload, "holds": budget.lower_bound_bits <= budget.entropy_bits}

    def analyze_pauli(self, options):
        q = options["q"]
        if q is None:
            raise CommandError("pauli needs --q")
        rng = self.rng(options)
        pad = self._pad(options, q, rng)
        estimate = epsilon_estimate(pad, options["trials"], rng)
        full = len(pad.keys) == 4 ** q
        payload = {
            "q": q,
            "pad_size": len(pad.keys),
            "key_entropy_bits": pad.key_entropy,
            "epsilon_estimate": estimate,
            "label": "estimate",
        }
        return {"payload": payload, "holds": estimate <= PAULI_TOL if full else True}

    def analyze_hybrid(self, options):
        params = self.scheme_params(options)
        if params.m % 2:
            raise CommandError(f"hybrid needs an even m = 2q, got m = {params.m}")
        q = params.m // 2
        t1 = params.t if options["t1"] is None else options["t1"]
        rng = self.rng(options)
        pad = self._pad(options, q, rng)
        sigmas = [random_pure_state(1 << q, rng) for _ in range(t1)]
        eps1 = analysis.randomization_epsilon_exact(params).epsilon_exact
        eps2 = 0.0 if len(pad.keys) == 4 ** q else epsilon_estimate(pad, options["eps2_trials"], rng)
        report = hybrid.hybrid_report(params, sigmas, t1, eps1, pad, eps2)
        return {"payload": report.as_dict(), "holds": report.holds, "params": params.as_dict(),
                "epsilon": repr(report.distance), "bound": repr(report.bound)}
