"""
qsr/management/commands/hybrid_encrypt.py - Quantum Message Encryption

Pads a q-qubit state with a random Pauli key s and encrypts s under the
matrix scheme (the key must have m = 2q rows). Writes the cipher line
followed by the padded state. The Pauli key may be fixed from a file
("a_hex b_hex q") or written out for later inspection.

Usage:
    python manage.py hybrid_encrypt --key k.txt --state sigma.txt --seed 3
    python manage.py hybrid_encrypt --key k.txt --basis 1
    python manage.py hybrid_encrypt --key k.txt --random --pad-size 2
    python manage.py hybrid_encrypt --key k.txt --basis 0 --pad-key s.txt
    python manage.py hybrid_encrypt --key k.txt --random --pad-key-out s.txt
"""

from django.core.management.base import CommandError

from qsr.formats import format_hybrid, format_pauli_key, parse_density, parse_matrix, parse_pauli_key
from qsr.hybrid import hybrid_encrypt, message_qubits
from qsr.management.base import QSRCommand
from qsr.pauli_otp import PauliKey, SubsampledScheme
from qsr.qstate import DensityOperator, random_pure_state
from qsr.scheme import decrypt


class Command(QSRCommand):
    help = "Encrypt a quantum message: Pauli pad plus matrix-scheme cipher of the pad key"
    formats = ("text",)

    def add_command_arguments(self, parser):
        parser.add_argument("--key", required=True, help="key file with m = 2q rows")
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--state", help="density operator file")
        source.add_argument("--basis", type=int, help="encrypt the basis state with this index")
        source.add_argument("--random", action="store_true", help="encrypt a random pure state")
        parser.add_argument("--pad-size", type=int, default=None,
                            help="draw the pad key from K random Paulis instead of all 4^q")
        parser.add_argument("--pad-key", help="Pauli key file to use instead of a random pad key")
        parser.add_argument("--pad-key-out", help="write the Pauli key that was used to this file")

    def handle(self, *args, **options):
        key = parse_matrix(self.read_text(options["key"]))
        if key.rows % 2:
            raise CommandError(f"hybrid encryption needs an even m = 2q, the key has m = {key.rows}")
        q = key.rows // 2
        rng = self.rng(options)

        if options["state"]:
            sigma = parse_density(self.read_text(options["state"]))
        elif options["random"]:
            sigma = random_pure_state(1 << q, rng)
        else:
            if not 0 <= options["basis"] < (1 << q):
                raise CommandError(f"basis index must lie in 0..{(1 << q) - 1}")
            sigma = DensityOperator.basis(options["basis"], 1 << q)
        message_qubits(key.rows, sigma.dim)

        pad = pad_key = None
        if options["pad_key"]:
            if options["pad_size"] is not None:
                raise CommandError("give --pad-key or --pad-size, not both")
            pad_key = parse_pauli_key(self.read_text(options["pad_key"]))
        elif options["pad_size"] is not None:
            pad = SubsampledScheme.sample(q, options["pad_size"], rng)
        cipher = hybrid_encrypt(key, sigma, rng, pad, pad_key)
        self.write(format_hybrid(cipher), options)
        if options["pad_key_out"]:
            used = PauliKey.from_message(decrypt(key, cipher.classical_part), q)
            self.write_file(options["pad_key_out"], format_pauli_key(used))
