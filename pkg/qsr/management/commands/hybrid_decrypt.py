"""
qsr/management/commands/hybrid_decrypt.py - Quantum Message Decryption

Decodes the Pauli key from the classical line and removes the pad from
the quantum part.

Usage:
    python manage.py hybrid_decrypt --key k.txt --cipher h.txt
"""

from qsr.formats import format_density, parse_hybrid, parse_matrix
from qsr.hybrid import hybrid_decrypt
from qsr.management.base import QSRCommand


class Command(QSRCommand):
    help = "Decrypt a hybrid cipher back to the quantum message"
    formats = ("text",)

    def add_command_arguments(self, parser):
        parser.add_argument("--key", required=True, help="key file")
        parser.add_argument("--cipher", required=True, help="hybrid cipher file")

    def handle(self, *args, **options):
        key = parse_matrix(self.read_text(options["key"]))
        cipher = parse_hybrid(self.read_text(options["cipher"]))
        self.write(format_density(hybrid_decrypt(key, cipher)), options)
