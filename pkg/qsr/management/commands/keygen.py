"""
qsr/management/commands/keygen.py - Decryption Key Generation

Draws a uniformly random m x n matrix over GF(2) from the seeded generator
and writes it in the key file format ("m n" then m rows of bits).

Usage:
    python manage.py keygen --m 2 --n 3 --seed 7 --output k.txt
"""

from qsr.formats import format_matrix
from qsr.management.base import QSRCommand
from qsr.scheme import keygen


class Command(QSRCommand):
    help = "Generate a random decryption key"
    formats = ("text",)

    def add_command_arguments(self, parser):
        parser.add_argument("--m", type=int, required=True, help="message bits")
        parser.add_argument("--n", type=int, required=True, help="security parameter bits")

    def handle(self, *args, **options):
        params = self.scheme_params({**options, "t": 0})
        key = keygen(params.m, params.n, self.rng(options))
        self.write(format_matrix(key), options)
