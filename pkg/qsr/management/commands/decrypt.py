"""
qsr/management/commands/decrypt.py - Classical Message Decryption

Recovers s = y ⊕ Ax from a cipher line and prints it as a bit string.

Usage:
    python manage.py decrypt --key k.txt --cipher c.txt
"""

from qsr.formats import parse_cipher, parse_matrix
from qsr.management.base import QSRCommand
from qsr.scheme import decrypt


class Command(QSRCommand):
    help = "Decrypt a classical cipher with the decryption key"
    formats = ("text",)

    def add_command_arguments(self, parser):
        parser.add_argument("--key", required=True, help="key file")
        parser.add_argument("--cipher", required=True, help="cipher file")

    def handle(self, *args, **options):
        key = parse_matrix(self.read_text(options["key"]))
        cipher = parse_cipher(self.read_text(options["cipher"]))
        self.write(f"{decrypt(key, cipher)}\n", options)
