"""
qsr/management/commands/encrypt.py - Classical Message Encryption

Measures one copy of the encryption key of A and XORs the message into it,
writing the cipher line "y_hex x_hex m n".

Usage:
    python manage.py encrypt --key k.txt --message 11 --seed 7
"""

from django.core.management.base import CommandError

from qsr.formats import format_cipher, parse_matrix
from qsr.gf2 import BitVector
from qsr.management.base import QSRCommand
from qsr.scheme import encrypt_instance, sample_key_instance


class Command(QSRCommand):
    help = "Encrypt a classical message with one copy of the encryption key"
    formats = ("text",)

    def add_command_arguments(self, parser):
        parser.add_argument("--key", required=True, help="key file")
        parser.add_argument("--message", required=True, help="message as a bit string of length m")

    def handle(self, *args, **options):
        key = parse_matrix(self.read_text(options["key"]))
        message = BitVector.from_string(options["message"])
        if message.length != key.rows:
            raise CommandError(f"message has {message.length} bits, the key encrypts m = {key.rows}")
        cipher = encrypt_instance(sample_key_instance(key, self.rng(options)), message)
        self.write(format_cipher(cipher), options)
