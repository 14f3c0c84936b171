"""



qsrlab - Quantum State Randomization Lab

Project Structure:
    qsrlab/
    ├── manage.py
    ├── requirements.txt         Python dependencies
    │
    ├── qsr/                     Main application
    │   ├── gf2.py               Bit vectors, GF(2) matrices, rank distribution
    │   ├── qstate.py            Diagonal, block and dense quantum states, distances, entropy
    │   ├── scheme.py            The matrix scheme: keys, ciphers, averaged cipher states
    │   ├── pauli_otp.py         Pauli one-time pad, full and subsampled
    │   ├── hybrid.py            Quantum-message encryption and key-size accounting
    │   ├── analysis.py          Security figures and bound checks
    │   ├── verification.py      Acceptance suite behind "verify"
    │   ├── formats.py           Key, cipher, state and report formats
    │   ├── forms.py             Parameter, grid and distribution validation
    │   ├── models.py            Certificate ledger
    │   ├── checks.py            System checks on the QSRLAB settings
    │   └── management/commands/ keygen, encrypt, decrypt, hybrid_encrypt,
    │                            hybrid_decrypt, analyze, sweep, verify, certificates
    │
    └── qsrlab/                  Project configuration
        └── settings.py          Django settings, logging and QSRLAB limits



"""

import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'qsrlab.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
