"""
qsr/__init__.py - Quantum State Randomization App

The qsr app holds the whole laboratory:
    - gf2.py: bit-packed linear algebra over GF(2) and the rank distribution
    - qstate.py: diagonal, dense and block states; trace norms; entropies
    - scheme.py: the matrix scheme (keys, ciphers, averaged states)
    - pauli_otp.py: the Pauli one-time pad and subsampled pads
    - hybrid.py: quantum messages through the matrix scheme; key-size accounting
    - analysis.py: security figures and bound checks
    - formats.py: key, cipher, state and report formats
    - forms.py: validation of command parameters
    - models.py: the certificate ledger
    - verification.py: the acceptance suite run by `manage.py verify`
    - management/commands/: the command-line front end
"""
