"""Access to the QSRLAB settings dict with built-in defaults."""

from django.conf import settings

DEFAULTS = {
    "MAX_MESSAGE_BITS": 8,
    "MAX_SECURITY_BITS": 8,
    "MAX_REGISTER_BITS": 24,
    "MAX_KEY_BITS": 24,
    "BRUTEFORCE_MAX_BITS": 24,
    "MAX_PAULI_QUBITS": 3,
    "DEFAULT_SEED": 0,
    "SCHEMA_VERSION": "qsrlab/1",
    "DEFAULT_GRID": "m=1-3;n=1-4;t=0-3",
    "SWEEP_WORKERS": 4,
}


def qsr_setting(name):
    overrides = getattr(settings, "QSRLAB", {})
    if name in overrides:
        return overrides[name]
    return DEFAULTS[name]
