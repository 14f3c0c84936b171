"""System checks for the QSRLAB settings."""

from django.conf import settings
from django.core.checks import Error, Warning, register
from django.forms import ValidationError

from .conf import DEFAULTS, qsr_setting
from .forms import parse_grid
from .gf2 import MAX_BITS

POSITIVE_INTS = (
    "MAX_MESSAGE_BITS",
    "MAX_SECURITY_BITS",
    "MAX_REGISTER_BITS",
    "MAX_KEY_BITS",
    "BRUTEFORCE_MAX_BITS",
    "MAX_PAULI_QUBITS",
    "SWEEP_WORKERS",
)

# Settings that may not exceed the GF(2) word size
WORD_LIMITED = ("MAX_MESSAGE_BITS", "MAX_SECURITY_BITS", "MAX_REGISTER_BITS", "MAX_KEY_BITS", "BRUTEFORCE_MAX_BITS")


@register()
def check_qsrlab_settings(app_configs, **kwargs):
    errors = []
    overrides = getattr(settings, "QSRLAB", {})
    for name in sorted(set(overrides) - set(DEFAULTS)):
        errors.append(Warning(f"unknown QSRLAB setting {name!r}", id="qsr.W001"))

    for name in POSITIVE_INTS:
        value = qsr_setting(name)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            errors.append(Error(f"QSRLAB[{name!r}] must be a positive integer, got {value!r}", id="qsr.E001"))
        elif name in WORD_LIMITED and value > MAX_BITS:
            errors.append(Error(
                f"QSRLAB[{name!r}] = {value} exceeds the {MAX_BITS}-bit word limit",
                hint=f"Lower it to {MAX_BITS} or less.",
                id="qsr.E002",
            ))

    qubits = qsr_setting("MAX_PAULI_QUBITS")
    if isinstance(qubits, int) and qubits > 3:
        errors.append(Error("QSRLAB['MAX_PAULI_QUBITS'] must be at most 3", id="qsr.E003"))

    seed = qsr_setting("DEFAULT_SEED")
    if not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        errors.append(Error(f"QSRLAB['DEFAULT_SEED'] must be a 64-bit unsigned integer, got {seed!r}",
                            id="qsr.E004"))

    try:
        parse_grid(qsr_setting("DEFAULT_GRID"))
    except ValidationError as exc:
        errors.append(Error(f"QSRLAB['DEFAULT_GRID'] does not parse: {'; '.join(exc.messages)}",
                            id="qsr.E005"))
    return errors
