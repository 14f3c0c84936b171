"""Text and JSON formats for keys, ciphers, states and reports."""

import json
import math
import re

import numpy as np

from .conf import qsr_setting
from .exceptions import DimensionError, FormatError, GuardError, InvalidStateError
from .gf2 import BitMatrix, BitVector
from .hybrid import HybridCipher
from .pauli_otp import PauliKey
from .qstate import DensityOperator, DiagonalState, format_rational
from .scheme import CipherInstance


def _lines(text):
    return [line.strip() for line in text.strip().splitlines() if line.strip()]


def _int(token, base=10):
    try:
        return int(token, base)
    except ValueError:
        raise FormatError(f"not a number: {token!r}") from None


def format_double(value):
    return "%.17g" % value


# KEY FILES

def format_matrix(a):
    return f"{a.rows} {a.cols}\n{a}\n"


def parse_matrix(text):
    lines = _lines(text)
    if not lines:
        raise FormatError("empty key file")
    header = lines[0].split()
    if len(header) != 2:
        raise FormatError(f"key header must be 'm n', got {lines[0]!r}")
    m, n = _int(header[0]), _int(header[1])
    rows = lines[1:]
    if len(rows) != m:
        raise FormatError(f"header declares {m} rows, file has {len(rows)}")
    if any(len(row) != n for row in rows):
        raise FormatError(f"every row must have {n} characters")
    try:
        return BitMatrix.from_rows(rows)
    except DimensionError as exc:
        raise FormatError(str(exc)) from exc


def format_pauli_key(key):
    return f"{key.a.value:x} {key.b.value:x} {key.q}\n"


def parse_pauli_key(text):
    parts = text.split()
    if len(parts) != 3:
        raise FormatError(f"Pauli key must be 'a_hex b_hex q', got {text.strip()!r}")
    q = _int(parts[2])
    try:
        return PauliKey.from_values(_int(parts[0], 16), _int(parts[1], 16), q)
    except (DimensionError, GuardError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


# CIPHERS

def format_cipher(cipher):
    return f"{cipher.y.value:x} {cipher.x.value:x} {cipher.y.length} {cipher.x.length}\n"


def parse_cipher(text):
    parts = text.split()
    if len(parts) != 4:
        raise FormatError(f"cipher must be 'y_hex x_hex m n', got {text.strip()!r}")
    m, n = _int(parts[2]), _int(parts[3])
    try:
        return CipherInstance(BitVector(m, _int(parts[0], 16)), BitVector(n, _int(parts[1], 16)))
    except (DimensionError, GuardError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


def format_hybrid(cipher):
    return format_cipher(cipher.classical_part) + format_density(cipher.quantum_part)


def parse_hybrid(text):
    lines = _lines(text)
    if len(lines) < 2:
        raise FormatError("hybrid cipher needs a classical line and a state")
    return HybridCipher(parse_cipher(lines[0]), parse_density("\n".join(lines[1:])))


# STATES

def format_diagonal(state):
    if not state.num_bits:
        raise FormatError("a state needs at least one bit to be written")
    return "".join(f"{key} {format_rational(weight)}\n" for key, weight in state.weights.items())


def parse_diagonal(text):
    weights = {}
    widths = set()
    for line in _lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'bitstring p/q', got {line!r}")
        bits, weight = parts
        if bits in weights:
            raise FormatError(f"basis string {bits} listed twice")
        widths.add(len(bits))
        weights[bits] = weight
    if len(widths) != 1:
        raise FormatError("basis strings must be non-empty and of one length")
    try:
        return DiagonalState.from_weights(widths.pop(), weights)
    except (InvalidStateError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from exc


def format_density(op):
    lines = [str(op.dim)]
    for value in op.entries.ravel():
        lines.append(f"{format_double(value.real)} {format_double(value.imag)}")
    return "\n".join(lines) + "\n"


def parse_density(text):
    lines = _lines(text)
    if not lines:
        raise FormatError("empty state file")
    dim = _int(lines[0])
    if dim < 1 or len(lines) - 1 != dim * dim:
        raise FormatError(f"dimension {dim} needs {dim * dim} entries, got {len(lines) - 1}")
    try:
        pairs = [tuple(float(x) for x in line.split()) for line in lines[1:]]
    except ValueError:
        raise FormatError("entries must be 're im' pairs") from None
    if any(len(pair) != 2 for pair in pairs):
        raise FormatError("entries must be 're im' pairs")
    entries = np.array([complex(re, im) for re, im in pairs]).reshape(dim, dim)
    try:
        return DensityOperator(entries)
    except (InvalidStateError, DimensionError) as exc:
        raise FormatError(str(exc)) from exc


# REPORTS

# json.dumps writes "\0<i>" as "\u0000<i>"
_HELD_DOUBLE = re.compile(r'"\\u0000(\d+)"')


def _hold_doubles(value, doubles):
    # Swap floats for placeholders so they can be written as %.17g
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value} in a JSON report")
        doubles.append(value)
        return f"\0{len(doubles) - 1}"
    if isinstance(value, dict):
        return {key: _hold_doubles(item, doubles) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_hold_doubles(item, doubles) for item in value]
    return value


def _json_double(value):
    text = format_double(value)
    return text if "." in text or "e" in text else text + ".0"


def report_json(kind, payload):
    # Stable shape: schema and kind first, then the report fields in order
    document = {"schema": qsr_setting("SCHEMA_VERSION"), "kind": kind}
    document.update(payload)
    doubles = []
    text = json.dumps(_hold_doubles(document, doubles), indent=2, allow_nan=False)
    return _HELD_DOUBLE.sub(lambda match: _json_double(doubles[int(match.group(1))]), text) + "\n"


def report_text(kind, payload):
    lines = [f"{kind}"]
    for key, value in payload.items():
        if isinstance(value, float):
            value = format_double(value)
        elif isinstance(value, (dict, list)):
            value = json.dumps(value)
        lines.append(f"  {key}: {value}")
    return "\n".join(lines) + "\n"
