"""Exception hierarchy for the qsr app."""


class QSRError(Exception):
    pass


class DimensionError(QSRError, ValueError):
    # Size or length mismatch between operands
    pass


class GuardError(QSRError, ValueError):
    # An exact-enumeration limit is exceeded; the message names the limit
    pass


class InvalidStateError(QSRError, ValueError):
    # A state or distribution violates its invariants
    pass


class FormatError(QSRError, ValueError):
    # Malformed key, cipher or state text
    pass


class ConsistencyError(QSRError, AssertionError):
    # Two exact computation paths disagree
    pass
