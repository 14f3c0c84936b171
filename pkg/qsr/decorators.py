"""Custom decorators for guarded exact computations."""

from functools import wraps


def enumeration_guard(func):
    # Refuse exact enumeration when the scheme parameters exceed the limits
    @wraps(func)
    def wrapper(params, *args, **kwargs):
        params.check_guards()
        return func(params, *args, **kwargs)

    return wrapper
