"""Forms validating command parameters."""

import itertools
from fractions import Fraction

from django import forms

from .analysis import uniform_distribution
from .conf import qsr_setting
from .exceptions import DimensionError, GuardError, InvalidStateError
from .gf2 import BitVector
from .scheme import SchemeParams

GRID_NAMES = ("m", "n", "t", "delta")


def _guard_error(exc):
    return forms.ValidationError(str(exc), code="guard")


# GRIDS

def _grid_values(name, spec):
    values = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            if name == "delta":
                values.append(float(Fraction(item)))
            elif "-" in item:
                low, high = (int(x) for x in item.split("-", 1))
                values.extend(range(low, high + 1))
            else:
                values.append(int(item))
        except ValueError:
            raise forms.ValidationError(f"bad {name} value {item!r}", code="grid") from None
    return values


def parse_grid(text):
    """
    Parse "m=1-3;n=1-4;t=0-3" into SchemeParams, skipping points beyond the
    enumeration guards. "delta=1/2,1/4" may replace t; "default" is the
    configured grid and an empty text is the empty grid.
    """
    text = (text or "").strip()
    if text == "default":
        text = qsr_setting("DEFAULT_GRID")
    if not text:
        return []
    axes = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        name, sep, spec = part.partition("=")
        name = name.strip()
        if not sep or name not in GRID_NAMES:
            raise forms.ValidationError(f"grid entries look like name=values with name in {GRID_NAMES}",
                                        code="grid")
        if name in axes:
            raise forms.ValidationError(f"{name} given twice", code="grid")
        axes[name] = _grid_values(name, spec)
    if "t" in axes and "delta" in axes:
        raise forms.ValidationError("give t or delta, not both", code="grid")
    if not {"m", "n"} <= axes.keys() or not ({"t", "delta"} & axes.keys()):
        raise forms.ValidationError("a grid needs m, n and one of t or delta", code="grid")

    points = []
    third = "t" if "t" in axes else "delta"
    for m, n, value in itertools.product(axes["m"], axes["n"], axes[third]):
        try:
            params = SchemeParams(m, n, value) if third == "t" else SchemeParams.from_delta(m, n, value)
            params.check_guards()
        except GuardError:
            continue
        points.append(params)
    return points


class GridField(forms.CharField):
    def to_python(self, value):
        return parse_grid(super().to_python(value))


# MESSAGE DISTRIBUTIONS

def parse_distribution(text, m, t):
    """
    "uniform", "point" (all-zero tuple), "two-point:R" ({0, R} with 1/2
    each) or explicit "s1,s2=1/2;s1',s2'=1/2" with bit-string messages.
    """
    text = (text or "uniform").strip()
    zero = (0,) * t
    if text == "uniform":
        if t * m > 16:
            raise forms.ValidationError("the uniform distribution is limited to tm ≤ 16", code="dist")
        return uniform_distribution(m, t)
    if text == "point":
        return {zero: 1}
    try:
        if text.startswith("two-point:"):
            other = tuple(BitVector.from_string(s).value for s in text.split(":", 1)[1].split(","))
            if len(other) != t:
                raise DimensionError(f"expected {t} messages, got {len(other)}")
            return {zero: Fraction(1, 2), other: Fraction(1, 2)} if other != zero else {zero: 1}
        dist = {}
        for entry in text.split(";"):
            if not entry.strip():
                continue
            messages, _, weight = entry.partition("=")
            vectors = [BitVector.from_string(s) for s in messages.split(",")] if t else []
            if any(v.length != m for v in vectors) or len(vectors) != t:
                raise DimensionError(f"each tuple needs {t} messages of {m} bits")
            key = tuple(v.value for v in vectors)
            dist[key] = dist.get(key, Fraction(0)) + Fraction(weight.strip())
    except (DimensionError, ValueError, ZeroDivisionError) as exc:
        raise forms.ValidationError(f"bad distribution: {exc}", code="dist") from None
    if sum(dist.values(), Fraction(0)) != 1:
        raise forms.ValidationError("distribution weights must sum to 1", code="dist")
    return dist


# PARAMETER FORMS

class SchemeParamsForm(forms.Form):
    # m, n and either t or delta; guards apply unless the caller opts out
    m = forms.IntegerField(min_value=1)
    n = forms.IntegerField(min_value=1)
    t = forms.IntegerField(min_value=0, required=False)
    delta = forms.FloatField(required=False)

    def __init__(self, *args, guarded=True, **kwargs):
        super().__init__(*args, **kwargs)
        self.guarded = guarded
        self.params = None

    def clean(self):
        cleaned = super().clean()
        if self.errors:
            return cleaned
        t, delta = cleaned.get("t"), cleaned.get("delta")
        try:
            if delta is not None:
                params = SchemeParams.from_delta(cleaned["m"], cleaned["n"], delta)
                if t is not None and t != params.t:
                    raise forms.ValidationError(
                        f"t = {t} contradicts delta = {delta} (which gives t = {params.t})", code="delta"
                    )
            elif t is not None:
                params = SchemeParams(cleaned["m"], cleaned["n"], t)
            else:
                raise forms.ValidationError("give t or delta", code="required")
            if self.guarded:
                params.check_guards()
        except (GuardError, InvalidStateError) as exc:
            raise _guard_error(exc) from exc
        self.params = params
        return cleaned


class KeysizeForm(forms.Form):
    t = forms.IntegerField(min_value=1)
    d = forms.IntegerField(min_value=2)
    eps1 = forms.FloatField(min_value=0.0, max_value=1.0)
    eps2 = forms.FloatField(min_value=0.0, max_value=1.0)

    def clean(self):
        cleaned = super().clean()
        for name in ("eps1", "eps2"):
            if cleaned.get(name) == 0.0:
                self.add_error(name, "must be positive")
        return cleaned


class GridForm(forms.Form):
    grid = GridField(required=False, empty_value="")


def form_errors(form):
    # One line per problem, field name first
    lines = []
    for field, errors in form.errors.items():
        prefix = "" if field == "__all__" else f"{field}: "
        lines.extend(prefix + message for message in errors)
    return "; ".join(lines)
