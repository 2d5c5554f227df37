"""Exact log_q values of absolute values and quasinorms."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from .errors import MalformedInput


@total_ordering
class LogVal:
    """Either a rational ``value`` (meaning q**value) or NEG_INF (meaning 0)."""

    __slots__ = ("value",)

    def __init__(self, value=None):
        if value is not None and not isinstance(value, Fraction):
            value = Fraction(value)
        self.value = value

    @property
    def is_neg_inf(self) -> bool:
        return self.value is None

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.value == other.value

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.value is None:
            return other.value is not None
        if other.value is None:
            return False
        return self.value < other.value

    def __hash__(self) -> int:
        return hash(("LogVal", self.value))

    def __add__(self, other) -> "LogVal":
        """Log of a product."""
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.value is None or other.value is None:
            return NEG_INF
        return LogVal(self.value + other.value)

    __radd__ = __add__

    def __neg__(self) -> "LogVal":
        if self.value is None:
            raise ValueError("cannot negate NEG_INF")
        return LogVal(-self.value)

    def __sub__(self, other) -> "LogVal":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "LogVal":
        """Log of the c-th power, c > 0."""
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        if self.value is None:
            return NEG_INF
        return LogVal(self.value * c)

    def __str__(self) -> str:
        return "neg_inf" if self.value is None else str(self.value)

    def __repr__(self) -> str:
        return f"LogVal({self})"

    def to_json(self) -> str:
        return str(self)

    @classmethod
    def parse(cls, s) -> "LogVal":
        if isinstance(s, LogVal):
            return s
        if isinstance(s, dict) and "log_q" in s:
            s = s["log_q"]
        if isinstance(s, (int, Fraction)):
            return LogVal(s)
        if isinstance(s, str):
            t = s.strip()
            if t in ("neg_inf", "-inf", "NEG_INF"):
                return NEG_INF
            try:
                return LogVal(Fraction(t))
            except (ValueError, ZeroDivisionError) as exc:
                raise MalformedInput(f"bad log value {s!r}") from exc
        raise MalformedInput(f"bad log value {s!r}")

    def __reduce__(self):
        return (LogVal, (self.value,))


def _coerce(x):
    if isinstance(x, LogVal):
        return x
    if isinstance(x, (int, Fraction)):
        return LogVal(x)
    return NotImplemented


NEG_INF = LogVal(None)


def lv(x) -> LogVal:
    """Shorthand constructor accepting ints, Fractions, strings or None."""
    if x is None:
        return NEG_INF
    return LogVal.parse(x) if isinstance(x, str) else LogVal(x)
