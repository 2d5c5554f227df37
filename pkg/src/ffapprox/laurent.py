"""Laurent series in pi = Z^{-1} over F_q (the completion at infinity).

A ``Laurent`` is either exact (backed by a RatFunc, expanded lazily to
any depth) or truncated (coefficients known for exponents below an
absolute precision ``prec``).  Exponents always refer to powers of pi,
so Z^3 has exponent -3 and the absolute value is q^(-valuation).
"""

from __future__ import annotations

import math

from .errors import PrecisionExhausted
from .field import FieldSpec
from .logval import NEG_INF, LogVal
from .poly import Poly, RatFunc, add_coeffs, mul_coeffs, neg_coeffs, scale_coeffs

INF = math.inf


def _strip_front(lo: int, digits: list[int]) -> tuple[int, list[int]]:
    k = 0
    while k < len(digits) and digits[k] == 0:
        k += 1
    return lo + k, digits[k:]


class Laurent:
    __slots__ = ("F", "backing", "_lo", "_digits", "_prec", "_rem")

    # -- construction -----------------------------------------------------
    @classmethod
    def exact(cls, f: RatFunc | Poly) -> "Laurent":
        if isinstance(f, Poly):
            f = RatFunc(f)
        obj = cls.__new__(cls)
        obj.F = f.F
        obj.backing = f
        if f.is_zero():
            obj._lo, obj._digits, obj._prec, obj._rem = 0, [], INF, None
            return obj
        qt, r = divmod(f.num, f.den)
        if qt.is_zero():
            obj._lo, obj._digits = 1, []
        else:
            obj._lo, obj._digits = -qt.deg(), list(reversed(qt.coeffs))
        obj._rem = list(r.coeffs) + [0] * (f.den.deg() - len(r.coeffs)) if not r.is_zero() else None
        obj._prec = INF if obj._rem is None else obj._lo + len(obj._digits)
        return obj

    @classmethod
    def truncated(cls, F: FieldSpec, start: int, coeffs, prec) -> "Laurent":
        """Coefficients for exponents start, start+1, ...; known below ``prec`` (absolute)."""
        coeffs = [F.check(int(c)) for c in coeffs]
        if prec is INF or prec is None:
            return cls.exact(_ratfunc_from_digits(F, start, coeffs))
        prec = int(prec)
        coeffs = coeffs[: max(0, prec - start)]
        return cls._trunc(F, start, coeffs, prec)

    @classmethod
    def _trunc(cls, F: FieldSpec, start: int, digits: list[int], prec: int) -> "Laurent":
        obj = cls.__new__(cls)
        obj.F = F
        obj.backing = None
        lo, digits = _strip_front(start, digits)
        if not digits:
            lo = prec
        obj._lo, obj._digits, obj._prec, obj._rem = lo, digits, prec, None
        return obj

    @classmethod
    def zero(cls, F: FieldSpec) -> "Laurent":
        return cls.exact(Poly.zero(F))

    @classmethod
    def const(cls, F: FieldSpec, c: int) -> "Laurent":
        return cls.exact(Poly.const(F, c))

    @classmethod
    def monomial(cls, F: FieldSpec, exponent: int, c: int = 1) -> "Laurent":
        """c * pi^exponent, exact."""
        return cls.exact(_ratfunc_from_digits(F, exponent, [c]))

    @classmethod
    def from_poly(cls, p: Poly) -> "Laurent":
        return cls.exact(p)

    # -- inspection -------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.backing is not None

    @property
    def prec(self):
        """Absolute precision; INF for exact elements."""
        return INF if self.backing is not None else self._prec

    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return self.backing is not None and self.backing.is_zero()

    def _expand_to(self, upto: int) -> None:
        """Make sure digits for exponents < upto are cached (exact only)."""
        if self._rem is None:
            return
        F = self.F
        den = self.backing.den.coeffs
        dd = len(den) - 1
        r = self._rem
        digits = self._digits
        while self._lo + len(digits) < upto:
            c = r[-1] if r else 0
            r = [0] + r[:-1]
            if c:
                for i in range(dd):
                    if den[i]:
                        r[i] = F.sub(r[i], F.mul(c, den[i]))
            digits.append(c)
            if not any(r):
                self._rem = None
                self._prec = INF
                return
        self._rem = r
        self._prec = self._lo + len(digits)

    def coeff(self, e: int) -> int:
        """Coefficient of pi^e."""
        if self.backing is not None:
            if self._rem is not None:
                self._expand_to(e + 1)
        elif e >= self._prec:
            raise PrecisionExhausted(f"coefficient of pi^{e} unknown (prec {self._prec})")
        k = e - self._lo
        if 0 <= k < len(self._digits):
            return self._digits[k]
        return 0

    def window(self, lo: int, hi: int) -> list[int]:
        """Coefficients for exponents lo..hi-1."""
        if hi <= lo:
            return []
        if self.backing is not None:
            if self._rem is not None:
                self._expand_to(hi)
        elif hi > self._prec:
            raise PrecisionExhausted(f"coefficients up to pi^{hi - 1} unknown (prec {self._prec})")
        out = [0] * (hi - lo)
        d = self._digits
        a = max(lo, self._lo)
        b = min(hi, self._lo + len(d))
        if a < b:
            out[a - lo:b - lo] = d[a - self._lo:b - self._lo]
        return out

    def valuation(self):
        """v(x): an int, INF for the exact zero; raises if undecidable."""
        if self.backing is not None:
            v = self.backing.valuation()
            return INF if v is None else v
        if not self._digits:
            raise PrecisionExhausted(f"valuation undecidable: all coefficients below pi^{self._prec} are zero")
        return self._lo

    @property
    def val(self):
        """Valuation, None for the exact zero."""
        v = self.valuation()
        return None if v is INF else v

    def val_lower(self):
        """A guaranteed lower bound for the valuation (exact when decidable)."""
        if self.backing is not None:
            return self.valuation()
        return self._lo

    def leading(self):
        """(valuation, leading coefficient)."""
        v = self.valuation()
        if v is INF:
            return INF, 0
        return v, self.coeff(v)

    def coeffs(self, count: int) -> list[int]:
        """First ``count`` coefficients starting at the valuation."""
        v = self.valuation()
        if v is INF:
            return []
        return self.window(v, v + count)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            if other.F != self.F:
                raise ValueError("Laurent series over different fields")
            return other
        if isinstance(other, (Poly, RatFunc)):
            return Laurent.exact(other)
        if isinstance(other, int):
            return Laurent.const(self.F, other % self.F.p if self.F.e == 1 else other)
        return NotImplemented

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        if self.backing is not None and o.backing is not None:
            return Laurent.exact(self.backing + o.backing)
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        P = min(self.prec, o.prec)
        lo = min(self.val_lower(), o.val_lower())
        if lo >= P:
            return Laurent._trunc(self.F, P, [], P)
        d = add_coeffs(self.F, self.window(lo, P), o.window(lo, P))
        return Laurent._trunc(self.F, lo, d, P)

    __radd__ = __add__

    def __neg__(self):
        if self.backing is not None:
            return Laurent.exact(-self.backing)
        return Laurent._trunc(self.F, self._lo, neg_coeffs(self.F, self._digits), self._prec)

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        if self.backing is not None and o.backing is not None:
            return Laurent.exact(self.backing * o.backing)
        if self.is_zero() or o.is_zero():
            return Laurent.zero(self.F)
        va, vb = self.val_lower(), o.val_lower()
        P = min(self.prec + vb, o.prec + va)
        lo = va + vb
        if lo >= P:
            return Laurent._trunc(self.F, P, [], P)
        a = self.window(va, P - vb)
        b = o.window(vb, P - va)
        d = mul_coeffs(self.F, a, b)[: P - lo]
        return Laurent._trunc(self.F, lo, d, P)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Laurent":
        if c == 0:
            return Laurent.zero(self.F)
        if self.backing is not None:
            return Laurent.exact(self.backing * Poly.const(self.F, c))
        return Laurent._trunc(self.F, self._lo, scale_coeffs(self.F, self._digits, c), self._prec)

    def shift(self, k: int) -> "Laurent":
        """Multiply by pi^k (that is, by Z^{-k})."""
        if k == 0 or self.is_zero():
            return self
        if self.backing is not None:
            f = self.backing
            if k < 0:
                return Laurent.exact(RatFunc(f.num.shift(-k), f.den))
            return Laurent.exact(RatFunc(f.num, f.den.shift(k)))
        return Laurent._trunc(self.F, self._lo + k, list(self._digits), self._prec + k)

    def mul_Zpow(self, k: int) -> "Laurent":
        """Multiply by Z^k."""
        return self.shift(-k)

    def inverse(self) -> "Laurent":
        if self.backing is not None:
            return Laurent.exact(self.backing.inverse())
        v = self.valuation()
        n = self._prec - v  # relative precision
        F = self.F
        a = self.window(v, v + n)
        inv0 = F.inv(a[0])
        out = [inv0]
        for k in range(1, n):
            s = 0
            for i in range(1, k + 1):
                if a[i]:
                    s = F.add(s, F.mul(a[i], out[k - i]))
            out.append(F.neg(F.mul(s, inv0)))
        return Laurent._trunc(F, -v, out, -v + n)

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def frac(self) -> "Laurent":
        """The part with exponents >= 1 (distance representative to F_q[Z])."""
        if self.backing is not None:
            f = self.backing
            return Laurent.exact(RatFunc(f.num % f.den, f.den))
        P = max(self._prec, 1)
        lo = max(self._lo, 1)
        return Laurent._trunc(self.F, lo, self.window(lo, self._prec) if lo < self._prec else [], P)

    def intpart(self) -> Poly:
        """The polynomial part (exponents <= 0)."""
        if self.backing is not None:
            f = self.backing
            return f.num // f.den
        if self._prec < 1:
            raise PrecisionExhausted("polynomial part needs the constant coefficient")
        lo = min(self._lo, 0)
        w = self.window(lo, 1)
        return Poly._raw(self.F, list(reversed(w)))

    def truncate(self, N: int) -> "Laurent":
        """A truncated copy known below pi^N (or less if already coarser)."""
        P = min(N, self.prec)
        lo = self.val_lower()
        if lo is INF or lo >= P:
            return Laurent._trunc(self.F, P, [], P)
        return Laurent._trunc(self.F, lo, self.window(lo, P), P)

    # -- value semantics --------------------------------------------------
    def _key(self):
        if self.backing is not None:
            return ("exact", self.backing)
        return ("trunc", self._lo, tuple(self._digits), self._prec)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Poly, RatFunc)):
            other = self._check(other)
        return isinstance(other, Laurent) and self.F == other.F and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def agrees(self, other: "Laurent", upto: int) -> bool:
        """Coefficients agree for every exponent below ``upto``."""
        lo = min(self.val_lower(), other.val_lower(), upto)
        if lo is INF:
            return True
        return self.window(lo, upto) == other.window(lo, upto)

    def __repr__(self) -> str:
        if self.backing is not None:
            return f"Laurent[{self.backing!r}]"
        terms = []
        for k, c in enumerate(self._digits[:12]):
            if c:
                e = self._lo + k
                terms.append(f"{c}*Z^{-e}")
        tail = f"O(Z^{-self._prec})"
        return "Laurent[" + " + ".join(terms + [tail]) + "]"

    def __reduce__(self):
        if self.backing is not None:
            return (Laurent.exact, (self.backing,))
        return (Laurent._trunc, (self.F, self._lo, list(self._digits), self._prec))


def _ratfunc_from_digits(F: FieldSpec, start: int, digits) -> RatFunc:
    """sum digits[k] * pi^(start+k) as an exact rational function."""
    digits = list(digits)
    if not any(digits):
        return RatFunc(Poly.zero(F))
    top = start + len(digits) - 1  # largest exponent
    # sum c_k Z^{-(start+k)} = Z^{-top} * sum c_k Z^{top-start-k}
    num = Poly._raw(F, [digits[top - start - j] for j in range(top - start + 1)])
    if top >= 0:
        return RatFunc(num, Poly.monomial(F, top))
    return RatFunc(num.shift(-top))


def laurent_from_ratfunc(f: RatFunc, prec: int = 16) -> Laurent:
    """Exact expansion of f, with at least ``prec`` coefficients cached."""
    x = Laurent.exact(f)
    v = x.val_lower()
    if v is not INF:
        x._expand_to(v + prec)
    return x


def abs_val(x: Laurent) -> LogVal:
    """log_q |x| = -v(x)."""
    v = x.valuation()
    return NEG_INF if v is INF else LogVal(-v)


def dist_to_Rv(x: Laurent) -> LogVal:
    """log_q of the distance from x to F_q[Z]."""
    return abs_val(x.frac())


def log_abs_int(x: Laurent):
    """-v(x) as an int, or None for zero (internal fast path)."""
    v = x.valuation()
    return None if v is INF else -v
