"""Polynomials in F_q[Z] and rational functions in F_q(Z)."""

from __future__ import annotations

from .field import FieldSpec


def _trim(c: list[int]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def mul_coeffs(F: FieldSpec, a, b) -> list[int]:
    """Product of two coefficient sequences (any offset convention)."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    if F.e == 1:
        p = F.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [v % p for v in out]
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def add_coeffs(F: FieldSpec, a, b) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    if F.e == 1:
        p = F.p
        for i, y in enumerate(b):
            out[i] = (out[i] + y) % p
    else:
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
    return out


def scale_coeffs(F: FieldSpec, a, c: int) -> list[int]:
    if F.e == 1:
        p = F.p
        return [x * c % p for x in a]
    return [F.mul(x, c) for x in a]


def neg_coeffs(F: FieldSpec, a) -> list[int]:
    if F.e == 1:
        p = F.p
        return [-x % p for x in a]
    return [F.neg(x) for x in a]


class Poly:
    """Element of F_q[Z]; ``coeffs`` lowest degree first, no trailing zeros."""

    __slots__ = ("F", "coeffs")

    def __init__(self, F: FieldSpec, coeffs=()):
        self.F = F
        self.coeffs = _trim([F.check(int(c)) for c in coeffs])

    @classmethod
    def _raw(cls, F: FieldSpec, coeffs) -> "Poly":
        obj = cls.__new__(cls)
        obj.F = F
        obj.coeffs = _trim(list(coeffs))
        return obj

    @classmethod
    def zero(cls, F: FieldSpec) -> "Poly":
        return cls._raw(F, ())

    @classmethod
    def const(cls, F: FieldSpec, c: int) -> "Poly":
        return cls._raw(F, (c,))

    @classmethod
    def monomial(cls, F: FieldSpec, k: int, c: int = 1) -> "Poly":
        return cls._raw(F, [0] * k + [c])

    def deg(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def _wrap(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.F != self.F:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return Poly.const(self.F, other % self.F.q if self.F.e == 1 else self.F.check(other))
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.F, add_coeffs(self.F, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.F, neg_coeffs(self.F, self.coeffs))

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.F, mul_coeffs(self.F, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        return Poly._raw(self.F, scale_coeffs(self.F, self.coeffs, c))

    def shift(self, k: int) -> "Poly":
        """Multiply by Z^k (k >= 0)."""
        if not self.coeffs:
            return self
        return Poly._raw(self.F, [0] * k + list(self.coeffs))

    def __divmod__(self, other: "Poly"):
        other = self._wrap(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.F
        r = list(self.coeffs)
        db = other.deg()
        if len(r) - 1 < db:
            return Poly.zero(F), self
        inv_lc = F.inv(other.lc())
        qc = [0] * (len(r) - db)
        b = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c:
                t = F.mul(c, inv_lc)
                qc[k - db] = t
                for i in range(db + 1):
                    if b[i]:
                        r[k - db + i] = F.sub(r[k - db + i], F.mul(t, b[i]))
        return Poly._raw(F, qc), Poly._raw(F, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.F.inv(self.lc()))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._wrap(other)
        return isinstance(other, Poly) and self.F == other.F and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("Poly", self.F, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("Z" if k == 1 else f"Z^{k}")
            if c == 1 and mono:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms)

    def __reduce__(self):
        return (Poly, (self.F, self.coeffs))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """(g, u, v) with u*a + v*b = g monic."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly.const(F, 1), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.const(F, 1)
    while not r1.is_zero():
        qt, r2 = divmod(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.inv(r0.lc())
    return r0.scale(c), s0.scale(c), t0.scale(c)


class RatFunc:
    """num/den in lowest terms with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        F = num.F
        if den is None:
            den = Poly.const(F, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.const(F, 1)
            return
        g = poly_gcd(num, den)
        if g.deg() > 0:
            num, den = num // g, den // g
        c = F.inv(den.lc())
        self.num, self.den = num.scale(c), den.scale(c)

    @property
    def F(self) -> FieldSpec:
        return self.num.F

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.deg() == 0

    def valuation(self) -> int | None:
        """v at infinity: deg den - deg num; None for zero."""
        if self.num.is_zero():
            return None
        return self.den.deg() - self.num.deg()

    def _wrap(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc(Poly.const(self.F, 0) + other)
        return NotImplemented

    def __add__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other) -> bool:
        if isinstance(other, (Poly, int)):
            other = self._wrap(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFunc", self.num, self.den))

    def __repr__(self) -> str:
        if self.is_poly():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"

    def __reduce__(self):
        return (RatFunc, (self.num, self.den))


def Zpoly(F: FieldSpec) -> Poly:
    """The indeterminate Z."""
    return Poly.monomial(F, 1)
