"""Finite fields F_q, q = p^e.

Elements are plain ints.  For an extension field the int
``sum(c_i * p**i)`` encodes the coefficient vector ``(c_0, ..., c_{e-1})``
in the power basis of the modulus.  The int order is the element order
used for every tie-break in the package (0 and 1 are the two smallest).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import MalformedInput, PreconditionError

Q_CAP = 2 ** 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo a monic m, coefficient lists low-first."""
    a = a[:]
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] % p
        if c:
            for t in range(dm + 1):
                a[k - dm + t] = (a[k - dm + t] - c * m[t]) % p
    a = [x % p for x in a[:dm]]
    return a


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..e//2."""
    e = len(modulus) - 1
    m = list(modulus)
    for k in range(1, e // 2 + 1):
        for tail in product(range(p), repeat=k):
            f = list(tail) + [1]
            if not any(_pmod(m, f, p)):
                return False
    return True


class FieldSpec:
    """The field F_q, with arithmetic on int-coded elements."""

    __slots__ = ("p", "e", "modulus", "q", "_exp", "_log", "_digits")

    def __init__(self, p: int, e: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise PreconditionError(f"p={p} is not prime")
        if e < 1:
            raise PreconditionError("extension degree must be >= 1")
        if p ** e > Q_CAP:
            raise PreconditionError(f"q={p ** e} exceeds the cap {Q_CAP}")
        self.p = p
        self.e = e
        self.q = p ** e
        if e == 1:
            if modulus not in (None, ()):
                raise PreconditionError("prime fields take no modulus")
            self.modulus = None
            self._exp = self._log = self._digits = None
            return
        if modulus is None:
            modulus = default_modulus(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise PreconditionError("modulus must be monic of degree e (low-first)")
        if not is_irreducible(modulus, p):
            raise PreconditionError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._digits = [self._to_digits(a) for a in range(self.q)]
        self._build_tables()

    # construction helpers
    def _to_digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def _from_digits(self, ds) -> int:
        a = 0
        for c in reversed(ds):
            a = a * self.p + c
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._from_digits(_pmod(prod, list(self.modulus), self.p))

    def _build_tables(self) -> None:
        q = self.q
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._slow_mul(x, g)
            if len(exp) == q - 1:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                self._exp = exp + exp
                self._log = log
                return
        raise PreconditionError("no primitive element found")  # pragma: no cover

    # arithmetic
    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        return self._from_digits([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        if self.p == 2:
            return a
        p = self.p
        return self._from_digits([-x % p for x in self._digits[a]])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def digits(self, a: int) -> tuple[int, ...]:
        """Coefficient vector of a in the power basis."""
        if self.e == 1:
            return (a,)
        return self._digits[a]

    def from_digits(self, ds) -> int:
        ds = [int(c) for c in ds]
        if len(ds) != self.e or any(not 0 <= c < self.p for c in ds):
            raise MalformedInput(f"bad F_q coefficient vector {ds!r} for q={self.q}")
        return ds[0] if self.e == 1 else self._from_digits(ds)

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise MalformedInput(f"{a!r} is not an element code of F_{self.q}")
        return a

    # value semantics
    def _key(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self.e == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={self.modulus})"

    def __reduce__(self):
        return (FieldSpec, (self.p, self.e, self.modulus))


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e under the int order of its tail."""
    for tail in product(range(p), repeat=e):
        m = tuple(reversed(tail)) + (1,)
        if m[0] != 0 and is_irreducible(m, p):
            return m
    raise PreconditionError(f"no irreducible polynomial of degree {e} over F_{p}")  # pragma: no cover


@lru_cache(maxsize=None)
def gf(p: int, e: int = 1, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    """Cached constructor."""
    return FieldSpec(p, e, modulus)
