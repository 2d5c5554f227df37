"""JSON encodings for fields, polynomials, series, matrices and weights.

Decoders raise MalformedInput with a dotted path to the offending field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import FFApproxError, MalformedInput
from .field import FieldSpec, gf
from .laurent import Laurent
from .logval import LogVal
from .matrix import Matrix
from .poly import Poly, RatFunc


def _fail(path: str, msg: str):
    raise MalformedInput(f"{path or '<root>'}: {msg}")


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        _fail(path, f"expected an integer, got {x!r}")
    return x


def expect_list(x, path: str) -> list:
    if not isinstance(x, list):
        _fail(path, f"expected an array, got {type(x).__name__}")
    return x


def expect_object(x, path: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(x, dict):
        _fail(path, f"expected an object, got {type(x).__name__}")
    for k in keys:
        if k not in x:
            _fail(f"{path}.{k}" if path else k, "missing")
    return x


# -- field ---------------------------------------------------------------------

def field_to_json(F: FieldSpec) -> dict:
    return {"p": F.p, "e": F.e, "modulus": list(F.modulus) if F.modulus else None}


def field_from_json(obj, path: str = "field") -> FieldSpec:
    obj = expect_object(obj, path, ("p",))
    p = _int(obj["p"], f"{path}.p")
    e = _int(obj.get("e", 1), f"{path}.e")
    mod = obj.get("modulus")
    if mod is not None:
        mod = tuple(_int(c, f"{path}.modulus[{i}]") for i, c in enumerate(expect_list(mod, f"{path}.modulus")))
        if not mod:
            mod = None
    try:
        return gf(p, e, mod)
    except FFApproxError as exc:
        _fail(path, str(exc))


# -- elements --------------------------------------------------------------------

def elem_to_json(F: FieldSpec, a: int):
    return a if F.e == 1 else list(F.digits(a))


def elem_from_json(F: FieldSpec, x, path: str) -> int:
    if isinstance(x, list):
        try:
            return F.from_digits(x)
        except (MalformedInput, TypeError, ValueError) as exc:
            _fail(path, str(exc))
    x = _int(x, path)
    if not 0 <= x < F.q:
        _fail(path, f"{x} is not an element code of F_{F.q}")
    return x


def poly_to_json(p: Poly) -> list:
    return [elem_to_json(p.F, c) for c in p.coeffs]


def poly_from_json(F: FieldSpec, x, path: str) -> Poly:
    cs = [elem_from_json(F, c, f"{path}[{i}]") for i, c in enumerate(expect_list(x, path))]
    return Poly(F, cs)


def ratfunc_to_json(f: RatFunc) -> dict:
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def ratfunc_from_json(F: FieldSpec, x, path: str) -> RatFunc:
    x = expect_object(x, path, ("num",))
    num = poly_from_json(F, x["num"], f"{path}.num")
    den = poly_from_json(F, x.get("den", [1]), f"{path}.den")
    if den.is_zero():
        _fail(f"{path}.den", "zero denominator")
    return RatFunc(num, den)


def laurent_to_json(x: Laurent) -> dict:
    if x.is_exact:
        return {"ratfunc": ratfunc_to_json(x.backing)}
    lo = x.val_lower()
    P = x.prec
    if lo >= P:
        return {"val": P, "coeffs": [], "prec": P}
    return {"val": lo, "coeffs": [elem_to_json(x.F, c) for c in x.window(lo, P)], "prec": P}


def laurent_from_json(F: FieldSpec, x, path: str) -> Laurent:
    """Accepts {"ratfunc": ...}, a bare {"num", "den"}, a polynomial array, or {"val", "coeffs", "prec"}."""
    if isinstance(x, list):
        return Laurent.exact(poly_from_json(F, x, path))
    if isinstance(x, dict) and "ratfunc" in x:
        return Laurent.exact(ratfunc_from_json(F, x["ratfunc"], f"{path}.ratfunc"))
    if isinstance(x, dict) and "num" in x:
        return Laurent.exact(ratfunc_from_json(F, x, path))
    x = expect_object(x, path, ("val", "coeffs"))
    val = _int(x["val"], f"{path}.val")
    cs = [elem_from_json(F, c, f"{path}.coeffs[{i}]") for i, c in enumerate(expect_list(x["coeffs"], f"{path}.coeffs"))]
    prec = x.get("prec")
    if prec is not None:
        prec = _int(prec, f"{path}.prec")
    return Laurent.truncated(F, val, cs, prec)


# -- matrices and weights ----------------------------------------------------------

def matrix_to_json(A: Matrix) -> dict:
    F = A[0][0].F
    return {"field": field_to_json(F), "m": len(A), "n": len(A[0]),
            "entries": [laurent_to_json(x) for row in A for x in row]}


def matrix_from_json(obj) -> tuple[FieldSpec, Matrix]:
    from .fixtures import named_matrix

    obj = expect_object(obj, "", ("field",))
    F = field_from_json(obj["field"])
    if "named" in obj:
        prec = _int(obj.get("prec", 200), "prec")
        try:
            return F, named_matrix(obj["named"], F, prec)
        except KeyError:
            _fail("named", f"unknown fixture {obj['named']!r}")
    obj = expect_object(obj, "", ("m", "n", "entries"))
    m, n = _int(obj["m"], "m"), _int(obj["n"], "n")
    if m < 1 or n < 1:
        _fail("m", "dimensions must be positive")
    ents = expect_list(obj["entries"], "entries")
    if len(ents) != m * n:
        _fail("entries", f"expected {m * n} entries, got {len(ents)}")
    flat = [laurent_from_json(F, e, f"entries[{k}]") for k, e in enumerate(ents)]
    return F, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(m))


def weights_from_json(obj, path: str = "") -> tuple[tuple[int, ...], tuple[int, ...]]:
    obj = expect_object(obj, path, ("r", "s"))
    r = tuple(_int(x, f"{path}r[{i}]") for i, x in enumerate(expect_list(obj["r"], f"{path}r")))
    s = tuple(_int(x, f"{path}s[{i}]") for i, x in enumerate(expect_list(obj["s"], f"{path}s")))
    return r, s


def vector_from_json(F: FieldSpec, x, path: str) -> tuple[Laurent, ...]:
    return tuple(laurent_from_json(F, e, f"{path}[{i}]") for i, e in enumerate(expect_list(x, path)))


def polyvec_from_json(F: FieldSpec, x, path: str) -> tuple[Poly, ...]:
    return tuple(poly_from_json(F, e, f"{path}[{i}]") for i, e in enumerate(expect_list(x, path)))


# -- scalars and files -------------------------------------------------------------

def logval_to_json(x: LogVal) -> str:
    return x.to_json()


def logval_from_json(x, path: str = "log") -> LogVal:
    try:
        return LogVal.parse(x)
    except MalformedInput as exc:
        _fail(path, str(exc))


def fraction_to_json(x) -> str:
    return str(Fraction(x))


def load_json(path: str) -> Any:
    """Read a JSON file; syntax errors become MalformedInput with a line number."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedInput(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dumps(obj) -> str:
    """Canonical compact form used for all CLI output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))

