"""Command line interface: one subcommand per operation.

Results go to stdout, logs to stderr.  Options may also come from a
``key=value`` config file (``--config``); flags given on the command
line win over the file.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import sys
from fractions import Fraction

from . import encoding as enc
from .errors import (BudgetExceeded, FFApproxError, HorizonInsufficient, MalformedInput, PrecisionExhausted,
                     PreconditionError)
from .field import FieldSpec
from .geometry.context import WeightedNormContext
from .laurent import INF, Laurent, abs_val, dist_to_Rv
from .logval import LogVal
from .poly import Poly

log = logging.getLogger("ffapprox")

EXIT_CODES = (
    (MalformedInput, 1),
    (PreconditionError, 2),
    (HorizonInsufficient, 2),
    (BudgetExceeded, 3),
    (PrecisionExhausted, 4),
)


def exit_code_for(err: BaseException) -> int:
    from .badset import StageError

    if isinstance(err, StageError):
        err = err.err
    for cls, code in EXIT_CODES:
        if isinstance(err, cls):
            return code
    return 2


# -- output helpers -------------------------------------------------------------

def jsonable(x):
    """Plain JSON types; exact values become fraction strings."""
    if isinstance(x, (LogVal, Fraction)):
        return str(x)
    if isinstance(x, Poly):
        return enc.poly_to_json(x)
    if isinstance(x, Laurent):
        return enc.laurent_to_json(x)
    if isinstance(x, FieldSpec):
        return enc.field_to_json(x)
    if isinstance(x, WeightedNormContext):
        return {"r": list(x.r), "s": list(x.s)}
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def emit(obj) -> None:
    sys.stdout.write(enc.dumps(jsonable(obj)) + "\n")


def emit_csv(header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    sys.stdout.write(buf.getvalue())


def _flag(b: bool) -> str:
    return "true" if b else "false"


# -- input helpers --------------------------------------------------------------

def _need(args, name: str):
    v = getattr(args, name, None)
    if v is None:
        raise MalformedInput(f"--{name.replace('_', '-')} is required (flag or config key)")
    return v


def _fraction(s, name: str) -> Fraction:
    if isinstance(s, Fraction):
        return s
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"--{name}: not a rational number: {s!r}") from exc


def _matrix(args):
    return enc.matrix_from_json(_with_prec(enc.load_json(_need(args, "matrix")), args))


def _with_prec(obj, args):
    if isinstance(obj, dict) and "named" in obj and "prec" not in obj and args.prec is not None:
        obj = dict(obj, prec=args.prec)
    return obj


def _context(args, F: FieldSpec, m: int, n: int) -> WeightedNormContext:
    if args.weights is None:
        return WeightedNormContext.unweighted(F, m, n)
    r, s = enc.weights_from_json(enc.load_json(args.weights))
    if len(r) != m or len(s) != n:
        raise MalformedInput(f"weights have shape ({len(r)}, {len(s)}), matrix is {m} x {n}")
    return WeightedNormContext(F, r, s)


def _matrix_and_context(args):
    F, A = _matrix(args)
    return F, A, _context(args, F, len(A), len(A[0]))


def cell_to_string(F: FieldSpec, cell) -> str:
    """Digits of each coordinate (exponents 1, 2, ...), coordinates separated by '|'."""
    sep = "" if F.q <= 10 else ":"
    return "|".join(sep.join(str(c) for c in digs) for digs in cell)


def cell_from_string(F: FieldSpec, s: str):
    out = []
    for part in s.split("|"):
        toks = part.split(":") if F.q > 10 else list(part)
        try:
            digs = tuple(F.check(int(t)) for t in toks if t != "")
        except ValueError as exc:
            raise MalformedInput(f"bad digit string {s!r}") from exc
        out.append(digs)
    return tuple(out)


def _theta(args, F: FieldSpec, m: int):
    from .badset import cell_theta

    raw = enc.load_json(_need(args, "theta"))
    if isinstance(raw, list) and raw and all(isinstance(v, str) for v in raw):
        if not 0 <= args.index < len(raw):
            raise MalformedInput(f"--index {args.index} outside the {len(raw)} exported points")
        raw = raw[args.index]
    if isinstance(raw, str):
        theta = cell_theta(F, cell_from_string(F, raw))
    else:
        theta = enc.vector_from_json(F, raw, "theta")
    if len(theta) != m:
        raise MalformedInput(f"theta has {len(theta)} entries, expected {m}")
    return theta


# -- subcommands -------------------------------------------------------------------

def cmd_expand(args):
    obj = enc.load_json(_need(args, "value"))
    obj = enc.expect_object(obj, "", ("field", "value"))
    F = enc.field_from_json(obj["field"])
    x = enc.laurent_from_json(F, obj["value"], "value")
    n = int(args.prec or 16)
    lo = x.val_lower()
    if lo is INF:
        emit({"zero": True, "abs_log": abs_val(x), "dist_log": dist_to_Rv(x)})
        return
    hi = lo + n if x.is_exact else min(lo + n, x.prec)
    emit({"val": lo, "coeffs": [enc.elem_to_json(F, c) for c in x.window(lo, hi)], "prec": None if x.is_exact else x.prec,
          "abs_log": abs_val(x), "dist_log": dist_to_Rv(x)})


def cmd_minima(args):
    from .geometry import LatticeBasis, covol, rs_systole, successive_minima

    F, A = _matrix(args)
    d = len(A)
    if any(len(row) != d for row in A):
        raise MalformedInput("a lattice basis must be square")
    L = LatticeBasis(A)
    mr = successive_minima(L)
    cv = covol(L)
    ok = sum(x.value for x in mr.logs) == d + cv.value
    out = {"lambda_logs": list(mr.logs), "covol_log": cv, "product_check": "ok" if ok else "fail",
           "shortest": list(mr.shortest)}
    if args.weights is not None:
        r, s = enc.weights_from_json(enc.load_json(args.weights))
        ctx = WeightedNormContext(F, r, s)
        if ctx.d != d:
            raise MalformedInput(f"weights describe dimension {ctx.d}, lattice has {d}")
        out["systole_log"] = rs_systole(L, ctx, args.enum_cap)
    emit(out)


def cmd_dirichlet(args):
    from .geometry import dirichlet_weighted, dirichlet_weighted_holds

    F, A, ctx = _matrix_and_context(args)
    alpha = int(_need(args, "alpha"))
    y = dirichlet_weighted(A, alpha, ctx)
    ok, (d_log, h_log) = dirichlet_weighted_holds(A, y, alpha, ctx)
    emit({"y": list(y), "dist_log": d_log, "norm_log": h_log, "holds": ok})


def cmd_transfer(args):
    from .geometry import transfer

    F, A, ctx = _matrix_and_context(args)
    y = enc.polyvec_from_json(F, enc.load_json(_need(args, "y")), "y")
    res = transfer(A, y, enc.logval_from_json(_need(args, "eps_log"), "eps-log"),
                   enc.logval_from_json(_need(args, "Y_log"), "Y-log"), ctx)
    k = res.kappa
    emit({"x": list(res.x), "X_log": res.X_log, "dist_log": res.dist_log, "norm_log": res.norm_log,
          "dist_bound": res.dist_bound, "holds": res.holds(),
          "kappa": {"beta": k.beta, "k1": k.k1, "k2": k.k2, "k3": k.k3, "k4": k.k4}})


def cmd_bestapprox(args):
    from .bestapprox import enumerate_best_approx

    F, A, ctx = _matrix_and_context(args)
    seq = enumerate_best_approx(A, ctx, _fraction(_need(args, "horizon_log"), "horizon-log"), args.matrix)
    st = seq.steps
    for i, step in enumerate(st):
        prod = step.Mlog + st[i + 1].Ylog if i + 1 < len(st) else None
        emit({"i": i + 1, "y": list(step.y), "Ylog": step.Ylog, "Mlog": step.Mlog, "product_log": prod})
    log.info("%d steps, terminated=%s", len(st), seq.terminated)


def cmd_classify(args):
    from .bestapprox import classify_singular

    F, A, ctx = _matrix_and_context(args)
    c = classify_singular(A, ctx, _fraction(args.horizon_log, "horizon-log"),
                          _fraction(args.eps_prime_log, "eps-prime-log"))
    if args.format == "csv":
        sys.stdout.write(f"# verdict={c.verdict} terminated={_flag(c.terminated)} "
                         f"heuristic={_flag(c.heuristic)} length={c.length}\n")
        emit_csv(["k", "statistic"], [(k, str(v)) for k, v in c.statistic])
        return
    emit({"verdict": c.verdict, "terminated": c.terminated, "heuristic": c.heuristic, "length": c.length,
          "statistic": [{"k": k, "value": v} for k, v in c.statistic]})


def cmd_orbit(args):
    from .dynamics import dani_trajectory

    F, A, ctx = _matrix_and_context(args)
    tr = dani_trajectory(A, ctx, _fraction(_need(args, "eps_log"), "eps-log"), int(_need(args, "steps")),
                         args.enum_cap)
    emit_csv(["ell", "systole_log", "in_X_gt_eps", "arithmetic_side"],
             [(ell, str(s), _flag(inside), _flag(arith)) for ell, s, inside, arith in tr.rows])
    log.info("escape fraction %s, criteria agree: %s", tr.escape_fraction, tr.agree)


def cmd_epsbad(args):
    from .dynamics import is_eps_bad

    F, A, ctx = _matrix_and_context(args)
    theta = _theta(args, F, len(A))
    res = is_eps_bad(A, theta, _fraction(_need(args, "eps_log"), "eps-log"),
                     _fraction(_need(args, "horizon_log"), "horizon-log"), ctx)
    out = {"verdict": "no_violation_up_to_horizon" if res.witness is None else "witness",
           "horizon_log": res.horizon, "levels_checked": res.levels_checked}
    if res.witness is not None:
        out.update(witness=list(res.witness), norm_log=res.norm_log, dist_log=res.dist_log,
                   product_log=res.product_log)
    emit(out)


def _growth_vectors(args, F, A, ctx, d):
    """The (y_k) for the Cantor tree: supplied with --vectors or taken from the transposed system."""
    from .bestapprox import spaced_subsequence, enumerate_best_approx
    from .badset import growth_parameter
    from .matrix import transpose

    if args.vectors is not None:
        raw = enc.expect_list(enc.load_json(args.vectors), "vectors")
        return [enc.polyvec_from_json(F, v, f"vectors[{i}]") for i, v in enumerate(raw)], None
    seq = enumerate_best_approx(transpose(A), ctx.transposed(), _fraction(args.horizon_log, "horizon-log"))
    if seq.terminated:
        raise PreconditionError("the transposed system has a terminating sequence; no Cantor tree is needed")
    plan = spaced_subsequence(seq, _fraction(args.a_log, "a-log"), growth_parameter(d, ctx.r),
                          _fraction(args.c_log, "c-log"))
    return plan.vectors(), plan


def cmd_badset(args):
    from .badset import (check_delta, build_cantor, dim_from_Ylogs, dim_lower_bound, sample_survivors,
                         survivor_bound_check)

    F, A, ctx = _matrix_and_context(args)
    d = check_delta(_fraction(_need(args, "delta_log"), "delta-log"), ctx.m)
    ys, plan = _growth_vectors(args, F, A, ctx, d)
    K = len(ys) if args.levels is None else min(int(args.levels), len(ys))
    tree = build_cantor(F, ys, ctx.r, d, K, args.budget)
    rep = survivor_bound_check(tree)
    dim = dim_lower_bound(plan, d) if plan is not None else dim_from_Ylogs(F.q, ctx.r, tree.Ylogs, d)
    out = {"levels": [{"nvec": list(lv.nvec), "parents": lv.parents, "survivors": lv.survivors,
                       "bound_ok": lv.bound_ok} for lv in tree.levels],
           "truncated": tree.truncated, "bound_ok": rep.ok, "c1": rep.c1, "Ylogs": tree.Ylogs,
           "dim_estimate": dim}
    emit(out)
    if args.export is not None:
        pts = sample_survivors(F, ys, ctx.r, d, K, int(args.samples), args.seed)
        with open(args.export, "w", encoding="utf-8") as fh:
            fh.write(enc.dumps([cell_to_string(F, c) for c in pts]) + "\n")
        log.info("exported %d survivors to %s", len(pts), args.export)


def cmd_pipeline(args):
    from .badset import pipeline_lower_bound

    F, A, ctx = _matrix_and_context(args)
    rep = pipeline_lower_bound(
        A, ctx, _fraction(_need(args, "delta_log"), "delta-log"), _fraction(args.a_log, "a-log"),
        _fraction(args.horizon_log, "horizon-log"), c_log=_fraction(args.c_log, "c-log"),
        samples=int(args.samples), eps_horizon=_fraction(args.eps_horizon_log, "eps-horizon-log"),
        levels=None if args.levels is None else int(args.levels), budget=args.budget, seed=args.seed)
    emit(rep)


def cmd_selftest(args):
    from .selftest import run_selftest

    ok, text = run_selftest(seed=args.seed, workers=args.workers, scale=float(args.scale))
    sys.stdout.write(text)
    return 0 if ok else 5


# -- parser ----------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Usage errors count as malformed input (exit 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _common(p):
    p.add_argument("--config", help="key=value file; command line flags take precedence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prec", type=int, default=None, help="precision for named fixtures / expansion length")
    p.add_argument("--enum-cap", type=int, default=1 << 20)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--log-level", default="WARNING")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ffapprox", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=fn)
        return p

    p = add("expand", cmd_expand, "Laurent expansion of a rational function or series")
    p.add_argument("--value", help="JSON {field, value}")

    p = add("minima", cmd_minima, "successive minima and covolume of a lattice basis")
    p.add_argument("--matrix", help="square matrix JSON; columns are the basis vectors")
    p.add_argument("--weights")

    p = add("dirichlet", cmd_dirichlet, "weighted Dirichlet solution")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--alpha", type=int)

    p = add("transfer", cmd_transfer, "transference to the transposed system")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--y", help="JSON array of polynomials")
    p.add_argument("--eps-log")
    p.add_argument("--Y-log", dest="Y_log")

    p = add("bestapprox", cmd_bestapprox, "best approximation sequence as JSON lines")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--horizon-log")

    p = add("classify", cmd_classify, "singular-on-average verdict and statistic table")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--horizon-log", default="12")
    p.add_argument("--eps-prime-log", default="-1")

    p = add("orbit", cmd_orbit, "systole along the diagonal flow (CSV)")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--eps-log")
    p.add_argument("--steps", type=int)

    p = add("epsbad", cmd_epsbad, "finite-horizon search for a violation of eps-badness")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--theta", help="JSON array of series, a digit string, or an export file")
    p.add_argument("--index", type=int, default=0, help="which exported point to use")
    p.add_argument("--eps-log")
    p.add_argument("--horizon-log")

    p = add("badset", cmd_badset, "Cantor construction of delta-bad targets")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--delta-log")
    p.add_argument("--levels", type=int)
    p.add_argument("--budget", type=int, default=1 << 24)
    p.add_argument("--vectors", help="JSON list of polynomial vectors to use instead of best approximations")
    p.add_argument("--horizon-log", default="100")
    p.add_argument("--a-log", default="5")
    p.add_argument("--c-log", default="2")
    p.add_argument("--export", help="write sampled survivors as digit strings to this file")
    p.add_argument("--samples", type=int, default=100)

    p = add("pipeline", cmd_pipeline, "dimension lower bound pipeline with eps-bad cross-checks")
    p.add_argument("--matrix")
    p.add_argument("--weights")
    p.add_argument("--delta-log")
    p.add_argument("--a-log", default="5")
    p.add_argument("--c-log", default="2")
    p.add_argument("--horizon-log", default="100")
    p.add_argument("--levels", type=int)
    p.add_argument("--budget", type=int, default=1 << 16)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--eps-horizon-log", default="6")

    p = add("selftest", cmd_selftest, "run the invariant suite")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--scale", default="1")
    return ap


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise MalformedInput(f"{path}: {exc.strerror}") from exc
    for no, line in enumerate(lines, 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if "=" not in s:
            raise MalformedInput(f"{path}:{no}: expected key=value")
        k, v = (t.strip() for t in s.split("=", 1))
        out[k.replace("-", "_")] = (v, no)
    return out


def _apply_config(parser: argparse.ArgumentParser, argv):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    cfg = read_config(args.config)
    sp = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sp._actions}
    defaults = {}
    for k, (v, no) in cfg.items():
        if k not in known or k in ("help", "config"):
            raise MalformedInput(f"{args.config}:{no}: unknown key {k!r} for {args.command}")
        defaults[k] = v
    sp.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                            stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        rc = args.func(args)
        sys.stdout.flush()
        return rc or 0
    except FFApproxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exit_code_for(exc)
    except json.JSONDecodeError as exc:  # pragma: no cover - load_json converts these
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
