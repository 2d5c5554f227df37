import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffapprox import Laurent, MalformedInput, Poly, RatFunc, gf
from ffapprox import encoding as enc
from ffapprox.cli import EXIT_CODES, cell_from_string, cell_to_string, exit_code_for, main
from ffapprox.instances import random_exact_matrix, random_ratfunc, random_series_matrix

F2 = gf(2)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(capsys, argv):
    rc = main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def lines(out):
    return [json.loads(s) for s in out.splitlines() if s.strip()]


NAMED = {"field": {"p": 2}, "named": "alpha_quad", "prec": 80}


# -- encoding ----------------------------------------------------------------------

@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_field_roundtrip(p, e):
    F = gf(p, e)
    assert enc.field_from_json(json.loads(enc.dumps(enc.field_to_json(F)))) == F


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 1), (3, 1), (2, 2)]))
def test_laurent_and_matrix_roundtrip(seed, pe):
    rng = random.Random(seed)
    F = gf(*pe)
    x = Laurent.exact(random_ratfunc(F, rng, 4))
    assert enc.laurent_from_json(F, json.loads(enc.dumps(enc.laurent_to_json(x))), "x") == x
    A = random_series_matrix(F, rng, 2, 1, 12)
    G, B = enc.matrix_from_json(json.loads(enc.dumps(enc.matrix_to_json(A))))
    assert G == F
    for ra, rb in zip(A, B):
        for a, b in zip(ra, rb):
            assert a.prec == b.prec and a.window(1, a.prec) == b.window(1, b.prec)
    E = random_exact_matrix(F, rng, 1, 2, 3)
    _, B = enc.matrix_from_json(json.loads(enc.dumps(enc.matrix_to_json(E))))
    assert B == E


def test_element_forms():
    F = gf(2, 2)
    assert enc.elem_from_json(F, 3, "a") == 3
    assert enc.elem_from_json(F, enc.elem_to_json(F, 2), "a") == 2
    assert enc.laurent_from_json(F2, [1, 1], "x") == Laurent.from_poly(Poly(F2, [1, 1]))
    assert enc.laurent_from_json(F2, {"num": [1], "den": [0, 1]}, "x").backing == RatFunc(Poly.const(F2, 1),
                                                                                          Poly(F2, [0, 1]))


@pytest.mark.parametrize("obj,fragment", [
    ({"field": {"p": 4}, "m": 1, "n": 1, "entries": [[1]]}, "field"),
    ({"field": {"p": 2}, "m": 1, "n": 1, "entries": [[2]]}, "entries[0][0]"),
    ({"field": {"p": 2}, "m": 1, "n": 2, "entries": [[1]]}, "entries: expected 2"),
    ({"field": {"p": 2}, "m": 1, "n": 1, "entries": [{"num": [1], "den": [0]}]}, "entries[0].den"),
    ({"field": {"p": 2}, "m": 1, "n": 1, "entries": [{"val": "x", "coeffs": []}]}, "entries[0].val"),
    ({"field": {"p": 2}, "named": "nope"}, "named"),
    ({"m": 1}, "field: missing"),
])
def test_malformed_matrix_diagnostics(obj, fragment):
    with pytest.raises(MalformedInput) as ei:
        enc.matrix_from_json(obj)
    assert fragment in str(ei.value)


def test_load_json_reports_line(tmp_path):
    p = write(tmp_path, "bad.json", '{\n  "a": 1,\n  oops\n}')
    with pytest.raises(MalformedInput) as ei:
        enc.load_json(p)
    assert ":3:" in str(ei.value)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 11, 13]), st.lists(st.lists(st.integers(0, 100), max_size=6), min_size=1, max_size=3))
def test_cell_string_roundtrip(p, raw):
    F = gf(p)
    cell = tuple(tuple(c % p for c in digs) for digs in raw)
    assert cell_from_string(F, cell_to_string(F, cell)) == cell


def test_exit_code_table():
    from ffapprox import BudgetExceeded, HorizonInsufficient, PrecisionExhausted, PreconditionError
    from ffapprox.badset import StageError
    assert exit_code_for(MalformedInput("x")) == 1
    assert exit_code_for(PreconditionError("x")) == 2
    assert exit_code_for(HorizonInsufficient("x")) == 2
    assert exit_code_for(BudgetExceeded("x")) == 3
    assert exit_code_for(PrecisionExhausted("x")) == 4
    assert exit_code_for(StageError("cantor", BudgetExceeded("x"))) == 3
    assert {code for _, code in EXIT_CODES} == {1, 2, 3, 4}


# -- subcommands -------------------------------------------------------------------------

def test_cli_expand(tmp_path, capsys):
    v = write(tmp_path, "v.json", {"field": {"p": 2}, "value": {"num": [1], "den": [1, 1]}})
    rc, out, _ = run(capsys, ["expand", "--value", v, "--prec", "6"])
    o = lines(out)[0]
    assert rc == 0 and o["coeffs"] == [1, 1, 1, 1, 1, 1] and o["val"] == 1
    assert o["abs_log"] == "-1" and o["dist_log"] == "-1"


def test_cli_minima(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"field": {"p": 2}, "m": 2, "n": 2,
                                   "entries": [{"val": -1, "coeffs": [1], "prec": None}, [0], [0],
                                               {"val": 1, "coeffs": [1], "prec": None}]})
    rc, out, _ = run(capsys, ["minima", "--matrix", m])
    o = lines(out)[0]
    assert rc == 0
    assert (o["lambda_logs"], o["covol_log"], o["product_check"]) == (["-1", "1"], "-2", "ok")


def test_cli_dirichlet_and_transfer(tmp_path, capsys):
    m = write(tmp_path, "m.json", NAMED)
    rc, out, _ = run(capsys, ["dirichlet", "--matrix", m, "--alpha", "3"])
    assert rc == 0 and lines(out)[0]["holds"] is True
    y = write(tmp_path, "y.json", [[1, 0, 1]])
    rc, out, _ = run(capsys, ["transfer", "--matrix", m, "--y", y, "--eps-log", "-1", "--Y-log", "2"])
    o = lines(out)[0]
    assert rc == 0 and o["holds"] is True and o["kappa"] == {"beta": 1, "k1": "5", "k2": "1", "k3": "2", "k4": "0"}


def test_cli_bestapprox(tmp_path, capsys):
    m = write(tmp_path, "m.json", NAMED)
    rc, out, _ = run(capsys, ["bestapprox", "--matrix", m, "--horizon-log", "5"])
    rows = lines(out)
    assert rc == 0 and [r["i"] for r in rows] == [1, 2, 3, 4, 5, 6]
    assert [r["Ylog"] for r in rows] == ["0", "1", "2", "3", "4", "5"]
    assert rows[0]["product_log"] == "0" and rows[-1]["product_log"] is None


def test_cli_classify_csv(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"field": {"p": 2}, "named": "inv_z"})
    rc, out, _ = run(capsys, ["classify", "--matrix", m, "--format", "csv"])
    assert rc == 0 and out.startswith("# verdict=SINGULAR_CERTIFIED")
    assert out.splitlines()[1] == "k,statistic"


def test_cli_orbit(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"field": {"p": 2}, "named": "inv_z"})
    rc, out, _ = run(capsys, ["orbit", "--matrix", m, "--eps-log", "-1", "--steps", "3"])
    rows = out.splitlines()
    assert rc == 0 and rows[0] == "ell,systole_log,in_X_gt_eps,arithmetic_side"
    assert rows[1].split(",")[2:] == ["true", "false"]


def test_cli_badset_export_feeds_epsbad(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"field": {"p": 2}, "named": "liouville", "prec": 800})
    exp = str(tmp_path / "pts.json")
    rc, out, _ = run(capsys, ["badset", "--matrix", m, "--delta-log", "-4", "--levels", "2",
                              "--export", exp, "--samples", "3"])
    o = lines(out)[0]
    assert rc == 0 and o["bound_ok"] is True and len(o["levels"]) == 3
    pts = json.loads(open(exp).read())
    assert len(pts) == 3 and all(isinstance(s, str) for s in pts)
    rc, out, _ = run(capsys, ["epsbad", "--matrix", m, "--theta", exp, "--index", "2",
                              "--eps-log", "-14", "--horizon-log", "5"])
    assert rc == 0 and lines(out)[0]["verdict"] == "no_violation_up_to_horizon"


def test_cli_badset_with_vectors(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"field": {"p": 2}, "named": "zero"})
    v = write(tmp_path, "v.json", [[[0, 0, 0, 0, 1]], [[0] * 8 + [1]], [[0] * 12 + [1]]])
    rc, out, _ = run(capsys, ["badset", "--matrix", m, "--delta-log", "-4", "--vectors", v])
    o = lines(out)[0]
    assert rc == 0 and [lv["survivors"] for lv in o["levels"]] == [1, 16, 240, 3600]


def test_cli_epsbad_witness(tmp_path, capsys):
    m = write(tmp_path, "m.json", NAMED)
    th = write(tmp_path, "t.json", [[]])
    rc, out, _ = run(capsys, ["epsbad", "--matrix", m, "--theta", th, "--eps-log", "0", "--horizon-log", "4"])
    o = lines(out)[0]
    assert rc == 0 and o["verdict"] == "witness" and o["product_log"] == "-1"


def test_cli_pipeline_terminated(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"field": {"p": 2}, "named": "inv_z"})
    rc, out, _ = run(capsys, ["pipeline", "--matrix", m, "--delta-log", "-4"])
    assert rc == 0 and lines(out)[0]["path"] == "terminated"


# -- errors and configuration ------------------------------------------------------------

def test_cli_exit_codes(tmp_path, capsys):
    m = write(tmp_path, "m.json", NAMED)
    bad = write(tmp_path, "bad.json", "{")
    assert run(capsys, ["minima", "--matrix", bad])[0] == 1
    with pytest.raises(SystemExit) as ei:
        main(["bogus"])
    assert ei.value.code == 1
    assert run(capsys, ["dirichlet", "--matrix", m])[0] == 1                   # missing --alpha
    rc, _, err = run(capsys, ["badset", "--matrix", m, "--delta-log", "-3"])
    assert rc == 2 and "delta" in err
    short = write(tmp_path, "s.json", {"field": {"p": 2}, "named": "alpha_quad", "prec": 6})
    assert run(capsys, ["bestapprox", "--matrix", short, "--horizon-log", "20"])[0] == 4
    big = write(tmp_path, "b.json", {"field": {"p": 2}, "named": "liouville", "prec": 800})
    assert run(capsys, ["badset", "--matrix", big, "--delta-log", "-4", "--budget", "4"])[0] in (0, 3)


def test_cli_config_precedence(tmp_path, capsys):
    m = write(tmp_path, "m.json", NAMED)
    cfg = write(tmp_path, "c.cfg", f"# defaults\nmatrix = {m}\nhorizon-log = 2\n")
    rc, out, _ = run(capsys, ["bestapprox", "--config", cfg])
    assert rc == 0 and len(lines(out)) == 3
    rc, out, _ = run(capsys, ["bestapprox", "--config", cfg, "--horizon-log", "4"])
    assert rc == 0 and len(lines(out)) == 5


def test_cli_config_unknown_key(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "\nwhatever = 1\n")
    rc, _, err = run(capsys, ["bestapprox", "--config", cfg])
    assert rc == 1 and ":2:" in err and "whatever" in err


def test_cli_selftest_small(capsys):
    rc, out, _ = run(capsys, ["selftest", "--scale", "0.05"])
    assert rc == 0 and out.rstrip().endswith("ALL PASS")
