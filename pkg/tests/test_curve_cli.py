import json
import math

import pytest

from kchaug.cli import main
from kchaug.curve import (
    CSV_COLUMNS,
    CurvePoint,
    consistency_check,
    default_grid,
    factor_residual,
    normalize,
    parse_grid,
    points_from_csv,
    points_from_json,
    points_to_csv,
    points_to_json,
    pretzel_factor,
    resolve_alias,
    sample_curve,
    stable_a_poly_torus,
    torus_factor,
)
from kchaug.laurent import LAMBDA, MU, ONE
from kchaug.ncpoly import parse_laurent


def L(text):
    return parse_laurent(text)


# -- sampling ----------------------------------------------------------------

def test_torus_point_at_two():
    pts = sample_curve("torus", {"p": 2, "q": 3}, [2.0], [2])
    assert len(pts) == 1
    assert pts[0].lambda0 == pytest.approx(-0.125)
    assert pts[0].mu0 == 2.0 and pts[0].degree == 2


def test_pretzel_point_at_two():
    pts = sample_curve("pretzel", {"k": 2}, [2.0], [3])
    assert pts and all(p.lambda0 == pytest.approx(2.0 ** -10, abs=1e-12) for p in pts)


@pytest.mark.parametrize("family,params", [("torus", {"p": 3, "q": 4}), ("twobridge", {"p": 5, "q": 3}),
                                           ("pretzel", {"k": 1})])
def test_degree_one_is_abelian(family, params):
    pts = sample_curve(family, params, [0.7 + 0.4j], [1])
    assert [p.family for p in pts] == ["abelian"]
    assert pts[0].lambda0 == pytest.approx(1)


def test_points_respect_tolerance():
    for pt in sample_curve("torus", {"p": 3, "q": 5}, default_grid(6), tol=1e-8):
        assert pt.residual <= 1e-9


def test_default_grid_avoids_unit_circle():
    grid = default_grid(25)
    assert len(grid) == 25
    assert {round(abs(z), 12) for z in grid} == {0.8, 1.25}
    assert parse_grid("7") == default_grid(7)
    assert parse_grid("2,0;0.5,-1") == [2.0, 0.5 - 1j]


# -- factors -----------------------------------------------------------------

def test_abelian_factor_exact():
    pts = sample_curve("torus", {"p": 2, "q": 3}, default_grid(5), [1])
    assert factor_residual(LAMBDA - ONE, pts).max_abs <= 1e-14


def test_torus_3_4_factor_and_witness():
    pts = sample_curve("torus", {"p": 3, "q": 4}, default_grid(50), [3])
    assert len(pts) >= 50
    good = factor_residual(L("l*m^8 - 1"), pts)
    bad = factor_residual(L("l*m^8 + 1"), pts)
    assert good.max_abs <= 1e-9
    assert min(abs(v) for v in bad.values) >= 1
    assert normalize(torus_factor(3, 4, 3)) == L("l*m^8 - 1")


def test_stable_a_polynomial_examples():
    assert stable_a_poly_torus(2, 3) == normalize((LAMBDA * MU ** 3 + ONE) * (LAMBDA - ONE))
    expected = (LAMBDA * MU ** 10 - ONE) * (LAMBDA - ONE) * (LAMBDA ** 2 * MU ** 15 - ONE)
    assert stable_a_poly_torus(3, 5) == normalize(expected)
    s = stable_a_poly_torus(3, 5)
    assert normalize(s) == s


def test_pretzel_factor_vanishes():
    for k in (1, 2, 3):
        pts = sample_curve("pretzel", {"k": k}, default_grid(5), [3])
        assert pts
        assert factor_residual(pretzel_factor(k), pts).max_abs <= 1e-8
        assert all(abs(1 - p.lambda0 * p.mu0 ** (2 * k + 6)) <= 1e-8 for p in pts)


def test_normalize_examples():
    assert normalize(L("2*l^2*m^-1 - 2*l*m^-1")) == L("l - 1")
    assert normalize(L("-l + 1")) == L("l - 1")
    assert normalize(L("l*m^3 + 1")) == L("l*m^3 + 1")
    with pytest.raises(ValueError):
        normalize(L("0"))


# -- serialization ------------------------------------------------------------

def test_csv_and_json_roundtrip_lossless():
    pts = sample_curve("torus", {"p": 2, "q": 5}, default_grid(4))
    pts += sample_curve("pretzel", {"k": 2}, default_grid(2), [3])
    text = points_to_csv(pts)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    back = points_from_csv(text)
    assert [(p.lambda0, p.mu0, p.degree, p.family, p.residual) for p in back] == \
        [(p.lambda0, p.mu0, p.degree, p.family, p.residual) for p in pts]
    assert points_from_json(points_to_json(pts)) == pts


def test_curve_point_validation():
    with pytest.raises(ValueError):
        CurvePoint(0, 2, "torus", 2, {}, 0.0)
    with pytest.raises(ValueError):
        CurvePoint(1, 2, "knot", 2, {}, 0.0)


# -- consistency ---------------------------------------------------------------

def test_aliases():
    assert resolve_alias("trefoil")["braid"] == [2, [1, 1, 1]]
    assert resolve_alias("T(2,5)") == {"braid": [2, [1] * 5], "presentations": ["torus:2,5"]}
    with pytest.raises(KeyError):
        resolve_alias("no-such-knot")


def test_trefoil_consistency_at_two():
    rep = consistency_check("trefoil", [2.0])
    assert rep.passed
    row = rep.rows[0]
    assert sorted(round(z.real, 9) for z in row["solver"]) == [-0.125, 1.0]


def test_torus_alias_consistency():
    assert consistency_check("T(2,5)", [0.8 * math.e ** (1.1j)], attempts=80).passed


def test_alias_file(tmp_path, capsys):
    path = tmp_path / "aliases.json"
    path.write_text(json.dumps({"my-trefoil": {"braid": [3, [1, 1, 1, 2]], "presentations": ["torus:2,3"]}}))
    code, _ = run(capsys, "consistency", "my-trefoil", "--aliases", str(path), "--grid", "2,0")
    assert code == 0


def test_figure_eight_consistency():
    rep = consistency_check("figure-eight", [0.8 * math.e ** (0.5j)], attempts=80)
    assert rep.passed, rep.rows
    assert len(rep.rows[0]["reps"]) == 3  # abelian point plus two Riley roots


# -- CLI ---------------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_cli_ideal(capsys):
    code, out = run(capsys, "ideal", "--strands", "2", "--braid", "1,1,1")
    assert code == 0 and len(out.strip().splitlines()) == 12


def test_cli_aug_solve(capsys):
    code, out = run(capsys, "aug", "solve", "--strands", "2", "--braid", "1,1,1", "--mu0", "2,0",
                    "--attempts", "30", "--seed", "42")
    data = json.loads(out)
    assert code == 0
    assert data["mu0"] == [2.0, 0.0]
    lams = sorted(round(s["lambda0"][0], 9) for s in data["solutions"])
    assert lams == [-0.125, 1.0]
    assert set(data["solutions"][0]["values"]) == {"a12", "a21"}


def test_cli_rep_reports(capsys):
    code, out = run(capsys, "rep", "torus", "--p", "3", "--q", "5", "--dim", "3", "--mu0", "0.7,0.2")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["irreducible"]
    assert len(data["matrices"]["x"]) == 3 and len(data["matrices"]["x"][0][0]) == 2
    code, out = run(capsys, "rep", "twobridge", "--p", "5", "--q", "3", "--mu0", "0.7,0.2", "--root", "1")
    assert code == 0 and json.loads(out)["n_roots"] == 2
    code, out = run(capsys, "rep", "pretzel", "--k", "2", "--mu0", "2,0")
    assert code == 0 and json.loads(out)["lambda0"][0] == pytest.approx(2 ** -10)


def test_cli_rep_failure_exit_code(capsys):
    code, out = run(capsys, "rep", "torus", "--p", "3", "--q", "3", "--dim", "2", "--mu0", "0.7,0.2")
    assert code != 0


def test_cli_curve_csv(capsys):
    code, out = run(capsys, "--grid", "3", "--out", "csv", "curve", "torus", "--p", "2", "--q", "3")
    assert code == 0
    pts = points_from_csv(out)
    assert {p.degree for p in pts} == {1, 2}


def test_cli_factor_check(capsys):
    code, out = run(capsys, "factor-check", "torus", "--p", "3", "--q", "4", "--grid", "5")
    assert code == 0 and json.loads(out)["passed"]
    code, _ = run(capsys, "factor-check", "torus", "--p", "3", "--q", "4", "--dims", "3",
                  "--poly", "l*m^8 + 1", "--grid", "5")
    assert code == 1
    code, out = run(capsys, "factor-check", "--normalize", "2*l^2*m^-1 - 2*l*m^-1")
    assert code == 0 and out.strip() == "-1 + l"


def test_cli_consistency_and_verify(capsys):
    code, _ = run(capsys, "consistency", "trefoil", "--grid", "2,0")
    assert code == 0
    code, out = run(capsys, "verify", "all", "--only", "1,7")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_cli_quiet(capsys):
    code, out = run(capsys, "--quiet", "ideal", "--strands", "2", "--braid", "1,1,1")
    assert code == 0 and out == ""
