import math

import pytest

import orlicz


@pytest.fixture(scope="module")
def grid():
    return orlicz.build_grid(2, 128)


def test_ball_affine_value(grid):
    ball = orlicz.ConvexBody.ball(1.0, 2)
    phi = orlicz.OrliczFunction.power(2, 2)
    r = orlicz.affine_orlicz(ball, phi, grid, restarts=2, seed=1)
    assert r["direction"] == "inf"
    assert r["value"] == pytest.approx(2 * math.pi, rel=1e-2)
    assert orlicz.ellipsoid_closed_form(ball, phi) == pytest.approx(2 * math.pi)


def test_square_is_degenerate(grid):
    sq = orlicz.ConvexBody.vpolytope([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    r = orlicz.affine_orlicz(sq, orlicz.OrliczFunction.power(2, 2), grid)
    assert r["degenerate"]
    assert r["value"] == 0.0
    assert sq.volume() == pytest.approx(4.0)


def test_v_phi_constant_is_volume():
    sq = orlicz.ConvexBody.vpolytope([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    ball = orlicz.ConvexBody.ball(1.0, 2)
    assert orlicz.v_phi(sq, ball, orlicz.OrliczFunction.constant(1, 2)) == pytest.approx(4.0)
    assert orlicz.v_p(sq, sq, 1.0) == pytest.approx(4.0)


def test_json_round_trip():
    E = orlicz.ConvexBody.ellipsoid(orlicz.random_sl(2, 3, 4.0))
    back = orlicz.ConvexBody.from_json(E.to_json())
    assert back.kind == "ellipsoid"
    assert back.volume() == E.volume()


def test_phi_parse_and_class():
    assert orlicz.OrliczFunction.parse("power:2", 2).cls == "Phi"
    assert orlicz.OrliczFunction.parse("arctan_inv_n", 2).cls == "Psi"
    f = orlicz.OrliczFunction.custom(lambda t: t**3, 2, "cube")
    assert f(2.0) == 8.0


def test_errors_carry_codes():
    with pytest.raises(orlicz.OrliczError) as e:
        orlicz.OrliczFunction.parse("wobble", 2)
    assert e.value.code == "ParseError"
    with pytest.raises(orlicz.OrliczError) as e:
        orlicz.build_grid(2, 1)
    assert e.value.code == "InvalidResolution"


def test_run_suite(grid):
    corpus = orlicz.golden_corpus(smooth=2, polytopes=1, ellipsoids=1, resolution=128, seed=7)
    phis = [orlicz.OrliczFunction.power(2, 2)]
    rep = orlicz.run_suite("comparison", corpus, phis, grid, restarts=2)
    assert rep["suite"] == "comparison"
    assert rep["counts"]["Violated"] == 0
    assert len(rep["cases"]) == 12
    csv = orlicz.run_suite("comparison", corpus, phis, grid, restarts=2, csv=True)
    assert csv.startswith("suite,bodies,phis,claim")
    assert "isoperimetric" in orlicz.suite_names()
