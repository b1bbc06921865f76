import random

import pytest

from planejac.gaussian import GaussianRational
from planejac.poly import Poly, PolyMap, compose_map, jacobian
from planejac.series import (SeriesMap, TruncSeries1, TruncSeries2,
                             compose_truncated, detect_polynomial_tail,
                             local_inverse, restrict_to_axis, translate_map,
                             truncate)

from conftest import (UV, XY, pe, random_automorphism, random_poly,
                      rename_xy_to_uv)


def _one(n):
    return GaussianRational(n)


# ---------------------------------------------------------------- truncation

def test_truncate_cubic_to_linear():
    p = (Poly.const(1, UV) + Poly.var("u", UV) + Poly.var("v", UV)) ** 3
    s = truncate(p, 1)
    assert s.terms == {(0, 0): _one(1), (1, 0): _one(3), (0, 1): _one(3)}


def test_truncate_drops_high_terms(ml_map):
    s = truncate(ml_map.p, 3, vars=XY)
    assert s.terms == {(2, 1): _one(2)}


def test_truncate_rejects_laurent():
    with pytest.raises(ValueError):
        truncate(pe("u^-1", UV), 4)


def test_series_arithmetic_meets_orders():
    a = TruncSeries2(5, {(1, 0): _one(1)})
    b = TruncSeries2(3, {(0, 1): _one(2)})
    assert (a + b).order == 3
    assert (a * b).order == 3
    assert (a * b).terms == {(1, 1): _one(2)}


def test_series_pow_matches_repeated_mul():
    s = TruncSeries2(6, {(1, 0): _one(1), (0, 1): _one(-2), (1, 1): _one(3)})
    assert s ** 3 == s * s * s


# ------------------------------------------------------------- local inverse

def test_local_inverse_identity():
    G = local_inverse(PolyMap(pe("x"), pe("y")), 8)
    assert G.g1.terms == {(1, 0): _one(1)}
    assert G.g2.terms == {(0, 1): _one(1)}


def test_local_inverse_elementary_shear():
    G = local_inverse(PolyMap(pe("x"), pe("y + x^2")), 10)
    assert G.g1.terms == {(1, 0): _one(1)}
    assert G.g2.terms == {(0, 1): _one(1), (2, 0): _one(-1)}


def test_local_inverse_two_sided_identity():
    F = PolyMap(pe("x + y^2"), pe("y + x^2"))
    n = 12
    G = local_inverse(F, n)
    # F o G is the identity through total degree n
    C = compose_truncated(G, F)
    assert C.g1.terms == {(1, 0): _one(1)}
    assert C.g2.terms == {(0, 1): _one(1)}
    # G o F likewise: substitute the polynomial map into the series
    gf_p = compose_map(G.g1.to_poly(), F)
    gf_q = compose_map(G.g2.to_poly(), F)
    assert truncate(gf_p, n, vars=XY).terms == {(1, 0): _one(1)}
    assert truncate(gf_q, n, vars=XY).terms == {(0, 1): _one(1)}


def test_local_inverse_requires_origin_and_invertible_linear_part():
    with pytest.raises(ValueError):
        local_inverse(PolyMap(pe("x + 1"), pe("y")), 4)
    with pytest.raises(ValueError):
        local_inverse(PolyMap(pe("x^2"), pe("y^2")), 4)


def test_local_inverse_is_deterministic_and_order_coherent():
    rng = random.Random(41)
    for _ in range(10):
        h1 = random_poly(rng, max_deg=3, n_terms=3, int_coeffs=True)
        h2 = random_poly(rng, max_deg=3, n_terms=3, int_coeffs=True)
        # keep only the degree >= 2 part so the linear part stays the identity
        h1 = Poly(XY, {e: c for e, c in h1.terms.items() if sum(e) >= 2})
        h2 = Poly(XY, {e: c for e, c in h2.terms.items() if sum(e) >= 2})
        F = PolyMap(pe("x") + h1, pe("y") + h2)
        G16 = local_inverse(F, 16)
        assert G16 == local_inverse(F, 16)
        G8 = local_inverse(F, 8)
        assert G16.g1.truncated(8) == G8.g1
        assert G16.g2.truncated(8) == G8.g2


def test_local_inverse_recovers_exact_automorphism_inverse():
    rng = random.Random(99)
    for _ in range(10):
        M, Minv = random_automorphism(rng)
        n = 10
        G = local_inverse(M, n)
        assert G.g1 == truncate(rename_xy_to_uv(Minv.p), n)
        assert G.g2 == truncate(rename_xy_to_uv(Minv.q), n)


# ---------------------------------------------------------------- translation

def test_translate_identity_like_map():
    F = PolyMap(pe("x"), pe("y"))
    G = translate_map(F, GaussianRational(3), GaussianRational(5))
    assert G.p == pe("x") and G.q == pe("y")


def test_translate_ml_map_fixes_origin(ml_map):
    for a, b in ((GaussianRational(1), GaussianRational(1)),
                 (GaussianRational(0, 1), GaussianRational(1))):
        G = translate_map(ml_map, a, b)
        z = GaussianRational(0)
        assert not G.p.evaluate({"x": z, "y": z})
        assert not G.q.evaluate({"x": z, "y": z})
        assert G.is_integral()
        # same map up to the shift: compare values at a random exact point
        x0, y0 = GaussianRational(2, -1, 3), GaussianRational(-1, 1, 2)
        lhs = G.p.evaluate({"x": x0, "y": y0})
        rhs = (ml_map.p.evaluate({"x": x0 + a, "y": y0 + b})
               - ml_map.p.evaluate({"x": a, "y": b}))
        assert lhs == rhs


def test_translate_preserves_constant_jacobian():
    F = PolyMap(pe("x + y^3"), pe("y"))
    G = translate_map(F, GaussianRational(2), GaussianRational(-3))
    assert jacobian(G) == jacobian(F)


# ------------------------------------------------------------- axis restriction

def test_restrict_to_axis_examples():
    G = local_inverse(PolyMap(pe("x"), pe("y + x^2")), 16)
    r1, r2 = restrict_to_axis(G, "u")
    assert r1.coeffs == {1: _one(1)}
    assert r2.coeffs == {2: _one(-1)}
    s1, s2 = restrict_to_axis(G, "v")
    assert s1.coeffs == {}
    assert s2.coeffs == {1: _one(1)}


def test_restrict_bad_axis():
    G = local_inverse(PolyMap(pe("x"), pe("y")), 4)
    with pytest.raises(ValueError):
        restrict_to_axis(G, "x")


# ------------------------------------------------------------- tail detection

def test_tail_all_ones_is_not_poly():
    s = TruncSeries1(10, {d: _one(1) for d in range(1, 11)})
    rep = detect_polynomial_tail(s, 4)
    assert rep["verdict"] == "not-poly"
    assert rep["witness_degree"] == 7


def test_tail_vanishing_is_poly_like():
    G = local_inverse(PolyMap(pe("x"), pe("y + x^2")), 16)
    _, r2 = restrict_to_axis(G, "u")
    rep = detect_polynomial_tail(r2, 8)
    assert rep == {"verdict": "poly-like", "window": 8, "order": 16}


def test_tail_tapering_rationals_are_inconclusive():
    s = TruncSeries1(12, {d: GaussianRational(1, 0, 2 ** d) for d in range(1, 13)})
    assert detect_polynomial_tail(s, 6)["verdict"] == "inconclusive"


def test_tail_window_must_fit():
    s = TruncSeries1(4, {1: _one(1)})
    with pytest.raises(ValueError):
        detect_polynomial_tail(s, 5)


def test_tail_verdict_for_symmetric_quadratic_map_is_stable():
    F = PolyMap(pe("x + y^2"), pe("y + x^2"))
    verdicts = []
    for n in (20, 30):
        r1, r2 = restrict_to_axis(local_inverse(F, n), "u")
        verdicts.append((detect_polynomial_tail(r1, 8)["verdict"],
                         detect_polynomial_tail(r2, 8)["verdict"]))
    assert verdicts[0] == verdicts[1] == ("not-poly", "not-poly")


# ----------------------------------------------------------------- shape / io

def test_series_map_order_mismatch():
    with pytest.raises(ValueError):
        SeriesMap(TruncSeries2(3), TruncSeries2(4))


def test_series_json_round_shape():
    s = TruncSeries2(4, {(1, 0): GaussianRational(1, -2, 3), (0, 2): _one(5)})
    j = s.to_json()
    assert j["order"] == 4
    assert {"eu": 1, "ev": 0, "re_num": 1, "im_num": -2, "den": 3} in j["terms"]
    assert "O(deg 5)" in str(s)
