import math
import random

import numpy as np
import pytest

from planejac.gaussian import GaussianRational
from planejac.lattice import (LatticeBox, MetricValue, brute_force_fiber_points,
                              dhat, dist_upper_bound, enumerate_fiber_points,
                              fiber_count_bounds, laurent_identity_check,
                              unit_disk_lattice_count, verify_dhat_inequality,
                              verify_dist_inequality)
from planejac.exceptional import PlaneCurveSet
from planejac.poly import PolyMap

from conftest import UV, pe, random_poly


# ----------------------------------------------------------------- fiber sets

def test_fiber_points_ml_k1(ml_map):
    out = enumerate_fiber_points(ml_map.p, 1, LatticeBox(2))
    # x^6 y^4 + 2 x^2 y = 1 at (i, -1) and (-i, -1)
    assert out.points == [((0, -1), (-1, 0)), ((0, 1), (-1, 0))]
    assert out.count() == 2
    assert out.line_fiber is None


def test_fiber_points_ml_k3(ml_map):
    out = enumerate_fiber_points(ml_map.p, 3, LatticeBox(2))
    assert out.points == [((-1, 0), (1, 0)), ((1, 0), (1, 0))]


def test_fiber_line_degenerate():
    out = enumerate_fiber_points(pe("x"), 2, LatticeBox(3))
    assert out.points == []
    assert out.line_fiber == {"x_values": [[2, 0]], "count_each": 49}
    assert out.count() == 49


def test_fiber_rejects_nonintegral():
    with pytest.raises(ValueError):
        enumerate_fiber_points(pe("x^-1*y"), 1, LatticeBox(1))


def test_fiber_other_ring():
    out = enumerate_fiber_points(pe("y"), 1, LatticeBox(2, ring_m=2))
    # y = 1 for every x in the box
    assert len(out.points) == 25
    assert all(y == (1, 0) for _, y in out.points)


def test_fiber_matches_brute_force():
    rng = random.Random(47)
    box = LatticeBox(2)
    hits = 0
    for _ in range(10):
        f = random_poly(rng, max_deg=3, n_terms=3, int_coeffs=True)
        if (f.degree_in("y") or 0) == 0:
            continue
        k = rng.randint(-3, 3)
        fast = enumerate_fiber_points(f, k, box)
        assert fast.points == brute_force_fiber_points(f, k, box)
        hits += 1
    assert hits >= 7


def test_fiber_monotone_in_box(ml_map):
    small = enumerate_fiber_points(ml_map.p, 1, LatticeBox(2)).points
    large = enumerate_fiber_points(ml_map.p, 1, LatticeBox(3)).points
    assert set(small) <= set(large)


# ----------------------------------------------------------------- d-hat

def test_dhat_pinned_value(ml_curve):
    mv = dhat((3.0, 7.0), ml_curve)
    assert mv.kind == "dhat-exact-numeric"
    assert abs(mv.value - (7 - 3 * math.sqrt(3))) < 1e-9
    u, v = mv.witness
    assert abs(u - 3) < 1e-12 and abs(v - 3 * math.sqrt(3)) < 1e-9


def test_dhat_infinite_on_vertical_line_curve():
    curve = PlaneCurveSet(pe("u", UV), ["supplied"])
    mv = dhat((1.0, 1.0), curve)
    assert math.isinf(mv.value)
    assert mv.witness is None


def test_dhat_zero_on_contained_line():
    curve = PlaneCurveSet(pe("u", UV), ["supplied"])
    # q sits on the line {u = 0} inside the curve: the u-slice at q1 = 0
    # vanishes identically
    mv = dhat((0.0, 5.0), curve)
    assert mv.value == 0.0
    assert mv.witness == (0.0, 5.0)


def test_dhat_on_curve_point_is_zero(ml_curve):
    mv = dhat((4.0, 8.0), ml_curve)  # 4^4 - 4*64 = 0
    assert mv.value < 1e-9


def test_dhat_symmetric_under_coordinate_swap(ml_curve):
    swapped = PlaneCurveSet(pe("v^4 - v*u^2", UV), ["supplied"])
    rng = random.Random(53)
    for _ in range(20):
        q1 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        q2 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        a = dhat((q1, q2), ml_curve).value
        b = dhat((q2, q1), swapped).value
        if math.isinf(a) or math.isinf(b):
            assert math.isinf(a) and math.isinf(b)
        else:
            assert abs(a - b) < 1e-7


def test_dhat_rejects_empty_curve():
    empty = PlaneCurveSet(pe("1", UV), [])
    with pytest.raises(ValueError):
        dhat((0.0, 0.0), empty)


# ----------------------------------------------------------------- Dist

def test_dist_pinned_bound(ml_curve):
    mv = dist_upper_bound((3.0, 7.0), ml_curve)
    assert mv.kind == "dist-upper-bound"
    # (4, 8) lies on the curve at Chebyshev distance 1
    assert mv.value <= 1 + 1e-9
    u, v = mv.witness
    assert abs(complex(ml_curve.defining.evaluate({"u": u, "v": v}))) < 1e-6


def test_dist_witness_on_curve(ml_curve):
    rng = random.Random(59)
    for _ in range(15):
        q = (complex(rng.uniform(-4, 4), rng.uniform(-4, 4)),
             complex(rng.uniform(-4, 4), rng.uniform(-4, 4)))
        mv = dist_upper_bound(q, ml_curve, refinement=10)
        u, v = mv.witness
        scale = max(1.0, abs(u) ** 4, abs(u) * abs(v) ** 2)
        assert abs(complex(ml_curve.defining.evaluate({"u": u, "v": v}))) < 1e-6 * scale


def test_dist_below_dhat(ml_curve):
    # Dist minimizes over the whole curve, d-hat only along the two slices
    rng = random.Random(67)
    for _ in range(1000):
        q = (complex(rng.uniform(-5, 5), rng.uniform(-5, 5)),
             complex(rng.uniform(-5, 5), rng.uniform(-5, 5)))
        dv = dist_upper_bound(q, ml_curve, refinement=0).value
        hv = dhat(q, ml_curve).value
        assert dv <= hv + 1e-9


def test_dist_zero_on_contained_line():
    curve = PlaneCurveSet(pe("v", UV), ["supplied"])
    mv = dist_upper_bound((2.5, 0.0), curve)
    assert mv.value == 0.0


# ----------------------------------------------------------------- sweeps

def test_verify_dist_small_box(ml_map, ml_curve):
    out = verify_dist_inequality(ml_map, ml_curve, LatticeBox(1), refinement=15)
    assert out["checked"] == 81
    assert out["unconfirmed"] == []
    assert out["confirmed"] == 81
    assert 0 < out["max_bound"] <= 1 + 1e-9
    # images of axis points land on the curve itself
    assert all(v["bound"] <= 1e-6 for v in out["axis_points"])


def test_verify_dist_empty_curve(ml_map):
    empty = PlaneCurveSet(pe("1", UV), [])
    out = verify_dist_inequality(ml_map, empty, LatticeBox(1))
    assert out["empty_curve"] and out["checked"] == 0


def test_verify_dhat_finds_violations(ml_map, ml_curve):
    out = verify_dhat_inequality(ml_map, ml_curve, LatticeBox(1))
    assert out["checked"] == 81
    assert len(out["violations"]) == 64
    # every violation is off-axis: d-hat stays small on the axes
    assert all(v["p"][0:2] != [0, 0] and v["p"][2:4] != [0, 0]
               for v in out["violations"])
    pinned = [v for v in out["violations"] if v["p"] == [1, 0, 1, 0]]
    assert len(pinned) == 1
    assert abs(pinned[0]["value"] - 1.803847577293368) < 1e-9
    assert abs(out["max_finite_value"] - 2.2714010519128927) < 1e-9


# ------------------------------------------------------- bounds and the disk

def test_fiber_count_bounds(ml_map, ml_curve):
    b4, b5 = fiber_count_bounds(ml_map, 4, ml_curve)
    assert b4 == 80
    assert b5 == pytest.approx(160.0)


def test_unit_disk_counts():
    assert unit_disk_lattice_count((2.0, 1 + 1j)) == 5
    assert unit_disk_lattice_count((0.0, 0.5 + 0.5j)) == 4
    assert unit_disk_lattice_count((1.0, 0.5)) == 2
    assert unit_disk_lattice_count((0.5, 0.0)) == 0


def test_unit_disk_counts_never_exceed_five():
    rng = random.Random(73)
    for _ in range(10000):
        c1 = complex(rng.randint(-3, 3), rng.randint(-3, 3))
        c2 = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        assert unit_disk_lattice_count((c1, c2)) <= 5


# ------------------------------------------------------- Laurent identities

def test_laurent_identities_hold(ml_map):
    r_p, r_q = laurent_identity_check(ml_map)
    assert r_p.is_zero() and r_q.is_zero()


def test_laurent_identity_flags_variant(ml_map_printed):
    r_p, r_q = laurent_identity_check(ml_map_printed)
    assert r_p == pe("x^2*y")
    assert r_q.is_zero()


# ------------------------------------------------------- shapes

def test_box_validation():
    with pytest.raises(ValueError):
        LatticeBox(0)
    with pytest.raises(ValueError):
        LatticeBox(2, ring_m=0)
    assert LatticeBox(3).side() == 7


def test_metric_json():
    mv = MetricValue(value=math.inf, witness=None, kind="dhat-exact-numeric")
    j = mv.to_json()
    assert j["infinite"] and j["value"] is None and j["witness"] is None
