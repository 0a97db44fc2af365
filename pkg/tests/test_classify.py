import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eghz import classify as cl
from eghz.classify import Class
from eghz.numerics import eig_hermitian, partial_transpose
from eghz.states import (
    P_GHZ_MINUS,
    P_GHZ_PLUS,
    SQRT3,
    ExtSymParams,
    PhysicalityError,
    make_extended,
    make_werner,
    reflect_x,
)
from eghz.twirl import ProductParams, product_image

from conftest import random_valid, valid_params


class TestStationary:
    def test_equal_slice_value(self):
        assert cl.separable_xmax_stationary(1 / 16, 1 / 16, 1 / 16) == pytest.approx(0.75**1.5 / 8, abs=1e-15)
        assert cl.separable_xmax_stationary(1 / 16, 1 / 16, 1 / 16) == pytest.approx(0.081190, abs=1e-6)

    def test_anti_slice_value(self):
        assert cl.separable_xmax_stationary(-0.1, -0.1, 0.1) == pytest.approx(0.6**1.5 / 8, abs=1e-15)
        assert cl.separable_xmax_stationary(-0.1, -0.1, 0.1) == pytest.approx(0.058095, abs=1e-6)

    def test_negative_product_has_no_stationary_point(self):
        assert cl.separable_xmax_stationary(0.05, 0.05, -0.05) is None

    def test_infeasible_y_raises(self):
        with pytest.raises(ValueError, match="no physical state"):
            cl.separable_xmax_stationary(0.1, 0.1, -0.1)

    def test_single_zero_is_degenerate(self):
        assert cl.separable_xmax_stationary(0.1, 0.05, 0.0) is None

    @pytest.mark.parametrize("y", [-0.2, -0.1, 0.0, 0.05, 0.125, 0.25])
    def test_axis_limit(self, y):
        assert cl.separable_xmax_stationary(0.0, 0.0, y) == pytest.approx((1 - 4 * abs(y)) / 8, abs=1e-15)

    def test_axis_limit_is_approached_by_nearby_points(self):
        # y1 = y2 = eps -> 0 for y > 0, y1 = -y2 = eps for y < 0
        for y, sgn in ((0.1, 1), (-0.1, -1)):
            v = cl.separable_xmax_stationary(1e-7, sgn * 1e-7, y)
            assert v == pytest.approx((1 - 4 * abs(y)) / 8, abs=1e-5)

    def test_moduli_reproduce_constraints(self, rng):
        hits = 0
        for p in random_valid(rng, 3000):
            mod = cl.stationary_moduli(*p.ys)
            v = cl.separable_xmax_stationary(*p.ys)
            assert (mod is None) == (v is None)
            if mod is None:
                continue
            hits += 1
            img = product_image(ProductParams(*mod))
            np.testing.assert_allclose(img.ys, p.ys, atol=1e-10)
            assert img.x == pytest.approx(v, abs=1e-12)
        assert hits > 500

    @settings(max_examples=300, deadline=None)
    @given(valid_params())
    def test_below_ppt(self, p):
        v = cl.separable_xmax_stationary(*p.ys)
        if v is not None:
            assert v <= cl.ppt_xmax(*p.ys) + 1e-10

    def test_bruteforce_product_surface(self):
        # every product image maps back to itself through the stationary formula
        rng = np.random.default_rng(3)
        for a in rng.uniform(0.01, 0.99, size=(500, 3)):
            img = product_image(ProductParams(*a))
            assert cl.separable_xmax_stationary(*img.ys) == pytest.approx(img.x, abs=1e-9)


class TestSeparableXmax:
    @pytest.mark.parametrize("method", ["analytic", "hull_oracle", "ppt"])
    def test_origin(self, method):
        v, _ = cl.separable_xmax(0, 0, 0, method=method, n_images=2000)
        assert v == pytest.approx(1 / 8, abs=1e-12)

    def test_ppt_is_outer(self):
        v, tag = cl.separable_xmax(1 / 16, 1 / 16, 1 / 16, method="ppt")
        assert v == pytest.approx(0.09375, abs=1e-15) and tag is cl.Certainty.UPPER
        a, tag = cl.separable_xmax(1 / 16, 1 / 16, 1 / 16, method="analytic")
        assert a == pytest.approx(0.081190, abs=1e-6) and tag is cl.Certainty.EXACT_POINT
        assert v >= a

    def test_werner_boundary(self):
        v, _ = cl.separable_xmax(0.05, 0.05, 0.05, method="ppt")
        assert v == pytest.approx(0.1, abs=1e-15)

    def test_analytic_falls_back_to_hull(self):
        v, tag = cl.separable_xmax(0.05, 0.05, -0.05, method="analytic", n_images=2000)
        assert tag is cl.Certainty.LOWER
        assert v == pytest.approx(1 / 8 - 3 * 0.05 / 2, abs=1e-9)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            cl.separable_xmax(0, 0, 0, method="magic")


class TestSlices:
    def test_equal_endpoint_pinches(self):
        row = cl.slice_boundary("equal", 5)[-1]
        assert row.y == 0.25
        assert row.x_stationary == pytest.approx(0, abs=1e-15)
        assert row.x_hull == pytest.approx(0, abs=1e-15)
        assert row.x_ppt == row.x_phys == pytest.approx(0, abs=1e-15) or row.x_ppt == pytest.approx(0, abs=1e-15)

    def test_equal_origin(self):
        rows = cl.slice_boundary("equal", 13)  # grid on [-1/12, 1/4] contains 0
        row = next(r for r in rows if abs(r.y) < 1e-15)
        assert row.x_stationary == pytest.approx(1 / 8)
        assert row.x_hull == pytest.approx(1 / 8, abs=1e-12)
        assert row.x_ppt == pytest.approx(1 / 8)

    def test_axis_eighth(self):
        rows = cl.slice_boundary("axis", 17)
        row = next(r for r in rows if abs(r.y - 1 / 8) < 1e-15)
        assert row.x_hull == pytest.approx(1 / 16, abs=1e-12)
        assert row.x_ppt == pytest.approx(1 / 16, abs=1e-15)

    @pytest.mark.parametrize("name", ["equal", "anti", "axis"])
    def test_hull_matches_ppt_on_slices(self, name):
        for r in cl.slice_boundary(name, 201):
            assert r.x_hull == pytest.approx(r.x_ppt, abs=1e-6)
            if r.x_stationary is not None:
                assert r.x_stationary <= r.x_hull + 1e-12

    def test_equal_hull_closed_form(self):
        for r in cl.slice_boundary("equal", 301):
            assert r.x_hull == pytest.approx(min(1 / 8 + 1.5 * r.y, 1 / 8 - r.y / 2), abs=1e-6)

    def test_unknown_slice(self):
        with pytest.raises(ValueError):
            cl.slice_boundary("diagonal", 10)

    def test_slice_formulas(self):
        for y in np.linspace(1e-3, 0.25, 100):
            assert cl.separable_xmax_stationary(y, y, y) == pytest.approx((1 - 4 * y) ** 1.5 / 8, abs=1e-12)
        for y in np.linspace(-0.25, -1e-3, 100):
            assert cl.separable_xmax_stationary(y, y, -y) == pytest.approx((1 + 4 * y) ** 1.5 / 8, abs=1e-12)


class TestPpt:
    def test_origin(self):
        r = cl.ppt_report(ExtSymParams(0, 0, 0, 0))
        assert (r.alpha2, r.alpha3, r.alpha4, r.x_max, r.margin) == pytest.approx((1 / 8,) * 5)

    def test_arithmetic(self):
        r = cl.ppt_report(ExtSymParams(0, 0.1, -0.1, 0))
        assert (r.alpha2, r.alpha3, r.alpha4, r.x_max) == pytest.approx((1 / 8, 0.025, 0.225, 0.025), abs=1e-15)

    def test_werner_fifth(self):
        r = cl.ppt_report(make_werner(0.2))
        assert r.margin == pytest.approx(0, abs=1e-15)
        assert abs(r.numeric_min_eig) < 1e-12

    def test_invalid(self):
        with pytest.raises(PhysicalityError):
            cl.ppt_report(ExtSymParams(0.2, 0, 0, 0))

    def test_binding_qubit_realizes_minimum(self, rng):
        # qubit 1 transposition gives alpha4 - |x|, qubit 2 alpha3 - |x|, qubit 3 alpha2 - |x|
        for p in random_valid(rng, 300):
            rho = make_extended(p)
            a2, a3, a4 = cl.ppt_alphas(*p.ys)
            for q, a in ((1, a4), (2, a3), (3, a2)):
                w = eig_hermitian(partial_transpose(rho, q))
                assert np.any(np.abs(w - (a - abs(p.x))) < 1e-10)
                assert w[0] >= min(a - abs(p.x), 0.0) - 1e-10


class TestWitnesses:
    def test_bisep_on_ghz(self):
        assert np.trace(cl.witness_matrix(cl.BISEP) @ P_GHZ_PLUS).real == pytest.approx(-3)

    def test_w_on_ghz_minus(self):
        assert np.trace(cl.witness_matrix(cl.WBISEP) @ P_GHZ_MINUS).real == pytest.approx(0.5)

    def test_ghz_on_identity(self):
        v0 = 0.981
        expected = 0.75 - (3 / (v0**2 - 2 * v0 + 4) + 3 / (v0**2 + 2 * v0 + 4)) / 8
        got = np.trace(cl.witness_matrix(cl.GHZW) @ np.eye(8) / 8).real
        assert got == pytest.approx(expected, abs=1e-15)
        assert got == pytest.approx(0.57086, abs=1e-5)

    def test_hermitian(self):
        for k in (cl.BISEP, cl.WBISEP, cl.GHZW):
            m = cl.witness_matrix(k)
            assert np.array_equal(m, m.conj().T)

    def test_trace_examples(self):
        assert cl.witness_trace(cl.BISEP, ExtSymParams(0, 0, 0, 0)) == 0.75
        for p in np.linspace(0, 1, 11):
            w = make_werner(float(p))
            assert cl.witness_trace(cl.BISEP, w) == pytest.approx(0.75 - 15 * p / 4, abs=1e-15)
            assert cl.witness_trace(cl.WBISEP, w) == pytest.approx(0.5 * (0.75 - 7 * p / 4), abs=1e-15)

    def test_closed_form_matches_matrix(self, rng):
        for v0 in (0.981, 0.5, 1.7):
            kinds = (cl.BISEP, cl.WBISEP, cl.WitnessKind(cl.Witness.GhzVsW, v0))
            for p in random_valid(rng, 500):
                rho = make_extended(p)
                for k in kinds:
                    assert cl.witness_trace(k, p) == pytest.approx(np.trace(cl.witness_matrix(k) @ rho).real, abs=1e-12)

    def test_invalid_v0(self):
        with pytest.raises(ValueError):
            cl.witness_matrix(cl.WitnessKind(cl.Witness.GhzVsW, 0.0))

    def test_hierarchy_nesting(self):
        Ys = np.linspace(-0.25, 0.75, 201)
        for Y in Ys:
            for x in np.linspace(0, 1 / 8 + Y / 2, 50):
                g = cl.witness_value(cl.GHZW, x, Y) < 0
                w = cl.witness_value(cl.WBISEP, x, Y) < 0
                b = cl.witness_value(cl.BISEP, x, Y) < 0
                assert (not g or w) and (not w or b)


class TestGhzBoundary:
    def test_endpoints(self):
        assert cl.ghz_boundary_point(1.0) == pytest.approx((SQRT3 / 4, 0.0), abs=1e-15)
        y, x = cl.ghz_boundary_point(1 / math.sqrt(2))
        assert y == pytest.approx(0, abs=1e-15) and x == pytest.approx(1 / 8, abs=1e-15)

    def test_interior_point_below_hull(self):
        y, x = cl.ghz_boundary_point(math.sqrt(3) / 2)
        assert x == pytest.approx(3 * math.sqrt(3) / 64, abs=1e-15)
        poly = cl.ghz_symmetric_separable_boundary(2001)
        assert x <= poly(y) + 1e-12
        assert x <= SQRT3 / 2 * (y + 1 / (4 * SQRT3))

    def test_shape(self):
        poly = cl.ghz_symmetric_separable_boundary(2001)
        assert poly.vertices[0] == pytest.approx((-1 / (4 * SQRT3), 0.0))
        assert poly(0.0) == pytest.approx(1 / 8, abs=1e-12)
        assert poly(SQRT3 / 4) == pytest.approx(0, abs=1e-12)

    def test_endpoints_clamped(self):
        assert cl.ghz_separable_xmax(SQRT3 / 4 * (1 + 1e-15)) == pytest.approx(0, abs=1e-12)
        with pytest.raises(ValueError):
            cl.ghz_separable_xmax(0.5)

    def test_random_product_twirls_below(self):
        rng = np.random.default_rng(11)
        poly = cl.ghz_symmetric_separable_boundary(2001)
        s = rng.uniform(0, 1, size=(20000, 3))
        x = np.sqrt(np.prod(s * (1 - s), axis=1))
        y = (np.prod(s, axis=1) + np.prod(1 - s, axis=1) - 0.25) / SQRT3
        assert np.all(x <= poly(y) + 1e-9)


class TestFig4:
    def test_vertices(self):
        verts = {(round(v.Y, 12), round(v.x, 12)): v.lines for v in cl.fig4_polygon()}
        assert ("bisep" in verts[(0.0, 0.125)]) and ("physical" in verts[(0.0, 0.125)])
        assert {"w", "physical"} <= set(verts[(0.25, 0.25)])
        assert {"bisep", "w", "x=0"} <= set(verts[(0.75, 0.0)])

    def test_regions_partition_triangle(self, rng):
        regions = cl.fig4_regions()
        for _ in range(5000):
            Y = rng.uniform(-0.25, 0.75)
            x = rng.uniform(0, 1 / 8 + Y / 2)
            inside = [c for c, poly in regions.items() if cl.point_in_convex_polygon((Y, x), poly)]
            assert inside == [cl.witness_lower_class(x, Y)]

    def test_invalid_v0(self):
        with pytest.raises(ValueError):
            cl.fig4_polygon(-1.0)


class TestWerner:
    def test_thresholds(self):
        assert cl.werner_threshold(cl.BISEP) == pytest.approx(0.2, abs=1e-15)
        assert cl.werner_threshold(cl.WBISEP) == pytest.approx(3 / 7, abs=1e-15)
        # matrix-trace bisection, frozen
        assert cl.werner_threshold(cl.GHZW) == pytest.approx(0.69554272990, abs=1e-10)


class TestClassify:
    def test_origin(self):
        v = cl.classify_extended(ExtSymParams(0, 0, 0, 0))
        assert v.lower == v.upper == Class.Separable

    def test_werner_half(self):
        v = cl.classify_extended(make_werner(0.5))
        ev = {e.name: e.value for e in v.evidence}
        assert ev["witness_bisep"] == pytest.approx(-1.125)
        assert ev["witness_w"] == pytest.approx(-0.0625)
        assert ev["witness_ghz"] > 0
        assert (v.lower, v.upper) == (Class.W, Class.GHZ)

    def test_ghz_corner(self):
        v = cl.classify_extended(ExtSymParams(0.5, 0.25, 0.25, 0.25))
        ev = {e.name: e.value for e in v.evidence}
        assert ev["witness_ghz"] == pytest.approx(-0.25, abs=1e-3)
        assert v.lower == v.upper == Class.GHZ
        assert all(math.isfinite(e.value) for e in v.evidence)

    def test_npt_forces_biseparable(self):
        # PPT-violating but every witness positive
        p = ExtSymParams(0.06, 0.1, -0.1, 0.0)
        ev = {e.name: e.value for e in cl.classify_extended(p).evidence}
        assert ev["ppt_margin"] < 0 and ev["witness_bisep"] > 0
        v = cl.classify_extended(p)
        assert v.lower == Class.Biseparable and v.upper == Class.GHZ

    def test_invalid(self):
        with pytest.raises(PhysicalityError):
            cl.classify_extended(ExtSymParams(0.2, 0, 0, 0))

    def test_json_shape(self):
        js = cl.classify_extended(ExtSymParams(0, 0, 0, 0)).to_json()
        assert set(js) == {"lower", "upper", "evidence"}
        assert all(set(e) == {"name", "value", "threshold"} for e in js["evidence"])

    def test_reflection_invariance(self, rng):
        for p in random_valid(rng, 100):
            a, b = cl.classify_extended(p), cl.classify_extended(reflect_x(p))
            assert a.to_json() == b.to_json()

    def test_monotone_under_mixing(self, rng):
        for p in random_valid(rng, 100):
            prev = None
            for t in np.linspace(1.0, 0.0, 11):
                q = ExtSymParams(*(t * p.as_array()))
                v = cl.classify_extended(q)
                if prev is not None:
                    assert v.lower <= prev.lower and v.upper <= prev.upper
                prev = v
            assert prev.lower == prev.upper == Class.Separable

    def test_sandwich_semantics(self, rng):
        for p in random_valid(rng, 100):
            v = cl.classify_extended(p)
            assert v.lower <= v.upper
            if v.upper == Class.Separable:
                assert cl.ppt_report(p).ppt
