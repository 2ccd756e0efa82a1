import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from assoc_kneser import geometry as geo
from assoc_kneser.polygon import Triangulation, all_diagonals, enumerate_triangulations
from assoc_kneser.stability import rsqa_diag

F = Fraction


def T(n, *diags):
    return Triangulation.from_diagonals(n, diags)


def realizations(n):
    qs = [geo.random_convex_polygon(n, seed) for seed in (1, 2)]
    qs.append(geo.parabola_polygon(range(1, n + 1)))
    if n in (4, 6):
        qs.append(geo.rational_regular(n))
    return qs


def test_secondary_vertex_square():
    q = geo.unit_square()
    assert geo.secondary_vertex(q, T(4, (1, 3))) == (1, F(1, 2), 1, F(1, 2))
    assert geo.secondary_vertex(q, T(4, (2, 4))) == (F(1, 2), 1, F(1, 2), 1)


def test_non_convex_rejected():
    with pytest.raises(geo.GeometryError):
        geo.PolygonRealization(((0, 0), (2, 0), (1, 1), (2, 2), (0, 2)))
    with pytest.raises(geo.GeometryError):
        geo.PolygonRealization(((0, 0), (1, 0), (2, 0), (1, 1)))


@pytest.mark.parametrize("n", range(4, 9))
def test_affine_identity(n):
    for q in realizations(n)[:2]:
        area = geo.affine_integrals(q)[0]
        for t in enumerate_triangulations(n):
            assert geo.affine_identity_holds(q, t)
            assert sum(geo.secondary_vertex(q, t)) == 3 * area


def test_centered_vertices_in_XQ():
    q = geo.random_convex_polygon(7, 5)
    for t in enumerate_triangulations(7):
        assert geo.in_XQ(q, geo.centered_vertex(q, t))


def test_facet_normal_square():
    psi = geo.facet_normal(geo.unit_square(), (1, 3))
    zeros = [k for k, x in enumerate(psi, start=1) if x == 0]
    assert zeros in ([1, 2, 3], [1, 3, 4])
    assert min(psi) == -1


def test_facet_normal_regular_hexagon_is_indicator():
    q = geo.affine_regular_hexagon()
    assert geo.same_ray(q, geo.facet_normal(q, (1, 3)), (0, -1, 0, 0, 0, 0))


@pytest.mark.parametrize("n", [5, 6, 7])
def test_facet_normal_constant_on_facet(n):
    q = geo.random_convex_polygon(n, 11)
    verts = geo.secondary_vertices(q)
    for d, psi in geo.facet_normals(q).items():
        on = [geo.pairing(psi, v) for t, v in verts.items() if d in t]
        assert len(set(on)) == 1


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_gkz_incidence(n):
    for q in realizations(n):
        rep = geo.verify_gkz_incidence(q)
        assert rep.passed, rep.violations[:3]


def test_gkz_detects_broken_normal():
    q = geo.random_convex_polygon(5, 3)
    normals = dict(geo.facet_normals(q))
    d = (1, 3)
    psi = [-x for x in normals[d]]
    verts = geo.secondary_vertices(q)
    vals = {t: geo.pairing(psi, v) for t, v in verts.items()}
    top = max(vals.values())
    assert {t for t, v in vals.items() if v == top} != {t for t in verts if d in t}


def test_farkas_delta():
    q = geo.affine_regular_hexagon()
    res = geo.farkas_decompose(q, (0, -1, 0, -1, 0, -1))
    assert res.triangulation == T(6, (1, 3), (1, 5), (3, 5))
    coeffs = set(res.coefficients.values())
    assert len(coeffs) == 1 and coeffs.pop() > 0


def test_farkas_on_facet_normal():
    q = geo.random_convex_polygon(6, 2)
    for d, psi in geo.facet_normals(q).items():
        res = geo.farkas_decompose(q, psi)
        assert d in res.triangulation
        for e, c in res.coefficients.items():
            assert c == (1 if e == d else 0)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_farkas_random(n):
    for q in realizations(n)[:3]:
        rep = geo.verify_farkas(q, samples=100, seed=n)
        assert rep.passed, rep.violations[:3]


def test_farkas_rejects_affine():
    q = geo.random_convex_polygon(5, 1)
    with pytest.raises(geo.GeometryError):
        geo.farkas_decompose(q, geo.affine_function(q, 1, 2, 3))


@settings(max_examples=25, deadline=None)
@given(st.integers(5, 7), st.integers(0, 1000),
       st.tuples(*[st.fractions(min_value=-20, max_value=20, max_denominator=9)] * 3))
def test_pairing_invariant_under_affine_shift(n, seed, coeffs):
    q = geo.random_convex_polygon(n, seed)
    shift = geo.affine_function(q, *coeffs)
    for d, x in geo.vec_vectors(q).items():
        psi = geo.facet_normals(q)[d]
        moved = [a + b for a, b in zip(psi, shift)]
        assert geo.pairing(moved, x) == geo.pairing(psi, x)


def test_pairing_invariance_report():
    q = geo.random_convex_polygon(6, 4)
    assert geo.verify_pairing_invariance(q, geo.vec_vectors(q).values()).passed
    bad = geo.verify_pairing_invariance(q, [(1, 0, 0, 0, 0, 0)])
    assert not bad.passed


def test_vec_square():
    q = geo.unit_square()
    assert geo.vec_vector(q, (1, 3)) == (F(1, 2), F(-1, 2), F(1, 2), F(-1, 2))


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_verify_vec(n):
    for q in realizations(n):
        rep = geo.verify_vec(q)
        assert rep.passed, rep.violations[:3]


def test_hemisphere():
    q = geo.random_convex_polygon(5, 0)
    assert geo.hemisphere_check(q, geo.vec_vectors(q), samples=1000).passed
    h = geo.affine_regular_hexagon()
    assert geo.hemisphere_check(h, geo.vec_vectors(h), samples=300).passed
    zeros = {d: (0,) * 5 for d in all_diagonals(5)}
    rep = geo.hemisphere_check(q, zeros, samples=10)
    assert not rep.passed and rep.violations[0]["sample"] == 1


def test_circulant_coefficients():
    f6 = geo.circulant_form(6, "exact")
    assert f6.coeffs == (F(7, 6), F(-5, 6), F(1, 6), F(1, 6), F(1, 6), F(-5, 6))
    assert sum(f6.coeffs) == 0
    f4 = geo.circulant_form(4, "exact")
    assert f4.coeffs == (F(1, 2), F(-1, 2), F(1, 2), F(-1, 2))


@pytest.mark.parametrize("n", [5, 7, 9, 12])
def test_circulant_interval_matches_float(n):
    f = geo.circulant_form(n)
    c = math.cos(2 * math.pi / n)
    expect = [(2 - 2 * c) / n + (2 * c if k == 0 else -1 if k in (1, n - 1) else 0) for k in range(n)]
    for x, e in zip(f.coeffs, expect):
        assert float(x.a) - 1e-12 <= e <= float(x.b) + 1e-12
        assert float(x.b) - float(x.a) < 1e-30


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 12])
def test_descent(n):
    assert geo.verify_descent(geo.circulant_form(n)).passed


def test_exact_mode_needs_rational_cosine():
    with pytest.raises(geo.GeometryError):
        geo.circulant_form(7, "exact")


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9, 10, 12, 15])
def test_obtuse(n):
    rep = geo.verify_obtuse(n)
    assert rep.passed, rep.violations[:3]
    assert rep.min_slack > 0


def test_obtuse_hexagon_modes_agree():
    assert geo.verify_obtuse(6, "exact").passed
    assert geo.verify_obtuse(6, "interval").passed


def test_naive_control():
    assert not geo.naive_control(7).passed
    assert geo.naive_control(5).passed


def test_naive_pair_exact_hexagon_matches_interval():
    psis = geo.regular_facet_normals(6, "exact")
    d, e = (1, 3), (1, 4)
    exact = geo.naive_pair(6, psis[d], psis[e], "exact")
    ipsis = geo.regular_facet_normals(6, "interval")
    approx = geo.naive_pair(6, ipsis[d], ipsis[e], "interval")
    assert float(approx.a) - 1e-20 <= float(exact) <= float(approx.b) + 1e-20


@pytest.mark.parametrize("n", range(4, 9))
def test_lacunary(n):
    res = geo.lacunary_construction(n)
    assert res.report.passed
    assert res.epsilon > 0
    psis = geo.facet_normals(res.polygon)
    for d, x in res.vectors.items():
        assert geo.in_XQ(res.polygon, x)
    for d in all_diagonals(n):
        for e in all_diagonals(n):
            if rsqa_diag(d, e, n):
                assert geo.pairing(psis[d], res.vectors[e]) > 0


def test_lacunary_hexagon_swap_pair():
    res = geo.lacunary_construction(6)
    psi = geo.facet_normals(res.polygon)[(2, 5)]
    assert geo.pairing(psi, res.vectors[(1, 4)]) > 0


def test_lacunary_rejects_bad_growth():
    with pytest.raises(geo.GeometryError):
        geo.lacunary_polygon(6, 1)


def test_delta_case():
    rep = geo.delta_case_vectors()
    assert rep.passed, rep.violations[:3]
    assert rep.extra["x14_at_111"] == "3"
    q = geo.affine_regular_hexagon()
    x14 = geo.long_diagonal_vector(q, 1)
    assert geo.pairing((0, -1, 0, 0, 0, -1), x14) == 6


def test_report_json():
    js = geo.verify_obtuse(7).to_json()
    assert js["passed"] and js["mode"] == "interval"
    assert js["min_slack"].startswith("[") or float(js["min_slack"]) > 0
