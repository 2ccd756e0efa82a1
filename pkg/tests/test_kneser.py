from itertools import combinations

import pytest

from assoc_kneser.kneser import (
    Coloring,
    KneserHypergraph,
    NoColor,
    build_kneser,
    cd2_witness_check,
    dimacs_text,
    ear_color,
    ear_coloring,
    export_dimacs,
    fan_color,
    fan_coloring,
    full_family,
    full_family_graph,
    grouped_fan_coloring,
    grouped_star_deleted_coloring,
    k_subset_family,
    parse_dimacs,
    star_deleted_color,
    star_deleted_coloring,
    triangle_membership,
    triangulation_family,
    verify_coloring,
    zigzag_cliques,
)
from assoc_kneser.polygon import (
    Triangulation,
    delta_hexagon,
    delta_prime_hexagon,
    enumerate_triangulations,
    star,
    star_center,
    z_hexagon,
)


def brute_disjoint_pairs(ts):
    return {(a, b) for a, b in combinations(range(len(ts)), 2)
            if not set(ts[a].diagonals) & set(ts[b].diagonals)}


def test_petersen():
    g = build_kneser(k_subset_family(5, 2))
    assert g.order == 10
    assert g.num_edges == 15
    assert all(g.degree(v) == 3 for v in range(10))


def test_single_edge_for_square():
    g = full_family_graph(4)
    assert g.order == 2 and list(g.edges()) == [(0, 1)]


@pytest.mark.parametrize("n", [5, 6, 7])
def test_edges_match_brute_force(n):
    ts = enumerate_triangulations(n)
    g = build_kneser(triangulation_family(ts))
    assert set(g.edges()) == brute_disjoint_pairs(ts)


def test_induced_and_delete():
    g = full_family_graph(6)
    h = g.delete_vertex(0)
    assert h.order == 13
    assert h.num_edges == g.num_edges - g.degree(0)
    sub = g.induced([1, 2, 3])
    for a, b in combinations(range(3), 2):
        assert sub.adjacent(a, b) == g.adjacent([1, 2, 3][a], [1, 2, 3][b])


@pytest.mark.parametrize("n", range(4, 10))
def test_zigzag_cliques(n):
    zz = zigzag_cliques(n)
    assert len(zz) == n // 2
    for a, b in combinations(zz, 2):
        assert not set(a.diagonals) & set(b.diagonals)


def test_pentagon_zigzags_use_four_diagonals():
    zz = zigzag_cliques(5)
    assert all(len(t) == 2 for t in zz)
    assert len({d for t in zz for d in t.diagonals}) == 4


def test_fan_and_ear_colors():
    assert fan_color(z_hexagon()) == 1
    assert fan_color(star(6, 6)) == 4
    assert ear_color(z_hexagon()) == 2
    assert ear_color(delta_hexagon()) == 1
    a, b = enumerate_triangulations(4)
    assert {fan_color(a), fan_color(b)} == {1, 2}


def test_star_deleted_colors():
    assert star_deleted_color(z_hexagon(), 6) == 2
    assert star_deleted_color(delta_hexagon(), 6) == 1
    with pytest.raises(NoColor):
        star_deleted_color(star(6, 6), 6)


@pytest.mark.parametrize("n", range(4, 9))
def test_fan_and_ear_colorings_proper(n):
    g = full_family_graph(n)
    for col in (fan_coloring(n), ear_coloring(n)):
        ok, bad = verify_coloring(g, col)
        assert ok and bad is None
        assert set(col.colors) <= set(range(1, n - 1))


@pytest.mark.parametrize("n", [5, 6, 7, 8])
@pytest.mark.parametrize("center_shift", [0, 2])
def test_star_deleted_coloring_proper(n, center_shift):
    center = n - center_shift
    ts = [t for t in enumerate_triangulations(n) if t != star(n, center)]
    g = build_kneser(triangulation_family(ts))
    col = star_deleted_coloring(n, center)
    assert len(col) == len(ts)
    assert verify_coloring(g, col)[0]
    assert max(col.colors) <= n - 3


def test_constant_coloring_rejected():
    g = full_family_graph(4)
    ok, bad = verify_coloring(g, Coloring((1, 1)))
    assert not ok and tuple(bad) == (0, 1)


def test_cd2_witness():
    assert not cd2_witness_check(5)
    for n in range(6, 11):
        assert cd2_witness_check(n)


@pytest.mark.parametrize("n", [6, 7])
def test_triangle_membership(n):
    for t in enumerate_triangulations(n):
        excluded = star_center(t) is not None or t in (delta_hexagon(), delta_prime_hexagon())
        assert triangle_membership(t) == (not excluded)
    assert triangle_membership(z_hexagon())


def test_hypergraph_edges_are_pairwise_disjoint():
    h = KneserHypergraph(full_family(7), 3)
    ts = enumerate_triangulations(7)
    edges = list(h.edges())
    brute = {e for e in combinations(range(len(ts)), 3)
             if all(not set(ts[a].diagonals) & set(ts[b].diagonals) for a, b in combinations(e, 2))}
    assert set(edges) == brute


@pytest.mark.parametrize("n", [6, 7, 8])
def test_grouped_colorings_proper_on_hypergraph(n):
    h = KneserHypergraph(full_family(n), 3)
    fan = grouped_fan_coloring(n, 3)
    sd = grouped_star_deleted_coloring(n, 3)
    assert verify_coloring(h, fan)[0] and max(fan.colors) <= -(-(n - 2) // 2)
    assert verify_coloring(h, sd)[0] and max(sd.colors) <= -(-(n - 3) // 2)


def test_dimacs():
    assert dimacs_text(full_family_graph(4)).splitlines() == ["p edge 2 1", "e 1 2"]
    g = full_family_graph(6)
    text = dimacs_text(g, comment="hexagon")
    assert text.startswith("c hexagon\np edge 14 ")
    assert int(text.splitlines()[1].split()[3]) == len(brute_disjoint_pairs(enumerate_triangulations(6)))
    assert tuple(parse_dimacs(text)) == g.adj


def test_dimacs_file_round_trip(tmp_path):
    g = full_family_graph(7)
    path = export_dimacs(g, tmp_path / "t7.col")
    assert tuple(parse_dimacs(path.read_text())) == g.adj


def test_family_labels():
    fam = full_family(6)
    assert len(fam) == 14
    assert all(isinstance(t, Triangulation) for t in fam.labels)
