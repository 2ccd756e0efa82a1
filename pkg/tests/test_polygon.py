import json

import pytest
from hypothesis import given, settings, strategies as st

from assoc_kneser.polygon import (
    Dihedral,
    InvariantViolation,
    InvalidSize,
    Leaf,
    Node,
    Triangulation,
    all_diagonals,
    catalan,
    crosses,
    delta_hexagon,
    delta_prime_hexagon,
    dihedral_apply,
    dihedral_group,
    dihedral_orbit,
    ears,
    enumerate_triangulations,
    find_z_copy,
    from_parenthesization,
    is_k_parenthesization,
    star,
    star_center,
    to_parenthesization,
    triangles_of,
    z_copies,
    z_hexagon,
)


def T(n, *diags):
    return Triangulation.from_diagonals(n, diags)


def catalan_by_recurrence(k):
    c = [1]
    for m in range(1, k + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[k]


def test_diagonals_small():
    assert list(all_diagonals(4)) == [(1, 3), (2, 4)]
    assert len(all_diagonals(5)) == 5
    assert len(all_diagonals(6)) == 9


@pytest.mark.parametrize("n", range(4, 13))
def test_diagonal_count(n):
    assert len(all_diagonals(n)) == n * (n - 3) // 2


def test_crossing():
    assert crosses((1, 3), (2, 4))
    assert not crosses((1, 3), (1, 4))
    assert crosses((2, 5), (1, 4))
    assert crosses((1, 4), (2, 5))
    assert not crosses((1, 3), (4, 6))


@pytest.mark.parametrize("n,count", [(3, 1), (4, 2), (5, 5), (6, 14), (7, 42), (9, 429)])
def test_enumeration_counts(n, count):
    ts = enumerate_triangulations(n)
    assert len(ts) == count == catalan_by_recurrence(n - 2)
    assert len(set(ts)) == count


@pytest.mark.parametrize("k", range(0, 15))
def test_catalan_closed_form(k):
    assert catalan(k) == catalan_by_recurrence(k)


def test_enumerated_are_valid():
    for t in enumerate_triangulations(8):
        t.validate()
        assert len(t) == 5
        assert not any(crosses(a, b) for a in t.diagonals for b in t.diagonals)


def test_invalid_inputs():
    with pytest.raises(InvariantViolation):
        T(6, (1, 4), (2, 5), (1, 3))
    with pytest.raises((InvariantViolation, InvalidSize, ValueError)):
        T(6, (1, 3), (1, 4))
    with pytest.raises((InvalidSize, ValueError)):
        enumerate_triangulations(2)


def test_json_round_trip():
    for t in enumerate_triangulations(6):
        assert Triangulation.from_json(t.to_json()) == t
        assert Triangulation.from_json(json.dumps(t.to_json())) == t


def test_triangles():
    assert triangles_of(T(4, (1, 3))) == {(1, 2, 3), (1, 3, 4)}
    assert triangles_of(z_hexagon()) == {(2, 3, 4), (2, 4, 5), (1, 2, 5), (1, 5, 6)}
    assert triangles_of(T(5, (2, 5), (3, 5))) == {(1, 2, 5), (2, 3, 5), (3, 4, 5)}


@pytest.mark.parametrize("n", range(4, 9))
def test_every_triangulation_has_two_ears(n):
    for t in enumerate_triangulations(n):
        assert len(triangles_of(t)) == n - 2
        assert len(ears(t)) >= 2


def test_dihedral_action():
    delta = delta_hexagon()
    assert dihedral_apply(delta, Dihedral(0, False)) == delta
    assert dihedral_apply(delta, Dihedral(1, False)) == delta_prime_hexagon()
    assert dihedral_orbit(delta) == {delta, delta_prime_hexagon()}
    assert len(dihedral_group(6)) == 12


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 9), st.data())
def test_dihedral_group_action_laws(n, data):
    ts = enumerate_triangulations(n)
    t = data.draw(st.sampled_from(ts))
    g = data.draw(st.sampled_from(dihedral_group(n)))
    h = data.draw(st.sampled_from(dihedral_group(n)))
    img = dihedral_apply(t, g)
    assert img in ts
    assert dihedral_apply(dihedral_apply(t, h), g) == dihedral_apply(t, g.compose(h, n))


def test_star_center():
    assert star_center(T(6, (2, 6), (3, 6), (4, 6))) == 6
    assert star(6, 6) == T(6, (2, 6), (3, 6), (4, 6))
    assert star_center(z_hexagon()) is None
    assert all(star_center(t) is not None for t in enumerate_triangulations(5))


def test_z_copies():
    assert find_z_copy(z_hexagon()) == (1, 2, 3, 4, 5, 6)
    assert z_copies(delta_hexagon()) == []
    # the hexagon Delta extended by an ear at 7
    assert (6, 5, 4, 3, 1, 7) in z_copies(T(7, (1, 3), (1, 5), (3, 5), (1, 6)))
    assert (1, 2, 3, 4, 6, 7) in z_copies(T(7, (2, 4), (2, 6), (4, 6), (1, 6)))


@pytest.mark.parametrize("n", [6, 7])
def test_no_z_copy_only_for_stars_and_deltas(n):
    for t in enumerate_triangulations(n):
        expect_none = star_center(t) is not None or t in (delta_hexagon(), delta_prime_hexagon())
        assert (find_z_copy(t) is None) == expect_none


def test_parenthesization_examples():
    s = Leaf
    assert to_parenthesization(T(4, (1, 3))) == Node(Node(s(1), s(2)), s(3))
    assert to_parenthesization(T(4, (2, 4))) == Node(s(1), Node(s(2), s(3)))


@pytest.mark.parametrize("n", range(3, 9))
def test_parenthesization_round_trip(n):
    for t in enumerate_triangulations(n):
        assert from_parenthesization(to_parenthesization(t), n) == t


def test_k_parenthesization_membership():
    s = Leaf
    left = Node(Node(s(1), s(2)), s(3))
    assert is_k_parenthesization(s(1), 0)
    assert not is_k_parenthesization(left, 1)
    assert is_k_parenthesization(left, 2)


def _tau_tree():
    s = Leaf
    tau1 = Node(Node(s(1), Node(s(2), s(3))), s(4))
    tau2 = s(5)
    right = Node(s(10), Node(s(11), Node(s(12), Node(s(13), s(14)))))
    tau3 = Node(Node(Node(Node(s(6), s(7)), Node(s(8), s(9))), right), s(15))
    tau4 = Node(s(16), Node(s(17), s(18)))
    return Node(tau1, Node(tau2, Node(tau3, Node(tau4, s(19)))))


def test_twenty_gon_example_is_3_parenthesization():
    assert is_k_parenthesization(_tau_tree(), 3)
    assert not is_k_parenthesization(_tau_tree(), 2)
