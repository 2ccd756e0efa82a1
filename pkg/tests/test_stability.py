import pytest

from assoc_kneser.polygon import (
    Triangulation,
    all_diagonals,
    crosses,
    delta_hexagon,
    delta_prime_hexagon,
    dihedral_group,
    dihedral_apply,
    enumerate_triangulations,
    is_k_parenthesization,
    star_center,
    to_parenthesization,
    z_hexagon,
)
from assoc_kneser.stability import (
    T3Witness,
    check_nobetter,
    count_Tk,
    enumerate_T3,
    enumerate_Tk,
    fibonacci,
    filter_Tk,
    from_t3_witness,
    map_to_T3,
    rsqa_diag,
    rsqa_tri,
    successors,
    t3_witness,
    z_swap,
)


def T(n, *diags):
    return Triangulation.from_diagonals(n, diags)


def rsqa_by_definition(d, e, n):
    (i, j), (i2, j2) = d, e
    if not (i < i2 < j < j2 or i2 < i < j2 < j):
        return True
    return i2 < i and i < j2 and j2 < j and j < n and j2 - i > 1


def test_rsqa_diag_examples():
    assert rsqa_diag((2, 5), (1, 4), 6)
    assert not rsqa_diag((1, 4), (2, 5), 6)
    assert rsqa_diag((1, 3), (4, 6), 6) and rsqa_diag((4, 6), (1, 3), 6)


@pytest.mark.parametrize("n", range(4, 10))
def test_rsqa_diag_matches_definition(n):
    for d in all_diagonals(n):
        for e in all_diagonals(n):
            assert rsqa_diag(d, e, n) == rsqa_by_definition(d, e, n)
            if not crosses(d, e):
                assert rsqa_diag(d, e, n)


def test_rsqa_is_reflexive():
    for t in enumerate_triangulations(6):
        assert rsqa_tri(t, t)


def test_rsqa_tri_examples():
    assert rsqa_tri(z_hexagon(), T(6, (1, 4), (1, 5), (2, 4)))
    # {2,4} against {1,3} is a crossing with j' - i = 1
    assert not rsqa_tri(z_hexagon(), T(6, (1, 3), (1, 4), (1, 5)))
    brute = all(rsqa_by_definition(d, e, 6)
                for d in delta_hexagon().diagonals for e in delta_prime_hexagon().diagonals)
    assert rsqa_tri(delta_hexagon(), delta_prime_hexagon()) == brute is False


@pytest.mark.parametrize("n", range(3, 13))
def test_t3_count_is_fibonacci(n):
    ts = enumerate_T3(n)
    assert len(ts) == len(set(ts)) == fibonacci(2 * n - 5) == count_Tk(n, 3)


def test_t3_named_counts():
    assert len(enumerate_T3(5)) == 5
    assert set(enumerate_T3(5)) == set(enumerate_triangulations(5))
    assert len(enumerate_T3(6)) == 13
    assert len(enumerate_T3(8)) == 89


@pytest.mark.parametrize("n", range(3, 10))
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_generation_matches_filter(n, k):
    assert set(enumerate_Tk(n, k)) == set(filter_Tk(n, k))
    assert len(enumerate_Tk(n, k)) == count_Tk(n, k)


def series_coefficients(num, den, count):
    """Power series of num/den with integer coefficients (den[0] == 1)."""
    out = []
    for m in range(count):
        c = num[m] if m < len(num) else 0
        c -= sum(den[i] * out[m - i] for i in range(1, min(m, len(den) - 1) + 1))
        out.append(c)
    return out


def test_count_Tk_closed_forms():
    # f_1 = t/(1-t), f_2 = (t-t^2)/(1-2t), f_3 = (t-2t^2)/(1-3t+t^2)
    f1 = series_coefficients([0, 1], [1, -1], 12)
    f2 = series_coefficients([0, 1, -1], [1, -2], 12)
    f3 = series_coefficients([0, 1, -2], [1, -3, 1], 12)
    for n in range(2, 12):
        assert count_Tk(n, 1) == f1[n - 1]
        assert count_Tk(n, 2) == f2[n - 1]
        assert count_Tk(n, 3) == f3[n - 1]
    assert [count_Tk(n, 2) for n in range(2, 7)] == [1, 1, 2, 4, 8]
    assert count_Tk(7, 3) == 34


def test_t3_members_are_3_parenthesizations():
    for t in enumerate_T3(9):
        assert is_k_parenthesization(to_parenthesization(t), 3)


def test_twenty_gon_witness():
    w = T3Witness((1, 5, 6, 16, 19), ((4,), (), (8, 10, 15), ()))
    t = from_t3_witness(20, w)
    assert len(t) == 17
    assert is_k_parenthesization(to_parenthesization(t), 3)
    assert t3_witness(t) == w
    assert str(to_parenthesization(t)) == (
        "((s1(s2s3))s4)(s5(((((s6s7)(s8s9))(s10(s11(s12(s13s14)))))s15)((s16(s17s18))s19)))")


@pytest.mark.parametrize("n", range(4, 10))
def test_map_to_T3(n):
    t3 = set(enumerate_T3(n))
    for t in enumerate_triangulations(n):
        img = map_to_T3(t)
        assert img in t3
        assert rsqa_tri(t, img)
        if t in t3:
            assert img == t


def test_map_z():
    img = map_to_T3(z_hexagon())
    assert img in enumerate_T3(6) and rsqa_tri(z_hexagon(), img)


@pytest.mark.parametrize("n", range(5, 10))
def test_nobetter(n):
    assert check_nobetter(n)


def test_successors_of_z_include_swap():
    succ = successors(z_hexagon())
    assert z_hexagon() in succ and T(6, (1, 4), (1, 5), (2, 4)) in succ


@pytest.mark.parametrize("n", [6, 7])
def test_swap_pipeline(n):
    deltas = {delta_hexagon(), delta_prime_hexagon()}
    for t in enumerate_triangulations(n):
        if star_center(t) is not None or t in deltas:
            assert z_swap(t) is None
            continue
        s = z_swap(t)
        assert s is not None
        assert s.normalized in {dihedral_apply(t, g) for g in dihedral_group(n)}
        assert s.z_copy[5] == n
        assert s.swapped != s.normalized
        assert rsqa_tri(s.normalized, s.swapped)
