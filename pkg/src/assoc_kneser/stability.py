"""The swapping relation on diagonals and triangulations, and the family of
triangulations coming from 3-parenthesizations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .polygon import (
    Diagonal,
    Leaf,
    Node,
    ParenTree,
    Triangulation,
    all_diagonals,
    crosses,
    dihedral_group,
    dihedral_apply,
    enumerate_triangulations,
    from_parenthesization,
    InvariantViolation,
    is_k_parenthesization,
    to_parenthesization,
    z_copies,
    _bit_positions,
)


def rsqa_diag(d: Diagonal, e: Diagonal, n: int) -> bool:
    """d ⊏ e: noncrossing, or crossing as i' < i < j' < j < n with j' - i > 1.

    Not symmetric, and not invariant under rotation (vertex n is special).
    """
    (i, j), (i2, j2) = d, e
    if not crosses(d, e):
        return True
    return i2 < i < j2 < j < n and j2 - i > 1


@lru_cache(maxsize=None)
def _blocking_masks(n: int) -> tuple[int, ...]:
    """For each diagonal d, the diagonals e with d ⊏ e failing."""
    diags = all_diagonals(n)
    return tuple(
        sum(1 << k for k, e in enumerate(diags) if not rsqa_diag(d, e, n))
        for d in diags
    )


def rsqa_tri(t: Triangulation, t2: Triangulation) -> bool:
    """T ⊏ T' iff d ⊏ d' for every d in T and d' in T'."""
    if t.n != t2.n:
        raise ValueError("triangulations of different polygons")
    block = _blocking_masks(t.n)
    return not any(block[k] & t2.bits for k in _bit_positions(t.bits))


def successors(t: Triangulation, pool=None) -> list[Triangulation]:
    """All T' (from ``pool``, default T_n) with T ⊏ T'."""
    pool = enumerate_triangulations(t.n) if pool is None else pool
    block = 0
    masks = _blocking_masks(t.n)
    for k in _bit_positions(t.bits):
        block |= masks[k]
    return [u for u in pool if not block & u.bits]


# -- k-parenthesizations ------------------------------------------------------

def _compositions(lo: int, hi: int) -> Iterator[list[tuple[int, int]]]:
    """Splits of lo..hi-1 into consecutive nonempty blocks (none if lo == hi)."""
    if lo == hi:
        yield []
        return
    for cut in range(lo + 1, hi + 1):
        for rest in _compositions(cut, hi):
            yield [(lo, cut)] + rest


@lru_cache(maxsize=None)
def k_parenthesizations(k: int, lo: int, hi: int) -> tuple[ParenTree, ...]:
    """All k-parenthesizations of the symbols lo..hi-1, built from their
    unique spine decomposition."""
    m = hi - lo
    if m < 1:
        return ()
    if m == 1:
        return (Leaf(lo),)
    if k == 0:
        return ()
    out = []
    if k % 2:
        sym, block_lo, block_hi = hi - 1, lo, hi - 1
    else:
        sym, block_lo, block_hi = lo, lo + 1, hi
    for blocks in _compositions(block_lo, block_hi):
        choices = [k_parenthesizations(k - 1, a, b) for a, b in blocks]
        for picked in _product(choices):
            acc: ParenTree = Leaf(sym)
            if k % 2:
                for sub in reversed(picked):
                    acc = Node(sub, acc)
            else:
                for sub in picked:
                    acc = Node(acc, sub)
            out.append(acc)
    return tuple(out)


def _product(choices):
    if not choices:
        yield []
        return
    for head in choices[0]:
        for tail in _product(choices[1:]):
            yield [head] + tail


def enumerate_Tk(n: int, k: int) -> list[Triangulation]:
    return [from_parenthesization(tree, n) for tree in k_parenthesizations(k, 1, n)]


def enumerate_T3(n: int) -> list[Triangulation]:
    return enumerate_Tk(n, 3)


def filter_Tk(n: int, k: int) -> list[Triangulation]:
    """T^(k)_n by testing every triangulation (independent of generation)."""
    return [t for t in enumerate_triangulations(n)
            if is_k_parenthesization(to_parenthesization(t), k)]


def count_Tk(n: int, k: int) -> int:
    """|T^(k)_n| from f_0 = t, f_k = t / (1 - f_{k-1}), exact integers."""
    if n < 2:
        raise ValueError("n must be at least 2")
    deg = n - 1
    f = [0, 1] + [0] * (deg - 1)
    for _ in range(k):
        g = [1] + [0] * deg  # g = 1 / (1 - f)
        for m in range(1, deg + 1):
            g[m] = sum(f[i] * g[m - i] for i in range(1, m + 1))
        f = [0] + g[:deg]
    return f[deg]


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


# -- the map into T^(3) -----------------------------------------------------------

@dataclass(frozen=True)
class T3Witness:
    a: tuple[int, ...]
    J: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"a": list(self.a), "J": [list(x) for x in self.J]}


def t3_witness(t: Triangulation) -> T3Witness:
    """Neighbours a_1 = 1 < ... < a_l = n-1 of vertex n, and for each gap the
    vertices j in [a_i + 2, a_{i+1} - 1] joined by a diagonal to some j' < j."""
    t.validate()
    n = t.n
    if n < 4:
        raise InvariantViolation("needs n >= 4")
    a = sorted({1, n - 1} | {i for i, j in t.diagonals if j == n})
    lower_nbr = {j for i, j in t.diagonals}
    J = []
    for lo, hi in zip(a, a[1:]):
        J.append(tuple(j for j in range(lo + 2, hi) if j in lower_nbr))
    return T3Witness(tuple(a), tuple(J))


def from_t3_witness(n: int, w: T3Witness) -> Triangulation:
    a, J = w.a, w.J
    diags = set()
    for i in range(1, len(a) - 1):
        diags.add((a[i], n))
    for i, (lo, hi) in enumerate(zip(a, a[1:])):
        if hi - lo >= 2:
            diags.add((lo, hi))
        for j in J[i]:
            diags.add((lo, j))
        breaks = sorted(J[i]) + [hi]
        for j in range(lo + 2, hi):
            if j not in J[i]:
                jp = min(b for b in breaks if b > j)
                diags.add((j - 1, jp))
    return Triangulation.from_diagonals(n, sorted(diags))


def map_to_T3(t: Triangulation) -> Triangulation:
    return from_t3_witness(t.n, t3_witness(t))


def check_nobetter(n: int) -> bool:
    """Every T in T^(3)_n has itself as its only ⊏-successor."""
    pool = enumerate_triangulations(n)
    return all(successors(t, pool) == [t] for t in enumerate_T3(n))


# -- the Z swap ----------------------------------------------------------------------

@dataclass(frozen=True)
class ZSwap:
    z_copy: tuple[int, ...]
    normalized: Triangulation  # dihedral image with i1 < ... < i5 < i6 = n
    swapped: Triangulation

    def to_json(self) -> dict:
        return {"z_copy": list(self.z_copy),
                "normalized": self.normalized.to_json(),
                "swapped": self.swapped.to_json()}


def z_swap(t: Triangulation) -> Optional[ZSwap]:
    """Normalize a Z-copy so i6 = n, then exchange {i2,i5} for {i1,i4}."""
    copies = z_copies(t)
    if not copies:
        return None
    n = t.n
    seq = copies[0]
    for g in dihedral_group(n):
        img = [g.apply_vertex(n, v) for v in seq]
        if img[5] == n and all(x < y for x, y in zip(img, img[1:])):
            break
    else:  # pragma: no cover - a cyclic 6-tuple always normalizes
        raise AssertionError(f"cannot normalize {seq}")
    i1, i2, i3, i4, i5, _ = img
    normal = dihedral_apply(t, g)
    diags = [d for d in normal.diagonals if d != (i2, i5)] + [(i1, i4)]
    swapped = Triangulation.from_diagonals(n, diags)
    return ZSwap(tuple(img), normal, swapped)


def t3_deletion_scan(n: int, timeout: Optional[float] = None, engine: str = "backtrack"):
    """Exploration hook: chi of KG(T^(3)_n minus one vertex), for each vertex.

    Reports values only; nothing is asserted about which are deletable.
    """
    from .kneser import build_kneser, triangulation_family
    from .solvers import chromatic_number

    ts = enumerate_T3(n)
    graph = build_kneser(triangulation_family(ts))
    rows = []
    for v, t in enumerate(ts):
        cert = chromatic_number(graph.delete_vertex(v), timeout=timeout, engine=engine)
        rows.append({"triangulation": t.to_json(), "chi": cert.value, "exact": cert.exact})
    return rows
