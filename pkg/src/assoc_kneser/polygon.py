"""Triangulations of a convex n-gon.

Vertices are labelled 1..n in cyclic order.  A diagonal is stored as an
ordered pair ``(i, j)`` with ``i < j``; a set of diagonals is an ``int``
bitmask whose bit positions follow the lexicographic order returned by
:func:`all_diagonals`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator, NamedTuple, Optional, Union


class InvalidSize(ValueError):
    pass


class InvariantViolation(ValueError):
    pass


class Diagonal(NamedTuple):
    i: int
    j: int

    def __str__(self) -> str:
        return f"{{{self.i},{self.j}}}"


def make_diagonal(n: int, a: int, b: int) -> Diagonal:
    i, j = min(a, b), max(a, b)
    if not (1 <= i < j <= n) or j - i in (1, n - 1):
        raise ValueError(f"{{{a},{b}}} is not a diagonal of the {n}-gon")
    return Diagonal(i, j)


def _check_size(n: int) -> None:
    if n < 3:
        raise InvalidSize(f"polygon needs at least 3 vertices, got {n}")


@lru_cache(maxsize=None)
def all_diagonals(n: int) -> tuple[Diagonal, ...]:
    """Diagonals of the n-gon in lexicographic order; index = bit position."""
    _check_size(n)
    return tuple(
        Diagonal(i, j)
        for i in range(1, n + 1)
        for j in range(i + 2, n + 1)
        if j - i != n - 1
    )


@lru_cache(maxsize=None)
def diagonal_index(n: int) -> dict[Diagonal, int]:
    return {d: k for k, d in enumerate(all_diagonals(n))}


def crosses(d: Diagonal, e: Diagonal) -> bool:
    """Strict interleaving of endpoints; shared endpoints do not cross."""
    (i, j), (k, l) = d, e
    return i < k < j < l or k < i < l < j


@lru_cache(maxsize=None)
def crossing_masks(n: int) -> tuple[int, ...]:
    """For each diagonal index, the bitmask of diagonals crossing it."""
    diags = all_diagonals(n)
    out = []
    for d in diags:
        m = 0
        for k, e in enumerate(diags):
            if crosses(d, e):
                m |= 1 << k
        out.append(m)
    return tuple(out)


def wrap(n: int, v: int) -> int:
    """Cyclic vertex arithmetic mapped into 1..n."""
    return (v - 1) % n + 1


def is_edge(n: int, a: int, b: int) -> bool:
    """True for polygon sides."""
    return (a - b) % n in (1, n - 1)


@dataclass(frozen=True)
class Triangulation:
    n: int
    bits: int

    def __post_init__(self):
        _check_size(self.n)

    @classmethod
    def from_diagonals(cls, n: int, diagonals, validate: bool = True) -> "Triangulation":
        idx = diagonal_index(n)
        bits = 0
        for a, b in diagonals:
            bits |= 1 << idx[make_diagonal(n, a, b)]
        t = cls(n, bits)
        if validate:
            t.validate()
        return t

    @property
    def diagonals(self) -> tuple[Diagonal, ...]:
        diags = all_diagonals(self.n)
        return tuple(diags[k] for k in _bit_positions(self.bits))

    def __contains__(self, d) -> bool:
        i, j = d
        k = diagonal_index(self.n).get(make_diagonal(self.n, i, j))
        return bool(self.bits >> k & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def validate(self) -> None:
        if len(self) != self.n - 3:
            raise InvariantViolation(
                f"{self.n}-gon triangulation needs {self.n - 3} diagonals, got {len(self)}")
        cm = crossing_masks(self.n)
        for k in _bit_positions(self.bits):
            if cm[k] & self.bits:
                raise InvariantViolation(f"crossing diagonals in {self}")

    def to_json(self) -> dict:
        return {"n": self.n, "diagonals": [list(d) for d in self.diagonals]}

    @classmethod
    def from_json(cls, data: Union[str, dict]) -> "Triangulation":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_diagonals(data["n"], data["diagonals"])

    def __str__(self) -> str:
        return "{" + ",".join(str(d) for d in self.diagonals) + "}"

    def __repr__(self) -> str:
        return f"Triangulation(n={self.n}, {self})"


def _bit_positions(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def popcount(x: int) -> int:
    return x.bit_count()


# -- enumeration -----------------------------------------------------------

@lru_cache(maxsize=None)
def _interval_triangulations(n: int, a: int, b: int) -> tuple[int, ...]:
    """Bitmasks triangulating the sub-polygon a, a+1, ..., b (a < b)."""
    if b - a < 2:
        return (0,)
    idx = diagonal_index(n)
    out = []
    for k in range(a + 1, b):
        here = 0
        if k - a >= 2:
            here |= 1 << idx[Diagonal(a, k)]
        if b - k >= 2:
            here |= 1 << idx[Diagonal(k, b)]
        for left in _interval_triangulations(n, a, k):
            for right in _interval_triangulations(n, k, b):
                out.append(here | left | right)
    return tuple(out)


def enumerate_triangulations(n: int) -> list[Triangulation]:
    """All triangulations of the n-gon, ordered by the apex on side {1,n}."""
    _check_size(n)
    return [Triangulation(n, bits) for bits in _interval_triangulations(n, 1, n)]


def catalan(k: int) -> int:
    c = 1
    for m in range(k):
        c = c * 2 * (2 * m + 1) // (m + 2)
    return c


# -- triangles --------------------------------------------------------------

def _edge_set(t: Triangulation) -> set[frozenset]:
    n = t.n
    edges = {frozenset((v, wrap(n, v + 1))) for v in range(1, n + 1)}
    edges.update(frozenset(d) for d in t.diagonals)
    return edges


def triangles_of(t: Triangulation) -> frozenset[tuple[int, int, int]]:
    """The n-2 triangles (sorted vertex triples) cut out by ``t``."""
    t.validate()
    n = t.n
    if n == 3:
        return frozenset({(1, 2, 3)})
    edges = _edge_set(t)
    tris = set()
    stack = [(1, n)]
    while stack:
        a, b = stack.pop()
        if b - a < 2:
            continue
        apex = [k for k in range(a + 1, b)
                if frozenset((a, k)) in edges and frozenset((k, b)) in edges]
        if len(apex) != 1:
            raise InvariantViolation(f"no unique apex over {{{a},{b}}} in {t}")
        k = apex[0]
        tris.add((a, k, b))
        stack.append((a, k))
        stack.append((k, b))
    return frozenset(tris)


def ears(t: Triangulation) -> list[int]:
    """Vertices i (1..n) such that {i, i+1, i+2} is a triangle of ``t``."""
    n = t.n
    tris = triangles_of(t)
    out = []
    for i in range(1, n + 1):
        tri = tuple(sorted((i, wrap(n, i + 1), wrap(n, i + 2))))
        if tri in tris:
            out.append(i)
    return out


# -- dihedral action --------------------------------------------------------

class Dihedral(NamedTuple):
    """v -> rotate(reflect(v)): reflect is v -> 2 - v (mod n), rotate adds r."""
    r: int = 0
    reflect: bool = False

    def apply_vertex(self, n: int, v: int) -> int:
        if self.reflect:
            v = wrap(n, 2 - v)
        return wrap(n, v + self.r)

    def compose(self, other: "Dihedral", n: int) -> "Dihedral":
        """``self.compose(g)`` acts as self after g."""
        if not self.reflect:
            return Dihedral((other.r + self.r) % n, other.reflect)
        # reflect(rot_s(x)) = rot_{-s}(reflect(x))
        return Dihedral((self.r - other.r) % n, not other.reflect)


def dihedral_group(n: int) -> list[Dihedral]:
    return [Dihedral(r, f) for f in (False, True) for r in range(n)]


def dihedral_apply(t: Triangulation, g: Dihedral) -> Triangulation:
    n = t.n
    return Triangulation.from_diagonals(
        n, [(g.apply_vertex(n, i), g.apply_vertex(n, j)) for i, j in t.diagonals],
        validate=False)


def dihedral_orbit(t: Triangulation) -> set[Triangulation]:
    return {dihedral_apply(t, g) for g in dihedral_group(t.n)}


# -- named triangulations ----------------------------------------------------

def star(n: int, center: int) -> Triangulation:
    return Triangulation.from_diagonals(
        n, [(center, wrap(n, center + k)) for k in range(2, n - 1)])


def z_hexagon() -> Triangulation:
    return Triangulation.from_diagonals(6, [(1, 5), (2, 4), (2, 5)])


def delta_hexagon() -> Triangulation:
    return Triangulation.from_diagonals(6, [(1, 3), (1, 5), (3, 5)])


def delta_prime_hexagon() -> Triangulation:
    return Triangulation.from_diagonals(6, [(2, 4), (2, 6), (4, 6)])


def star_center(t: Triangulation) -> Optional[int]:
    """Common vertex of all diagonals, or None.

    n = 3 counts as a star at 1; for n = 4 the smaller endpoint is returned.
    """
    if t.n == 3:
        return 1
    common = None
    for d in t.diagonals:
        common = set(d) if common is None else common & set(d)
    return min(common) if common else None


def is_delta_type(t: Triangulation) -> bool:
    return t.n == 6 and t in (delta_hexagon(), delta_prime_hexagon())


# -- Z-copies ---------------------------------------------------------------

def _cyclic_order(n: int, seq) -> bool:
    """True if ``seq`` visits distinct vertices monotonically around the polygon
    in one direction (either one)."""
    for sign in (1, -1):
        steps = [(sign * (b - a)) % n for a, b in zip(seq, seq[1:])]
        if all(s > 0 for s in steps) and sum(steps) < n:
            return True
    return False


def z_copies(t: Triangulation) -> list[tuple[int, ...]]:
    """All tuples (i1..i6) in cyclic order with the four Z triangles in ``t``."""
    if t.n < 6:
        return []
    tris = {frozenset(x) for x in triangles_of(t)}
    apexes: dict[frozenset, list[int]] = {}
    for tri in tris:
        for v in tri:
            apexes.setdefault(tri - {v}, []).append(v)
    found = []
    for d in t.diagonals:
        for i2, i5 in (d, d[::-1]):
            for i4, i1 in permutations(apexes[frozenset(d)], 2):
                for i3 in apexes.get(frozenset((i2, i4)), []):
                    if i3 == i5:
                        continue
                    for i6 in apexes.get(frozenset((i1, i5)), []):
                        if i6 == i2:
                            continue
                        seq = (i1, i2, i3, i4, i5, i6)
                        if _cyclic_order(t.n, seq):
                            found.append(seq)
    return sorted(set(found))


def find_z_copy(t: Triangulation) -> Optional[tuple[int, ...]]:
    copies = z_copies(t)
    return copies[0] if copies else None


# -- parenthesizations -------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    symbol: int

    @property
    def leaves(self) -> int:
        return 1

    def __str__(self) -> str:
        return f"s{self.symbol}"


@dataclass(frozen=True)
class Node:
    left: "ParenTree"
    right: "ParenTree"

    @property
    def leaves(self) -> int:
        return self.left.leaves + self.right.leaves

    def __str__(self) -> str:
        parts = []
        for sub in (self.left, self.right):
            parts.append(str(sub) if isinstance(sub, Leaf) else f"({sub})")
        return "".join(parts)


ParenTree = Union[Leaf, Node]


def leaf_symbols(tree: ParenTree) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.symbol]
    return leaf_symbols(tree.left) + leaf_symbols(tree.right)


def to_parenthesization(t: Triangulation) -> ParenTree:
    """Triangle {i<j<k} multiplies s_i..s_{j-1} by s_j..s_{k-1}."""
    edges = _edge_set(t)

    def build(a: int, b: int) -> ParenTree:
        if b == a + 1:
            return Leaf(a)
        for k in range(a + 1, b):
            if frozenset((a, k)) in edges and frozenset((k, b)) in edges:
                return Node(build(a, k), build(k, b))
        raise InvariantViolation(f"no apex over {{{a},{b}}}")

    t.validate()
    return build(1, t.n)


def from_parenthesization(tree: ParenTree, n: int) -> Triangulation:
    if tree.leaves != n - 1:
        raise ValueError(f"tree has {tree.leaves} leaves, a {n}-gon needs {n - 1}")
    diags = []

    def walk(sub: ParenTree, a: int) -> int:
        # returns b such that ``sub`` spans symbols a..b-1
        if isinstance(sub, Leaf):
            return a + 1
        k = walk(sub.left, a)
        b = walk(sub.right, k)
        if not (a == 1 and b == n):
            diags.append((a, b))
        return b

    walk(tree, 1)
    return Triangulation.from_diagonals(n, diags)


def is_k_parenthesization(tree: ParenTree, k: int) -> bool:
    """Recursive shape test; a single symbol is a k-parenthesization for every k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _is_k(tree, k)


@lru_cache(maxsize=None)
def _is_k(tree: ParenTree, k: int) -> bool:
    if isinstance(tree, Leaf):
        return True
    if k == 0:
        return False
    node = tree
    if k % 2:  # pi_1 (pi_2 ( ... (pi_l s)))
        while isinstance(node, Node):
            if not _is_k(node.left, k - 1):
                return False
            node = node.right
    else:      # ((s pi_1) pi_2) ... pi_l
        while isinstance(node, Node):
            if not _is_k(node.right, k - 1):
                return False
            node = node.left
    return True
