"""Kneser graphs and hypergraphs of finite set families, and the explicit
colorings and cliques of the triangulation Kneser graph."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence, Union

from .polygon import (
    Triangulation,
    _bit_positions,
    all_diagonals,
    diagonal_index,
    enumerate_triangulations,
    star_center,
    triangles_of,
    wrap,
    Dihedral,
    dihedral_apply,
)


class ColoringError(ValueError):
    pass


class NoColor(ColoringError):
    """Raised when a partial coloring rule is applied outside its domain."""


@dataclass(frozen=True)
class SetFamily:
    ground: int
    members: tuple[int, ...]
    labels: Optional[tuple] = None

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise ValueError("family members must be distinct")
        if any(m >> self.ground for m in self.members):
            raise ValueError("member outside the ground set")
        if self.labels is not None and len(self.labels) != len(self.members):
            raise ValueError("one label per member")

    def __len__(self) -> int:
        return len(self.members)

    def subfamily(self, keep: Sequence[int]) -> "SetFamily":
        labels = None if self.labels is None else tuple(self.labels[i] for i in keep)
        return SetFamily(self.ground, tuple(self.members[i] for i in keep), labels)

    def without(self, index: int) -> "SetFamily":
        return self.subfamily([i for i in range(len(self)) if i != index])


def triangulation_family(triangulations: Sequence[Triangulation]) -> SetFamily:
    n = triangulations[0].n
    return SetFamily(len(all_diagonals(n)),
                     tuple(t.bits for t in triangulations),
                     tuple(triangulations))


def full_family(n: int) -> SetFamily:
    return triangulation_family(enumerate_triangulations(n))


def k_subset_family(n: int, k: int) -> SetFamily:
    subsets = list(combinations(range(1, n + 1), k))
    return SetFamily(n, tuple(sum(1 << (x - 1) for x in s) for s in subsets),
                     tuple(subsets))


@dataclass(frozen=True)
class KneserGraph:
    family: Optional[SetFamily]
    adj: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.adj):
            for v in _bit_positions(row >> (u + 1)):
                yield u, u + 1 + v

    @cached_property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def complement_adj(self) -> tuple[int, ...]:
        full = (1 << self.order) - 1
        return tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj))

    def induced(self, keep: Sequence[int]) -> "KneserGraph":
        if self.family is not None:
            return build_kneser(self.family.subfamily(keep))
        pos = {v: i for i, v in enumerate(keep)}
        return KneserGraph(None, tuple(
            sum(1 << pos[u] for u in _bit_positions(self.adj[v]) if u in pos) for v in keep))

    def delete_vertex(self, v: int) -> "KneserGraph":
        return self.induced([u for u in range(self.order) if u != v])


def build_kneser(family: SetFamily) -> KneserGraph:
    members = family.members
    rows = [0] * len(members)
    for u, a in enumerate(members):
        for v in range(u + 1, len(members)):
            if not a & members[v]:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return KneserGraph(family, tuple(rows))


def graph_from_adjacency(adj: Sequence[int]) -> KneserGraph:
    """Wrap a raw adjacency (e.g. a parsed DIMACS file) as a graph with no family."""
    return KneserGraph(None, tuple(adj))


@dataclass(frozen=True)
class KneserHypergraph:
    """r-uniform Kneser hypergraph; edges are r pairwise disjoint members."""
    family: SetFamily
    r: int

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("uniformity r must be at least 2")

    @cached_property
    def graph(self) -> KneserGraph:
        return build_kneser(self.family)

    def __len__(self) -> int:
        return len(self.family)

    def edges(self) -> Iterator[tuple[int, ...]]:
        """Lazily enumerate r-cliques of the disjointness graph."""
        return r_cliques(self.graph.adj, self.r)


def r_cliques(adj: Sequence[int], r: int) -> Iterator[tuple[int, ...]]:
    """All r-cliques (increasing vertex tuples), generated lazily."""
    def extend(clique, cand):
        if len(clique) == r:
            yield tuple(clique)
            return
        for v in _bit_positions(cand):
            yield from extend(clique + [v], cand & adj[v] & ~((2 << v) - 1))

    for v in range(len(adj)):
        yield from extend([v], adj[v] & ~((2 << v) - 1))


def has_clique(adj: Sequence[int], cand: int, size: int) -> Optional[list[int]]:
    """Some clique of ``size`` vertices inside bitset ``cand``, or None."""
    if size == 0:
        return []
    if cand.bit_count() < size:
        return None
    for v in _bit_positions(cand):
        rest = has_clique(adj, cand & adj[v] & ~((2 << v) - 1), size - 1)
        if rest is not None:
            return [v] + rest
    return None


@dataclass(frozen=True)
class Coloring:
    colors: tuple
    k: int = field(default=0)

    def __post_init__(self):
        if not self.k:
            object.__setattr__(self, "k", len({c for c in self.colors if c is not None}))

    def __len__(self) -> int:
        return len(self.colors)

    def classes(self) -> dict:
        out: dict = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return out

    def class_masks(self) -> dict:
        out: dict = {}
        for v, c in enumerate(self.colors):
            out[c] = out.get(c, 0) | 1 << v
        return out


def verify_coloring(graph: Union[KneserGraph, KneserHypergraph], coloring: Coloring):
    """Return ``(True, None)`` or ``(False, first monochromatic edge)``."""
    if len(coloring) != len(graph) or any(c is None for c in coloring.colors):
        raise ColoringError("coloring must assign a color to every vertex")
    if isinstance(graph, KneserHypergraph):
        adj, r = graph.graph.adj, graph.r
    else:
        adj, r = graph.adj, 2
    for c, mask in sorted(coloring.class_masks().items()):
        for v in _bit_positions(mask):
            rest = has_clique(adj, mask & adj[v] & ~((2 << v) - 1), r - 1)
            if rest is not None:
                return False, tuple([v] + rest)
    return True, None


# -- explicit colorings of KG(T_n) ------------------------------------------

def fan_color(t: Triangulation) -> int:
    """The apex i of the triangle sitting on side {n-1, n}."""
    n = t.n
    for a, b, c in triangles_of(t):
        if (b, c) == (n - 1, n):
            return a
    raise AssertionError("side {n-1,n} lies in no triangle")


def ear_color(t: Triangulation) -> int:
    """Least i in [n-2] such that {i, i+1, i+2} is a triangle."""
    if t.n == 3:
        return 1
    tris = triangles_of(t)
    for i in range(1, t.n - 1):
        if (i, i + 1, i + 2) in tris:
            return i
    raise AssertionError(f"{t} has no ear among 1..n-2")


def star_deleted_color(t: Triangulation, center: Optional[int] = None) -> int:
    """Least i in [n-3] with {i, i+2} in t, after rotating ``center`` to n.

    Defined on every triangulation except the star at ``center``.
    """
    n = t.n
    if n < 5:
        raise NoColor("the star-deleted coloring needs n >= 5")
    center = n if center is None else center
    rotated = dihedral_apply(t, Dihedral((n - center) % n, False))
    for i in range(1, n - 2):
        if (i, i + 2) in rotated:
            return i
    raise NoColor(f"{t} is the star at {center}")


def coloring_of(triangulations: Sequence[Triangulation], rule: Callable) -> Coloring:
    cols = tuple(rule(t) for t in triangulations)
    return Coloring(cols, len(set(cols)))


def fan_coloring(n: int, triangulations=None) -> Coloring:
    ts = enumerate_triangulations(n) if triangulations is None else triangulations
    return Coloring(tuple(fan_color(t) for t in ts), max(n - 2, 1))


def ear_coloring(n: int, triangulations=None) -> Coloring:
    ts = enumerate_triangulations(n) if triangulations is None else triangulations
    return Coloring(tuple(ear_color(t) for t in ts), max(n - 2, 1))


def star_deleted_coloring(n: int, center: int, triangulations=None) -> Coloring:
    """Coloring of the given triangulations (default: T_n minus the star)."""
    if triangulations is None:
        triangulations = [t for t in enumerate_triangulations(n)
                          if not (t.n > 4 and _is_star_at(t, center))]
    return Coloring(tuple(star_deleted_color(t, center) for t in triangulations), n - 3)


def _is_star_at(t: Triangulation, center: int) -> bool:
    return all(center in d for d in t.diagonals)


def common_triangle(triangulations: Sequence[Triangulation]) -> set:
    """Triangles shared by every member of a color class."""
    shared = None
    for t in triangulations:
        tris = set(triangles_of(t))
        shared = tris if shared is None else shared & tris
    return shared or set()


# -- cliques ------------------------------------------------------------------

def zigzag(n: int, i: int) -> Triangulation:
    """Zig-zag path i, i+2, i-1, i+3, i-2, ... through n-3 diagonals."""
    seq = []
    for t in range(n - 2):
        m = t // 2
        seq.append(wrap(n, i - m) if t % 2 == 0 else wrap(n, i + 2 + m))
    return Triangulation.from_diagonals(n, zip(seq, seq[1:]))


def zigzag_cliques(n: int) -> list[Triangulation]:
    if n < 4:
        raise ValueError("zig-zag cliques need n >= 4")
    return [zigzag(n, i) for i in range(1, n // 2 + 1)]


def clique_number_bound(n: int) -> int:
    """floor(|Diag_n| / (n-3)) = floor(n/2): pairwise disjoint sets of size n-3."""
    return len(all_diagonals(n)) // (n - 3)


# -- 2-colorability witness --------------------------------------------------

def cd2_witness_check(n: int) -> bool:
    """True iff coloring {i,i+2} (i in [n-2]) red and everything else blue
    leaves no triangulation monochromatic."""
    if n < 5:
        raise ValueError("the witness is only meaningful for n >= 5")
    idx = diagonal_index(n)
    red = sum(1 << idx[(i, i + 2)] for i in range(1, n - 1))
    blue = ((1 << len(idx)) - 1) & ~red
    return all(t.bits & red and t.bits & blue for t in enumerate_triangulations(n))


# -- triangle membership -----------------------------------------------------

def triangle_membership(t: Triangulation, graph: Optional[KneserGraph] = None) -> bool:
    """Whether two further triangulations pairwise disjoint from t exist."""
    if graph is None:
        graph = full_family_graph(t.n)
    labels = graph.family.labels
    v = labels.index(t)
    nbrs = graph.adj[v]
    return any(graph.adj[u] & nbrs for u in _bit_positions(nbrs))


_GRAPH_CACHE: dict = {}


def full_family_graph(n: int) -> KneserGraph:
    if n not in _GRAPH_CACHE:
        _GRAPH_CACHE[n] = build_kneser(full_family(n))
    return _GRAPH_CACHE[n]


def expected_triangle_free(t: Triangulation) -> bool:
    return star_center(t) is not None or (t.n == 6 and t in _deltas())


def _deltas():
    from .polygon import delta_hexagon, delta_prime_hexagon
    return (delta_hexagon(), delta_prime_hexagon())


# -- hypergraph upper bounds for T_n ------------------------------------------

def grouped_fan_coloring(n: int, r: int, triangulations=None) -> Coloring:
    """Merge r-1 consecutive fan colors: ceil((n-2)/(r-1)) colors."""
    ts = enumerate_triangulations(n) if triangulations is None else triangulations
    k = math.ceil((n - 2) / (r - 1))
    return Coloring(tuple((fan_color(t) - 1) // (r - 1) + 1 for t in ts), k)


def grouped_star_deleted_coloring(n: int, r: int, center: Optional[int] = None,
                                  triangulations=None) -> Coloring:
    """Star-deleted colors merged in groups of r-1; the star itself (in no
    hyperedge when r >= 3) gets color 1.  ceil((n-3)/(r-1)) colors."""
    if r < 3:
        raise ValueError("the star lies in hyperedges when r = 2")
    center = n if center is None else center
    ts = enumerate_triangulations(n) if triangulations is None else triangulations
    k = max(1, math.ceil((n - 3) / (r - 1)))
    cols = []
    for t in ts:
        try:
            c = star_deleted_color(t, center)
        except NoColor:
            c = 1
        cols.append((c - 1) // (r - 1) + 1)
    return Coloring(tuple(cols), k)


# -- DIMACS -----------------------------------------------------------------

def dimacs_text(graph: KneserGraph, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {line}" for line in comment.splitlines())
    lines.append(f"p edge {graph.order} {graph.num_edges}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def export_dimacs(graph: KneserGraph, path, comment: Optional[str] = None) -> Path:
    path = Path(path)
    path.write_text(dimacs_text(graph, comment))
    return path


def parse_dimacs(text: str) -> tuple[int, ...]:
    """Adjacency rows from DIMACS .col text."""
    rows: list[int] = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            rows = [0] * int(parts[2])
        elif parts[0] == "e":
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    return tuple(rows)
