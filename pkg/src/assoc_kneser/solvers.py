"""Exact chromatic, clique and independence numbers over bitset adjacency.

Two complete k-colorability engines are provided:

``backtrack``
    DSATUR-ordered backtracking with forward checking, written here.  It
    also handles r-uniform Kneser hypergraphs, where a color is forbidden
    for a vertex once it would close an r-clique inside that color class.
``sat``
    A CNF encoding handed to CaDiCaL through ``python-sat`` (optional
    dependency).  Used as an independent cross-check and for the largest
    instances.

A timeout never produces a wrong exact value: the result is flagged
inexact and carries the bracketing bounds found so far.
"""

from __future__ import annotations

import sys
import threading
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .kneser import (
    Coloring,
    KneserGraph,
    KneserHypergraph,
    SetFamily,
    has_clique,
    r_cliques,
    verify_coloring,
)
from .polygon import _bit_positions

ENGINES = ("backtrack", "sat")


class SolverTimeout(Exception):
    pass


class _Clock:
    def __init__(self, timeout: Optional[float]):
        self.deadline = None if timeout is None else time.monotonic() + timeout

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolverTimeout

    def remaining(self) -> Optional[float]:
        return None if self.deadline is None else max(0.0, self.deadline - time.monotonic())


def _recursion_headroom(depth: int) -> None:
    if sys.getrecursionlimit() < depth + 1000:
        sys.setrecursionlimit(depth + 1000)


# -- maximum clique -----------------------------------------------------------

@dataclass
class CliqueResult:
    value: int
    witness: tuple[int, ...]
    exact: bool = True
    upper: Optional[int] = None
    nodes: int = 0

    def __post_init__(self):
        if self.upper is None:
            self.upper = self.value

    def to_json(self) -> dict:
        return {"value": self.value, "witness": list(self.witness),
                "exact": self.exact, "upper": self.upper}


def _color_bound(adj: Sequence[int], cand: int) -> list[tuple[int, int]]:
    """Greedy sequential coloring of ``cand``; (vertex, color) by color."""
    order = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v] & ~low
            uncolored &= ~low
            order.append((v, color))
    return order


def max_clique(adj: Sequence[int], timeout: Optional[float] = None,
               seed: Sequence[int] = ()) -> CliqueResult:
    """Branch and bound with greedy-coloring bounds (Tomita-style)."""
    clock = _Clock(timeout)
    best = list(seed)
    nodes = 0
    _recursion_headroom(len(adj))

    def expand(clique: list[int], cand: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes & 1023 == 0:
            clock.check()
        for v, c in reversed(_color_bound(adj, cand)):
            if len(clique) + c <= len(best):
                return
            nxt = cand & adj[v]
            if nxt:
                expand(clique + [v], nxt)
            elif len(clique) + 1 > len(best):
                best = clique + [v]
            cand &= ~(1 << v)

    everything = (1 << len(adj)) - 1
    try:
        expand([], everything)
    except SolverTimeout:
        root = max((c for _, c in _color_bound(adj, everything)), default=0)
        return CliqueResult(len(best), tuple(sorted(best)), False, root, nodes)
    return CliqueResult(len(best), tuple(sorted(best)), True, len(best), nodes)


def clique_number(graph: KneserGraph, timeout: Optional[float] = None) -> CliqueResult:
    if not graph.order:
        raise ValueError("empty graph")
    return max_clique(graph.adj, timeout)


def independence_number(graph: KneserGraph, timeout: Optional[float] = None) -> CliqueResult:
    """Largest intersecting subfamily, as a clique of the complement."""
    if not graph.order:
        raise ValueError("empty graph")
    return max_clique(graph.complement_adj(), timeout)


def is_clique(adj: Sequence[int], vertices: Sequence[int]) -> bool:
    return all(adj[u] >> v & 1 for i, u in enumerate(vertices) for v in vertices[i + 1:])


# -- greedy upper bound -------------------------------------------------------

def dsatur_greedy(adj: Sequence[int]) -> list[int]:
    """DSATUR heuristic; colors are 0-based."""
    n = len(adj)
    colors = [-1] * n
    seen = [0] * n  # bitmask of neighbor colors
    deg = [row.bit_count() for row in adj]
    for _ in range(n):
        v = max((u for u in range(n) if colors[u] < 0),
                key=lambda u: (seen[u].bit_count(), deg[u], -u))
        c = 0
        while seen[v] >> c & 1:
            c += 1
        colors[v] = c
        for u in _bit_positions(adj[v]):
            seen[u] |= 1 << c
    return colors


def degeneracy_order(adj: Sequence[int]) -> list[int]:
    """Vertices in reverse smallest-last order (dense core first)."""
    n = len(adj)
    alive = (1 << n) - 1
    removed = []
    for _ in range(n):
        v = min(_bit_positions(alive), key=lambda u: ((adj[u] & alive).bit_count(), u))
        removed.append(v)
        alive &= ~(1 << v)
    return removed[::-1]


# -- complete k-colorability ----------------------------------------------------

@dataclass
class SearchStats:
    nodes: int = 0
    engine: str = "backtrack"


def k_coloring_backtrack(adj: Sequence[int], k: int, r: int = 2,
                         fixed: Sequence[int] = (), timeout: Optional[float] = None,
                         stats: Optional[SearchStats] = None) -> Optional[list[int]]:
    """A proper k-coloring (0-based) of the r-uniform Kneser structure, or None.

    ``fixed`` vertices receive colors 0, 1, ... in order; for r = 2 this is
    sound when they form a clique.  New colors are opened one at a time,
    which removes color-permutation symmetry.
    """
    n = len(adj)
    if k <= 0:
        return None if n else []
    clock = _Clock(timeout)
    stats = stats if stats is not None else SearchStats()
    colors = [-1] * n
    forb = [0] * n
    members = [0] * k
    rank = {v: i for i, v in enumerate(degeneracy_order(adj))}
    tie = [(adj[v].bit_count(), -rank[v]) for v in range(n)]
    _recursion_headroom(n)

    def assign(v: int, c: int) -> list[int]:
        colors[v] = c
        members[c] |= 1 << v
        bit = 1 << c
        trail = []
        row = adj[v]
        cls = members[c]
        for u in _bit_positions(row):
            if colors[u] >= 0 or forb[u] & bit:
                continue
            if r == 2 or has_clique(adj, adj[u] & row & cls, r - 2) is not None:
                forb[u] |= bit
                trail.append(u)
        return trail

    def unassign(v: int, c: int, trail: list[int]) -> None:
        colors[v] = -1
        members[c] &= ~(1 << v)
        mask = ~(1 << c)
        for u in trail:
            forb[u] &= mask

    full = (1 << k) - 1
    used = 0
    for i, v in enumerate(fixed):
        if i >= k:
            return None
        if forb[v] >> i & 1:
            return None
        assign(v, i)
        used = i + 1

    def pick() -> tuple[int, int]:
        best, key = -1, None
        for v in range(n):
            if colors[v] < 0:
                kv = ((forb[v] & full).bit_count(), tie[v])
                if key is None or kv > key:
                    best, key = v, kv
        return best, (key[0] if key else 0)

    def rec(used: int) -> bool:
        stats.nodes += 1
        if stats.nodes & 1023 == 0:
            clock.check()
        v, sat = pick()
        if v < 0:
            return True
        if sat >= k:
            return False
        avail = full & ~forb[v]
        for c in range(min(used + 1, k)):
            if avail >> c & 1:
                trail = assign(v, c)
                if rec(max(used, c + 1)):
                    return True
                unassign(v, c, trail)
        return False

    if rec(used):
        return colors
    return None


def sat_available() -> bool:
    try:
        import pysat.solvers  # noqa: F401
    except ImportError:
        return False
    return True


def k_coloring_sat(adj: Sequence[int], k: int, r: int = 2, fixed: Sequence[int] = (),
                   timeout: Optional[float] = None,
                   stats: Optional[SearchStats] = None) -> Optional[list[int]]:
    """Same contract as :func:`k_coloring_backtrack`, decided by CaDiCaL."""
    from pysat.solvers import Cadical153

    n = len(adj)
    if k <= 0:
        return None if n else []
    if len(fixed) > k:
        return None
    stats = stats if stats is not None else SearchStats(engine="sat")
    stats.engine = "sat"

    def var(v, c):
        return v * k + c + 1

    solver = Cadical153()
    try:
        for v in range(n):
            solver.add_clause([var(v, c) for c in range(k)])
        if r == 2:
            for u in range(n):
                for v in _bit_positions(adj[u] >> (u + 1)):
                    v += u + 1
                    for c in range(k):
                        solver.add_clause([-var(u, c), -var(v, c)])
        else:
            for edge in r_cliques(adj, r):
                for c in range(k):
                    solver.add_clause([-var(v, c) for v in edge])
        for i, v in enumerate(fixed):
            solver.add_clause([var(v, i)])
        remaining = None if timeout is None else timeout
        if remaining is None:
            ok = solver.solve()
        else:
            timer = threading.Timer(remaining, solver.interrupt)
            timer.start()
            try:
                ok = solver.solve_limited(expect_interrupt=True)
            finally:
                timer.cancel()
            if ok is None:
                raise SolverTimeout
        if not ok:
            return None
        model = set(x for x in solver.get_model() if x > 0)
        return [next(c for c in range(k) if var(v, c) in model) for v in range(n)]
    finally:
        solver.delete()


def k_coloring(adj, k, r=2, fixed=(), timeout=None, engine="backtrack", stats=None):
    if engine == "sat":
        return k_coloring_sat(adj, k, r, fixed, timeout, stats)
    if engine == "backtrack":
        return k_coloring_backtrack(adj, k, r, fixed, timeout, stats)
    raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")


# -- chromatic number -----------------------------------------------------------

@dataclass
class ChromaticCertificate:
    value: int
    coloring: tuple[int, ...]
    lower_bound_witness: dict
    exact: bool = True
    lower: int = 0
    upper: int = 0
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "coloring": list(self.coloring),
            "lower_bound_witness": self.lower_bound_witness,
            "exact": self.exact,
            "lower": self.lower,
            "upper": self.upper,
        }

    def as_coloring(self) -> Coloring:
        return Coloring(self.coloring, self.upper)


def _normalize(colors: Sequence[int]) -> tuple[int, ...]:
    """Relabel to 1..k in order of first appearance."""
    relabel: dict = {}
    return tuple(relabel.setdefault(c, len(relabel) + 1) for c in colors)


def chromatic_number(graph: KneserGraph, timeout: Optional[float] = None,
                     engine: str = "backtrack", symmetry: bool = True,
                     clique: Optional[Sequence[int]] = None,
                     upper_colorings: Sequence[Sequence] = (),
                     core: Optional[Sequence[int]] = None) -> ChromaticCertificate:
    """Exact chromatic number with a certificate.

    The lower bound is seeded with a maximum clique (``clique`` if given),
    the upper bound with DSATUR and any supplied colorings; k-colorability
    is then decided downward until a complete search refutes it.

    ``core`` names vertices of an induced subgraph to try first at each k:
    refuting k colors there refutes them for the whole graph.
    """
    adj = graph.adj
    if not adj:
        raise ValueError("empty graph")
    start = time.monotonic()
    clock = _Clock(timeout)
    if clique is None:
        cq = max_clique(adj, clock.remaining())
        clique = list(cq.witness)
    else:
        clique = list(clique)
        if not is_clique(adj, clique):
            raise ValueError("seed is not a clique")
    lower = max(1, len(clique))

    best = _normalize(dsatur_greedy(adj))
    for cols in upper_colorings:
        cand = _normalize(cols)
        if max(cand) < max(best) and verify_coloring(graph, Coloring(cand))[0]:
            best = cand
    upper = max(best)
    stats = SearchStats(engine=engine)
    witness: dict = {"type": "clique", "vertices": sorted(clique)}

    # each stage is (vertex list or None for the whole graph, adjacency, fixed clique)
    stages = []
    if core is not None:
        core = sorted(set(core))
        sub = graph.induced(core).adj
        core_clique = list(max_clique(sub, clock.remaining()).witness)
        stages.append((core, sub, core_clique if symmetry else ()))
    stages.append((None, adj, clique if symmetry else ()))

    k = upper - 1
    try:
        while k >= lower:
            found = None
            for verts, sub, fixed in stages:
                found = k_coloring(sub, k, 2, fixed, clock.remaining(), engine, stats)
                if found is None:
                    to_full = (lambda v: v) if verts is None else (lambda v: verts[v])
                    witness = {
                        "type": "exhaustive",
                        "refuted_k": k,
                        "engine": engine,
                        "nodes": stats.nodes,
                        "subgraph": None if verts is None else verts,
                        "fixed_clique": sorted(to_full(v) for v in fixed),
                        "clique": sorted(clique),
                        "statement": f"no {k}-coloring found by complete search"
                                     + ("" if verts is None else " of the induced subgraph"),
                    }
                    break
                if verts is None:
                    break
            if found is None:
                lower = k + 1
                break
            best = _normalize(found)
            upper = max(best)
            k = upper - 1
    except SolverTimeout:
        return ChromaticCertificate(upper, best, witness, False, lower, upper,
                                    time.monotonic() - start)
    return ChromaticCertificate(upper, best, witness, True, upper, upper,
                                time.monotonic() - start)


def verify_certificate(graph: KneserGraph, cert: ChromaticCertificate) -> bool:
    ok, _ = verify_coloring(graph, Coloring(cert.coloring))
    if not ok or max(cert.coloring) != cert.upper:
        return False
    clique = cert.lower_bound_witness.get("clique") or cert.lower_bound_witness.get("vertices")
    if clique is not None and not is_clique(graph.adj, clique):
        return False
    if cert.lower_bound_witness["type"] == "clique" and cert.exact:
        return len(clique) == cert.value
    return True


# -- hypergraphs --------------------------------------------------------------------

@dataclass
class HyperResult:
    r: int
    value: int
    coloring: tuple[int, ...]
    exact: bool
    lower: int
    upper: int
    witness: dict
    upper_colorings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"r": self.r, "value": self.value, "coloring": list(self.coloring),
                "exact": self.exact, "lower": self.lower, "upper": self.upper,
                "lower_bound_witness": self.witness,
                "upper_colorings": self.upper_colorings}


def hypergraph_chromatic(target: Union[SetFamily, KneserHypergraph], r: Optional[int] = None,
                         timeout: Optional[float] = None, engine: str = "backtrack",
                         upper_colorings: Optional[dict] = None) -> HyperResult:
    """Exact chromatic number of an r-uniform Kneser hypergraph.

    ``upper_colorings`` maps a name to a Coloring; each is verified and
    reported, and the best proper one seeds the upper bound.
    """
    hyper = target if isinstance(target, KneserHypergraph) else KneserHypergraph(target, r)
    r = hyper.r
    adj = hyper.graph.adj
    n = len(adj)
    if not n:
        raise ValueError("empty hypergraph")
    clock = _Clock(timeout)
    report = {}
    best: Optional[tuple] = None
    for name, col in (upper_colorings or {}).items():
        ok, bad = verify_coloring(hyper, col)
        report[name] = {"colors": col.k, "proper": ok,
                        "violation": None if bad is None else list(bad)}
        if ok and (best is None or len(set(col.colors)) < max(best)):
            best = _normalize(col.colors)

    edge = next(iter(r_cliques(adj, r)), None)
    if edge is None:
        return HyperResult(r, 1, (1,) * n, True, 1, 1, {"type": "no-edges"}, report)
    if best is None:
        found = None
        k = 2
        while found is None:
            found = k_coloring(adj, k, r, (), None, "backtrack")
            k += 1
        best = _normalize(found)
    upper = max(best)
    lower = 2
    witness: dict = {"type": "edge", "vertices": list(edge)}
    stats = SearchStats(engine=engine)
    k = upper - 1
    try:
        while k >= lower:
            found = k_coloring(adj, k, r, (edge[0],), clock.remaining(), engine, stats)
            if found is None:
                witness = {"type": "exhaustive", "refuted_k": k, "engine": engine,
                           "nodes": stats.nodes,
                           "statement": f"no {k}-coloring found by complete search"}
                lower = k + 1
                break
            best = _normalize(found)
            upper = max(best)
            k = upper - 1
    except SolverTimeout:
        return HyperResult(r, upper, best, False, lower, upper, witness, report)
    return HyperResult(r, upper, best, True, upper, upper, witness, report)
