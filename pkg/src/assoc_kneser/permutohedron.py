"""Triangulations of the prism over a simplex as permutations, and the Kneser
graph of the permutohedron.

A permutation is a tuple of images (sigma(1), ..., sigma(n)). As a vertex of
the permutohedron it is the point (sigma(1), ..., sigma(n)); the matching prism
triangulation removes vertex v at step sigma(v), so its removal order is
sigma^-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Sequence

from .kneser import Coloring, KneserGraph, SetFamily, build_kneser

Perm = tuple[int, ...]


def check_perm(sigma: Sequence[int]) -> Perm:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{len(sigma)}")
    return sigma


def inverse(sigma: Perm) -> Perm:
    out = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        out[s - 1] = i
    return tuple(out)


def compose(a: Perm, b: Perm) -> Perm:
    """a after b."""
    return tuple(a[x - 1] for x in b)


def rho(n: int) -> Perm:
    """i -> i + 1 mod n."""
    return tuple(i % n + 1 for i in range(1, n + 1))


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Perm, ...]:
    if n < 1:
        raise ValueError("n must be positive")
    return tuple(permutations(range(1, n + 1)))


# -- prism triangulations --------------------------------------------------------------

def primed(i: int) -> str:
    return f"{i}'"


@dataclass(frozen=True)
class PrismTriangulation:
    n: int
    order: Perm  # removal order
    simplices: tuple[frozenset, ...]

    def to_json(self) -> dict:
        return {"n": self.n, "order": list(self.order),
                "simplices": [sorted(s, key=_label_key) for s in self.simplices]}


def _label_key(label):
    if isinstance(label, int):
        return (0, label)
    return (1, int(label[:-1]))


def perm_to_prism(order: Sequence[int]) -> PrismTriangulation:
    """Bottom-up: V_0 = [n]; step t removes order[t] and adds its primed copy,
    contributing the simplex V_{t-1} + {order[t]'}."""
    order = check_perm(order)
    current: set = set(range(1, len(order) + 1))
    simplices = []
    for v in order:
        simplices.append(frozenset(current | {primed(v)}))
        current = (current - {v}) | {primed(v)}
    return PrismTriangulation(len(order), order, tuple(simplices))


def prism_to_perm(simplices: Sequence) -> Perm:
    """Recover the removal order from the simplex chain."""
    simplices = [frozenset(s) for s in simplices]
    n = len(simplices)
    removed: list[int] = []
    for s in simplices:
        if len(s) != n + 1:
            raise ValueError(f"simplex {sorted(s, key=_label_key)} has the wrong size")
        bottom = {v for v in s if isinstance(v, int)}
        top = {int(v[:-1]) for v in s if isinstance(v, str)}
        new = top - set(removed)
        if len(new) != 1 or top != set(removed) | new:
            raise ValueError("malformed simplex chain")
        if bottom != set(range(1, n + 1)) - set(removed):
            raise ValueError("malformed simplex chain")
        v = new.pop()
        if v not in bottom:
            raise ValueError("malformed simplex chain")
        removed.append(v)
    order = check_perm(removed)
    if perm_to_prism(order).simplices != tuple(simplices):
        raise ValueError("malformed simplex chain")
    return order


def prism_splits(p: PrismTriangulation) -> set[frozenset]:
    """The splitting hyperplanes used by p, one per k in [n-1]: the set of the
    first k removed vertices."""
    return {frozenset(p.order[:k]) for k in range(1, p.n)}


# -- the Kneser graph ---------------------------------------------------------------------------

def prefix_sets(sigma: Perm) -> tuple[frozenset, ...]:
    inv = inverse(sigma)
    return tuple(frozenset(inv[:k]) for k in range(1, len(sigma)))


def perm_adjacent(sigma: Perm, tau: Perm) -> bool:
    """No k in [n-1] with sigma^-1([k]) = tau^-1([k])."""
    return not any(a == b for a, b in zip(prefix_sets(sigma), prefix_sets(tau)))


def perm_kneser(n: int) -> KneserGraph:
    """KG(Perm_{n-1}) on all n! permutations (lexicographic order), prefix criterion."""
    if n < 2:
        raise ValueError("n must be at least 2")
    perms = all_perms(n)
    pre = [prefix_sets(s) for s in perms]
    adj = []
    for u, a in enumerate(pre):
        row = 0
        for v, b in enumerate(pre):
            if u != v and not any(x == y for x, y in zip(a, b)):
                row |= 1 << v
        adj.append(row)
    return KneserGraph(perm_facet_family(n), tuple(adj))


@lru_cache(maxsize=None)
def proper_subsets(n: int) -> tuple[frozenset, ...]:
    return tuple(frozenset(c) for k in range(1, n) for c in combinations(range(1, n + 1), k))


def facets_of(sigma: Perm) -> set[frozenset]:
    """Facets f_S containing sigma: sigma(S) = [|S|]."""
    return {s for s in proper_subsets(len(sigma))
            if {sigma[i - 1] for i in s} == set(range(1, len(s) + 1))}


def perm_facet_family(n: int) -> SetFamily:
    subsets = proper_subsets(n)
    index = {s: k for k, s in enumerate(subsets)}
    members = tuple(sum(1 << index[s] for s in facets_of(p)) for p in all_perms(n))
    return SetFamily(len(subsets), members, all_perms(n))


def facet_model_agrees(n: int) -> bool:
    """Adjacency from the facet sets equals the prefix criterion."""
    return build_kneser(perm_facet_family(n)).adj == perm_kneser(n).adj


def prism_model_agrees(n: int) -> bool:
    """sigma ~ tau iff the prism triangulations with removal orders sigma^-1,
    tau^-1 share no splitting hyperplane."""
    perms = all_perms(n)
    splits = [prism_splits(perm_to_prism(inverse(p))) for p in perms]
    g = perm_kneser(n)
    for u in range(len(perms)):
        for v in range(len(perms)):
            if u != v and g.adjacent(u, v) != (not splits[u] & splits[v]):
                return False
    return True


def on_hyperplane(sigma: Perm) -> bool:
    n = len(sigma)
    return sum(sigma) == n * (n + 1) // 2


# -- colorings and cliques -----------------------------------------------------------------------

def prefix_coloring(n: int) -> Coloring:
    """Color sigma by sigma^-1(1)."""
    return Coloring(tuple(inverse(p)[0] for p in all_perms(n)), n)


def cyclic_cliques(n: int) -> list[list[int]]:
    """Right cosets H sigma of H = <rho>, as lists of vertex indices."""
    perms = all_perms(n)
    index = {p: k for k, p in enumerate(perms)}
    r = rho(n)
    seen: set = set()
    out = []
    for p in perms:
        if p in seen:
            continue
        coset = []
        q = p
        for _ in range(n):
            coset.append(q)
            q = compose(r, q)
        seen.update(coset)
        out.append(sorted(index[c] for c in coset))
    return out


def clique_cover_ok(n: int) -> bool:
    """The cosets are pairwise-adjacent n-sets partitioning all n! vertices."""
    g = perm_kneser(n)
    cliques = cyclic_cliques(n)
    covered = sorted(v for c in cliques for v in c)
    if covered != list(range(len(g))) or len(cliques) != len(g) // n:
        return False
    return all(len(c) == n and all(g.adjacent(u, v) for u, v in combinations(c, 2))
               for c in cliques)
