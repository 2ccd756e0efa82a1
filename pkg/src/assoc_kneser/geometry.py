"""Exact secondary-polytope geometry for convex polygons.

Points, areas, covectors and pairings are Fractions. Functions on the vertices
are plain tuples indexed by label - 1; a covector is any such tuple, taken
modulo affine functions, and a secondary vector is a tuple c with
sum c_p (1, p) = 0. The regular-gon bilinear form needs cos(2 pi / n), which is
rational only for n in {3, 4, 6}; elsewhere it is evaluated with mpmath
intervals and only certified signs are accepted.

Everything that is invariant under affine maps of the plane (X_Q membership,
facet normal classes, pairings, the circulant form on facet normals) is
computed on a rational affine image when the true polygon is irrational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .polygon import (
    Diagonal,
    Triangulation,
    all_diagonals,
    crosses,
    enumerate_triangulations,
    triangles_of,
)
from .stability import rsqa_diag

Point = tuple[Fraction, Fraction]
Vector = tuple  # of Fraction, one entry per vertex

DEFAULT_PRECISION = 128


class GeometryError(ValueError):
    pass


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class PolygonRealization:
    """Vertices p_1..p_n in strictly convex position, in label order."""
    points: tuple

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        n = len(pts)
        if n < 3:
            raise GeometryError("a polygon needs at least 3 vertices")
        sign = 0
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            for k in range(n):
                if k in (i, (i + 1) % n):
                    continue
                c = _cross(a, b, pts[k])
                if c == 0:
                    raise GeometryError(f"vertices {i + 1}, {(i + 1) % n + 1}, {k + 1} are collinear")
                s = 1 if c > 0 else -1
                if sign == 0:
                    sign = s
                elif s != sign:
                    raise GeometryError(f"not convex in label order at edge {i + 1}-{(i + 1) % n + 1}")
        object.__setattr__(self, "orientation", sign)

    @property
    def n(self) -> int:
        return len(self.points)

    def p(self, label: int) -> Point:
        return self.points[label - 1]

    def to_json(self) -> dict:
        return {"n": self.n, "points": [[str(x), str(y)] for x, y in self.points]}


def unit_square() -> PolygonRealization:
    return PolygonRealization(((0, 0), (1, 0), (1, 1), (0, 1)))


def affine_regular_hexagon() -> PolygonRealization:
    """The regular hexagon written in the lattice basis e1, e2 (60 degrees apart);
    a rational affine image of the regular one."""
    return PolygonRealization(((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)))


def rational_regular(n: int) -> PolygonRealization:
    """Rational affine image of the regular n-gon, for n in {3, 4, 6}."""
    if n == 3:
        return PolygonRealization(((1, 0), (0, 1), (-1, -1)))
    if n == 4:
        return unit_square()
    if n == 6:
        return affine_regular_hexagon()
    raise GeometryError(f"the regular {n}-gon has no rational affine image")


def parabola_polygon(ys: Sequence) -> PolygonRealization:
    return PolygonRealization(tuple((Fraction(y), Fraction(y) ** 2) for y in ys))


def circle_point(t: Fraction) -> Point:
    """Rational point on the unit circle, stereographic parameter t."""
    t = Fraction(t)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def random_convex_polygon(n: int, seed: int = 0) -> PolygonRealization:
    """n rational points on the unit circle at random angles, in angular order."""
    rng = random.Random(seed)
    ts: set[Fraction] = set()
    while len(ts) < n:
        ts.add(Fraction(rng.randint(-400, 400), rng.randint(1, 97)))
    # stereographic parameter is monotone in angle on (-pi, pi)
    return PolygonRealization(tuple(circle_point(t) for t in sorted(ts)))


# -- linear algebra over Q -------------------------------------------------------------

def solve_exact(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square system exactly; raises GeometryError if singular."""
    m = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            raise GeometryError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][m] for r in range(m)]


# -- secondary vertices ---------------------------------------------------------------------

def triangle_area(q: PolygonRealization, tri) -> Fraction:
    a, b, c = (q.p(v) for v in tri)
    return abs(_cross(a, b, c)) / 2


def secondary_vertex(q: PolygonRealization, t: Triangulation) -> Vector:
    """v_T: for each vertex, the total area of the triangles of T at it."""
    if t.n != q.n:
        raise GeometryError("triangulation and polygon sizes differ")
    t.validate()
    out = [Fraction(0)] * q.n
    for tri in triangles_of(t):
        area = triangle_area(q, tri)
        for v in tri:
            out[v - 1] += area
    return tuple(out)


@lru_cache(maxsize=64)
def secondary_vertices(q: PolygonRealization) -> dict:
    return {t: secondary_vertex(q, t) for t in enumerate_triangulations(q.n)}


def affine_integrals(q: PolygonRealization) -> tuple[Fraction, Fraction, Fraction]:
    """Integrals of 1, u and v over Q, from the polygon moment formulas."""
    area = mx = my = Fraction(0)
    pts = q.points
    for k in range(q.n):
        (x0, y0), (x1, y1) = pts[k], pts[(k + 1) % q.n]
        c = x0 * y1 - x1 * y0
        area += c
        mx += (x0 + x1) * c
        my += (y0 + y1) * c
    s = q.orientation
    return (s * area / 2, s * mx / 6, s * my / 6)


def affine_function(q: PolygonRealization, alpha, beta, gamma) -> Vector:
    return tuple(Fraction(alpha) + beta * x + gamma * y for x, y in q.points)


def affine_identity_holds(q: PolygonRealization, t: Triangulation) -> bool:
    """sum_p vol(Q_{T,p}) l(p) == 3 * integral of l over Q, for l in {1, u, v}."""
    v = secondary_vertex(q, t)
    ints = affine_integrals(q)
    for coeffs, integral in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), ints):
        ell = affine_function(q, *coeffs)
        if pairing(ell, v) != 3 * integral:
            return False
    return True


def centered_vertex(q: PolygonRealization, t: Triangulation) -> Vector:
    """v_T translated into X_Q by subtracting the centroid of all v_T."""
    verts = secondary_vertices(q)
    m = len(verts)
    centroid = [sum(v[k] for v in verts.values()) / m for k in range(q.n)]
    return tuple(a - b for a, b in zip(verts[t], centroid))


# -- X_Q and X_Q^* -------------------------------------------------------------------------

def pairing(psi: Sequence, x: Sequence):
    return sum(a * b for a, b in zip(psi, x))


def in_XQ(q: PolygonRealization, c: Sequence) -> bool:
    """The three constraints sum c_p = 0 and sum c_p p = 0."""
    return (sum(c) == 0
            and sum(a * p[0] for a, p in zip(c, q.points)) == 0
            and sum(a * p[1] for a, p in zip(c, q.points)) == 0)


def affine_fit(q: PolygonRealization, psi: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """The affine function agreeing with psi at p_1, p_2, p_3."""
    rows = [(1, x, y) for x, y in q.points[:3]]
    return tuple(solve_exact(rows, psi[:3]))


def canonical_rep(q: PolygonRealization, psi: Sequence) -> Vector:
    """Representative of [psi] vanishing at p_1, p_2, p_3."""
    aff = affine_function(q, *affine_fit(q, psi))
    return tuple(Fraction(a) - b for a, b in zip(psi, aff))


def is_affine(q: PolygonRealization, psi: Sequence) -> bool:
    return not any(canonical_rep(q, psi))


def same_ray(q: PolygonRealization, psi: Sequence, phi: Sequence) -> bool:
    """[psi] = lambda [phi] for some lambda > 0."""
    a, b = canonical_rep(q, psi), canonical_rep(q, phi)
    k = next((i for i, x in enumerate(b) if x != 0), None)
    if k is None:
        return False
    lam = a[k] / b[k]
    return lam > 0 and all(x == lam * y for x, y in zip(a, b))


def negative_side(n: int, d: Diagonal) -> tuple[int, ...]:
    """Labels on the side of d where the facet normal representative is negative:
    the smaller side, ties going to the labels strictly between the endpoints."""
    i, j = d
    inner = tuple(range(i + 1, j))
    outer = tuple(range(j + 1, n + 1)) + tuple(range(1, i))  # in cyclic order
    return inner if len(inner) <= len(outer) else outer


def facet_normal(q: PolygonRealization, d: Diagonal) -> Vector:
    """min(l, 0) for l affine, zero on d, scaled so its minimum is -1."""
    i, j = d
    if not (1 <= i < j <= q.n) or j - i < 2 or (i == 1 and j == q.n):
        raise GeometryError(f"{d} is not a diagonal of the {q.n}-gon")
    a, b = q.p(i), q.p(j)
    ell = [_cross(a, b, p) for p in q.points]
    neg = negative_side(q.n, d)
    if ell[neg[0] - 1] > 0:
        ell = [-x for x in ell]
    scale = max(-ell[k - 1] for k in neg)
    negset = set(neg)
    return tuple(ell[k - 1] / scale if k in negset else Fraction(0) for k in range(1, q.n + 1))


@lru_cache(maxsize=64)
def facet_normals(q: PolygonRealization) -> dict:
    return {d: facet_normal(q, d) for d in all_diagonals(q.n)}


# -- reports ----------------------------------------------------------------------------------

@dataclass
class CheckReport:
    check: str
    n: int
    mode: str = "exact"
    min_slack: object = None
    violations: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def note_slack(self, value) -> None:
        if self.min_slack is None or value < self.min_slack:
            self.min_slack = value

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "n": self.n,
            "mode": self.mode,
            "min_slack": _fmt(self.min_slack),
            "violations": [_jsonable(v) for v in self.violations],
            "passed": self.passed,
        }
        if self.extra:
            out["extra"] = _jsonable(self.extra)
        return out


def _fmt(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    from mpmath import mpf, nstr
    if hasattr(x, "a") and hasattr(x, "b"):
        lo, hi = mpf(x.a), mpf(x.b)
        if lo != hi:
            return f"[{nstr(lo, 25)}, {nstr(hi, 25)}]"
        x = lo
    return nstr(mpf(x), 25)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Triangulation):
        return v.to_json()["diagonals"]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return _fmt(v)


# -- GKZ incidence --------------------------------------------------------------------------

def verify_gkz_incidence(q: PolygonRealization) -> CheckReport:
    """Each facet normal is maximized exactly on {T : d in T}; each v_T is the
    unique maximizer of the sum of its facet normals."""
    rep = CheckReport("gkz", q.n)
    verts = secondary_vertices(q)
    normals = facet_normals(q)
    for d, psi in normals.items():
        vals = {t: pairing(psi, v) for t, v in verts.items()}
        top = max(vals.values())
        for t, val in vals.items():
            on = d in t
            if on and val != top:
                rep.violations.append({"diagonal": list(d), "triangulation": t, "kind": "off-face"})
            elif not on:
                if val >= top:
                    rep.violations.append({"diagonal": list(d), "triangulation": t, "kind": "spurious"})
                else:
                    rep.note_slack(top - val)
    for t, v in verts.items():
        w = [sum(col) for col in zip(*(normals[d] for d in t.diagonals))] if len(t) else [0] * q.n
        own = pairing(w, v)
        for u, vu in verts.items():
            if u == t:
                continue
            gap = own - pairing(w, vu)
            if gap <= 0:
                rep.violations.append({"triangulation": t, "beaten_by": u, "kind": "not-a-vertex"})
            else:
                rep.note_slack(gap)
    return rep


# -- Farkas decomposition ----------------------------------------------------------------------

@dataclass(frozen=True)
class FarkasResult:
    triangulation: Triangulation
    coefficients: dict  # Diagonal -> Fraction
    affine: tuple  # (alpha, beta, gamma) with w = sum c_d psi_d + affine

    @property
    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients.values())

    def to_json(self) -> dict:
        return {"triangulation": self.triangulation.to_json()["diagonals"],
                "coefficients": {f"{i},{j}": str(c) for (i, j), c in self.coefficients.items()},
                "affine": [str(a) for a in self.affine]}


def maximizer(q: PolygonRealization, w: Sequence) -> Triangulation:
    """argmax_T <w, v_T>, ties to the lexicographically least diagonal list."""
    best = None
    for t, v in secondary_vertices(q).items():
        key = (-pairing(w, v), t.diagonals)
        if best is None or key < best[0]:
            best = (key, t)
    return best[1]


def farkas_decompose(q: PolygonRealization, w: Sequence) -> FarkasResult:
    if is_affine(q, w):
        raise GeometryError("w is zero in the quotient")
    t = maximizer(q, w)
    normals = facet_normals(q)
    diags = t.diagonals
    rows = []
    for k, (x, y) in enumerate(q.points):
        rows.append([normals[d][k] for d in diags] + [1, x, y])
    sol = solve_exact(rows, list(w))
    m = len(diags)
    return FarkasResult(t, dict(zip(diags, sol[:m])), tuple(sol[m:]))


def random_covector(n: int, rng: random.Random) -> Vector:
    return tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for _ in range(n))


def verify_farkas(q: PolygonRealization, samples: int = 100, seed: int = 0) -> CheckReport:
    rep = CheckReport("farkas", q.n)
    rng = random.Random(seed)
    normals = facet_normals(q)
    done = 0
    while done < samples:
        w = random_covector(q.n, rng)
        if is_affine(q, w):
            continue
        done += 1
        res = farkas_decompose(q, w)
        recon = [sum(c * normals[d][k] for d, c in res.coefficients.items()) for k in range(q.n)]
        diff = [a - b for a, b in zip(w, recon)]
        if not is_affine(q, diff):
            rep.violations.append({"w": w, "kind": "bad-reconstruction"})
        for d, c in res.coefficients.items():
            if c < 0:
                rep.violations.append({"w": w, "diagonal": list(d), "coefficient": c})
            elif c > 0:
                rep.note_slack(c)
    rep.extra["samples"] = samples
    return rep


def verify_pairing_invariance(q: PolygonRealization, vectors: Iterable[Sequence],
                              samples: int = 20, seed: int = 0) -> CheckReport:
    """<psi + affine, x> == <psi, x> for x in X_Q and random shifts."""
    rep = CheckReport("pairing", q.n)
    rng = random.Random(seed)
    normals = list(facet_normals(q).values())
    for x in vectors:
        if not in_XQ(q, x):
            rep.violations.append({"x": x, "kind": "not-in-XQ"})
            continue
        for _ in range(samples):
            psi = rng.choice(normals)
            shift = affine_function(q, *(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3)))
            moved = [a + b for a, b in zip(psi, shift)]
            if pairing(moved, x) != pairing(psi, x):
                rep.violations.append({"x": x, "psi": psi, "kind": "shift-changed-pairing"})
    return rep


# -- crossing-point vectors --------------------------------------------------------------------

def crossing_parameters(q: PolygonRealization, d: Diagonal, e: Diagonal) -> tuple[Fraction, Fraction]:
    """(s, t) with r = p_a + s (p_b - p_a) = p_c + t (p_d - p_c) for d = ab, e = cd."""
    (a, b), (c, dd) = d, e
    pa, pb, pc, pd = q.p(a), q.p(b), q.p(c), q.p(dd)
    ux, uy = pb[0] - pa[0], pb[1] - pa[1]
    vx, vy = pd[0] - pc[0], pd[1] - pc[1]
    wx, wy = pc[0] - pa[0], pc[1] - pa[1]
    den = ux * vy - uy * vx
    if den == 0:
        raise GeometryError(f"{d} and {e} are parallel")
    s = (wx * vy - wy * vx) / den
    t = (wx * uy - wy * ux) / den
    if not (0 < s < 1 and 0 < t < 1):
        raise GeometryError(f"{d} and {e} do not cross inside Q")
    return s, t


def crossing_term(q: PolygonRealization, d: Diagonal, e: Diagonal) -> Vector:
    """(|r p2| p1 + |r p1| p2) / |p1 p2| - (|r q2| q1 + |r q1| q2) / |q1 q2|, r = d meet e."""
    s, t = crossing_parameters(q, d, e)
    out = [Fraction(0)] * q.n
    out[d[0] - 1] += 1 - s
    out[d[1] - 1] += s
    out[e[0] - 1] -= 1 - t
    out[e[1] - 1] -= t
    return tuple(out)


def vec_vector(q: PolygonRealization, d: Diagonal) -> Vector:
    terms = [crossing_term(q, d, e) for e in all_diagonals(q.n) if crosses(d, e)]
    if not terms:
        raise GeometryError(f"{d} is crossed by no diagonal")
    return tuple(sum(col) for col in zip(*terms))


@lru_cache(maxsize=64)
def vec_vectors(q: PolygonRealization) -> dict:
    return {d: vec_vector(q, d) for d in all_diagonals(q.n)}


def verify_vec(q: PolygonRealization) -> CheckReport:
    """Membership and sign pattern of the crossing-point vectors, and
    <psi_d, x_d'> > 0 for every noncrossing pair (d = d' included)."""
    rep = CheckReport("vec", q.n)
    vecs = vec_vectors(q)
    normals = facet_normals(q)
    for d, x in vecs.items():
        if not in_XQ(q, x):
            rep.violations.append({"diagonal": list(d), "kind": "not-in-XQ"})
        for k, c in enumerate(x, start=1):
            if (k in d) != (c > 0) or (k not in d and c >= 0):
                rep.violations.append({"diagonal": list(d), "vertex": k, "coefficient": c})
    for d, psi in normals.items():
        for e, x in vecs.items():
            if crosses(d, e):
                continue
            val = pairing(psi, x)
            if val <= 0:
                rep.violations.append({"pair": [list(d), list(e)], "value": val})
            else:
                rep.note_slack(val)
    return rep


# -- hemisphere sampling ---------------------------------------------------------------------------

def hemisphere_check(q: PolygonRealization, vectors: dict, samples: int = 1000,
                     seed: int = 0) -> CheckReport:
    """For random nonzero w, the maximizing T has <w, x_d> > 0 for all d in T.
    Stops at the first failing sample."""
    rep = CheckReport("hemisphere", q.n)
    for d, x in vectors.items():
        if not in_XQ(q, x):
            rep.violations.append({"diagonal": list(d), "kind": "not-in-XQ"})
            return rep
    rng = random.Random(seed)
    done = 0
    while done < samples:
        w = random_covector(q.n, rng)
        if is_affine(q, w):
            continue
        done += 1
        t = maximizer(q, w)
        for d in t.diagonals:
            val = pairing(w, vectors[d])
            if val <= 0:
                rep.violations.append({"sample": done, "w": w, "triangulation": t,
                                       "diagonal": list(d), "value": val})
                rep.extra["samples"] = done
                return rep
            rep.note_slack(val)
    rep.extra["samples"] = samples
    return rep


# -- the regular-gon form ----------------------------------------------------------------------------

Number = Union[Fraction, object]  # Fraction or mpmath interval


@dataclass(frozen=True)
class CirculantForm:
    n: int
    coeffs: tuple
    mode: str  # "exact" or "interval"
    precision: Optional[int] = None

    def a(self, k: int):
        return self.coeffs[k % self.n]


def _exact_cos(n: int) -> Optional[Fraction]:
    return {3: Fraction(-1, 2), 4: Fraction(0), 6: Fraction(1, 2)}.get(n)


def _choose_mode(n: int, mode: Optional[str]) -> str:
    if mode is None:
        return "exact" if n in (4, 6) else "interval"
    if mode == "exact" and _exact_cos(n) is None:
        raise GeometryError(f"cos(2 pi / {n}) is irrational; use interval mode")
    if mode not in ("exact", "interval"):
        raise GeometryError(f"unknown mode {mode!r}")
    return mode


class _Precision:
    """Temporarily set the mpmath interval precision."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        from mpmath import iv
        self.saved = iv.prec
        iv.prec = self.bits
        return iv

    def __exit__(self, *exc):
        from mpmath import iv
        iv.prec = self.saved


def _circulant_coeffs(n: int, c) -> list:
    base = (2 - 2 * c) / n
    coeffs = [base] * n
    coeffs[0] = base + 2 * c
    coeffs[1] = base - 1
    coeffs[n - 1] = base - 1
    return coeffs


def circulant_form(n: int, mode: Optional[str] = None,
                   precision: int = DEFAULT_PRECISION) -> CirculantForm:
    """a_k = (2 - 2c)/n + (2c if k = 0, -1 if k = +-1, else 0), c = cos(2 pi/n)."""
    if n < 4:
        raise GeometryError("needs n >= 4")
    mode = _choose_mode(n, mode)
    if mode == "exact":
        coeffs = _circulant_coeffs(n, _exact_cos(n))
    else:
        with _Precision(precision) as iv:
            coeffs = _circulant_coeffs(n, iv.cos(2 * iv.pi / n))
    return CirculantForm(n, tuple(coeffs), mode, precision if mode == "interval" else None)


def circ_pair(form: CirculantForm, psi: Sequence, phi: Sequence):
    """sum_{i,j} a_{i-j} psi(p_i) phi(p_j)."""
    total = 0
    for i, x in enumerate(psi):
        if x == 0:
            continue
        for j, y in enumerate(phi):
            if y == 0:
                continue
            total = total + form.a(i - j) * x * y
    return total


def _regular_coords(n: int, mode: str, precision: int):
    """Vertex coordinate columns spanning the affine functions on the regular n-gon."""
    if mode == "exact":
        q = rational_regular(n)
        return [tuple(p[0] for p in q.points), tuple(p[1] for p in q.points)]
    with _Precision(precision) as iv:
        xs = tuple(iv.cos(2 * iv.pi * k / n) for k in range(n))
        ys = tuple(iv.sin(2 * iv.pi * k / n) for k in range(n))
    return [xs, ys]


def regular_facet_normals(n: int, mode: Optional[str] = None,
                          precision: int = DEFAULT_PRECISION) -> dict:
    """Facet normal representatives for the regular n-gon (same convention as
    facet_normal: negative on the smaller side, minimum -1)."""
    mode = _choose_mode(n, mode)
    if mode == "exact":
        return dict(facet_normals(rational_regular(n)))
    out = {}
    with _Precision(precision) as iv:
        pts = [(iv.cos(2 * iv.pi * k / n), iv.sin(2 * iv.pi * k / n)) for k in range(n)]
        for d in all_diagonals(n):
            i, j = d
            a, b = pts[i - 1], pts[j - 1]
            neg = negative_side(n, d)
            # counterclockwise polygon: labels between i and j lie right of a -> b
            sign = 1 if neg[0] > i and neg[0] < j else -1
            vals = [0] * n
            for k in neg:
                p = pts[k - 1]
                vals[k - 1] = sign * ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]))
                if not vals[k - 1].b < 0:
                    raise GeometryError(f"cannot certify the side of vertex {k} for {d}")
            far = neg[(len(neg) - 1) // 2]  # middle of the arc is furthest from the chord
            scale = -vals[far - 1]
            out[d] = tuple(vals[k] / scale if k + 1 in neg else 0 for k in range(n))
    return out


def _certified_positive(x, mode: str) -> bool:
    return x > 0 if mode == "exact" else bool(x.a > 0)


def _certified_nonpositive(x, mode: str) -> bool:
    return x <= 0 if mode == "exact" else bool(x.b <= 0)


def _lower(x, mode: str):
    return x if mode == "exact" else x.a


def verify_descent(form: CirculantForm, precision: int = DEFAULT_PRECISION) -> CheckReport:
    """B~(l, -) = 0 for affine l, i.e. sum_j a_{i-j} l(p_j) = 0 for every i."""
    rep = CheckReport("descent", form.n, form.mode)
    n = form.n
    cols = [tuple(1 for _ in range(n))] + _regular_coords(n, form.mode, precision)
    worst = 0
    with _Precision(precision):
        for name, col in zip(("1", "u", "v"), cols):
            for i in range(n):
                s = sum(form.a(i - j) * col[j] for j in range(n))
                if form.mode == "exact":
                    if s != 0:
                        rep.violations.append({"function": name, "row": i, "value": s})
                else:
                    if not (s.a <= 0 <= s.b):
                        rep.violations.append({"function": name, "row": i, "value": s})
                    worst = max(worst, abs(s.a), abs(s.b))
    if form.mode == "interval":
        rep.extra["max_residual_bound"] = _fmt(worst)
    for k in range(n):
        if form.a(k) != form.a(n - k):
            rep.violations.append({"kind": "not-even", "k": k})
    return rep


def _ldl_pivots(matrix):
    """Pivots of the LDL^T factorization of a symmetric matrix, without pivoting."""
    m = len(matrix)
    a = [list(row) for row in matrix]
    pivots = []
    for k in range(m):
        piv = a[k][k]
        pivots.append(piv)
        for i in range(k + 1, m):
            f = a[i][k] / piv
            for j in range(k + 1, m):
                a[i][j] = a[i][j] - f * a[k][j]
    return pivots


def verify_obtuse(n: int, mode: Optional[str] = None,
                  precision: int = DEFAULT_PRECISION) -> CheckReport:
    """B(psi_d, psi_d') > 0 for all noncrossing d, d' (d = d' included), certified,
    plus positive definiteness of B on the quotient."""
    mode = _choose_mode(n, mode)
    form = circulant_form(n, mode, precision)
    rep = CheckReport("obtuse", n, mode)
    desc = verify_descent(form, precision)
    rep.violations.extend({"descent": v} for v in desc.violations)
    with _Precision(precision):
        psis = regular_facet_normals(n, mode, precision)
        diags = list(psis)
        images = {}
        for d, psi in psis.items():
            supp = [(j, y) for j, y in enumerate(psi) if y != 0]
            images[d] = [sum(form.a(i - j) * y for j, y in supp) for i in range(n)]
        pairs = 0
        for a_idx, d in enumerate(diags):
            supp = [(i, x) for i, x in enumerate(psis[d]) if x != 0]
            for e in diags[a_idx:]:
                if crosses(d, e):
                    continue
                pairs += 1
                img = images[e]
                val = sum(x * img[i] for i, x in supp)
                if _certified_positive(val, mode):
                    rep.note_slack(_lower(val, mode))
                else:
                    rep.violations.append({"pair": [list(d), list(e)], "value": val})
        # quotient basis: indicators of p_4..p_n; Gram entries a_{k-l}
        gram = [[form.a(k - l) for l in range(3, n)] for k in range(3, n)]
        pivots = _ldl_pivots(gram)
        for k, piv in enumerate(pivots):
            if not _certified_positive(piv, mode):
                rep.violations.append({"kind": "not-positive-definite", "pivot": k, "value": piv})
    rep.extra.update({"pairs": pairs, "precision": form.precision,
                      "min_pivot": _fmt(min(_lower(p, mode) for p in pivots)) if pivots else None})
    return rep


def naive_pair(n: int, psi: Sequence, phi: Sequence, mode: Optional[str] = None,
               precision: int = DEFAULT_PRECISION):
    """The inner product X_Q^* inherits from the coordinatewise one on R^V(Q):
    <P psi, P phi> with P the orthogonal projection onto X_Q."""
    mode = _choose_mode(n, mode)
    if mode == "exact":
        q = rational_regular(n)
        basis = [tuple(Fraction(1) for _ in range(n)),
                 tuple(p[0] for p in q.points), tuple(p[1] for p in q.points)]
        gram = [[pairing(u, v) for v in basis] for u in basis]
        bp = [pairing(u, psi) for u in basis]
        coef = solve_exact(gram, bp)
        return pairing(psi, phi) - sum(c * pairing(u, phi) for c, u in zip(coef, basis))
    with _Precision(precision) as iv:
        # 1, cos and sin columns are orthogonal with squared norms n, n/2, n/2
        cs = [iv.cos(2 * iv.pi * k / n) for k in range(n)]
        sn = [iv.sin(2 * iv.pi * k / n) for k in range(n)]
        dot = sum(x * y for x, y in zip(psi, phi))
        s1 = sum(psi) * sum(phi) / n
        s2 = sum(x * c for x, c in zip(psi, cs)) * sum(y * c for y, c in zip(phi, cs)) * 2 / n
        s3 = sum(x * s for x, s in zip(psi, sn)) * sum(y * s for y, s in zip(phi, sn)) * 2 / n
        return dot - s1 - s2 - s3


def naive_control(n: int, mode: Optional[str] = None,
                  precision: int = DEFAULT_PRECISION) -> CheckReport:
    """Obtuseness with the inherited inner product. Violations are the noncrossing
    pairs whose value is certified <= 0 (exact) or < 0 (interval)."""
    mode = _choose_mode(n, mode)
    rep = CheckReport("naive-control", n, mode)
    psis = regular_facet_normals(n, mode, precision)
    diags = list(psis)
    zeros = 0
    with _Precision(precision):
        for a_idx, d in enumerate(diags):
            for e in diags[a_idx:]:
                if crosses(d, e):
                    continue
                val = naive_pair(n, psis[d], psis[e], mode, precision)
                if mode == "exact":
                    bad = val <= 0
                    zeros += val == 0
                else:
                    bad = bool(val.b < 0)
                if bad:
                    rep.violations.append({"pair": [list(d), list(e)], "value": val})
                rep.note_slack(_lower(val, mode))
    rep.extra["zero_pairs"] = zeros if mode == "exact" else None
    return rep


# -- lacunary construction -------------------------------------------------------------------------

LACUNARY_SCHEDULE = (2, 4, 16, 256, 65536)


def lacunary_polygon(n: int, m) -> PolygonRealization:
    """p_i = (y_i, y_i^2) with y_i = M^i for i < n and y_n = 1."""
    m = Fraction(m)
    if m <= 1:
        raise GeometryError("growth factor must exceed 1")
    return parabola_polygon([m ** i for i in range(1, n)] + [Fraction(1)])


def _minus(n: int, i: int) -> int:
    return i - 1 if i > 1 else n


def lacunary_vectors(q: PolygonRealization) -> dict:
    """x_{i,n} = 0; for j < n, the crossing term of {i,j} against {i^-, j^-}."""
    n = q.n
    out = {}
    for d in all_diagonals(n):
        i, j = d
        if j == n:
            out[d] = tuple(Fraction(0) for _ in range(n))
        else:
            e = tuple(sorted((_minus(n, i), j - 1)))
            out[d] = crossing_term(q, d, e)
    return out


@dataclass
class LacunaryResult:
    n: int
    growth: Fraction
    epsilon: Fraction
    polygon: PolygonRealization
    vectors: dict
    report: CheckReport
    tried: list

    def to_json(self) -> dict:
        out = self.report.to_json()
        out["extra"] = dict(out.get("extra", {}), M=str(self.growth), epsilon=str(self.epsilon),
                            tried=[str(m) for m in self.tried])
        return out


def _pairs(n: int):
    diags = all_diagonals(n)
    for d in diags:
        for e in diags:
            if rsqa_diag(d, e, n):
                yield d, e


def _try_growth(n: int, m) -> tuple[Optional[Fraction], object, dict, dict, Optional[dict]]:
    q = lacunary_polygon(n, m)
    lac = lacunary_vectors(q)
    vec = vec_vectors(q)
    psis = facet_normals(q)
    for d, x in lac.items():
        if not in_XQ(q, x):
            raise GeometryError(f"lacunary vector for {d} is not in X_Q")
    strict = []
    for d, e in _pairs(n):
        lv = pairing(psis[d], lac[e])
        if crosses(d, e):
            if lv <= 0:
                return None, q, lac, vec, {"pair": [list(d), list(e)], "lacunary": lv}
            strict.append((lv, pairing(psis[d], vec[e])))
        elif lv < 0:
            return None, q, lac, vec, {"pair": [list(d), list(e)], "lacunary": lv}
    worst = max((-v for _, v in strict if v < 0), default=Fraction(0))
    eps = Fraction(1) if worst == 0 else min(lv for lv, _ in strict) / (2 * worst)
    return eps, q, lac, vec, None


def lacunary_construction(n: int, schedule: Sequence = LACUNARY_SCHEDULE) -> LacunaryResult:
    """First M in the schedule for which x_d = x_d(lac) + eps x_d(vec) pairs
    positively along every ⊏-pair."""
    if n < 4:
        raise GeometryError("needs n >= 4")
    tried = []
    last_fail = None
    for m in schedule:
        m = Fraction(m)
        tried.append(m)
        eps, q, lac, vec, fail = _try_growth(n, m)
        if eps is None:
            last_fail = fail
            continue
        vectors = {d: tuple(a + eps * b for a, b in zip(lac[d], vec[d])) for d in lac}
        rep = CheckReport("lacunary", n)
        psis = facet_normals(q)
        for d, x in vectors.items():
            if not in_XQ(q, x):
                rep.violations.append({"diagonal": list(d), "kind": "not-in-XQ"})
        for d, e in _pairs(n):
            val = pairing(psis[d], vectors[e])
            if val <= 0:
                rep.violations.append({"pair": [list(d), list(e)], "value": val})
            else:
                rep.note_slack(val)
        if rep.passed:
            rep.extra["pairs"] = sum(1 for _ in _pairs(n))
            return LacunaryResult(n, m, eps, q, vectors, rep, tried)
        last_fail = rep.violations[0]
    raise GeometryError(f"lacunary search exhausted for n={n}; last failure {last_fail}")


# -- the Delta case on the regular hexagon ------------------------------------------------------------------

def _indicator(n: int, labels) -> Vector:
    return tuple(Fraction(1 if k in labels else 0) for k in range(1, n + 1))


def long_diagonal_vector(q: PolygonRealization, i: int) -> Vector:
    """5p_i - 3p_{i+1} - p_{i+2} + 3p_{i+3} - p_{i+4} - 3p_{i+5}, labels mod 6."""
    out = [Fraction(0)] * 6
    for off, c in enumerate((5, -3, -1, 3, -1, -3)):
        out[(i - 1 + off) % 6] += c
    return tuple(out)


def delta_case_vectors(grid: int = 4) -> CheckReport:
    """Checks for the Delta triangulation of the regular hexagon."""
    q = affine_regular_hexagon()
    rep = CheckReport("delta-case", 6)
    psis = facet_normals(q)
    vec = dict(vec_vectors(q))
    longs = {}
    for i in (1, 3, 5):
        d = tuple(sorted((i, (i + 2) % 6 + 1)))
        x = long_diagonal_vector(q, i)
        longs[d] = x
        if not in_XQ(q, x):
            rep.violations.append({"diagonal": list(d), "kind": "not-in-XQ"})
        # it is 6 and 2 times the crossing terms against the two other long-ish diagonals
        j = lambda k: (i - 1 + k) % 6 + 1  # noqa: E731
        e1 = tuple(sorted((j(1), j(5))))
        e2 = tuple(sorted((j(2), j(4))))
        combo = [6 * a + 2 * b for a, b in zip(crossing_term(q, d, e1), crossing_term(q, d, e2))]
        if list(x) != combo:
            rep.violations.append({"diagonal": list(d), "kind": "not-a-crossing-combination"})
        for e, psi in psis.items():
            if not crosses(e, d):
                val = pairing(psi, x)
                if val <= 0:
                    rep.violations.append({"pair": [list(e), list(d)], "value": val})
    vectors = dict(vec)
    vectors.update(longs)
    for d, labels in (((1, 3), {2}), ((3, 5), {4}), ((1, 5), {6})):
        if not same_ray(q, psis[d], [-x for x in _indicator(6, labels)]):
            rep.violations.append({"diagonal": list(d), "kind": "indicator-representative"})
    x14 = longs[(1, 4)]
    fan = Triangulation.from_diagonals(6, [(1, 3), (1, 4), (1, 5)])
    delta = Triangulation.from_diagonals(6, [(1, 3), (1, 5), (3, 5)])
    ts = enumerate_triangulations(6)
    checked = 0
    for l2 in range(grid + 1):
        for l4 in range(grid + 1):
            for l6 in range(grid + 1):
                if l2 == l4 == l6 == 0:
                    continue
                lam = (Fraction(l2, 2), Fraction(l4, 2), Fraction(l6, 2))
                w = tuple(-(lam[0] * a + lam[1] * b + lam[2] * c) for a, b, c in zip(
                    _indicator(6, {2}), _indicator(6, {4}), _indicator(6, {6})))
                checked += 1
                val = pairing(w, x14)
                if val != 3 * lam[0] + 3 * lam[2] - 3 * lam[1]:
                    rep.violations.append({"lambda": lam, "kind": "formula", "value": val})
                if lam[1] == min(lam):
                    for d in fan.diagonals:
                        v = pairing(w, vectors[d])
                        if v <= 0:
                            rep.violations.append({"lambda": lam, "diagonal": list(d), "value": v})
                        else:
                            rep.note_slack(v)
                if not any(t != delta and all(pairing(w, vectors[d]) > 0 for d in t.diagonals)
                           for t in ts):
                    rep.violations.append({"lambda": lam, "kind": "no-escape"})
    rep.extra["grid_points"] = checked
    rep.extra["x14_at_111"] = str(pairing(tuple(-x for x in _indicator(6, {2, 4, 6})), x14))
    return rep
