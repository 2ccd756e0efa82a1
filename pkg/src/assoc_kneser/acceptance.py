"""The acceptance checks, one function per criterion, shared by the CLI
``report`` command and the test suite.

Every check returns a CriterionResult whose ``details`` are deterministic;
wall-clock time is kept apart in ``seconds``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import geometry as geo
from .kneser import (
    KneserHypergraph,
    build_kneser,
    cd2_witness_check,
    expected_triangle_free,
    fan_coloring,
    full_family,
    full_family_graph,
    grouped_fan_coloring,
    grouped_star_deleted_coloring,
    k_subset_family,
    star_deleted_coloring,
    triangle_membership,
    triangulation_family,
    zigzag_cliques,
)
from .permutohedron import all_perms, clique_cover_ok, perm_kneser, prefix_coloring
from .polygon import catalan, enumerate_triangulations, star_center
from .solvers import (
    chromatic_number,
    hypergraph_chromatic,
    independence_number,
    is_clique,
    max_clique,
    sat_available,
    verify_certificate,
)
from .stability import (
    check_nobetter,
    count_Tk,
    enumerate_T3,
    fibonacci,
    filter_Tk,
    map_to_T3,
    rsqa_tri,
)


@dataclass
class CriterionResult:
    id: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.id:2d}: {self.title}"

    def to_json(self) -> dict:
        return {"id": self.id, "title": self.title, "passed": self.passed, "details": self.details}


def catalan_recurrence(k: int) -> int:
    c = [1]
    for m in range(k):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c[k]


def _chi_row(graph, n, expected, engine="backtrack", **kw) -> dict:
    cert = chromatic_number(graph, engine=engine, **kw)
    return {"n": n, "vertices": graph.order, "chi": cert.value, "expected": expected,
            "exact": cert.exact, "certificate_ok": verify_certificate(graph, cert),
            "lower_bound": cert.lower_bound_witness["type"], "engine": engine}


def _row_ok(row) -> bool:
    return row["exact"] and row["certificate_ok"] and row["chi"] == row["expected"]


# -- 1 ----------------------------------------------------------------------------------

def criterion_1(stretch: bool = True, cross_check: bool = True) -> CriterionResult:
    rows = []
    for n in range(4, 9):
        g = full_family_graph(n)
        row = _chi_row(g, n, n - 2, upper_colorings=[fan_coloring(n).colors])
        row["vertex_count_ok"] = g.order == catalan(n - 2)
        if cross_check and sat_available():
            row["sat_chi"] = chromatic_number(g, engine="sat").value
        rows.append(row)
    ok = all(_row_ok(r) and r["vertex_count_ok"] and r.get("sat_chi", r["chi"]) == r["chi"]
             for r in rows)
    details = {"rows": rows}
    if stretch:
        n = 9
        ts = enumerate_triangulations(n)
        index = {t: k for k, t in enumerate(ts)}
        core = [index[t] for t in enumerate_T3(n)]
        g = full_family_graph(n)
        row = _chi_row(g, n, n - 2, upper_colorings=[fan_coloring(n).colors], core=core,
                       timeout=1800)
        row["core"] = "T3"
        if cross_check and sat_available():
            row["sat_chi"] = chromatic_number(g, engine="sat", timeout=1800).value
        details["stretch"] = row
        # stretch may be inexact with bounds, but a wrong exact value is a failure
        if row["exact"] and row["chi"] != n - 2:
            ok = False
    return CriterionResult(1, "chi(KG(T_n)) = n-2 for n = 4..8 (stretch n = 9)", ok, details)


# -- 2 ----------------------------------------------------------------------------------

def criterion_2() -> CriterionResult:
    rows = []
    for n in range(4, 9):
        g = full_family_graph(n)
        res = max_clique(g.adj)
        zz = zigzag_cliques(n)
        index = {t: k for k, t in enumerate(g.family.labels)}
        zz_ok = len(zz) == n // 2 and is_clique(g.adj, [index[t] for t in zz])
        rows.append({"n": n, "omega": res.value, "expected": n // 2, "exact": res.exact,
                     "zigzag_clique": zz_ok})
    ok = all(r["omega"] == r["expected"] and r["exact"] and r["zigzag_clique"] for r in rows)
    return CriterionResult(2, "omega(KG(T_n)) = floor(n/2), attained by zig-zags", ok, {"rows": rows})


# -- 3 ----------------------------------------------------------------------------------

def criterion_3(filter_max: int = 10) -> CriterionResult:
    rows = []
    for n in range(3, 13):
        full = len(enumerate_triangulations(n))
        t3 = len(enumerate_T3(n))
        row = {"n": n, "T_n": full, "catalan_recurrence": catalan_recurrence(n - 2),
               "catalan_closed": catalan(n - 2), "T3_generated": t3,
               "T3_series": count_Tk(n, 3), "fibonacci": fibonacci(2 * n - 5)}
        if n <= filter_max:
            row["T3_filtered"] = len(filter_Tk(n, 3))
        rows.append(row)
    ok = all(r["T_n"] == r["catalan_recurrence"] == r["catalan_closed"]
             and r["T3_generated"] == r["T3_series"] == r["fibonacci"]
             and r.get("T3_filtered", r["fibonacci"]) == r["fibonacci"] for r in rows)
    return CriterionResult(3, "|T_n| = C_{n-2} and |T3_n| = F_{2n-5} for n <= 12", ok, {"rows": rows})


# -- 4 ----------------------------------------------------------------------------------

T3_SIZES = {5: 5, 6: 13, 7: 34, 8: 89, 9: 233}


def criterion_4(cross_check: bool = True) -> CriterionResult:
    rows = []
    for n in range(5, 10):
        ts = enumerate_T3(n)
        g = build_kneser(triangulation_family(ts))
        row = _chi_row(g, n, n - 2, upper_colorings=[fan_coloring(n, ts).colors])
        row["vertex_count_ok"] = g.order == T3_SIZES[n]
        if cross_check and sat_available():
            row["sat_chi"] = chromatic_number(g, engine="sat").value
        rows.append(row)
    ok = all(_row_ok(r) and r["vertex_count_ok"] and r.get("sat_chi", r["chi"]) == r["chi"]
             for r in rows)
    return CriterionResult(4, "chi(KG(T3_n)) = n-2 for n = 5..9", ok, {"rows": rows})


# -- 5 ----------------------------------------------------------------------------------

def star_deletion_scan(n: int, engine: str = "backtrack") -> list[dict]:
    ts = enumerate_triangulations(n)
    g = full_family_graph(n)
    rows = []
    for v, t in enumerate(ts):
        sub = g.delete_vertex(v)
        rest = ts[:v] + ts[v + 1:]
        uppers = [fan_coloring(n, rest).colors]
        c = star_center(t) if n > 4 else None
        if c is not None:
            uppers.append(star_deleted_coloring(n, c, rest).colors)
        cert = chromatic_number(sub, engine=engine, upper_colorings=uppers)
        rows.append({"triangulation": t.to_json()["diagonals"], "star": c is not None,
                     "chi": cert.value, "exact": cert.exact,
                     "certificate_ok": verify_certificate(sub, cert)})
    return rows


def criterion_5() -> CriterionResult:
    details = {}
    ok = True
    for n in (6, 7):
        rows = star_deletion_scan(n)
        good = all(r["exact"] and r["certificate_ok"]
                   and (r["chi"] == n - 2) == (not r["star"]) for r in rows)
        details[str(n)] = {"solves": len(rows), "stars": sum(r["star"] for r in rows),
                           "chi_values": sorted({r["chi"] for r in rows}), "ok": good}
        ok = ok and good
    return CriterionResult(5, "chi(KG(T_n - T)) = n-2 iff T is not a star, n = 6, 7", ok, details)


# -- 6 ----------------------------------------------------------------------------------

def criterion_6() -> CriterionResult:
    rows = []
    for n in range(6, 9):
        g = full_family_graph(n)
        ts = enumerate_triangulations(n)
        free = [t for t in ts if not triangle_membership(t, g)]
        mismatch = [t.to_json()["diagonals"] for t in ts
                    if triangle_membership(t, g) == expected_triangle_free(t)]
        rows.append({"n": n, "triangle_free": len(free), "mismatches": mismatch})
    ok = all(not r["mismatches"] for r in rows)
    return CriterionResult(6, "only stars (and Delta, Delta' at n = 6) lie in no triangle", ok,
                           {"rows": rows})


# -- 7 ----------------------------------------------------------------------------------

def criterion_7() -> CriterionResult:
    rows = {str(n): cd2_witness_check(n) for n in range(6, 13)}
    return CriterionResult(7, "cd_2 witness for 6 <= n <= 12", all(rows.values()), rows)


# -- 8 ----------------------------------------------------------------------------------

def realizations(n: int) -> list:
    qs = [geo.random_convex_polygon(n, seed=1), geo.random_convex_polygon(n, seed=2),
          geo.parabola_polygon(range(2, n + 2))]
    if n in (4, 6):
        qs.append(geo.rational_regular(n))
    return qs


def criterion_8(seed: int = 0, samples: int = 100) -> CriterionResult:
    details: dict = {"gkz": {}, "affine_identity": {}, "membership": {}, "pairing": {},
                     "farkas": {}}
    ok = True
    for n in range(4, 8):
        res = [bool(geo.verify_gkz_incidence(q)) for q in realizations(n)]
        details["gkz"][str(n)] = res
        ok = ok and all(res) and len(res) >= 3
    for n in range(4, 9):
        q = geo.random_convex_polygon(n, seed=seed + n)
        good = all(geo.affine_identity_holds(q, t) for t in enumerate_triangulations(n))
        details["affine_identity"][str(n)] = good
        ok = ok and good
    for n in range(4, 8):
        q = geo.random_convex_polygon(n, seed=seed + 10 + n)
        vecs = list(geo.vec_vectors(q).values())
        diffs = [geo.centered_vertex(q, t) for t in enumerate_triangulations(n)]
        member = all(geo.in_XQ(q, x) for x in vecs + diffs)
        details["membership"][str(n)] = member
        pair = geo.verify_pairing_invariance(q, vecs + diffs, samples=5, seed=seed)
        details["pairing"][str(n)] = pair.passed
        ok = ok and member and pair.passed
    for n in (5, 6, 7):
        q = geo.random_convex_polygon(n, seed=seed + 20 + n)
        rep = geo.verify_farkas(q, samples=samples, seed=seed + n)
        details["farkas"][str(n)] = {"samples": samples, "passed": rep.passed}
        ok = ok and rep.passed
    return CriterionResult(8, "exact secondary-polytope geometry checks", ok, details)


# -- 9 ----------------------------------------------------------------------------------

def criterion_9(n_max: int = 30, precision: int = geo.DEFAULT_PRECISION) -> CriterionResult:
    rows = {}
    ok = True
    for n in range(4, n_max + 1):
        rep = geo.verify_obtuse(n, precision=precision)
        rows[str(n)] = {"mode": rep.mode, "passed": rep.passed, "min_slack": geo._fmt(rep.min_slack)}
        ok = ok and rep.passed
    control = geo.naive_control(7, precision=precision)
    control_fails = not control.passed
    details = {"obtuse": rows, "naive_control_n7": {"fails": control_fails,
                                                    "negative_pairs": len(control.violations),
                                                    "min_value": geo._fmt(control.min_slack)}}
    return CriterionResult(9, "regular-gon form is obtuse for 4 <= n <= 30; naive form fails at n = 7",
                           ok and control_fails, details)


# -- 10 ---------------------------------------------------------------------------------

def criterion_10() -> CriterionResult:
    rows = {}
    ok = True
    for n in range(4, 11):
        res = geo.lacunary_construction(n)
        rows[str(n)] = {"M": str(res.growth), "epsilon": str(res.epsilon),
                        "pairs": res.report.extra.get("pairs"), "passed": res.report.passed}
        ok = ok and res.report.passed
        if n == 6:
            psi = geo.facet_normal(res.polygon, (2, 5))
            val = geo.pairing(psi, res.vectors[(1, 4)])
            rows["6"]["f25_x14"] = str(val)
            ok = ok and val > 0
    return CriterionResult(10, "lacunary certificate for n <= 10", ok, rows)


# -- 11 ---------------------------------------------------------------------------------

def criterion_11() -> CriterionResult:
    rows = {}
    ok = True
    for n in range(4, 10):
        t3 = set(enumerate_T3(n))
        good = all((m := map_to_T3(t)) in t3 and rsqa_tri(t, m) for t in enumerate_triangulations(n))
        nb = check_nobetter(n)
        rows[str(n)] = {"map_ok": good, "nobetter": nb}
        ok = ok and good and nb
    return CriterionResult(11, "every T maps into T3_n with T below its image; no-better for n <= 9",
                           ok, rows)


# -- 12 ---------------------------------------------------------------------------------

def criterion_12() -> CriterionResult:
    rows = {}
    ok = True
    for n in (3, 4, 5):
        g = perm_kneser(n)
        cert = chromatic_number(g, upper_colorings=[prefix_coloring(n).colors])
        alpha = independence_number(g)
        cover = clique_cover_ok(n)
        row = {"vertices": len(all_perms(n)), "chi": cert.value, "alpha": alpha.value,
               "exact": cert.exact and alpha.exact, "cover": cover}
        rows[str(n)] = row
        ok = ok and row["chi"] == n and row["alpha"] == math.factorial(n - 1) and row["exact"] and cover
    return CriterionResult(12, "permutohedron: chi = n, alpha = (n-1)!, coset clique cover", ok, rows)


# -- 13 ---------------------------------------------------------------------------------

def criterion_13(timeout: float = 1800) -> CriterionResult:
    rows = {}
    ok = True
    for n in range(5, 9):
        res = independence_number(full_family_graph(n), timeout=timeout)
        rows[str(n)] = {"alpha": res.value, "catalan_n_minus_3": catalan(n - 3), "exact": res.exact,
                        "matches": res.value == catalan(n - 3)}
        ok = ok and res.exact and rows[str(n)]["matches"]
    return CriterionResult(13, "alpha(KG(T_n)) = C_{n-3} for n = 5..8 (conjecture probe)", ok, rows)


# -- 14 ---------------------------------------------------------------------------------

def criterion_14() -> CriterionResult:
    r = 3
    rows = {}
    ok = True
    for n in range(6, 10):
        hyper = KneserHypergraph(full_family(n), r)
        res = hypergraph_chromatic(hyper, upper_colorings={
            "grouped_fan": grouped_fan_coloring(n, r),
            "grouped_star_deleted": grouped_star_deleted_coloring(n, r)})
        bound = math.ceil((n - 3) / (r - 1))
        row = {"chi": res.value, "exact": res.exact, "upper_bound": bound,
               "conjecture_form": math.ceil((n - r) / (r - 1)),
               "colorings_proper": {k: v["proper"] for k, v in res.upper_colorings.items()}}
        rows[str(n)] = row
        ok = ok and res.exact and res.value <= bound and all(row["colorings_proper"].values())
    petersen = chromatic_number(build_kneser(k_subset_family(5, 2)))
    rows["petersen"] = {"chi": petersen.value, "exact": petersen.exact}
    ok = ok and petersen.value == 3 and petersen.exact
    return CriterionResult(14, "3-uniform hypergraph values within ceil((n-3)/2); Petersen chi = 3",
                           ok, rows)


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11, 12: criterion_12, 13: criterion_13, 14: criterion_14,
}


def run_criterion(cid: int, **kwargs) -> CriterionResult:
    start = time.monotonic()
    try:
        res = CRITERIA[cid](**kwargs)
    except Exception as exc:  # a crash is a failed criterion, with the reason kept
        res = CriterionResult(cid, CRITERIA[cid].__name__, False,
                              {"error": f"{type(exc).__name__}: {exc}"})
    res.seconds = time.monotonic() - start
    return res


def run_all(ids=None, threads: int = 1, options: Optional[dict] = None) -> list[CriterionResult]:
    """Run criteria (all by default); ``options`` maps id to keyword arguments."""
    ids = sorted(CRITERIA) if ids is None else list(ids)
    options = options or {}
    if threads <= 1:
        return [run_criterion(i, **options.get(i, {})) for i in ids]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(run_criterion, i, **options.get(i, {})) for i in ids]
        return [f.result() for f in futures]
