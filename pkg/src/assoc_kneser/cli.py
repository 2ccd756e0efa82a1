"""Command-line runner: ``assoc-kneser <command> [options]``.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 on usage errors (including desk-scale guards without --force).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional

from . import acceptance, geometry as geo
from .kneser import (
    KneserHypergraph,
    build_kneser,
    cd2_witness_check,
    ear_coloring,
    export_dimacs,
    fan_coloring,
    grouped_fan_coloring,
    grouped_star_deleted_coloring,
    k_subset_family,
    star_deleted_coloring,
    triangulation_family,
    verify_coloring,
)
from .permutohedron import all_perms, perm_kneser, prefix_coloring
from .polygon import Triangulation, catalan, enumerate_triangulations, find_z_copy
from .solvers import (
    ENGINES,
    chromatic_number,
    clique_number,
    hypergraph_chromatic,
    independence_number,
    verify_certificate,
)
from .stability import (
    count_Tk,
    enumerate_T3,
    fibonacci,
    map_to_T3,
    rsqa_tri,
    t3_witness,
    z_swap,
)

SCHEMA = 1
GUARDS = {"chi_full": 9, "chi_t3": 10, "chi_perm": 5, "enumerate": 12, "alpha_full": 8,
          "hyper": 9, "geometry": 10}


class UsageError(Exception):
    pass


# -- families -------------------------------------------------------------------------

def _parse_family(text: str):
    if text in ("full", "t3", "perm"):
        return text, None
    if text.startswith("ksubsets:"):
        try:
            return "ksubsets", int(text.split(":", 1)[1])
        except ValueError:
            pass
    raise UsageError(f"unknown family {text!r}; use full, t3, perm or ksubsets:k")


def _guard(args, key: str, n: int) -> None:
    cap = GUARDS[key]
    if n > cap and not args.force:
        raise UsageError(f"n = {n} exceeds the desk-scale cap {cap} for {key}; pass --force")


def _family_graph(args, n: int):
    """(graph, labels) for the chosen family; labels are JSON-ready."""
    kind, k = _parse_family(args.family)
    if kind == "full":
        ts = enumerate_triangulations(n)
        return build_kneser(triangulation_family(ts)), ts
    if kind == "t3":
        ts = enumerate_T3(n)
        return build_kneser(triangulation_family(ts)), ts
    if kind == "perm":
        return perm_kneser(n), list(all_perms(n))
    fam = k_subset_family(n, k)
    return build_kneser(fam), list(fam.labels)


def _label_json(label):
    if isinstance(label, Triangulation):
        return label.to_json()["diagonals"]
    return list(label)


def _parse_triangulation(text: str, n: Optional[int]) -> Triangulation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad triangulation JSON: {exc}") from None
    try:
        if isinstance(data, dict):
            return Triangulation.from_json(data)
        if n is None:
            raise UsageError("a bare diagonal list needs --n")
        return Triangulation.from_diagonals(n, [tuple(d) for d in data])
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid triangulation: {exc}") from None


def _n_range(args) -> list[int]:
    if args.n is None:
        raise UsageError("--n is required")
    hi = args.n_max if args.n_max is not None else args.n
    if hi < args.n:
        raise UsageError("--n-max must be at least --n")
    return list(range(args.n, hi + 1))


# -- commands ---------------------------------------------------------------------------

def cmd_enumerate(args):
    kind, _ = _parse_family(args.family)
    if kind not in ("full", "t3"):
        raise UsageError("enumerate supports --family full or t3")
    rows = []
    for n in _n_range(args):
        _guard(args, "enumerate", n)
        if n < 3:
            raise UsageError("n must be at least 3")
        ts = enumerate_triangulations(n) if kind == "full" else enumerate_T3(n)
        expected = catalan(n - 2) if kind == "full" else fibonacci(2 * n - 5)
        row = {"n": n, "family": kind, "count": len(ts), "expected": expected}
        if kind == "t3":
            row["series"] = count_Tk(n, 3)
        if not args.count_only:
            row["triangulations"] = [t.to_json()["diagonals"] for t in ts]
        rows.append(row)
    ok = all(r["count"] == r["expected"] for r in rows)
    if len(rows) == 1:
        return dict(rows[0]), ok
    return {"rows": rows}, ok


def _delete(args, graph, labels, n):
    if args.delete_vertex is None:
        return graph, labels, None
    t = _parse_triangulation(args.delete_vertex, n)
    if t not in labels:
        raise UsageError("the triangulation to delete is not in the family")
    v = labels.index(t)
    return graph.delete_vertex(v), labels[:v] + labels[v + 1:], t


def cmd_chi(args):
    kind, _ = _parse_family(args.family)
    rows = []
    ok = True
    for n in _n_range(args):
        _guard(args, {"full": "chi_full", "t3": "chi_t3", "perm": "chi_perm"}.get(kind, "chi_full"), n)
        graph, labels, deleted = _delete(args, *_family_graph(args, n), n)
        uppers = []
        if kind in ("full", "t3") and n >= 4:
            uppers.append(fan_coloring(n, labels).colors)
        if kind == "perm":
            uppers.append(prefix_coloring(n).colors)
        core = None
        if kind == "full" and n >= 8 and deleted is None:
            index = {t: k for k, t in enumerate(labels)}
            core = [index[t] for t in enumerate_T3(n)]
        cert = chromatic_number(graph, timeout=args.timeout, engine=args.engine,
                                symmetry=not args.no_symmetry, upper_colorings=uppers, core=core)
        good = verify_certificate(graph, cert)
        row = {"n": n, "family": args.family, "vertices": graph.order, "chi": cert.value,
               "exact": cert.exact, "lower": cert.lower, "upper": cert.upper,
               "certificate_ok": good, "engine": args.engine}
        if deleted is not None:
            row["deleted"] = deleted.to_json()["diagonals"]
        if args.verbose:
            row["certificate"] = cert.to_json()
        rows.append(row)
        ok = ok and good
    return (dict(rows[0]) if len(rows) == 1 else {"rows": rows}), ok


def _clique_cmd(args, which: str):
    kind, _ = _parse_family(args.family)
    rows = []
    for n in _n_range(args):
        if which == "alpha" and kind == "full":
            _guard(args, "alpha_full", n)
        graph, labels, deleted = _delete(args, *_family_graph(args, n), n)
        res = (clique_number if which == "omega" else independence_number)(graph, timeout=args.timeout)
        row = {"n": n, "family": args.family, "vertices": graph.order, which: res.value,
               "exact": res.exact, "witness": [_label_json(labels[v]) for v in res.witness]}
        if not res.exact:
            row["upper"] = res.upper
        rows.append(row)
    return (dict(rows[0]) if len(rows) == 1 else {"rows": rows}), True


def cmd_omega(args):
    return _clique_cmd(args, "omega")


def cmd_alpha(args):
    return _clique_cmd(args, "alpha")


def cmd_colorings(args):
    kind, _ = _parse_family(args.family)
    rows = []
    for n in _n_range(args):
        if kind == "perm":
            g = perm_kneser(n)
            named = {"prefix": prefix_coloring(n)}
        elif kind == "ksubsets":
            raise UsageError("colorings supports full, t3 and perm")
        else:
            if n < 4:
                raise UsageError("colorings need n >= 4")
            graph, labels = _family_graph(args, n)
            g = graph
            named = {"fan": fan_coloring(n, labels), "ear": ear_coloring(n, labels)}
            if n >= 5:
                # star-deleted: drop the star at n, color the rest with n-3 colors
                from .polygon import star
                s = star(n, n)
                rest = [t for t in labels if t != s]
                sub = build_kneser(triangulation_family(rest))
                col = star_deleted_coloring(n, n, rest)
                ok, bad = verify_coloring(sub, col)
                rows.append({"n": n, "coloring": "star-deleted", "colors": col.k, "proper": ok,
                             "violation": None if bad is None else list(bad)})
        for name, col in named.items():
            ok, bad = verify_coloring(g, col)
            row = {"n": n, "coloring": name, "colors": col.k, "proper": ok,
                   "violation": None if bad is None else list(bad)}
            if args.verbose:
                row["colors_by_vertex"] = list(col.colors)
            rows.append(row)
    return {"rows": rows}, all(r["proper"] for r in rows)


def cmd_cd2(args):
    rows = []
    for n in _n_range(args):
        if n < 5:
            raise UsageError("cd2-witness needs n >= 5")
        _guard(args, "enumerate", n)
        rows.append({"n": n, "witness_ok": cd2_witness_check(n)})
    return {"rows": rows}, all(r["witness_ok"] for r in rows)


def cmd_map_t3(args):
    rows = []
    for n in _n_range(args):
        _guard(args, "enumerate", n)
        if n < 4:
            raise UsageError("map-t3 needs n >= 4")
        t3 = set(enumerate_T3(n))
        if args.triangulation:
            ts = [_parse_triangulation(args.triangulation, n)]
        else:
            ts = enumerate_triangulations(n)
        for t in ts:
            m = map_to_T3(t)
            row = {"n": n, "triangulation": t.to_json()["diagonals"],
                   "image": m.to_json()["diagonals"], "witness": t3_witness(t).to_json(),
                   "in_T3": m in t3, "below_image": rsqa_tri(t, m)}
            rows.append(row)
    ok = all(r["in_T3"] and r["below_image"] for r in rows)
    if args.count_only:
        return {"mapped": len(rows), "all_ok": ok}, ok
    return {"rows": rows}, ok


def cmd_z_copy(args):
    if args.triangulation:
        ts = [_parse_triangulation(args.triangulation, args.n)]
    else:
        ts = []
        for n in _n_range(args):
            _guard(args, "enumerate", n)
            ts.extend(enumerate_triangulations(n))
    rows = []
    for t in ts:
        z = find_z_copy(t)
        row = {"n": t.n, "triangulation": t.to_json()["diagonals"],
               "z_copy": None if z is None else list(z)}
        if z is not None:
            sw = z_swap(t)
            row["normalized"] = sw.normalized.to_json()["diagonals"]
            row["swapped"] = sw.swapped.to_json()["diagonals"]
            row["swap_improves"] = rsqa_tri(sw.normalized, sw.swapped)
        rows.append(row)
    return {"rows": rows}, True


def cmd_hyper(args):
    kind, k = _parse_family(args.family)
    rows = []
    ok = True
    for n in _n_range(args):
        _guard(args, "hyper", n)
        graph, labels = _family_graph(args, n)
        fam = graph.family
        hyper = KneserHypergraph(fam, args.r)
        named = {}
        if kind == "full" and args.r >= 3 and n >= 5:
            named = {"grouped_fan": grouped_fan_coloring(n, args.r),
                     "grouped_star_deleted": grouped_star_deleted_coloring(n, args.r)}
        res = hypergraph_chromatic(hyper, timeout=args.timeout, engine=args.engine,
                                   upper_colorings=named)
        row = {"n": n, "r": args.r, "family": args.family, "vertices": len(labels),
               "chi": res.value, "exact": res.exact, "lower": res.lower, "upper": res.upper,
               "colorings": res.upper_colorings}
        if kind == "full":
            row["bound"] = -(-(n - 3) // (args.r - 1))
            row["conjecture_form"] = -(-(n - args.r) // (args.r - 1))
        rows.append(row)
        ok = ok and all(v["proper"] for v in res.upper_colorings.values())
    return (dict(rows[0]) if len(rows) == 1 else {"rows": rows}), ok


def cmd_export(args):
    if not args.out:
        raise UsageError("export-dimacs needs --out")
    (n,) = _n_range(args)[:1]
    graph, labels = _family_graph(args, n)
    path = export_dimacs(graph, args.out, comment=f"Kneser graph, family {args.family}, n = {n}")
    return {"n": n, "family": args.family, "vertices": graph.order, "edges": graph.num_edges,
            "path": str(path)}, True


GEOMETRY_CHECKS = ("verify-circ", "verify-vec", "verify-lac", "verify-gkz", "farkas",
                   "hemisphere", "delta-case")


def cmd_geometry(args):
    check = args.check
    if check == "delta-case":
        rep = geo.delta_case_vectors()
        return rep.to_json(), rep.passed
    reports = []
    for n in _n_range(args):
        if n < 4:
            raise UsageError("geometry checks need n >= 4")
        if check == "verify-circ":
            rep = geo.verify_obtuse(n, precision=args.precision)
        elif check == "verify-lac":
            _guard(args, "geometry", n)
            res = geo.lacunary_construction(n)
            reports.append(res.to_json())
            continue
        else:
            _guard(args, "geometry", n)
            q = geo.rational_regular(n) if n in (4, 6) else geo.random_convex_polygon(n, args.seed)
            if check == "verify-vec":
                rep = geo.verify_vec(q)
            elif check == "verify-gkz":
                rep = geo.verify_gkz_incidence(q)
            elif check == "farkas":
                rep = geo.verify_farkas(q, samples=args.samples or 100, seed=args.seed)
            else:
                rep = geo.hemisphere_check(q, geo.vec_vectors(q), samples=args.samples or 1000,
                                           seed=args.seed)
        reports.append(rep.to_json())
    ok = all(r["passed"] for r in reports)
    return (reports[0] if len(reports) == 1 else {"rows": reports}), ok


def cmd_report(args):
    ids = None
    if args.criteria:
        try:
            ids = [int(x) for x in args.criteria.split(",")]
        except ValueError:
            raise UsageError("--criteria takes a comma-separated list of numbers") from None
        bad = [i for i in ids if i not in acceptance.CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}")
    options = {8: {"seed": args.seed}, 9: {"precision": args.precision}}
    if args.no_stretch:
        options[1] = {"stretch": False}
    results = acceptance.run_all(ids, threads=args.threads, options=options)
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = {"criteria": [r.to_json() for r in results],
               "summary": {"passed": sum(r.passed for r in results), "total": len(results)},
               "timing": {str(r.id): round(r.seconds, 3) for r in results}}
    return payload, all(r.passed for r in results)


COMMANDS = {
    "enumerate": cmd_enumerate, "chi": cmd_chi, "omega": cmd_omega, "alpha": cmd_alpha,
    "colorings": cmd_colorings, "cd2-witness": cmd_cd2, "map-t3": cmd_map_t3,
    "z-copy": cmd_z_copy, "hyper": cmd_hyper, "geometry": cmd_geometry,
    "export-dimacs": cmd_export, "report": cmd_report,
}


# -- plumbing ---------------------------------------------------------------------------------

def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ASSOC_KNESER_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--n-max", type=int)
    common.add_argument("--r", type=int, default=3)
    common.add_argument("--family", default="full")
    common.add_argument("--delete-vertex", help="triangulation as JSON")
    common.add_argument("--triangulation", help="triangulation as JSON")
    common.add_argument("--timeout", type=float)
    common.add_argument("--threads", type=int, default=_default_threads())
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out")
    common.add_argument("--precision", type=int, default=geo.DEFAULT_PRECISION)
    common.add_argument("--engine", choices=ENGINES, default="backtrack")
    common.add_argument("--no-symmetry", action="store_true")
    common.add_argument("--force", action="store_true")
    common.add_argument("--count-only", action="store_true")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="assoc-kneser",
                                     description="Kneser graphs of polygon triangulations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "geometry":
            p.add_argument("check", choices=GEOMETRY_CHECKS)
        if name == "report":
            p.add_argument("--criteria", help="comma-separated ids (default: all)")
            p.add_argument("--no-stretch", action="store_true")
    return parser


def _csv(payload: dict) -> str:
    rows = payload.get("rows") or payload.get("criteria") or [payload]
    flat = []
    for row in rows:
        flat.append({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in row.items()})
    keys: list = []
    for row in flat:
        keys.extend(k for k in row if k not in keys)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)
    return buf.getvalue()


def emit(payload: dict, args) -> None:
    text = _csv(payload) if args.format == "csv" else json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out and args.command != "export-dimacs":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.time()
    try:
        body, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = {"schema": SCHEMA, "command": args.command}
    if args.command == "geometry":
        payload["subcommand"] = args.check
    payload.update(body)
    payload["passed"] = ok
    if args.command != "report":
        payload["timing"] = {"seconds": round(time.time() - start, 3)}
    emit(payload, args)
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
