import csv
import io
import json
import subprocess
import sys

import pytest

from assoc_kneser.cli import main
from assoc_kneser.kneser import full_family_graph, parse_dimacs


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_chi_full_hexagon(capsys):
    code, data = run_json(capsys, "chi", "--family", "full", "--n", "6")
    assert code == 0
    assert data["schema"] == 1 and data["n"] == 6 and data["chi"] == 4 and data["exact"] is True


def test_enumerate_t3_count(capsys):
    code, data = run_json(capsys, "enumerate", "--family", "t3", "--n", "8", "--count-only")
    assert code == 0 and data["count"] == 89


def test_geometry_verify_circ(capsys):
    code, data = run_json(capsys, "geometry", "verify-circ", "--n", "7")
    assert code == 0 and data["passed"] and data["mode"] == "interval"
    assert data["violations"] == []


@pytest.mark.parametrize("check", ["verify-vec", "verify-gkz", "farkas", "verify-lac", "hemisphere"])
def test_geometry_checks(capsys, check):
    code, data = run_json(capsys, "geometry", check, "--n", "5", "--samples", "20")
    assert code == 0 and data["subcommand"] == check


def test_delta_case(capsys):
    code, data = run_json(capsys, "geometry", "delta-case")
    assert code == 0 and data["extra"]["x14_at_111"] == "3"


def test_delete_vertex(capsys):
    code, data = run_json(capsys, "chi", "--n", "6", "--delete-vertex", "[[2,6],[3,6],[4,6]]")
    assert code == 0 and data["chi"] == 3
    code, data = run_json(capsys, "chi", "--n", "6", "--delete-vertex", "[[1,5],[2,4],[2,5]]")
    assert code == 0 and data["chi"] == 4


@pytest.mark.parametrize("family,n,value", [("perm", 4, 4), ("ksubsets:2", 5, 3), ("t3", 7, 5)])
def test_chi_families(capsys, family, n, value):
    code, data = run_json(capsys, "chi", "--family", family, "--n", str(n))
    assert code == 0 and data["chi"] == value


def test_omega_alpha(capsys):
    assert run_json(capsys, "omega", "--n", "7")[1]["omega"] == 3
    assert run_json(capsys, "alpha", "--n", "6")[1]["alpha"] == 5


def test_colorings_and_cd2(capsys):
    code, data = run_json(capsys, "colorings", "--n", "7")
    assert code == 0 and all(r["proper"] for r in data["rows"])
    assert run_json(capsys, "cd2-witness", "--n", "8")[0] == 0
    code, data = run_json(capsys, "cd2-witness", "--n", "5")
    assert code == 1 and data["passed"] is False


def test_map_t3_and_z_copy(capsys):
    code, data = run_json(capsys, "map-t3", "--n", "7")
    assert code == 0 and all(r["in_T3"] and r["below_image"] for r in data["rows"])
    code, data = run_json(capsys, "z-copy", "--n", "6", "--triangulation", "[[1,5],[2,4],[2,5]]")
    row = data["rows"][0]
    assert code == 0 and row["z_copy"] == [1, 2, 3, 4, 5, 6] and row["swap_improves"]


def test_hyper(capsys):
    code, data = run_json(capsys, "hyper", "--r", "3", "--n", "7")
    assert code == 0 and data["chi"] == 2
    assert all(c["proper"] for c in data["colorings"].values())


def test_export_dimacs(capsys, tmp_path):
    out = tmp_path / "g.col"
    code, _ = run(capsys, "export-dimacs", "--n", "6", "--out", str(out))
    assert code == 0
    assert tuple(parse_dimacs(out.read_text())) == full_family_graph(6).adj


def test_csv_output(capsys):
    code, out = run(capsys, "colorings", "--n", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and {r["coloring"] for r in rows} == {"fan", "ear", "star-deleted"}


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, printed = run(capsys, "enumerate", "--n", "6", "--count-only", "--out", str(out))
    assert code == 0 and printed == ""
    assert json.loads(out.read_text())["count"] == 14


def test_guard_and_force(capsys):
    assert run(capsys, "chi", "--family", "full", "--n", "10")[0] == 2
    assert run(capsys, "chi", "--family", "perm", "--n", "6")[0] == 2
    assert run(capsys, "enumerate", "--n", "13")[0] == 2
    code, data = run_json(capsys, "enumerate", "--family", "t3", "--n", "13", "--count-only", "--force")
    assert code == 0 and data["count"] == 10946


def test_usage_errors(capsys):
    assert main(["bogus"]) == 2
    assert main(["chi", "--n", "6", "--nope"]) == 2
    assert main(["chi", "--family", "nonsense", "--n", "6"]) == 2
    capsys.readouterr()


def test_report_subset(capsys):
    code, data = run_json(capsys, "report", "--criteria", "2,7")
    assert code == 0
    assert [c["id"] for c in data["criteria"]] == [2, 7]
    assert data["summary"] == {"passed": 2, "total": 2}


def test_report_deterministic(capsys):
    first = run_json(capsys, "report", "--criteria", "3,10")[1]
    second = run_json(capsys, "report", "--criteria", "3,10")[1]
    for d in (first, second):
        d.pop("timing")
        for c in d["criteria"]:
            c.pop("seconds", None)
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "assoc_kneser", "enumerate", "--n", "5", "--count-only"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 5
