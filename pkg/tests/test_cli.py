import csv
import io
import subprocess
import sys

import pytest

from lca.cli import main
from lca.instances import gen_graph, write_graph

from conftest import complete_graph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def graph_file(tmp_path):
    p = tmp_path / "g.txt"
    with open(p, "w") as fh:
        write_graph(gen_graph(200, 4, 3), fh)
    return str(p)


def test_params_color(capsys):
    assert run(capsys, "params", "--algo", "color", "--k", "6", "--d", "1")[:2] == (0, "1 1 4\n")


def test_params_cnf(capsys):
    assert run(capsys, "params", "--algo", "cnf", "--k", "16", "--d", "2")[:2] == (0, "6 6 4\n")


def test_params_infeasible(capsys):
    assert run(capsys, "params", "--algo", "color", "--k", "3", "--d", "1")[:2] == (3, "INFEASIBLE\n")


def test_query_repeatable(capsys, graph_file):
    a = run(capsys, "query", "--algo", "mis", "--graph", graph_file, "--seed", "7", "--vertex", "0")
    b = run(capsys, "query", "--algo", "mis", "--graph", graph_file, "--seed", "7", "--vertex", "0")
    assert a == b and a[0] == 0
    ans, touched = a[1].split()
    assert ans in ("IN", "OUT") and int(touched) > 0


def test_seed_from_environment(capsys, graph_file, monkeypatch):
    monkeypatch.setenv("LCA_SEED", "7")
    a = run(capsys, "query", "--algo", "mis", "--graph", graph_file, "--vertex", "5")
    monkeypatch.delenv("LCA_SEED")
    b = run(capsys, "query", "--algo", "mis", "--graph", graph_file, "--seed", "7", "--vertex", "5")
    assert a == b


def test_sweep_then_verify(capsys, tmp_path, graph_file):
    code, out, _ = run(capsys, "sweep", "--algo", "mis", "--graph", graph_file, "--seed", "1")
    assert code == 0
    sol = tmp_path / "sol.txt"
    sol.write_text(out)
    assert run(capsys, "verify", "--algo", "mis", "--graph", graph_file, "--solution", str(sol))[:2] == (0, "OK\n")


def test_verify_violation_exit_1(capsys, tmp_path):
    g = tmp_path / "k2.txt"
    with open(g, "w") as fh:
        write_graph(complete_graph(2), fh)
    sol = tmp_path / "bad.txt"
    sol.write_text("0 IN\n1 IN\n")
    code, out, _ = run(capsys, "verify", "--algo", "mis", "--graph", str(g), "--solution", str(sol))
    assert code == 1
    assert out.strip() == '{"kind": "edge_inside_set", "witness": [0, 1]}'


def test_fail_exit_2(capsys, graph_file):
    code, out, _ = run(capsys, "sweep", "--algo", "mis", "--graph", graph_file, "--c", "1e-9", "--rounds-factor", "0.01", "--format", "csv")
    assert code == 2
    assert "FAIL" in out


def test_parse_error_exit_3(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1 1\n0 7\n")
    code, _, err = run(capsys, "query", "--algo", "mis", "--graph", str(bad), "--vertex", "0")
    assert code == 3 and err.startswith("lca:") and err.count("\n") == 1


def test_usage_error_exit_3(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["query", "--algo", "mis"])
    assert exc.value.code == 3


def test_cnf_sweep_dimacs_lines(capsys):
    code, out, _ = run(capsys, "sweep", "--algo", "cnf", "--gen", "500,1,5,100", "--seed", "2")
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("v ") for line in lines) and lines[-1] == "v 0"
    lits = [int(t) for line in lines for t in line.split()[1:]]
    assert sorted(abs(x) for x in lits if x) == list(range(1, 501))


def test_bench_csv_format(capsys):
    code, out, _ = run(capsys, "bench", "--algo", "mis", "--d", "4", "--sizes", "256:1024", "--queries", "20")
    assert code == 0 and "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "mean_touched_states", "mean_us_per_query", "fail_rate"]
    assert [int(r[0]) for r in rows[1:]] == [256, 512, 1024]


def test_bench_non_timing_columns_deterministic(capsys):
    argv = ("bench", "--algo", "color", "--d", "1", "--k", "6", "--sizes", "100,200", "--queries", "20")
    a = list(csv.reader(io.StringIO(run(capsys, *argv)[1])))
    b = list(csv.reader(io.StringIO(run(capsys, *argv)[1])))
    assert [(r[0], r[1], r[3]) for r in a] == [(r[0], r[1], r[3]) for r in b]


def test_gen_roundtrip(capsys, tmp_path):
    out = tmp_path / "h.txt"
    assert run(capsys, "gen", "--algo", "color", "--gen", "600,1,6,100", "--out", str(out))[0] == 0
    code, text, _ = run(capsys, "verify", "--algo", "color", "--hypergraph", str(out), "--seed", "4")
    assert (code, text) == (0, "OK\n")


def test_module_entry_point(graph_file):
    proc = subprocess.run(
        [sys.executable, "-m", "lca", "query", "--algo", "broadcast", "--graph", graph_file, "--vertex", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.split()[0].isdigit()
