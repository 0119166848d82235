import json

import pytest

from domkernel.cli import main
from domkernel.generators import path, star
from domkernel.graph import to_edge_list


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def p7_file(tmp_path):
    f = tmp_path / "p7.txt"
    f.write_text(to_edge_list(path(7)))
    return f


def test_gen_to_file(capsys, tmp_path):
    out = tmp_path / "g.txt"
    code, doc = run(capsys, "gen", "--family", "grid", "--params", "rows=3,cols=4", "--out", out)
    assert code == 0 and doc["n"] == 12 and doc["m"] == 17 and doc["schema"] == "1"
    assert out.read_text().startswith("p 12\n")


def test_gen_bad_params(capsys):
    assert main(["gen", "--family", "grid", "--params", "rows=x"]) == 1
    assert main(["gen", "--family", "randdeg", "--params", "n=5,d=3"]) == 1


def test_argparse_errors_exit_1():
    with pytest.raises(SystemExit) as exc:
        main(["kernelize"])
    assert exc.value.code == 1


def test_missing_file(capsys, tmp_path):
    assert main(["solve", str(tmp_path / "nope.txt")]) == 1


def test_solve_p7(capsys, p7_file):
    code, doc = run(capsys, "solve", p7_file)
    assert code == 0 and doc["optimum"] == 3 and len(doc["witness"]) == 3


def test_solve_connected(capsys, p7_file):
    code, doc = run(capsys, "solve", p7_file, "--connected")
    assert code == 0 and doc["optimum"] == 5


def test_solve_refusal(capsys, tmp_path):
    f = tmp_path / "p40.txt"
    f.write_text(to_edge_list(path(40)))
    code, _ = run(capsys, "solve", f, "--cap", 10)
    assert code == 3


def test_approx(capsys, p7_file):
    code, doc = run(capsys, "approx", p7_file, "--r", 1, "--k", 1)
    assert code == 2 and doc["tag"] == "scattered" and doc["certificateOk"]
    code, doc = run(capsys, "approx", p7_file, "--r", 1, "--k", 5)
    assert code == 0 and doc["certificateOk"]


def test_closure(capsys, p7_file, tmp_path):
    s = tmp_path / "x.txt"
    s.write_text("0 6\n")
    code, doc = run(capsys, "closure", p7_file, "--r", 2, "--xi", 4, "--set", s)
    assert code == 0 and {0, 6} <= set(doc["closure"])


def test_core_and_kernelize(capsys, tmp_path):
    f = tmp_path / "star.txt"
    f.write_text(to_edge_list(star(30)))
    code, doc = run(capsys, "core", f, "--r", 1, "--k", 1)
    assert code == 0 and len(doc["Z"]) < 31
    code, doc = run(capsys, "kernelize", f, "--r", 1, "--k", 1, "--mode", "r1")
    assert code == 0 and doc["kind"] == "induced_r1" and doc["n"] <= 5
    for a, b in (tuple(map(int, line.split())) for line in doc["edges"].splitlines()[1:]):
        assert 0 in (doc["idMap"][a], doc["idMap"][b])


def test_kernelize_no_instance(capsys, p7_file):
    code, doc = run(capsys, "kernelize", p7_file, "--r", 1, "--k", 1, "--mode", "plain")
    assert code == 2 and doc["kind"] == "infeasible" and len(doc["certificate"]) >= 2


def test_kernelize_r1_needs_r1(capsys, p7_file):
    assert main(["kernelize", str(p7_file), "--r", "2", "--k", "1", "--mode", "r1"]) == 1


def test_verify_single_graph(capsys, p7_file):
    code, doc = run(capsys, "verify", "--graph", p7_file, "--radii", "1,2")
    assert code == 0 and doc["failed"] == 0 and doc["checks"] > 0


def test_bench_and_report(capsys, p7_file):
    code, doc = run(capsys, "bench", "--family", "grid", "--sizes", "3,4")
    assert code == 0 and [row["n"] for row in doc["rows"]] == [9, 16]
    assert "millis" not in doc["rows"][0]
    code, doc = run(capsys, "sparsity-report", p7_file, "--max-m", 2)
    assert code == 0 and doc["degeneracy"] == 1


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("KERNEL_SEED", "5")
    _, a = run(capsys, "gen", "--family", "randdeg", "--params", "n=12,d=3")
    _, b = run(capsys, "gen", "--family", "randdeg", "--params", "n=12,d=3", "--seed", 5)
    assert a == b and a["seed"] == 5
    monkeypatch.setenv("KERNEL_SEED", "abc")
    assert main(["gen", "--family", "path"]) == 1


def test_byte_identical_runs(capsys):
    argv = ["gen", "--family", "motif2cds", "--params", "n=6,k=3", "--seed", "9"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
