import json

import pytest

from onion_tsp.cli import main


@pytest.fixture
def square_csv(tmp_path):
    p = tmp_path / "square.csv"
    p.write_text("id,x,y\n0,0,0\n1,1,0\n2,1,1\n3,0,1\n")
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_square(capsys, square_csv):
    code, out, err = run(capsys, "solve", square_csv, "--construct", "layers", "--improve", "3opt")
    assert code == 0 and err == ""
    result = json.loads(out)
    assert result["length"] == 4.0
    assert result["tour"] == [0, 1, 2, 3]
    assert result["layer_count"] == 1
    assert set(result) == {"instance_name", "pipeline", "tour", "length", "optimum",
                           "gap_percent", "layer_count", "wall_time_ms"}
    assert result["pipeline"]["construct"] == "layers"


def test_exact_square(capsys, square_csv):
    code, out, _ = run(capsys, "exact", square_csv, "--algo", "brute")
    result = json.loads(out)
    assert code == 0 and result["optimum"] == 4.0 and result["gap_percent"] == 0.0
    code, out, _ = run(capsys, "solve", square_csv, "--construct", "nn", "--optimum")
    assert json.loads(out)["gap_percent"] == 0.0


def test_solve_is_byte_stable(capsys, tmp_path):
    f = tmp_path / "r.csv"
    assert run(capsys, "gen", "--n", 30, "--seed", 4, "--out", f)[0] == 0
    outs = [run(capsys, "solve", f, "--construct", "layers", "--order", "inner", "--improve", "2opt")[1]
            for _ in range(2)]
    assert outs[0] == outs[1]
    svgs = [run(capsys, "solve", f, "--construct", "nn", "--start", 3, "--format", "svg")[1] for _ in range(2)]
    assert svgs[0] == svgs[1] and svgs[0].startswith("<?xml")


def test_layers_command(capsys, tmp_path):
    f = tmp_path / "g.csv"
    f.write_text("".join(f"{x},{y}\n" for x in range(3) for y in range(3)))
    for algo in ("naive", "hullgraph"):
        code, out, _ = run(capsys, "layers", f, "--algo", algo)
        assert code == 0 and json.loads(out)["sizes"] == [8, 1]
    code, out, _ = run(capsys, "layers", f, "--format", "svg")
    assert code == 0 and out.count("<polygon") == 2


def test_exit_codes(capsys, square_csv, tmp_path):
    code, out, err = run(capsys, "solve", square_csv)
    assert code == 1 and out == "" and err
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1
    code, out, err = run(capsys, "solve", tmp_path / "missing.csv", "--construct", "nn")
    assert code == 2 and out == "" and "cannot read" in err
    bad = tmp_path / "bad.tsp"
    bad.write_text("NAME: b\nTYPE: TSP\nDIMENSION: 1\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\nEOF\n")
    code, _, err = run(capsys, "exact", bad, "--algo", "brute")
    assert code == 2 and "unsupported metric GEO" in err
    big = tmp_path / "big.csv"
    assert run(capsys, "gen", "--n", 20, "--seed", 1, "--out", big)[0] == 0
    code, out, err = run(capsys, "exact", big, "--algo", "brute")
    assert code == 3 and out == "" and "brute force capped at 10" in err
    code, _, err = run(capsys, "bench", "--n", 30, "--instances", 1, "--seed", 1, "--out", tmp_path / "x.json")
    assert code == 3 and "no exact oracle" in err
    code, _, _ = run(capsys, "bench", "--n", 5, "--instances", 1, "--seed", 1,
                     "--pipelines", "nn+9opt", "--out", tmp_path / "x.json")
    assert code == 1


def test_bench_report_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["bench", "--n", 8, "--instances", 10, "--seed", 1, "--out"]
    assert run(capsys, *args, a)[0] == 0
    assert run(capsys, *args, b, "--threads", 3)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert set(report) == {"config", "rows", "aggregates"}
    assert len(report["rows"]) == 40
    assert set(report["aggregates"]) == {"nn", "nn+2opt", "layers", "layers+3opt"}
