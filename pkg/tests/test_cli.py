from __future__ import annotations

import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from streamhull.cli import BENCH_HEADER, main
from streamhull.geometry import Point, oracle_hull
from streamhull.instances import random_disk
from streamhull.io import ParseError, format_points, parse_points, read_points, write_points

SQUARE_TXT = "# unit square\n0 0\n1 0\n\n1 1\n0 1   # last corner\n0.5 1/2\n1 0\n"


@pytest.fixture
def square(tmp_path):
    path = tmp_path / "square.txt"
    path.write_text(SQUARE_TXT)
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_formats():
    pts = parse_points(["1.25 -3/6", "7 8 # c", "", "  # only a comment"])
    assert pts == [Point(Fraction(5, 4), Fraction(-1, 2)), Point(7, 8)]
    assert type(pts[1].x) is int
    assert format_points(pts) == "5/4 -1/2\n7 8\n"


@pytest.mark.parametrize("line", ["1", "1 2 3", "a 2", "1/0 2"])
def test_parse_errors_carry_line(line):
    with pytest.raises(ParseError) as info:
        parse_points(["0 0", line])
    assert info.value.line == 2


def test_file_round_trip(tmp_path):
    pts = [Point(Fraction(1, 3), -2), Point(10 ** 30, Fraction(7, 9))]
    write_points(tmp_path / "p.txt", pts)
    assert read_points(tmp_path / "p.txt") == pts


def test_hull_oracle(square, capsys):
    code, out, err = run(["hull", square, "--algo", "oracle"], capsys)
    assert code == 0
    assert out == "0 1\n1 1\n1 0\n0 0\n"
    metrics = json.loads(err)
    assert metrics["h"] == 4 and metrics["n"] == 5 and metrics["schema"] == 1
    assert set(metrics) == {"schema", "algorithm", "n", "h", "passes", "peak_space", "wall_time_ms", "params"}


def test_all_algorithms_agree(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    write_points(pts, random_disk(300, seed=3))
    outs = set()
    for extra in (["--algo", "oracle"], ["--algo", "ram", "--r", "3"], ["--algo", "stream", "--delta", "1/3"],
                  ["--algo", "wstream-det", "--space", "40"], ["--algo", "wstream-rand", "--space", "8", "--seed", "7"]):
        code, out, _ = run(["hull", pts, *extra], capsys)
        assert code == 0
        outs.add(out)
    assert len(outs) == 1
    assert outs.pop() == format_points(oracle_hull(read_points(pts)))


def test_outputs_to_files(square, tmp_path, capsys):
    out, met = tmp_path / "h.txt", tmp_path / "m.json"
    code, stdout, stderr = run(["hull", square, "--algo", "wstream-rand", "--space", "8", "--seed", "7",
                                "-o", out, "--metrics", met], capsys)
    assert code == 0 and stdout == stderr == ""
    first = out.read_text()
    run(["hull", square, "--algo", "wstream-rand", "--space", "8", "--seed", "7", "-o", out, "--metrics", met], capsys)
    assert out.read_text() == first
    assert json.loads(met.read_text())["params"]["seed"] == 7


def test_exit_codes(square, tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\n1 2\nthree 4\n")
    code, _, err = run(["hull", bad], capsys)
    assert code == 2 and "line 3" in err
    code, _, err = run(["hull", square, "--algo", "stream", "--space", "2"], capsys)
    assert code == 3 and json.loads(err)["budget"] == 2
    code, _, err = run(["hull", square, "--algo", "wstream-rand", "--space", "8"], capsys)
    assert code == 4 and "seed" in err
    assert run(["hull", square, "--algo", "wstream-det"], capsys)[0] == 4
    assert run(["hull", square, "--algo", "stream", "--delta", "2"], capsys)[0] == 4
    assert run(["hull", square, "--algo", "nope"], capsys)[0] == 4
    assert run(["hull", square, "--r", "0"], capsys)[0] == 4
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    assert run(["hull", empty], capsys)[0] == 4


def test_gen(tmp_path, capsys):
    out = tmp_path / "d.txt"
    assert run(["gen", "disjointness", "--n", 6, "--A", "1,3", "--B", "2,3", "-o", out], capsys)[0] == 0
    assert len(read_points(out)) == 6
    assert json.loads((tmp_path / "d.txt.json").read_text())["A"] == [1, 3]
    out = tmp_path / "r.txt"
    assert run(["gen", "random-disk", "--n", 1000, "--seed", 1, "-o", out], capsys)[0] == 0
    assert len(set(read_points(out))) == 1000
    out = tmp_path / "f.txt"
    assert run(["gen", "four-copy", "--n", 4, "--A", "1", "--B", "2", "-o", out, "--pad", 60], capsys)[0] == 0
    side = json.loads((tmp_path / "f.txt.json").read_text())
    assert {"rho", "k_max_sq"} <= set(side)
    assert len(read_points(out)) == 60
    assert run(["gen", "random-disk", "--n", 5, "-o", out], capsys)[0] == 4
    assert run(["gen", "disjointness", "--n", 3, "--A", "9", "-o", out], capsys)[0] == 4


def test_calipers(square, tmp_path, capsys):
    code, out, err = run(["calipers", "diameter", square], capsys)
    assert code == 0 and out.splitlines()[0] == "2" and len(out.splitlines()) == 3
    code, out, err = run(["calipers", "mer", square, "--algo", "wstream-det", "--hull-space", "16"], capsys)
    assert code == 0 and out.splitlines()[0] == "1"
    assert json.loads(err)["params"]["replays"] >= 2
    line = tmp_path / "line.txt"
    line.write_text("0 0\n1 1\n2 2\n")
    assert run(["calipers", "mer", line], capsys)[1].splitlines()[0] == "0"


def test_bench(tmp_path, capsys):
    assert run(["bench", "empty", tmp_path], capsys)[0] == 0
    assert (tmp_path / "empty.csv").read_text().strip() == ",".join(BENCH_HEADER)
    assert run(["bench", "quick", tmp_path], capsys)[0] == 0
    rows = list(csv.DictReader(open(tmp_path / "quick.csv")))
    assert [r["algo"] for r in rows] == ["stream", "wstream-det", "wstream-rand"]
    assert all(int(r["passes"]) >= 1 and r["h"] == rows[0]["h"] for r in rows)
    assert run(["bench", "bogus", tmp_path], capsys)[0] == 4


def test_module_entry_point(square):
    proc = subprocess.run([sys.executable, "-m", "streamhull", "hull", str(square), "--algo", "ram"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "0 1\n1 1\n1 0\n0 0\n"
