import json

import pytest

from seplines.cli import (
    EXIT_NOT_SEPARATING,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    ParseFileError,
    main,
    parse_line_file,
    parse_point_file,
)

SQUARE = "0 0\n1 0\n1 1\n0 1\n"


@pytest.fixture
def square_file(tmp_path):
    f = tmp_path / "square.txt"
    f.write_text(SQUARE)
    return str(f)


# ---------------------------------------------------------------------------
# file parsing


def test_point_file_formats(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("# header comment\n0.25 1/3\n\n 7/8\t0.5  # trailing\n")
    P = parse_point_file(str(f))
    assert len(P) == 2
    assert P[0].x.numerator == 1 and P[0].x.denominator == 4
    assert P[1].y.denominator == 2


def test_point_file_error_carries_line_number(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("0 0\nnot-a-number 3\n")
    with pytest.raises(ParseFileError, match=":2:"):
        parse_point_file(str(f))
    f.write_text("0 0 0\n")
    with pytest.raises(ParseFileError, match=":1:"):
        parse_point_file(str(f))


def test_line_file_parsing(tmp_path):
    f = tmp_path / "l.txt"
    f.write_text("2 0 -1\n0 2 -1\n")
    lines = parse_line_file(str(f))
    assert [l.coeffs() for l in lines] == [(2, 0, -1), (0, 2, -1)]
    f.write_text("0 0 1\n")
    with pytest.raises(ParseFileError, match=":1:"):
        parse_line_file(str(f))
    f.write_text("1 0 0.5\n")
    with pytest.raises(ParseFileError, match=":1:"):
        parse_line_file(str(f))


# ---------------------------------------------------------------------------
# solve / verify


def test_solve_square_json(square_file, capsys):
    rc = main(["solve", "--input", square_file, "--algo", "exact", "--json"])
    assert rc == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["sigma"] == 2 and doc["size"] == 2
    assert doc["wall_time_ms"] is None  # timing opt-in


def test_solve_two_points_single_line(tmp_path, capsys):
    f = tmp_path / "two.txt"
    f.write_text("0 0\n1 1\n")
    rc = main(["solve", "--input", str(f), "--algo", "exact"])
    assert rc == EXIT_OK
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1 and len(out[0].split()) == 3


def test_solve_verify_roundtrip_all_algos(square_file, tmp_path, capsys):
    for algo in ("exact", "greedy", "reweight", "halving"):
        rc = main(["solve", "--input", square_file, "--algo", algo, "--seed", "1"])
        assert rc == EXIT_OK, algo
        lf = tmp_path / f"{algo}.lines"
        lf.write_text(capsys.readouterr().out)
        rc = main(["verify", "--points", square_file, "--lines", str(lf)])
        assert rc == EXIT_OK, algo
        capsys.readouterr()


def test_solve_relaxed_mode(square_file, capsys):
    rc = main(
        ["solve", "--input", square_file, "--algo", "reweight", "--mode", "relaxed"]
    )
    assert rc == EXIT_OK
    capsys.readouterr()


def test_verify_failure_reports_pair(square_file, tmp_path, capsys):
    lf = tmp_path / "one.lines"
    lf.write_text("2 0 -1\n")  # x = 1/2 leaves (0,3) and (1,2) unseparated
    rc = main(["verify", "--points", square_file, "--lines", str(lf)])
    assert rc == EXIT_NOT_SEPARATING
    assert "pair 0 3" in capsys.readouterr().out
    lf.write_text("")
    rc = main(["verify", "--points", square_file, "--lines", str(lf)])
    assert rc == EXIT_NOT_SEPARATING
    capsys.readouterr()


def test_unreadable_input_exits_2(capsys):
    rc = main(["solve", "--input", "/definitely/not/here.txt"])
    assert rc == EXIT_PARSE
    capsys.readouterr()


def test_exact_cap_exits_3(tmp_path, capsys):
    f = tmp_path / "many.txt"
    f.write_text("".join(f"{i} {i * i}\n" for i in range(20)))
    rc = main(["solve", "--input", str(f), "--algo", "exact"])
    assert rc == EXIT_PRECONDITION
    capsys.readouterr()


# ---------------------------------------------------------------------------
# study


def test_study_scaling_writes_csv_and_summary(tmp_path, capsys):
    csv = tmp_path / "out.csv"
    rc = main(
        ["study", "scaling", "--n", "64,128", "--trials", "2", "--seed", "1", "--csv", str(csv)]
    )
    assert rc == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "scaling" and doc["fitted_exponent"] is not None
    body = csv.read_text().splitlines()
    assert body[0] == "# schema=1"
    assert len(body) == 2 + 4


def test_study_single_n_null_exponent(tmp_path, capsys):
    rc = main(["study", "scaling", "--n", "64", "--trials", "2", "--seed", "1"])
    assert rc == EXIT_OK
    assert json.loads(capsys.readouterr().out)["fitted_exponent"] is None


def test_study_byte_identical_rerun(tmp_path, capsys):
    args = ["study", "trelax", "--n", "64,128", "--t", "2", "--trials", "2", "--seed", "3"]
    c1 = tmp_path / "a.csv"
    c2 = tmp_path / "b.csv"
    assert main(args + ["--csv", str(c1)]) == EXIT_OK
    out1 = capsys.readouterr().out
    assert main(args + ["--csv", str(c2)]) == EXIT_OK
    out2 = capsys.readouterr().out
    assert out1 == out2
    assert c1.read_bytes() == c2.read_bytes()


def test_study_missing_n_exits_2(capsys):
    assert main(["study", "scaling", "--trials", "2"]) == EXIT_PARSE
    capsys.readouterr()


def test_study_balls_bins_and_birthday(capsys):
    rc = main(
        ["study", "balls-bins", "--n-balls", "500", "--n-bins", "2000", "--i", "2",
         "--trials", "50", "--seed", "2"]
    )
    assert rc == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] is True
    rc = main(["study", "birthday", "--n-balls", "1000", "--c", "1", "--trials", "10", "--seed", "2"])
    assert rc == EXIT_OK
    assert json.loads(capsys.readouterr().out)["n_bins"] == 10 ** 6


def test_study_precondition_exits_3(capsys):
    rc = main(
        ["study", "balls-bins", "--n-balls", "1000", "--n-bins", "1000", "--i", "2",
         "--trials", "5", "--seed", "0"]
    )
    assert rc == EXIT_PRECONDITION
    capsys.readouterr()


# ---------------------------------------------------------------------------
# partition


def _write_grid_instance(tmp_path):
    from .conftest import grid_lines, perturbed_grid

    P = perturbed_grid(6, seed=8)
    pf = tmp_path / "pts.txt"
    pf.write_text("".join(f"{p.x} {p.y}\n" for p in P))
    lf = tmp_path / "lines.txt"
    lf.write_text("".join(f"{l.a} {l.b} {l.c}\n" for l in grid_lines(6)))
    return str(pf), str(lf)


def test_partition_command(tmp_path, capsys):
    pf, lf = _write_grid_instance(tmp_path)
    out = tmp_path / "part.json"
    rc = main(
        ["partition", "--points", pf, "--lines", lf, "--r", "4", "--seed", "2",
         "--out", str(out)]
    )
    assert rc == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["conforming"] is True
    doc = json.loads(out.read_text())
    assert sum(len(t["points"]) for t in doc["triangles"]) == 36


def test_partition_non_separating_exits_3(tmp_path, capsys):
    pf, lf = _write_grid_instance(tmp_path)
    short = tmp_path / "short.txt"
    short.write_text(open(lf).readline())
    rc = main(
        ["partition", "--points", pf, "--lines", str(short), "--r", "4",
         "--seed", "2", "--out", str(tmp_path / "x.json")]
    )
    assert rc == EXIT_PRECONDITION
    capsys.readouterr()
