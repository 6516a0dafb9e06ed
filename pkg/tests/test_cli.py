import csv
import io
import math
from pathlib import Path

import pytest

from hjbsos.cli import (
    RESULT_HEADER,
    SchemaError,
    bundled_problem,
    dump_problem_file,
    load_problem_file,
    main,
    parse_problem_file,
)
from hjbsos.oracle import analytic_scalar_lq

SCALAR = bundled_problem("scalar_lq.toml")
DISCRETE = bundled_problem("discrete_benchmark.toml")


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def write(tmp_path, text, name="p.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_solve_bundled_scalar(capsys):
    assert main(["solve", str(SCALAR), "--no-timing"]) == 0
    out, err = capsys.readouterr()
    assert out.splitlines()[0] == ",".join(RESULT_HEADER)
    rows = rows_of(out)
    assert [int(r["degree"]) for r in rows] == [2, 4, 6]
    objs = [float(r["objective"]) for r in rows]
    assert all(b >= a - 1e-7 for a, b in zip(objs, objs[1:]))
    assert float(rows[0]["l1_gap"]) <= 1e-4
    assert objs[0] == pytest.approx(analytic_scalar_lq(1.0) / 3, abs=1e-5)
    assert all(r["solve_ms"] == "0" for r in rows)
    # bounds table goes to stderr
    assert "epsilon,d_p,log_d_bound,loglog_d_bound" in err


def test_solve_is_deterministic(capsys):
    main(["solve", str(DISCRETE), "--no-timing"])
    first = capsys.readouterr().out
    main(["solve", str(DISCRETE), "--no-timing", "--jobs", "2"])
    assert capsys.readouterr().out == first


def test_decimals_have_17_digits(capsys):
    main(["solve", str(SCALAR), "--no-timing"])
    obj = rows_of(capsys.readouterr().out)[0]["objective"]
    assert obj == format(float(obj), ".17g")


def test_out_and_emit_sdpa(tmp_path, capsys):
    out = tmp_path / "res.csv"
    sdpa = tmp_path / "sdpa"
    assert main(["solve", str(SCALAR), "--out", str(out), "--emit-sdpa", str(sdpa)]) == 0
    assert capsys.readouterr().out == ""
    assert len(rows_of(out.read_text())) == 3
    files = sorted(p.name for p in sdpa.iterdir())
    assert files == ["degree_2.dat-s", "degree_4.dat-s", "degree_6.dat-s"]


def test_missing_section_exit_2(tmp_path, capsys):
    text = SCALAR.read_text()
    start = text.index("[cost]")
    end = text.index("[state_set]")
    path = write(tmp_path, text[:start] + text[end:])
    assert main(["solve", path]) == 2
    assert "[cost]" in capsys.readouterr().err


def test_unknown_key_reports_line(tmp_path):
    text = SCALAR.read_text().replace("n = 1\n", "n = 1\nbogus = 3\n", 1)
    with pytest.raises(SchemaError) as exc:
        parse_problem_file(text, "p.toml")
    line = text.splitlines().index("bogus = 3") + 1
    assert exc.value.line == line
    assert f"p.toml:{line}" in str(exc.value)


def test_syntax_error_reports_line(tmp_path, capsys):
    text = SCALAR.read_text().replace("discount = 1.0", "discount = = 1.0")
    path = write(tmp_path, text)
    assert main(["solve", path]) == 2
    line = text.splitlines().index("discount = = 1.0") + 1
    assert f"p.toml:{line}" in capsys.readouterr().err


def test_unknown_section_and_bad_types():
    base = SCALAR.read_text()
    with pytest.raises(SchemaError, match="unknown section"):
        parse_problem_file(base + "\n[extra]\nx = 1\n")
    with pytest.raises(SchemaError, match="integer"):
        parse_problem_file(base.replace("d_min = 2", "d_min = 2.5"))
    with pytest.raises(SchemaError, match="exponent vector"):
        parse_problem_file(base.replace("exponents = [0, 1], coef = 1.0}]\n\n[cost]", "exponents = [1], coef = 1.0}]\n\n[cost]"))
    with pytest.raises(SchemaError, match="mode"):
        parse_problem_file(base.replace('"continuous"', '"hybrid"'))


def test_validation_failure_exit_2(tmp_path, capsys):
    text = DISCRETE.read_text().replace("coef = 0.5}", "coef = 2.0}")
    assert main(["solve", write(tmp_path, text)]) == 2
    assert "discrete-range" in capsys.readouterr().err


def test_oracle_mismatch_exit_2(tmp_path, capsys):
    text = SCALAR.read_text().replace("discount = 1.0", "discount = 1.0").replace(
        'terms = [{exponents = [2, 0], coef = 1.0}, {exponents = [0, 2], coef = 1.0}]',
        'terms = [{exponents = [2, 0], coef = 2.0}, {exponents = [0, 2], coef = 1.0}]',
    )
    assert main(["solve", write(tmp_path, text)]) == 2
    assert "analytic_lq" in capsys.readouterr().err


def test_solver_failure_exit_3(tmp_path):
    text = SCALAR.read_text().replace("max_iter = 100", "max_iter = 2")
    assert main(["solve", write(tmp_path, text), "--no-timing"]) == 3


def test_round_trip_bundled_corpus():
    for path in (SCALAR, DISCRETE):
        pf = load_problem_file(path)
        again = parse_problem_file(dump_problem_file(pf))
        assert again == pf
        assert dump_problem_file(again) == dump_problem_file(pf)


GENERAL = """
[problem]
mode = "continuous"
discount = 0.5
n = 2
m = 1

[[dynamics]]
terms = [{exponents = [0, 1, 0], coef = 1.0}]

[[dynamics]]
terms = [{exponents = [0, 0, 1], coef = 1.0}, {exponents = [1, 0, 0], coef = -0.5}]

[cost]
terms = [{exponents = [2, 0, 0], coef = 1.0}, {exponents = [0, 2, 0], coef = 1.0}, {exponents = [0, 0, 2], coef = 1.0}]

[state_set]
kind = "ball"
radius = 1.0

[input_set]
kind = "general"
lower = [-1.0]
upper = [1.0]

[[input_set.inequalities]]
terms = [{exponents = [0], coef = 1.0}, {exponents = [2], coef = -1.0}]

[measure]
lower = [-0.5, -0.5]
upper = [0.5, 0.5]

[hierarchy]
d_min = 2
d_max = 2
"""


def test_ball_and_general_sets(tmp_path, capsys):
    pf = parse_problem_file(GENERAL)
    assert pf.state_set.kind == "ball" and pf.input_set.kind == "general"
    assert parse_problem_file(dump_problem_file(pf)) == pf
    assert main(["solve", write(tmp_path, GENERAL), "--no-timing"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert rows[0]["status"] == "Optimal" and rows[0]["l1_gap"] == ""


def test_bounds_command(capsys):
    assert main(["bounds", "--eps", "2,1,0.5"]) == 0
    rows = rows_of(capsys.readouterr().out)
    logs = [float(r["log_d_bound"]) for r in rows]
    assert logs[0] < logs[1] < logs[2]
    # hand evaluation at eps = 2: d_p = ceil(2/2 * 3 + 1) = 4
    assert rows[0]["d_p"] == "4"
    assert logs[0] == pytest.approx(6 * 16 * 6**4 * 4 / 2, rel=1e-12)
    assert main(["bounds", "--eps", "1"]) == 0
    assert len(rows_of(capsys.readouterr().out)) == 1


def test_bounds_params_file(tmp_path, capsys):
    path = write(tmp_path, "c1 = 2.0\nfsup = 0.0\nepsilon = [4.0]\n", "params.toml")
    assert main(["bounds", "--params", path, "--c2", "1.0"]) == 0
    row = rows_of(capsys.readouterr().out)[0]
    assert row["d_p"] == str(math.ceil(2 * 2.0 / 4.0 * 2 + 1))
    bad = write(tmp_path, "nope = 1\n", "bad.toml")
    assert main(["bounds", "--params", bad]) == 2


def test_bounds_rejects_nonpositive_eps():
    with pytest.raises(SystemExit):
        main(["bounds", "--eps", "1,-2"])


def test_check_lemma3_command(capsys):
    assert main(["check-lemma3", "--seed", "3", "--samples", "20"]) == 0
    out = capsys.readouterr().out
    assert "violations=0" in out


def test_missing_file_exit_2(capsys):
    assert main(["solve", "/nonexistent/problem.toml"]) == 2
