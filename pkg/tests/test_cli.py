import csv
import io
import json

import pytest

from apolar.cli import dumps, emit_table, main
from apolar.ops import gops_det
from apolar.umbral import MomentFunctional, moments_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ops_both_paths(capsys):
    code, out, _ = run(capsys, "ops", "--moments", "hermite", "--n", "3", "--m", "1", "--path", "both")
    assert code == 0
    data = json.loads(out)
    assert data["entry"]["coeffs"] == ["0", "6", "0", "-2"]
    assert data["symbolic"]["coeffs"] == ["0", "36", "0", "-12"]
    assert data["ratio"] == {"expected": 6, "confirmed": True}
    assert data["orthogonality_report"]["orthogonal"]
    assert data["leading"] == "12"


def test_ops_degenerate_is_domain_error(capsys):
    code, out, err = run(capsys, "ops", "--n", "3", "--m", "2")
    assert code == 1
    assert "rows 1 and 3" in err and out == ""


def test_ops_with_aux(capsys):
    code, out, _ = run(capsys, "ops", "--n", "3", "--m", "2", "--aux", "laguerre", "--path", "both")
    assert code == 0
    assert json.loads(out)["ratio"]["confirmed"]


def test_ops_csv_table(capsys):
    code, out, _ = run(capsys, "ops", "--max-n", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "m", "c0", "c1", "c2", "c3"]
    assert rows[1] == ["1", "1", "0/1", "-1/1", "0/1", "0/1"]
    assert rows[2] == ["2", "1", "-1/1", "0/1", "1/1", "0/1"]


def test_output_is_byte_stable(capsys):
    first = run(capsys, "quad", "--n", "4", "--check-exactness")[1]
    second = run(capsys, "quad", "--n", "4", "--check-exactness")[1]
    assert first == second


def test_quad_exactness(capsys):
    code, out, _ = run(capsys, "quad", "--moments", "hermite", "--n", "3", "--check-exactness")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert all(data["residuals"][str(k)] <= 1e-9 for k in range(6))
    assert len(data["nodes"]) == len(data["weights"]) == 3


def test_quad_floats_have_17_digits(capsys):
    out = run(capsys, "quad", "--n", "3")[1]
    assert "0.16666666666666669" in out


def test_quad_discriminant(capsys):
    code, out, _ = run(capsys, "quad", "--n", "3", "--discriminant", "2,1")
    assert json.loads(out)["discriminant"]["exact"] == "2"


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("APOLAR_TOL", "not-a-number")
    code, _, err = run(capsys, "quad", "--n", "2")
    assert code == 2 and "APOLAR_TOL" in err


def test_symfun_verify(capsys):
    code, out, _ = run(capsys, "symfun", "--alpha", "2,1,0", "--k", "1", "--N", "3", "--verify")
    data = json.loads(out)
    assert code == 0 and data["holds"] and data["residual"] == []


def test_symfun_mismatched_N(capsys):
    assert run(capsys, "symfun", "--alpha", "2,1", "--N", "3", "--verify")[0] == 2


def test_mops_full(capsys):
    code, out, _ = run(capsys, "mops", "--d", "1", "--moments", "hermite", "--n", "1,1", "--full")
    data = json.loads(out)
    assert code == 0
    assert data["coeffs"] == {"0,0": "0", "0,1": "0", "1,0": "0", "1,1": "-1"}
    assert data["orthogonal"]


def test_mops_generalized_with_aux(capsys):
    code, out, _ = run(capsys, "mops", "--n", "1,1", "--m", "1,1", "--aux", "laguerre,laguerre:chebyshev1")
    assert code == 0 and json.loads(out)["orthogonal"]


def test_mops_dependent_aux_rows(capsys):
    # chebyshev1 x chebyshev1 repeats the class-1 row up to scale
    code, _, err = run(capsys, "mops", "--n", "1,1", "--m", "1,1", "--aux", "laguerre,chebyshev1")
    assert code == 1 and "vanishes" in err


def test_mops_csv_keys(capsys):
    out = run(capsys, "mops", "--n", "1,1", "--full", "--format", "csv")[1]
    assert out.splitlines()[0] == 'n,m,"0,0","0,1","1,0","1,1"'


def test_covariant_J(capsys):
    code, out, _ = run(capsys, "covariant", "--moments", "hermite", "--n", "3", "--m", "2")
    data = json.loads(out)
    assert code == 0 and data["apolar"] and data["weight"] == 2
    assert data["text"] == "2*x0^2 - 2*y0^2"


def test_covariant_domain_error(capsys):
    assert run(capsys, "covariant", "--form", "1,2,3,4", "--m", "1")[0] == 1


def test_covariant_dim(capsys):
    out = run(capsys, "covariant", "--form", "1,0,1,0,3", "--op", "dim", "--m", "3")[1]
    assert json.loads(out)["apolar_dim"] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    assert run(capsys, "quad", "--n", "0")[0] == 2
    assert run(capsys, "ops", "--moments", "/nonexistent.json")[0] == 2
    assert run(capsys, "covariant", "--form", "1,0.5")[0] == 2


def test_moment_file_round_trip(capsys, tmp_path):
    path = tmp_path / "moments.json"
    path.write_text(json.dumps(moments_to_json(MomentFunctional.from_builtin("laguerre"), 12)), encoding="utf-8")
    from_file = json.loads(run(capsys, "ops", "--moments", str(path), "--n", "4")[1])
    builtin = json.loads(run(capsys, "ops", "--moments", "laguerre", "--n", "4")[1])
    assert from_file["entry"] == builtin["entry"]


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    assert run(capsys, "ops", "--n", "2", "--output", str(target))[0] == 0
    assert json.loads(target.read_text(encoding="utf-8"))["entry"]["coeffs"] == ["-1", "0", "1"]


def test_emit_table_empty():
    assert emit_table([], "csv") == "n,m\n"
    assert emit_table([], "json") == "[]\n"


def test_emit_table_json_is_poly_schema():
    M = MomentFunctional.from_builtin("hermite")
    data = json.loads(emit_table([gops_det(M, 2, 1)], "json"))
    assert data[0]["poly"] == [{"exp": [], "coef": "-1"}, {"exp": [[0, 0, "X", 2]], "coef": "1"}]


def test_dumps_formats():
    assert dumps({"a": [1.0, 0.1]}) == '{\n  "a": [1, 0.10000000000000001]\n}'


def test_selfcheck_subset(capsys):
    code, out, err = run(capsys, "selfcheck", "--only", "5,12")
    assert code == 0
    assert json.loads(out)["passed"]
    assert "[PASS]  5." in err
