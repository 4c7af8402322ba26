import json

import pytest

from extlag.cli import main, parse_levels
from extlag.harness import COLUMNS, ConvergenceTable


def test_parse_levels():
    assert parse_levels("4..64", "square") == [4, 8, 16, 32, 64]
    assert parse_levels("2..6", "cube") == [2, 3, 4, 5, 6]
    assert parse_levels("2..4", "thick-lshape") == [2, 3, 4]
    assert parse_levels("3,5", "lshape2d") == [3, 5]
    assert parse_levels(None, "cube") is None


@pytest.mark.parametrize("bad", ["0..4", "5..2", "x", "1,-2"])
def test_bad_levels_are_usage_errors(bad, capsys):
    with pytest.raises(SystemExit) as info:
        main(["eigs", "--levels", bad])
    assert info.value.code == 2


def test_eigs_csv(capsys):
    assert main(["eigs", "--domain", "square", "--levels", "4", "--count", "3"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 4
    t = ConvergenceTable.from_csv(out)
    assert t.column("value")[0] == pytest.approx(10.3598, rel=1e-4)


def test_study_json_to_file_is_deterministic(tmp_path):
    args = ["study", "--domain", "lshape2d", "--levels", "2..4", "--count", "3", "--format", "json",
            "--deterministic"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    data = json.loads(a.read_text())
    assert data["metadata"]["domain"] == "lshape2d" and "seconds" not in data["metadata"]
    assert len(data["rows"]) == 6


def test_dense_backend_and_filter_tol(capsys):
    assert main(["eigs", "--domain", "cube", "--levels", "1", "--count", "2", "--backend", "dense",
                 "--filter-tol", "1e-5"]) == 0


def test_source_and_recover(capsys):
    assert main(["source", "--order", "1", "--levels", "2"]) == 0
    t = ConvergenceTable.from_csv(capsys.readouterr().out)
    assert t.indices() == [1, 2, 3]
    assert main(["recover", "--domain", "square", "--levels", "4,8", "--count", "2"]) == 0
    t = ConvergenceTable.from_csv(capsys.readouterr().out)
    assert all(r.flag == "lower" for r in t.rows)


def test_tetra_warns(capsys):
    assert main(["eigs", "--domain", "tetra", "--levels", "2", "--count", "2"]) == 0
    assert "warning" in capsys.readouterr().err


def test_partial_results_exit_nonzero(capsys):
    # the coarse square has fewer physical modes than requested
    with pytest.warns(RuntimeWarning, match="only 5 of 8"):
        code = main(["eigs", "--domain", "square", "--levels", "2", "--count", "8", "--backend", "dense"])
    assert code == 3
    assert "fewer" in capsys.readouterr().err


def test_solver_failure_exit_code(capsys):
    assert main(["eigs", "--domain", "square", "--levels", "4", "--shift", "-1"]) == 2
    assert "extlag" in capsys.readouterr().err
