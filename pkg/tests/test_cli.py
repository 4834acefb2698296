import json
from pathlib import Path

import pytest

from hypvol.cli import EXIT_NOT_LORENTZIAN, EXIT_OK, EXIT_STAGE_ERROR, main
from hypvol.polytopes import IDEAL_TRIANGLE, POLYTOPE_5D

VOL_5D = "0.0241330687945822699990"


@pytest.fixture
def diagram_file(tmp_path: Path):
    def write(text, name="poly.diagram"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return write


def test_analyze_text_output(diagram_file, capsys):
    path = diagram_file(POLYTOPE_5D)
    code = main(["analyze", path, "--assume-volume", VOL_5D, "--assume-err", "1e-19"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "properly quasi-arithmetic" in out
    assert "delta = 13" in out
    assert "1/23040" in out
    assert "2^9 * 3^2 * 5" in out


def test_analyze_json_output(diagram_file, capsys):
    path = diagram_file(POLYTOPE_5D)
    code = main(["analyze", path, "--json",
                 "--assume-volume", VOL_5D, "--assume-err", "1e-19"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["arithmeticity"]["delta"] == 13
    assert payload["recognition"]["q_factorization"] == {"2": 9, "3": 2, "5": 1}


def test_analyze_integrates_when_no_assumed_volume(diagram_file, capsys):
    path = diagram_file(IDEAL_TRIANGLE)
    code = main(["analyze", path, "--target-err", "1e-3", "--seed", "5", "--json"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["volume"]["source"] == "integrated"
    assert abs(payload["volume"]["value"] - 3.14159265) < 1e-2


def test_not_lorentzian_exit_code(diagram_file, capsys):
    path = diagram_file("n 2\nfacets 3\n")  # all right angles: positive definite
    code = main(["analyze", path])
    assert code == EXIT_NOT_LORENTZIAN
    assert "not Lorentzian" in capsys.readouterr().err


def test_stage_error_exit_code(diagram_file, capsys):
    path = diagram_file("n 2\nfacets 3\nedge 0 1 7\n")
    code = main(["analyze", path])
    assert code == EXIT_STAGE_ERROR
    assert "UnsupportedLabel" in capsys.readouterr().err


def test_missing_file_is_stage_error(capsys):
    code = main(["analyze", "/nonexistent/thing.diagram"])
    assert code == EXIT_STAGE_ERROR


def test_assume_err_requires_assume_volume(diagram_file, capsys):
    path = diagram_file(POLYTOPE_5D)
    code = main(["analyze", path, "--assume-err", "1e-9"])
    assert code == EXIT_STAGE_ERROR


def test_stdin_input(diagram_file, capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(POLYTOPE_5D))
    code = main(["analyze", "-", "--assume-volume", VOL_5D, "--assume-err", "1e-19"])
    assert code == EXIT_OK
    assert "suggested identity" in capsys.readouterr().out
