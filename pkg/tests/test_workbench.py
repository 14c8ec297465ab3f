"""Tests for the command line entry point."""

import json

import pytest

from graded_workbench.cli import search
from graded_workbench.cli.workbench import main

MODEL_FILE = "char 32003\nvars x0 x1 x2 x3\nx0^2\nx0*x1\nx1^2\nx0*x2\n"


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "model.ideal"
    path.write_text(MODEL_FILE, encoding="utf-8")
    return str(path)


def test_analyze_json(model_file, capsys):
    assert main(["analyze", model_file, "--json", "--no-gin", "--seed", "0"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == 1
    assert data["classification"]["status"] == "AlmostMaximal"
    assert data["input"]["kind"] == "file"


def test_analyze_text(model_file, capsys):
    assert main(["analyze", model_file, "--no-gin"]) == 0
    assert "Betti table of S/I:" in capsys.readouterr().out


def test_analyze_needs_exactly_one_input(model_file, capsys):
    assert main(["analyze"]) == 2
    assert main(["analyze", model_file, "--curve", "s, t, s, t"]) == 2
    assert "error:" in capsys.readouterr().err


def test_analyze_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.ideal"
    path.write_text("char 101\nvars x y\nx^2 + y\n", encoding="utf-8")
    assert main(["analyze", str(path)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_analyze_missing_file(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "nope.ideal")]) == 2
    assert "error:" in capsys.readouterr().err


def test_analyze_file_that_is_not_utf8(tmp_path, capsys):
    path = tmp_path / "latin.ideal"
    path.write_bytes(b"char 101\nvars x y\nx^2 \xff\n")
    assert main(["analyze", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_analyze_curve_with_three_forms(capsys):
    assert main(["analyze", "--curve", "s^3, s^2*t, t^3"]) == 2
    assert "four forms" in capsys.readouterr().err


def test_selftest_subset(capsys):
    assert main(["selftest", "--only", "golden_rendering", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["checks"][0]["status"] == "pass"


def fake_trial(space, seed, char, trials=2):
    return {
        "seed": seed,
        "forms": "s^5, s^4*t+s^3*t^2, s*t^4, t^5",
        "hit": True,
        "e": 2,
        "r": 2,
        "betti": [[0, 0, 1], [1, 2, 4]],
        "cwl": True,
        "report": {},
    }


def search_argv(tmp_path, *extra):
    return ["search", "--workers", "1", "--sink", str(tmp_path / "w.jsonl"), "--db", str(tmp_path / "w.db"), *extra]


def test_search_summary(monkeypatch, tmp_path, capsys):
    monkeypatch.setattr(search, "run_trial", fake_trial)
    assert main(search_argv(tmp_path, "--budget", "2", "--json")) == 0
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert len(lines) == 2
    assert lines[0]["hit"]["e"] == 2
    summary = lines[-1]["summary"]
    assert summary["trials_run"] == 2
    assert summary["hits"] == [lines[0]["hit"]]
    assert summary["duplicates"] == 1


def test_search_prints_each_hit_when_it_is_written(monkeypatch, tmp_path, capsys):
    seen_by_trial = []

    def counting_trial(space, seed, char, trials=2):
        seen_by_trial.append(capsys.readouterr().out)
        return {**fake_trial(space, seed, char), "r": 1 + len(seen_by_trial)}

    monkeypatch.setattr(search, "run_trial", counting_trial)
    assert main(search_argv(tmp_path, "--budget", "2")) == 0
    assert seen_by_trial[0] == ""
    assert "e=2 r=2 cwl=True" in seen_by_trial[1]
    out = capsys.readouterr().out.splitlines()
    assert "e=2 r=3 cwl=True" in out[0]
    assert out[-1].startswith("2 trials, 2 new witnesses")


def test_search_bad_space(tmp_path, capsys):
    assert main(search_argv(tmp_path, "--space", "{not json")) == 2
    assert "--space" in capsys.readouterr().err


@pytest.mark.parametrize("space", ['{"coefficients": []}', '{"degree": "5"}', "[1]", '{"colour": 1}'])
def test_search_rejects_invalid_spaces(space, tmp_path, capsys):
    assert main(search_argv(tmp_path, "--space", space, "--budget", "1")) == 2
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "w.jsonl").exists()
