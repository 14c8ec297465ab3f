"""Tests for the witness search loop."""

import pytest

from graded_workbench.algebra.field import make_rng
from graded_workbench.cli import search
from graded_workbench.cli.search import SearchSpace, run_search, sample_forms
from graded_workbench.cli.selftest import NONIC_FORMS, QUINTIC_FORMS, REFERENCE_CHAR
from graded_workbench.db import WitnessDB
from graded_workbench.errors import InputError
from graded_workbench.utils.json_utils import read_jsonl

QUINTIC_BETTI = [[0, 0, 1], [1, 2, 4], [2, 2, 3], [1, 3, 1], [2, 3, 2], [3, 3, 1]]


def fake_hit(space, seed, char, trials=2):
    return {
        "seed": seed,
        "forms": "s^5, s^4*t+s^3*t^2, s*t^4, t^5",
        "hit": True,
        "status": "AlmostMaximal",
        "e": 2,
        "r": 2,
        "betti": QUINTIC_BETTI,
        "cwl": True,
        "report": {"seed": seed},
    }


def fake_error(space, seed, char, trials=2):
    return {"seed": seed, "forms": "s, t", "hit": False, "error": "InputError: broken"}


@pytest.fixture
def paths(tmp_path):
    return {"sink": tmp_path / "out" / "witnesses.jsonl", "db_path": str(tmp_path / "witnesses.db")}


def test_sample_forms_keeps_the_ends():
    space = SearchSpace(degree=5, terms=2)
    forms = sample_forms(space, make_rng(3))
    pieces = forms.split(", ")
    assert len(pieces) == 4
    assert pieces[0] == "s^5"
    assert pieces[-1] == "t^5"
    assert forms == sample_forms(space, make_rng(3))


def test_sample_forms_from_candidates():
    space = SearchSpace(candidates=["a", "b"])
    assert sample_forms(space, make_rng(0)) in {"a", "b"}


async def test_empty_budget(paths):
    result = await run_search(SearchSpace(), 0, 1, workers=1, **paths)
    assert result.trials_run == 0
    assert result.hits == []
    assert paths["sink"].exists()
    assert read_jsonl(paths["sink"]) == []


async def test_negative_budget(paths):
    with pytest.raises(InputError):
        await run_search(SearchSpace(), -1, 1, workers=1, **paths)


async def test_duplicates_are_counted_once(monkeypatch, paths):
    monkeypatch.setattr(search, "run_trial", fake_hit)
    result = await run_search(SearchSpace(), 3, 1, workers=1, **paths)

    assert result.trials_run == 3
    assert len(result.hits) == 1
    assert result.duplicates == 2
    lines = read_jsonl(paths["sink"])
    assert len(lines) == 1
    assert lines[0]["schema"] == 1
    assert WitnessDB(paths["db_path"]).has_witness(lines[0]["key"])


async def test_trial_errors_are_counted(monkeypatch, paths):
    monkeypatch.setattr(search, "run_trial", fake_error)
    result = await run_search(SearchSpace(), 2, 1, workers=1, **paths)
    assert result.errors == 2
    assert result.hits == []


async def test_unwritable_sink_aborts(monkeypatch, paths):
    def broken(path, record):
        raise OSError("disk full")

    monkeypatch.setattr(search, "run_trial", fake_hit)
    monkeypatch.setattr(search, "append_jsonl", broken)
    result = await run_search(SearchSpace(), 2, 1, workers=1, **paths)

    assert result.aborted
    assert result.error == "disk full"
    assert result.hits == []
    assert not WitnessDB(paths["db_path"]).has_witness(search.witness_key(2, 2, QUINTIC_BETTI))


TWISTED_CUBIC = "s^3, s^2*t, s*t^2, t^3"


def test_run_trial_on_a_fixed_candidate():
    space = SearchSpace(degree=3, candidates=[TWISTED_CUBIC]).model_dump()
    outcome = search.run_trial(space, 4, 32003)
    assert outcome["forms"] == TWISTED_CUBIC
    assert outcome["status"] == "MaximalDegreeACM"
    assert not outcome["hit"]
    assert outcome["report"]["char"] == 32003


def test_reverify_reproduces_a_stored_report():
    outcome = search.run_trial(SearchSpace(degree=3, candidates=[TWISTED_CUBIC]).model_dump(), 4, 32003)
    assert search.reverify({"report": outcome["report"]})
    outcome["report"]["invariants"]["degree"] = 4
    assert not search.reverify({"report": outcome["report"]})


def test_build_space_applies_overrides():
    space = search.build_space({"degree": 7, "coefficients": [1, 2]})
    assert space.degree == 7
    assert space.coefficients == [1, 2]


@pytest.mark.parametrize("overrides", [{"coefficients": []}, {"degree": "5"}, {"terms": 0}, {"colour": 1}, [1]])
def test_build_space_rejects(overrides):
    with pytest.raises(InputError):
        search.build_space(overrides)


async def test_hits_are_passed_on_as_they_are_written(monkeypatch, paths):
    written = []
    monkeypatch.setattr(search, "run_trial", fake_hit)
    result = await run_search(SearchSpace(), 3, 1, workers=1, on_hit=written.append, **paths)
    assert written == result.hits
    assert written == read_jsonl(paths["sink"])


async def test_new_sink_with_a_shared_index(monkeypatch, tmp_path):
    monkeypatch.setattr(search, "run_trial", fake_hit)
    db_path = str(tmp_path / "shared.db")
    first = await run_search(SearchSpace(), 1, 1, sink=tmp_path / "a.jsonl", db_path=db_path, workers=1)
    second = await run_search(SearchSpace(), 1, 2, sink=tmp_path / "b.jsonl", db_path=db_path, workers=1)

    assert len(first.hits) == 1
    assert len(second.hits) == 1
    assert second.duplicates == 0
    assert len(read_jsonl(tmp_path / "b.jsonl")) == 1


async def test_existing_sink_rebuilds_a_lost_index(monkeypatch, tmp_path, paths):
    monkeypatch.setattr(search, "run_trial", fake_hit)
    await run_search(SearchSpace(), 1, 1, workers=1, **paths)
    fresh_db = str(tmp_path / "fresh.db")
    again = await run_search(SearchSpace(), 2, 2, sink=paths["sink"], db_path=fresh_db, workers=1)

    assert again.hits == []
    assert again.duplicates == 2
    assert len(read_jsonl(paths["sink"])) == 1
    assert WitnessDB(fresh_db).has_witness(search.witness_key(2, 2, QUINTIC_BETTI))


async def test_corrupt_sink_is_an_input_error(paths):
    paths["sink"].parent.mkdir(parents=True)
    paths["sink"].write_text('{"schema": 1, "key"\n', encoding="utf-8")
    with pytest.raises(InputError):
        await run_search(SearchSpace(), 1, 1, workers=1, **paths)


@pytest.mark.parametrize(
    "forms,r,cwl",
    [(QUINTIC_FORMS, 2, True), (NONIC_FORMS, 3, False)],
    ids=["quintic", "nonic"],
)
async def test_search_records_known_witnesses(forms, r, cwl, paths):
    result = await run_search(SearchSpace(candidates=[forms]), 1, 0, char=REFERENCE_CHAR, workers=1, **paths)

    assert result.errors == 0
    assert len(result.hits) == 1
    hit = result.hits[0]
    assert hit["forms"] == forms
    assert (hit["e"], hit["r"], hit["cwl"]) == (2, r, cwl)
    assert read_jsonl(paths["sink"]) == [hit]
    assert search.reverify(hit)
