import pytest

from graded_workbench.db import WitnessDB, witness_key

QUINTIC_BETTI = [[0, 0, 1], [1, 2, 4], [2, 2, 3], [1, 3, 1], [2, 3, 2], [3, 3, 1]]
NONIC_BETTI = [[0, 0, 1], [1, 3, 5], [2, 3, 3], [2, 4, 2], [3, 4, 1]]


@pytest.fixture
def db(tmp_path):
    return WitnessDB(str(tmp_path / "witnesses.db"))


def test_witness_key_ignores_entry_order():
    assert witness_key(2, 2, QUINTIC_BETTI) == witness_key(2, 2, list(reversed(QUINTIC_BETTI)))
    assert witness_key(2, 2, QUINTIC_BETTI) != witness_key(2, 3, QUINTIC_BETTI)


def test_add_witness(db):
    key = db.add_witness(2, 2, QUINTIC_BETTI, True, ["s^5, s^4*t+s^3*t^2, s*t^4, t^5"], 7)
    assert key == witness_key(2, 2, QUINTIC_BETTI)
    assert db.has_witness(key)

    row = db.get_witness(key)
    assert row["e"] == 2
    assert row["r"] == 2
    assert row["cwl"] == 1
    assert row["seed"] == 7


def test_duplicate_witness_is_rejected(db):
    assert db.add_witness(2, 2, QUINTIC_BETTI, True, ["a"], 1) is not None
    assert db.add_witness(2, 2, list(reversed(QUINTIC_BETTI)), True, ["b"], 2) is None
    assert len(db.get_witnesses()) == 1


def test_get_witness_missing(db):
    assert db.get_witness("nope") is None
    assert not db.has_witness("nope")


def test_get_witnesses_filters(db):
    db.add_witness(2, 2, QUINTIC_BETTI, True, ["a"], 1)
    db.add_witness(2, 3, NONIC_BETTI, False, ["b"], 2)

    assert len(db.get_witnesses()) == 2
    assert [w["r"] for w in db.get_witnesses(r=3)] == [3]
    assert len(db.get_witnesses(e=2)) == 2
    assert db.get_witnesses(e=3) == []
    assert len(db.get_witnesses(limit=1)) == 1


def test_count_by_cwl(db):
    assert db.count_by_cwl() == {"componentwise_linear": 0, "not_componentwise_linear": 0}
    db.add_witness(2, 2, QUINTIC_BETTI, True, ["a"], 1)
    db.add_witness(2, 3, NONIC_BETTI, False, ["b"], 2)
    assert db.count_by_cwl() == {"componentwise_linear": 1, "not_componentwise_linear": 1}


def test_reopen_keeps_rows(tmp_path):
    path = str(tmp_path / "witnesses.db")
    key = WitnessDB(path).add_witness(2, 2, QUINTIC_BETTI, True, ["a"], 1)
    assert WitnessDB(path).has_witness(key)
