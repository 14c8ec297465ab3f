"""Tests for the analysis pipeline and its stage tagging."""

import pytest

from graded_workbench.algebra.polynomial import Ideal
from graded_workbench.errors import InputError, StageError
from graded_workbench.theory.analysis import analyze_ideal, stage
from graded_workbench.theory.checks import verify


def test_stage_wraps_workbench_errors():
    timings = {}
    with pytest.raises(StageError) as exc:
        with stage("groebner", timings):
            raise InputError("bad input")
    assert exc.value.stage == "groebner"
    assert exc.value.exit_code == 2
    assert str(exc.value) == "[groebner] bad input"
    assert "groebner" in timings


def test_stage_leaves_other_errors_alone():
    with pytest.raises(KeyError):
        with stage("hilbert", {}):
            raise KeyError("x")


def test_unit_ideal_fails_in_hilbert_stage(ring4):
    with pytest.raises(StageError) as exc:
        analyze_ideal(Ideal(ring4, [ring4.one()]))
    assert exc.value.stage == "hilbert"
    assert isinstance(exc.value.cause, InputError)


def test_twisted_cubic_analysis(twisted_cubic):
    a = analyze_ideal(twisted_cubic, 0, gin=False)
    assert a.r == 1
    assert a.e == 2
    assert a.gin is None
    assert a.oracle_betti is None
    assert a.invariants.is_cm
    assert set(a.timings) == {"groebner", "hilbert", "resolution", "reduction"}


def test_twisted_cubic_is_maximal(twisted_cubic):
    verification = verify(analyze_ideal(twisted_cubic, 0, oracle=True))
    cls = verification.classification
    assert cls.status == "MaximalDegreeACM"
    assert cls.minimal_degree
    assert cls.discrepancies == []
    assert verification.failed == []
    statuses = {c.name: c.status for c in verification.checks}
    assert statuses["koszul_oracle"] == "pass"
    assert statuses["betti_shape"] == "skipped"


def test_same_seed_same_analysis(twisted_cubic):
    first = analyze_ideal(twisted_cubic, 5)
    second = analyze_ideal(twisted_cubic, 5)
    assert first.reduction.candidates == second.reduction.candidates
    assert first.gin.ideal == second.gin.ideal
    assert (first.gin.matrix == second.gin.matrix).all()


@pytest.mark.parametrize("seed", [1, 9])
def test_betti_table_does_not_depend_on_the_seed(seed, quintic_ideal, quintic_analysis):
    other = analyze_ideal(quintic_ideal, seed, gin=False)
    assert other.betti == quintic_analysis.betti
    assert other.reduction.r == quintic_analysis.reduction.r
