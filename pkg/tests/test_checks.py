"""End-to-end checks on the two almost maximal curves s^5, ... and s^9, ...

Both analyses are session fixtures, so each curve is analyzed once.
"""

from graded_workbench.algebra.monomial_ideal import MonomialIdeal, power_of_variables
from graded_workbench.algebra.resolution import BettiTable


def _statuses(verification):
    return {c.name: c.status for c in verification.checks}


def test_quintic_invariants(quintic_analysis):
    a = quintic_analysis
    assert a.dims.degree == 5
    assert a.e == 2
    assert a.r == 2
    assert a.reduction.artinian_hilbert == (1, 2, 3)
    assert a.invariants.depth == 1
    assert a.invariants.reg == 3
    assert not a.invariants.is_cm
    assert str(a.hilbert_poly) == "5*T + 1"
    assert a.betti == BettiTable.from_rows({0: [1], 2: [0, 4, 3], 3: [0, 1, 2, 1]})
    assert a.oracle_betti == a.betti


def test_quintic_gin(quintic_analysis):
    ring = quintic_analysis.ideal.ring
    expected = power_of_variables(ring, 2, 3) + MonomialIdeal(ring, [(2, 0, 2, 0)])
    assert quintic_analysis.gin.ideal == expected


def test_quintic_classification(quintic_verification):
    cls = quintic_verification.classification
    assert cls.status == "AlmostMaximal"
    assert cls.case == "b"
    assert cls.deg_uv == 4
    assert cls.discrepancies == []
    assert quintic_verification.cwl.overall
    assert quintic_verification.cwl.linearity_case == "a-ii"
    assert quintic_verification.crosscheck.verdict


def test_quintic_checks(quintic_verification):
    statuses = _statuses(quintic_verification)
    assert quintic_verification.failed == []
    assert statuses["componentwise_table"] == "pass"
    assert statuses["component_linearity"] == "pass"
    assert statuses["linear_acm_embedding"] == "pass"
    assert statuses["chi_closed_form"] == "pass"
    # reg = 3 is odd, so the printed 1 at reg + 1 is off by a sign
    assert statuses["chi_over_noether"] == "flagged"
    assert statuses["hilbert_polynomial"] == "flagged"


def test_quintic_genus_flag(quintic_verification):
    result = next(c for c in quintic_verification.checks if c.name == "hilbert_polynomial")
    assert result.details["genus"]["direct"] == 0
    assert result.details["genus"]["closed_form"] == 1


def test_nonic_invariants(nonic_analysis):
    a = nonic_analysis
    assert a.dims.degree == 9
    assert a.e == 2
    assert a.r == 3
    assert a.invariants.depth == 1
    assert a.invariants.reg == 4
    assert str(a.hilbert_poly) == "9*T - 6"
    assert a.betti == BettiTable.from_rows({0: [1], 3: [0, 5, 3], 4: [0, 0, 2, 1]})
    assert a.oracle_betti == a.betti


def test_nonic_classification(nonic_verification):
    cls = nonic_verification.classification
    assert cls.status == "AlmostMaximal"
    assert cls.case == "b"
    assert cls.predicted.constraints is not None
    assert cls.discrepancies == []
    assert not nonic_verification.cwl.overall
    assert nonic_verification.cwl.linearity_case == "b"
    assert nonic_verification.crosscheck.verdict is False


def test_nonic_checks(nonic_verification):
    statuses = _statuses(nonic_verification)
    assert nonic_verification.failed == []
    assert statuses["componentwise_table"] == "skipped"
    assert statuses["component_linearity"] == "pass"
    assert statuses["linear_acm_embedding"] == "skipped"
    assert statuses["chi_over_noether"] == "pass"
    # r = 3 is odd, so (-1)^(reg - r) and (-1)^reg disagree
    assert statuses["chi_closed_form"] == "flagged"
    assert statuses["hilbert_polynomial"] == "flagged"
    assert statuses["regularity_bounds"] == "pass"


def test_nonic_genus_flag(nonic_verification):
    result = next(c for c in nonic_verification.checks if c.name == "hilbert_polynomial")
    assert (result.details["genus"]["direct"], result.details["genus"]["closed_form"]) == (7, 8)
