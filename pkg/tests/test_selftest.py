"""Tests for the self-test runner, on its cheap checks."""

import json

from graded_workbench.algebra.field import make_rng
from graded_workbench.cli.selftest import (
    GOLDENS,
    SELFTEST_CHECKS,
    merged_goldens,
    random_monomial_ideal,
    run_selftest,
)

BROKEN_NONIC = {"nonic": {"betti": {0: [1], 3: [0, 5, 2], 4: [0, 0, 2, 1]}}}


def test_check_names_are_stable():
    assert len(SELFTEST_CHECKS) == 15
    assert "golden_rendering" in SELFTEST_CHECKS


def test_merged_goldens_leaves_defaults_alone():
    merged = merged_goldens(BROKEN_NONIC)
    assert merged["nonic"]["betti"][3] == [0, 5, 2]
    assert merged["nonic"]["degree"] == 9
    assert GOLDENS["nonic"]["betti"][3] == [0, 5, 3]


def test_golden_rendering_passes():
    report = run_selftest(seed=0, only=["golden_rendering"])
    assert [(c.name, c.status) for c in report.checks] == [("golden_rendering", "pass")]
    assert report.failed == []


def test_corrupted_golden_fails():
    report = run_selftest(seed=0, goldens=BROKEN_NONIC, only=["golden_rendering"])
    assert report.checks[0].status == "fail"
    assert len(report.failed) == 1


def test_corrupted_golden_is_flagged_off_the_reference_prime():
    report = run_selftest(seed=0, char=101, goldens=BROKEN_NONIC, only=["golden_rendering"])
    assert report.checks[0].status == "flagged"
    assert report.checks[0].message.startswith("characteristic-sensitive")
    assert report.failed == []


def test_report_json():
    report = run_selftest(seed=0, only=["golden_rendering"])
    data = json.loads(report.to_json())
    assert data["schema"] == 1
    assert data["checks"] == [{"name": "golden_rendering", "status": "pass", "message": ""}]
    assert report.to_json() == run_selftest(seed=0, only=["golden_rendering"]).to_json()
    assert report.render_text().endswith("1 passed, 0 flagged, 0 failed\n")


def test_random_monomial_ideal_is_seeded():
    a = random_monomial_ideal(make_rng(5), 4, 4, 3, 101)
    b = random_monomial_ideal(make_rng(5), 4, 4, 3, 101)
    assert a.ring.nvars == b.ring.nvars
    assert a.generators == b.generators
    assert 2 <= a.ring.nvars <= 4
    assert 1 <= len(a) <= 4


def test_random_monomial_golden_bounds():
    spec = GOLDENS["random_monomial"]
    assert (spec["max_vars"], spec["max_gens"], spec["max_degree"]) == (4, 5, 4)
    rng = make_rng(0)
    sizes, degrees = set(), set()
    for _ in range(200):
        I = random_monomial_ideal(rng, spec["max_vars"], spec["max_gens"], spec["max_degree"], 101)
        assert 2 <= I.ring.nvars <= 4
        assert 1 <= len(I) <= 5
        assert all(1 <= g.degree() <= 4 for g in I)
        sizes.add(len(I))
        degrees.update(g.degree() for g in I)
    assert 5 in sizes
    assert 4 in degrees
