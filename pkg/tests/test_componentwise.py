"""Tests for degree components, linear resolutions, componentwise linearity and model ideals."""

import pytest

from graded_workbench.algebra.field import make_rng
from graded_workbench.algebra.polynomial import Ideal, Ring
from graded_workbench.algebra.resolution import BettiTable
from graded_workbench.errors import InputError, PreconditionError
from graded_workbench.theory.componentwise import (
    check_truncation_structure,
    componentwise_linear,
    cwl_via_gin_crosscheck,
    degree_component_ideal,
    generator_degrees,
    graded_piece_dim,
    has_linear_resolution,
    model_ideal,
    model_instance,
    model_sweep,
    multiples_dim,
    verify_lemma41,
)


@pytest.fixture
def ring2():
    return Ring.standard(2)


def test_degree_component(ring2):
    I = Ideal.parse(ring2, ["x0^2", "x1^3"])
    comp = degree_component_ideal(I, 3)
    assert len(comp) == 3
    assert graded_piece_dim(I, 3) == 3
    assert graded_piece_dim(I, 2) == 1


def test_degree_component_starts_at_one(ring2):
    with pytest.raises(InputError):
        degree_component_ideal(Ideal.parse(ring2, ["x0"]), 0)


def test_multiples_dim(ring2):
    I = Ideal.parse(ring2, ["x0"])
    assert multiples_dim(I, 1, 1) == 2
    assert multiples_dim(I, 1, 0) == graded_piece_dim(I, 1) == 1


def test_generator_degrees():
    bt = BettiTable({(0, 0): 1, (1, 1): 2, (1, 2): 1, (2, 2): 2})
    assert generator_degrees(bt) == [2, 2, 3]


def test_linear_resolution(twisted_cubic, ring2):
    result = has_linear_resolution(twisted_cubic)
    assert result.linear
    assert result.degree == 2
    assert result.reg == 2
    assert not has_linear_resolution(Ideal.parse(ring2, ["x0^2", "x1^2"])).linear
    assert not has_linear_resolution(Ideal(ring2, [])).linear


def test_complete_intersection_is_not_componentwise_linear(ring2):
    report = componentwise_linear(Ideal.parse(ring2, ["x0^2", "x1^2"]))
    assert report.degrees_checked == [2, 3]
    assert not report.overall
    assert not report.per_degree[0].linear


def test_stable_ideal_is_componentwise_linear(ring2):
    report = componentwise_linear(Ideal.parse(ring2, ["x0^2", "x0*x1", "x1^3"]))
    assert report.overall
    assert [c.d for c in report.per_degree] == [2, 3]
    assert [c.num_gens for c in report.per_degree] == [2, 4]


def test_audit_checks_one_more_degree(ring2):
    report = componentwise_linear(Ideal.parse(ring2, ["x0^2", "x0*x1", "x1^3"]), audit=True)
    assert report.degrees_checked == [2, 3, 4]
    assert report.overall


def test_lemma41(ring2):
    ring = Ring.standard(3)
    assert verify_lemma41(Ideal.parse(ring, ["x0", "x1"]))
    with pytest.raises(PreconditionError):
        verify_lemma41(Ideal.parse(ring2, ["x0^2", "x1^2"]))


def test_gin_crosscheck_agrees_with_direct_verdict(ring2):
    ci = Ideal.parse(ring2, ["x0^2", "x1^2"])
    crosscheck = cwl_via_gin_crosscheck(ci, make_rng(0))
    assert crosscheck.stable
    assert not crosscheck.same_betti
    assert crosscheck.verdict is False
    assert crosscheck.characteristic == ring2.p

    stable = Ideal.parse(ring2, ["x0^2", "x0*x1", "x1^3"])
    assert cwl_via_gin_crosscheck(stable, make_rng(0)).verdict is True


def test_truncation_structure(quintic_ideal, quintic_analysis):
    report = check_truncation_structure(quintic_ideal, 2, quintic_analysis.betti)
    assert report.applicable
    assert report.reg_ideal == 4
    assert report.per_step == {1: True}
    assert report.holds


def test_model_ideal():
    I = model_ideal(2, 1, 1, (1, 0, 0, 0), (0, 0, 1, 0))
    assert [g.to_string() for g in I.generators] == ["x0^2", "x0*x1", "x1^2", "x0*x2"]


@pytest.mark.parametrize(
    "u,v",
    [
        ((2, 0, 0, 0), (0, 0, 1, 0)),
        ((1, 0, 0, 0), (0, 1, 1, 0)),
        ((1, 0, 0, 0), (0, 0, 0, 0)),
        ((1, 0, 0), (0, 0, 1)),
    ],
)
def test_model_ideal_rejects_bad_monomials(u, v):
    with pytest.raises(InputError):
        model_ideal(2, 1, 1, u, v)


def test_model_instance():
    inst = model_instance(2, 1, 1, 1)
    assert inst.u == (0, 1, 0, 0)
    assert inst.v == (0, 0, 0, 1)
    assert inst.num_vars == 4
    assert inst.label() == "model(e=2,n=1,r=1,deg v=1)"
    inst = model_instance(3, 2, 3, 2)
    assert inst.u == (2, 0, 1, 0, 0, 0)
    assert inst.v == (0, 0, 0, 1, 0, 1)
    assert inst.deg_v == 2


def test_model_sweep_size():
    assert len(model_sweep(extended=False)) == 24
    sweep = model_sweep()
    assert len(sweep) == 26
    assert {inst.deg_v for inst in sweep} == {1, 2, 3}


def test_model_instance_is_componentwise_linear():
    I = model_instance(2, 1, 1, 1).ideal()
    assert componentwise_linear(I).overall
