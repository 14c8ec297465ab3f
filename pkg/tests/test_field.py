"""Tests for prime field arithmetic, seeded randomness and F_p linear algebra."""

import numpy as np
import pytest

from graded_workbench.algebra.field import PrimeField, child_seeds, make_rng
from graded_workbench.algebra.linalg import (
    inverse_mod_p,
    left_nullspace_mod_p,
    matmul_mod_p,
    nullspace_mod_p,
    random_invertible_matrix,
    rank_mod_p,
    row_basis_mod_p,
)
from graded_workbench.errors import InputError, SingularMatrixError, ZeroDivisionInFieldError


def test_arithmetic_mod_7():
    F = PrimeField(7)
    assert F.add(5, 4) == 2
    assert F.sub(2, 5) == 4
    assert F.mul(3, 5) == 1
    assert F.neg(3) == 4
    assert F.inv(3) == 5
    assert F.div(1, 3) == 5
    assert F.arithmetic(6, 3, "/") == 2


def test_unknown_operation():
    with pytest.raises(ValueError):
        PrimeField(7).arithmetic(1, 2, "%")


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionInFieldError):
        PrimeField(7).inv(14)


def test_zero_division_is_also_a_python_zero_division():
    with pytest.raises(ZeroDivisionError):
        PrimeField(11).div(1, 0)


@pytest.mark.parametrize("p", [0, 1, 4, 32001])
def test_non_prime_characteristic(p):
    with pytest.raises(InputError):
        PrimeField(p)


def test_lift_is_symmetric():
    F = PrimeField(7)
    assert F.lift(6) == -1
    assert F.lift(3) == 3
    assert F.lift(4) == -3
    assert PrimeField(32003).lift(32002) == -1


def test_check_size():
    PrimeField(7).check_size(4)
    with pytest.raises(InputError):
        PrimeField(5).check_size(4)


def test_rng_is_reproducible():
    a = make_rng(42).integers(0, 1000, size=5)
    b = make_rng(42).integers(0, 1000, size=5)
    assert a.tolist() == b.tolist()


def test_child_seeds_are_stable_and_distinct():
    seeds = child_seeds(7, 4)
    assert seeds == child_seeds(7, 4)
    assert len(set(seeds)) == 4
    assert child_seeds(8, 4) != seeds


def test_rank_and_row_basis():
    A = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank_mod_p(A, 7) == 2
    basis = row_basis_mod_p(A, 7)
    assert basis.shape == (2, 3)
    assert basis[0].tolist() == [1, 0, 1]
    assert basis[1].tolist() == [0, 1, 1]


def test_rank_depends_on_characteristic():
    A = [[1, 1], [1, 3]]
    assert rank_mod_p(A, 7) == 2
    assert rank_mod_p(A, 2) == 1


def test_nullspace():
    p = 11
    A = np.array([[1, 2, 3], [0, 1, 4]])
    N = nullspace_mod_p(A, p)
    assert N.shape == (3, 1)
    assert not matmul_mod_p(A, N, p).any()
    L = left_nullspace_mod_p(A.T, p)
    assert not matmul_mod_p(L, A.T, p).any()


def test_inverse():
    p = 32003
    A = np.array([[2, 1], [7, 4]])
    Ainv = inverse_mod_p(A, p)
    assert matmul_mod_p(A, Ainv, p).tolist() == [[1, 0], [0, 1]]


def test_singular_inverse():
    with pytest.raises(SingularMatrixError):
        inverse_mod_p([[1, 2], [2, 4]], 7)


def test_random_invertible_matrix():
    M = random_invertible_matrix(make_rng(0), 4, 32003)
    assert rank_mod_p(M, 32003) == 4


@pytest.mark.parametrize("p", [7, 101, 32003])
def test_field_axioms_on_sampled_triples(p):
    F = PrimeField(p)
    rng = make_rng(p)
    for _ in range(200):
        a, b, c = (F.random_element(rng) for _ in range(3))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, 0) == a
        assert F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(a, b) == F.add(a, F.neg(b))
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.mul(F.div(b, a), a) == b
