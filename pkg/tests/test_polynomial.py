"""Tests for polynomials, monomial orders, parsing and ideals."""

import pytest

from graded_workbench.algebra.field import make_rng
from graded_workbench.algebra.polynomial import (
    DEGREVLEX,
    LEX,
    Ideal,
    Polynomial,
    Ring,
    count_standard_monomials,
    elimination_order,
    mono_mul,
    monomials_of_degree,
    order_from_name,
)
from graded_workbench.errors import (
    InputError,
    NonHomogeneousError,
    ParseError,
    RingMismatchError,
    SingularMatrixError,
    ZeroPolynomialError,
)


@pytest.fixture
def ring():
    return Ring.standard(4)


def test_degrevlex_prefers_earlier_variables(ring):
    assert DEGREVLEX.compare((1, 0, 0, 0), (0, 1, 0, 0)) == 1
    # x1^2 > x0*x2 in degrevlex, the reverse in lex
    assert DEGREVLEX.compare((0, 2, 0, 0), (1, 0, 1, 0)) == 1
    assert LEX.compare((0, 2, 0, 0), (1, 0, 1, 0)) == -1


def test_elimination_order_puts_block_first():
    order = elimination_order(2)
    assert order.compare((0, 1, 0, 0), (0, 0, 5, 0)) == 1
    assert str(order) == "elimination(2)"
    assert order_from_name("elimination(2)") == order


def test_unknown_order():
    with pytest.raises(InputError):
        order_from_name("grlex")


def test_compare_rejects_mixed_lengths():
    with pytest.raises(RingMismatchError):
        DEGREVLEX.compare((1, 0), (1, 0, 0))


def test_monomials_of_degree():
    mons = monomials_of_degree(3, 2)
    assert len(mons) == 6
    assert mons[0] == (2, 0, 0)
    assert mons[-1] == (0, 0, 2)


def test_parse_and_print(ring):
    f = ring.parse("x0*x2 - x1^2")
    assert str(f) == "-x1^2 + x0*x2"
    assert f.leading_monomial() == (0, 2, 0, 0)
    assert f.leading_monomial(LEX) == (1, 0, 1, 0)


def test_parse_handles_parentheses_and_constants(ring):
    f = ring.parse("(x0 + x1)^2 - 2*x0*x1")
    assert f == ring.parse("x0^2 + x1^2")


def test_negative_coefficients_print_lifted():
    ring = Ring.standard(2, 7)
    f = ring.parse("6*x0 + 3*x1")
    assert f.to_string() == "-x0 + 3*x1"


def test_parse_error_missing_exponent(ring):
    with pytest.raises(ParseError) as exc:
        ring.parse("x0^", line=4)
    assert exc.value.line == 4
    assert exc.value.column == 3


def test_parse_error_unknown_variable(ring):
    with pytest.raises(ParseError) as exc:
        ring.parse("x0 + y1")
    assert exc.value.column == 6
    assert "y1" in exc.value.reason


def test_parse_error_trailing_garbage(ring):
    with pytest.raises(ParseError):
        ring.parse("x0 )")


def test_empty_polynomial(ring):
    with pytest.raises(ParseError):
        ring.parse("   ")


def test_arithmetic(ring):
    x0, x1, x2, x3 = ring.gens()
    f = x0 * x2 - x1 * x1
    assert (f + f - f) == f
    assert (f - f).is_zero
    assert (x0 + x1) ** 3 == ring.parse("x0^3 + 3*x0^2*x1 + 3*x0*x1^2 + x1^3")
    assert (2 * f).leading_coefficient() == ring.p - 2


def test_homogeneity(ring):
    assert ring.parse("x0^2 + x1*x2").homogeneous_degree == 2
    assert ring.parse("x0^2 + x1").homogeneous_degree is None
    assert ring.zero().homogeneous_degree is None


def test_zero_has_no_leading_term(ring):
    with pytest.raises(ZeroPolynomialError):
        ring.zero().leading_term()


def test_monic(ring):
    f = ring.parse("3*x0 + x1")
    assert f.monic().leading_coefficient() == 1


def test_linear_change_composes(ring):
    f = ring.parse("x0*x3 - x1*x2")
    M1 = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    M2 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 2], [0, 0, 0, 1]]
    composed = [[sum(M1[i][k] * M2[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    assert f.apply_linear_change(M1).apply_linear_change(M2) == f.apply_linear_change(composed)


def test_linear_change_must_be_invertible(ring):
    with pytest.raises(SingularMatrixError):
        ring.gen(0).apply_linear_change([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_ideal_rejects_non_homogeneous_generator(ring):
    with pytest.raises(NonHomogeneousError) as exc:
        Ideal(ring, [ring.parse("x0^2 + x1^2 + x2")])
    assert exc.value.term == "x2"


def test_ideal_drops_zero_generators(ring):
    I = Ideal(ring, [ring.zero(), ring.gen(0)])
    assert len(I) == 1


def test_ideal_ring_mismatch(ring):
    other = Ring.standard(3)
    with pytest.raises(RingMismatchError):
        Ideal(ring, [other.gen(0)])


def test_count_standard_monomials(ring):
    # S/(x0, x1) in degree 3 is spanned by the cubics in x2, x3
    assert count_standard_monomials(ring, 3, [(1, 0, 0, 0), (0, 1, 0, 0)]) == 4


def sample_monomials(rng, nvars, count, max_exp=3):
    return [tuple(int(x) for x in rng.integers(0, max_exp + 1, size=nvars)) for _ in range(count)]


@pytest.mark.parametrize("order", [DEGREVLEX, LEX, elimination_order(2)], ids=str)
def test_monomial_order_axioms_on_sampled_monomials(order):
    monos = sample_monomials(make_rng(11), 4, 25)
    one = (0, 0, 0, 0)
    for a in monos:
        assert order.compare(a, a) == 0
        if a != one:
            assert order.compare(a, one) == 1
        for b in monos:
            ab = order.compare(a, b)
            assert ab == -order.compare(b, a)
            assert (ab == 0) == (a == b)
            for c in monos[:8]:
                if ab == 1:
                    assert order.compare(mono_mul(a, c), mono_mul(b, c)) == 1
                    if order.compare(b, c) == 1:
                        assert order.compare(a, c) == 1


@pytest.mark.parametrize("p", [101, 32003])
def test_parse_inverts_printing_on_sampled_polynomials(p):
    ring = Ring.standard(4, p)
    rng = make_rng(3)
    for _ in range(50):
        terms = {m: int(rng.integers(0, p)) for m in sample_monomials(rng, 4, int(rng.integers(0, 6)))}
        f = Polynomial(ring, terms)
        assert ring.parse(str(f)) == f
