"""Hilbert series, Hilbert polynomials, genus and reduction numbers.

Numerators are computed on monomial ideals with the pivot recursion
N(M) = N(M + (x)) + t N(M : x); everything univariate is a sympy Poly.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np
import sympy
from sympy import Poly, Rational, Symbol

from graded_workbench.algebra.field import make_rng
from graded_workbench.algebra.groebner import buchberger
from graded_workbench.algebra.monomial_ideal import MonomialIdeal, minimalize_monomials
from graded_workbench.algebra.polynomial import Ideal, Monomial, Polynomial
from graded_workbench.errors import PreconditionError, ReductionNumberDisagreement
from graded_workbench.settings import WORKBENCH_GENERICITY_RETRIES, WORKBENCH_TRIALS

log = logging.getLogger(__name__)

t = Symbol("t")
T = Symbol("T")


def gbinom(x: int, k: int) -> int:
    """C(x, k) = x(x-1)...(x-k+1)/k! for any integer x; zero for k < 0."""
    if k < 0:
        return 0
    return int(sympy.ff(x, k) / sympy.factorial(k))


def binomial_poly(shift: int, k: int) -> Poly:
    """C(T + shift, k) as a polynomial in T over QQ."""
    if k < 0:
        return Poly(0, T, domain="QQ")
    expr = sympy.expand_func(sympy.ff(T + shift, k)) / sympy.factorial(k)
    return Poly(sympy.expand(expr), T, domain="QQ")


# ---- numerators


def _pivot_variable(gens: Sequence[Monomial]) -> int:
    counts = [sum(1 for g in gens if g[i]) for i in range(len(gens[0]))]
    return max(range(len(counts)), key=lambda i: (counts[i], -i))


def _pairwise_coprime(gens: Sequence[Monomial]) -> bool:
    seen = [0] * len(gens[0])
    for g in gens:
        for i, e in enumerate(g):
            if e:
                if seen[i]:
                    return False
                seen[i] = 1
    return True


@lru_cache(maxsize=4096)
def _numerator(gens: tuple[Monomial, ...]) -> Poly:
    if not gens:
        return Poly(1, t, domain="ZZ")
    if any(not any(g) for g in gens):
        return Poly(0, t, domain="ZZ")
    if _pairwise_coprime(gens):
        out = Poly(1, t, domain="ZZ")
        for g in gens:
            out = out * Poly(1 - t ** sum(g), t, domain="ZZ")
        return out
    x = _pivot_variable(gens)
    n = len(gens[0])
    var = tuple(1 if i == x else 0 for i in range(n))
    with_x = minimalize_monomials(gens + (var,))
    colon = minimalize_monomials(g[:x] + (max(g[x] - 1, 0),) + g[x + 1 :] for g in gens)
    return _numerator(_canonical(with_x)) + Poly(t, t, domain="ZZ") * _numerator(_canonical(colon))


def _canonical(gens: Sequence[Monomial]) -> tuple[Monomial, ...]:
    return tuple(sorted(gens))


def hilbert_numerator(M: MonomialIdeal, num_vars: Optional[int] = None) -> Poly:
    """N(t) with HS(S/M) = N(t) / (1 - t)^N."""
    if num_vars is not None and num_vars != M.ring.nvars:
        raise PreconditionError(f"ideal lives in {M.ring.nvars} variables, not {num_vars}")
    return _numerator(_canonical(M.generators))


@dataclass
class HilbertSeries:
    numerator: Poly
    num_vars: int
    reduced_numerator: Poly
    dim: int

    @classmethod
    def from_numerator(cls, numerator: Poly, num_vars: int) -> "HilbertSeries":
        one_minus_t = Poly(1 - t, t, domain="ZZ")
        reduced = numerator
        cancelled = 0
        if not numerator.is_zero:
            while cancelled < num_vars:
                q, r = reduced.div(one_minus_t)
                if not r.is_zero:
                    break
                reduced = q
                cancelled += 1
        return cls(numerator, num_vars, reduced, num_vars - cancelled if not numerator.is_zero else -1)

    @property
    def is_unit_ideal(self) -> bool:
        return self.numerator.is_zero

    def coefficients(self, upto: int) -> list[int]:
        """Hilbert function values H(0..upto)."""
        a = _ascending(self.numerator)
        N = self.num_vars
        return [
            sum(c * gbinom(d - k + N - 1, N - 1) for k, c in enumerate(a) if k <= d)
            for d in range(upto + 1)
        ]

    def numerator_list(self) -> list[int]:
        return _ascending(self.numerator)

    def reduced_list(self) -> list[int]:
        return _ascending(self.reduced_numerator)


def _ascending(p: Poly) -> list[int]:
    if p.is_zero:
        return [0]
    return [int(c) for c in reversed(p.all_coeffs())]


def hilbert_series(I: Union[Ideal, MonomialIdeal]) -> HilbertSeries:
    M = I if isinstance(I, MonomialIdeal) else I.groebner().initial_ideal()
    return HilbertSeries.from_numerator(hilbert_numerator(M), M.ring.nvars)


@dataclass(frozen=True)
class DimensionData:
    krull_dim: int
    n: int
    codim: int
    degree: int
    unit_ideal: bool = False


def dimension_degree(hs: HilbertSeries) -> DimensionData:
    """Krull dimension, projective dimension n, codimension e = N - 1 - n, and degree."""
    if hs.is_unit_ideal:
        log.warning("Hilbert numerator is zero: unit ideal")
        return DimensionData(krull_dim=-1, n=-2, codim=hs.num_vars + 1, degree=0, unit_ideal=True)
    n = hs.dim - 1
    degree = int(hs.reduced_numerator.eval(1))
    return DimensionData(krull_dim=hs.dim, n=n, codim=hs.num_vars - 1 - n, degree=degree)


# ---- Hilbert polynomials


@dataclass
class HilbertPolynomialData:
    """P(T) = sum_j Q_j C(T + n - j, n), kept in both the binomial and the power basis."""

    n: int
    binomial_coefficients: list[int]
    power_basis: Poly = field(repr=False)

    @classmethod
    def from_binomial(cls, n: int, coefficients: Sequence[int]) -> "HilbertPolynomialData":
        total = Poly(0, T, domain="QQ")
        for j, q in enumerate(coefficients):
            if q:
                total = total + binomial_poly(n - j, n) * q
        return cls(n=n, binomial_coefficients=list(coefficients), power_basis=total)

    def evaluate(self, d: int) -> int:
        value = Rational(self.power_basis.eval(d))
        if value.q != 1:
            raise PreconditionError(f"Hilbert polynomial is not integer valued at {d}")
        return int(value)

    def power_coefficients(self) -> list[int]:
        """Coefficients of T^0, T^1, ... (integers times n! are always exact)."""
        if self.power_basis.is_zero:
            return [0]
        return [Rational(c) for c in reversed(self.power_basis.all_coeffs())]

    def leading_coefficient_times_factorial(self) -> int:
        return int(self.power_basis.LC() * sympy.factorial(self.n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HilbertPolynomialData):
            return NotImplemented
        return self.n == other.n and self.power_basis == other.power_basis

    def __str__(self) -> str:
        return str(self.power_basis.as_expr()).replace("**", "^")


def hilbert_polynomial(hs: HilbertSeries) -> HilbertPolynomialData:
    if hs.is_unit_ideal or hs.dim < 1:
        raise PreconditionError("the Hilbert polynomial needs Krull dimension at least 1")
    return HilbertPolynomialData.from_binomial(hs.dim - 1, _ascending(hs.reduced_numerator))


def cor34_hilbert_polynomial(e: int, r: int, reg_R: int, n: int) -> HilbertPolynomialData:
    """sum_{j<=r} C(e-1+j, e-1) C(T+n-j, n) - C(T-reg_R-1+n, n)."""
    coefficients = [0] * (max(r, reg_R + 1) + 1)
    for j in range(r + 1):
        coefficients[j] += gbinom(e - 1 + j, e - 1)
    coefficients[reg_R + 1] -= 1
    return HilbertPolynomialData.from_binomial(n, coefficients)


def arithmetic_genus(P: HilbertPolynomialData) -> int:
    return (-1) ** P.n * (P.evaluate(0) - 1)


@dataclass(frozen=True)
class GenusReport:
    direct: int
    closed_form: int
    shortcut: Optional[int]

    @property
    def flagged(self) -> bool:
        return self.closed_form != self.direct or (self.shortcut is not None and self.shortcut != self.direct)

    def to_dict(self) -> dict:
        return {
            "direct": self.direct,
            "closed_form": self.closed_form,
            "shortcut": self.shortcut,
            "flagged": self.flagged,
        }


def genus_closed_forms(e: int, r: int, reg_R: int, n: int) -> GenusReport:
    """The printed closed forms for g next to (-1)^n (P(0) - 1) of the same P."""
    direct = arithmetic_genus(cor34_hilbert_polynomial(e, r, reg_R, n))
    closed = sum(gbinom(e - 1 + j, e - 1) * gbinom(j - 1, n) for j in range(n + 1, r + 1))
    closed += -gbinom(reg_R, n) + (-1) ** (n + 1)
    shortcut = -gbinom(reg_R, n) + (-1) ** (n + 1) if r <= n else None
    if closed != direct:
        log.info(f"genus closed form {closed} differs from direct value {direct} (e={e}, r={r}, reg={reg_R}, n={n})")
    return GenusReport(direct=direct, closed_form=closed, shortcut=shortcut)


# ---- reduction number


@dataclass
class ReductionData:
    """Top degree of a generic Artinian reduction, certified by agreeing trials."""

    r: int
    artinian_hilbert: tuple[int, ...]
    matrices: list[np.ndarray] = field(default_factory=list, repr=False)
    trials_run: int = 0
    candidates: list[Optional[int]] = field(default_factory=list)


def artinian_reduction(I: Ideal, matrix: np.ndarray) -> Optional[tuple[int, ...]]:
    """Hilbert function of S/(I, linear forms) after x_i -> sum_j matrix[i][j] x_j, j < e.

    None when the substituted ideal is not Artinian in x0..x_{e-1}.
    """
    ring = I.ring
    N = ring.nvars
    e = matrix.shape[1]
    images = [
        Polynomial(ring, {ring.var_monomial(j): int(matrix[i][j]) for j in range(e)}) for i in range(N)
    ]
    reduced = [g.substitute(images) for g in I.generators]
    reduced = [g for g in reduced if not g.is_zero]
    if not reduced:
        return None if e else (1,)
    gb = buchberger(reduced)
    lms = gb.leading_monomials()
    if any(not any(m) for m in lms):
        return None
    pure = {max_i for m in lms if (max_i := _pure_power_index(m)) is not None}
    if not all(i in pure for i in range(e)):
        return None
    h = []
    d = 0
    while True:
        count = sum(
            1 for m in ring.monomials(d)
            if not any(m[e:]) and not any(all(a <= b for a, b in zip(lm, m)) for lm in lms)
        )
        if count == 0:
            break
        h.append(count)
        d += 1
    return tuple(h)


def coordinate_reduction_matrix(num_vars: int, e: int) -> np.ndarray:
    """x_i -> x_i for i < e and x_i -> 0 otherwise: reduction by the last variables."""
    return np.eye(num_vars, e, dtype=np.int64)


def _artinian_trial(I: Ideal, e: int, rng: np.random.Generator) -> tuple[Optional[tuple[int, ...]], np.ndarray]:
    M = rng.integers(0, I.ring.p, size=(I.ring.nvars, e), dtype=np.int64)
    return artinian_reduction(I, M), M


def _pure_power_index(m: Monomial) -> Optional[int]:
    support = [i for i, x in enumerate(m) if x]
    return support[0] if len(support) == 1 else None


def reduction_number(
    I: Ideal,
    rng: Optional[np.random.Generator] = None,
    trials: int = WORKBENCH_TRIALS,
    retries: int = WORKBENCH_GENERICITY_RETRIES,
    krull_dim: Optional[int] = None,
) -> ReductionData:
    """Reduction number from S/(I + generic linear forms), minimum over agreeing trials."""
    if rng is None:
        rng = make_rng(0)
    if krull_dim is None:
        dims = dimension_degree(hilbert_series(I))
        if dims.unit_ideal:
            raise PreconditionError("the unit ideal has no reduction number")
        krull_dim = dims.krull_dim
    N = I.ring.nvars
    e = N - krull_dim
    if krull_dim:
        I.ring.field.check_size(N)
    results: list[Optional[tuple[int, ...]]] = []
    matrices: list[np.ndarray] = []
    for attempt in range(trials + retries):
        h, M = _artinian_trial(I, e, rng)
        results.append(h)
        matrices.append(M)
        if h is None:
            log.warning(f"reduction number trial {attempt + 1}: linear forms are not a system of parameters")
        good = [len(x) - 1 for x in results if x is not None]
        if attempt + 1 >= trials and good:
            best = min(good)
            if good.count(best) >= 2:
                h_best = next(x for x in results if x is not None and len(x) - 1 == best)
                log.info(f"reduction number {best} from {attempt + 1} trials, h = {h_best}")
                return ReductionData(
                    r=best,
                    artinian_hilbert=h_best,
                    matrices=matrices,
                    trials_run=attempt + 1,
                    candidates=[None if x is None else len(x) - 1 for x in results],
                )
    raise ReductionNumberDisagreement(
        f"reduction number trials disagree: {results}",
        candidates=[None if x is None else len(x) - 1 for x in results],
    )
