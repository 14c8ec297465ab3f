"""Degree components I_<d>, linear resolutions and componentwise linearity."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from graded_workbench.algebra.field import make_rng
from graded_workbench.algebra.groebner import GinResult, generic_initial_ideal
from graded_workbench.algebra.linalg import rank_mod_p, row_basis_mod_p
from graded_workbench.algebra.monomial_ideal import is_stable_monomial_ideal, power_of_variables
from graded_workbench.algebra.polynomial import Ideal, Monomial, Polynomial, Ring, maximal_ideal, mono_mul
from graded_workbench.algebra.resolution import BettiTable, betti_stable_monomial, resolve_betti
from graded_workbench.errors import InputError, PreconditionError
from graded_workbench.settings import WORKBENCH_TRIALS
from graded_workbench.theory.models import CWLReport, DegreeCheck, GinCrosscheck, TruncationReport

log = logging.getLogger(__name__)


def _graded_piece_rows(I: Ideal, d: int) -> tuple[tuple[Monomial, ...], np.ndarray]:
    """Row-reduced basis of I_d in the degrevlex monomial basis of S_d."""
    ring = I.ring
    mons = ring.monomials(d)
    index = {m: k for k, m in enumerate(mons)}
    rows = []
    for g in I.groebner().elements:
        gd = g.degree()
        if gd > d:
            continue
        for m in ring.monomials(d - gd):
            vec = np.zeros(len(mons), dtype=np.int64)
            for mg, c in g.terms.items():
                vec[index[mono_mul(m, mg)]] = c
            rows.append(vec)
    if not rows:
        return mons, np.zeros((0, len(mons)), dtype=np.int64)
    return mons, row_basis_mod_p(np.array(rows, dtype=np.int64), ring.p)


def degree_component_ideal(I: Ideal, d: int) -> Ideal:
    """I_<d>: the ideal generated by the degree-d forms of I."""
    if d < 1:
        raise InputError("degree components start at d = 1")
    mons, basis = _graded_piece_rows(I, d)
    gens = [Polynomial(I.ring, {mons[k]: int(c) for k, c in enumerate(row) if c}) for row in basis]
    if not gens:
        log.warning(f"I_{d} is zero")
    return Ideal(I.ring, gens)


def graded_piece_dim(I: Ideal, d: int) -> int:
    return _graded_piece_rows(I, d)[1].shape[0]


def multiples_dim(I: Ideal, d: int, s: int) -> int:
    """dim_k of m^s · I_d inside S_{d+s}."""
    ring = I.ring
    mons, basis = _graded_piece_rows(I, d)
    target = ring.monomials(d + s)
    index = {m: k for k, m in enumerate(target)}
    rows = []
    for row in basis:
        support = [(mons[k], int(c)) for k, c in enumerate(row) if c]
        for m in ring.monomials(s):
            vec = np.zeros(len(target), dtype=np.int64)
            for mm, c in support:
                vec[index[mono_mul(m, mm)]] = c
            rows.append(vec)
    return rank_mod_p(np.array(rows, dtype=np.int64), ring.p) if rows else 0


@dataclass(frozen=True)
class LinearityResult:
    linear: bool
    reg: Optional[int]
    degree: Optional[int]


def generator_degrees(bt: BettiTable) -> list[int]:
    """Degrees of minimal generators of I read off β_{1,j}(S/I)."""
    return sorted(j + 1 for (i, j), count in bt.entries.items() if i == 1 for _ in range(count))


def has_linear_resolution(I: Ideal, betti: Optional[BettiTable] = None) -> LinearityResult:
    """True when I is generated in one degree d and reg(I) = d."""
    if I.is_zero:
        return LinearityResult(False, None, None)
    bt = betti if betti is not None else resolve_betti(I)
    degrees = generator_degrees(bt)
    reg_ideal = bt.reg + 1
    if len(set(degrees)) != 1:
        return LinearityResult(False, reg_ideal, None)
    d = degrees[0]
    return LinearityResult(reg_ideal == d, reg_ideal, d)


def componentwise_linear(I: Ideal, betti: Optional[BettiTable] = None, audit: bool = False) -> CWLReport:
    """Check I_<d> for every d from the smallest generator degree through reg(I).

    With audit=True the degree reg(I) + 1 is checked too.
    """
    bt = betti if betti is not None else resolve_betti(I)
    degrees = generator_degrees(bt)
    if not degrees:
        return CWLReport(degrees_checked=[], per_degree=[], overall=True)
    reg_ideal = bt.reg + 1
    top = reg_ideal + 1 if audit else reg_ideal
    checked = list(range(degrees[0], top + 1))
    per_degree = []
    for d in checked:
        component = degree_component_ideal(I, d)
        result = has_linear_resolution(component)
        log.info(f"I_<{d}>: {len(component)} generators, reg {result.reg}, linear={result.linear}")
        per_degree.append(DegreeCheck(d=d, num_gens=len(component), reg=result.reg, linear=result.linear))
    overall = all(c.linear for c in per_degree if c.d <= reg_ideal)
    return CWLReport(degrees_checked=checked, per_degree=per_degree, overall=overall)


def verify_lemma41(I: Ideal) -> bool:
    """If I has a d-linear resolution then m·I has a (d+1)-linear one."""
    result = has_linear_resolution(I)
    if not result.linear or result.degree is None:
        raise PreconditionError("verify_lemma41 needs an ideal with a linear resolution")
    product = maximal_ideal(I.ring) * I
    lifted = has_linear_resolution(product)
    return lifted.linear and lifted.degree == result.degree + 1


def cwl_via_gin_crosscheck(
    I: Ideal,
    rng: Optional[np.random.Generator],
    betti: Optional[BettiTable] = None,
    trials: int = WORKBENCH_TRIALS,
    gin: Optional[GinResult] = None,
) -> GinCrosscheck:
    """Componentwise linear iff Gin(I) is stable with the same Betti table as I."""
    bt = betti if betti is not None else resolve_betti(I)
    if gin is None:
        gin = generic_initial_ideal(I, rng if rng is not None else make_rng(0), trials=trials)
    stable = is_stable_monomial_ideal(gin.ideal, strong=False)
    gin_betti = betti_stable_monomial(gin.ideal) if stable else resolve_betti(gin.ideal.to_ideal())
    same = gin_betti == bt
    log.info(f"Gin cross-check: stable={stable}, same Betti table={same}")
    return GinCrosscheck(
        gin=[I.ring.format_monomial(g) for g in gin.ideal.generators],
        stable=stable,
        same_betti=same,
        verdict=stable and same,
        trials=gin.trials_run,
        characteristic=I.ring.p,
    )


def check_truncation_structure(I: Ideal, r: int, betti: Optional[BettiTable] = None) -> TruncationReport:
    """I_<r+s> = m^(s-1) I_<r+1> for 1 ≤ s < reg(I) - r, when I is generated in degrees r+1 and reg(I)."""
    bt = betti if betti is not None else resolve_betti(I)
    reg_ideal = bt.reg + 1
    degrees = set(generator_degrees(bt))
    applicable = degrees <= {r + 1, reg_ideal}
    report = TruncationReport(applicable=applicable, r=r, reg_ideal=reg_ideal)
    if not applicable:
        return report
    for s in range(1, reg_ideal - r):
        report.per_step[s] = multiples_dim(I, r + 1, s - 1) == graded_piece_dim(I, r + s)
    return report


# ---- model ideals


def model_ideal(e: int, n: int, r: int, u: Monomial, v: Monomial, p: Optional[int] = None) -> Ideal:
    """(x0, ..., x_{e-1})^{r+1} + (uv) in n + e + 1 variables."""
    N = n + e + 1
    if e < 1 or n < 0 or r < 1:
        raise InputError("model ideals need e ≥ 1, n ≥ 0, r ≥ 1")
    if len(u) != N or len(v) != N:
        raise InputError(f"u and v must have {N} exponents")
    if sum(u) != r or any(u[e:]):
        raise InputError(f"u must be a degree-{r} monomial in x0..x{e - 1}")
    if sum(v) < 1 or any(v[:e]):
        raise InputError(f"v must be a positive-degree monomial in x{e}..x{N - 1}")
    ring = Ring.standard(N, p)
    maximal = power_of_variables(ring, e, r + 1)
    return Ideal(ring, [ring.monomial(g) for g in maximal.generators] + [ring.monomial(mono_mul(u, v))])


@dataclass(frozen=True)
class ModelInstance:
    e: int
    n: int
    r: int
    u: Monomial
    v: Monomial

    @property
    def deg_v(self) -> int:
        return sum(self.v)

    @property
    def num_vars(self) -> int:
        return self.n + self.e + 1

    def label(self) -> str:
        return f"model(e={self.e},n={self.n},r={self.r},deg v={self.deg_v})"

    def ideal(self, p: Optional[int] = None) -> Ideal:
        return model_ideal(self.e, self.n, self.r, self.u, self.v, p)


def model_instance(e: int, n: int, r: int, deg_v: int) -> ModelInstance:
    """u = x0^(r-1) x_{e-1}, v = x_e^(deg v - 1) x_{N-1}."""
    N = n + e + 1
    u = [0] * N
    u[0] += r - 1
    u[e - 1] += 1
    v = [0] * N
    v[e] += deg_v - 1
    v[N - 1] += 1
    return ModelInstance(e, n, r, tuple(u), tuple(v))


def model_sweep(extended: bool = True) -> list[ModelInstance]:
    """e in {2,3}, n in {1,2}, r in {1,2,3}, deg v in {1,2}; plus deg v = 3 for e=2, n=1, r ≤ 2."""
    out = [
        model_instance(e, n, r, dv)
        for e in (2, 3)
        for n in (1, 2)
        for r in (1, 2, 3)
        for dv in (1, 2)
    ]
    if extended:
        out += [model_instance(2, 1, r, 3) for r in (1, 2)]
    return out
