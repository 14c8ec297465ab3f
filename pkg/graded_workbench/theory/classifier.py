"""Maximal and almost maximal degree: classification, predicted Betti tables and theorem checks.

Tables are in the S/I convention unless a function says otherwise. The
ideal convention is β_{i,j}(I) = β_{i+1,j-1}(S/I).
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Literal, Optional

from graded_workbench.algebra.hilbert import (
    DimensionData,
    artinian_reduction,
    coordinate_reduction_matrix,
    dimension_degree,
    gbinom,
    hilbert_series,
)
from graded_workbench.algebra.monomial_ideal import MonomialIdeal, initial_segment_monomials, split_monomial
from graded_workbench.algebra.polynomial import Ideal, Monomial
from graded_workbench.algebra.resolution import BettiTable, resolve_betti
from graded_workbench.errors import InputError, PreconditionError
from graded_workbench.theory.analysis import IdealAnalysis
from graded_workbench.theory.componentwise import degree_component_ideal, generator_degrees, has_linear_resolution
from graded_workbench.theory.models import (
    ACMEmbeddingReport,
    BoundsReport,
    Classification,
    ComponentLinearityReport,
    ConstraintRow,
    LinearityCase,
    PredictedBetti,
)

log = logging.getLogger(__name__)

Reading = Literal["literal", "extended"]


def check_initial_ideal_shape(M: MonomialIdeal, e: int, r: int) -> Optional[tuple[Monomial, Monomial]]:
    """(u, v) when the minimal generators of M are (x0..x_{e-1})^{r+1} plus one monomial uv.

    u is a degree-r monomial in x0..x_{e-1}, v a positive-degree monomial in the rest.
    """
    N = M.ring.nvars
    if e < 1 or r < 1 or e >= N:
        return None
    power = set(initial_segment_monomials(N, e, r + 1))
    gens = set(M.generators)
    if not power <= gens:
        return None
    rest = gens - power
    if len(rest) != 1:
        return None
    u, v = split_monomial(rest.pop(), e)
    if sum(u) != r or sum(v) < 1:
        return None
    return u, v


def initial_ideal_shape(analysis: IdealAnalysis, e: int, r: int) -> Optional[tuple[Monomial, Monomial, str]]:
    """Shape witness from the given coordinates when x_e..x_N reduce to an Artinian ring
    with top degree r, otherwise from the generic initial ideal."""
    N = analysis.num_vars
    if 1 <= e < N:
        h = artinian_reduction(analysis.ideal, coordinate_reduction_matrix(N, e))
        if h is not None and len(h) - 1 == r:
            found = check_initial_ideal_shape(analysis.degrevlex_initial, e, r)
            if found is not None:
                return found[0], found[1], "given"
    if analysis.gin is not None:
        found = check_initial_ideal_shape(analysis.gin.ideal, e, r)
        if found is not None:
            return found[0], found[1], "gin"
    return None


# ---- predicted tables


def _strand(e: int, r: int, i: int) -> int:
    return comb(e + r, i + r) * comb(r + i - 1, r)


def predicted_betti(case: str, e: int, r: int, reg_R: int, cwl: Optional[bool] = None) -> PredictedBetti:
    """Betti table of R = S/I in each case; case b without componentwise linearity gives constraints."""
    entries: dict[tuple[int, int], int] = {(0, 0): 1}
    if case == "a":
        if reg_R != r:
            raise InputError(f"case a needs reg(R) = r, got {reg_R} and {r}")
        for i in range(1, e + 2):
            entries[(i, r)] = entries.get((i, r), 0) + _strand(e, r, i) + comb(e, i - 1)
    elif case == "c":
        if reg_R <= r + 1:
            raise InputError(f"case c needs reg(R) > r + 1, got {reg_R} and {r}")
        for i in range(1, e + 1):
            entries[(i, r)] = _strand(e, r, i)
        for i in range(1, e + 2):
            entries[(i, reg_R)] = comb(e, i - 1)
    elif case == "b":
        if reg_R != r + 1:
            raise InputError(f"case b needs reg(R) = r + 1, got {reg_R} and {r}")
        if not cwl:
            rows = [
                ConstraintRow(
                    i=i,
                    difference=_strand(e, r, i) - gbinom(e, i - 2),
                    cap=_strand(e, r, i),
                    shifted_cap=gbinom(e, i - 2),
                )
                for i in range(1, e + 2)
            ]
            return PredictedBetti(case="b", e=e, r=r, reg_R=reg_R, cwl=cwl, constraints=rows)
        for i in range(1, e + 1):
            entries[(i, r)] = _strand(e, r, i)
        for i in range(1, e + 2):
            entries[(i, r + 1)] = comb(e, i - 1)
    else:
        raise InputError(f"unknown case {case!r}")
    table = [[i, j, v] for (i, j), v in sorted(entries.items()) if v]
    return PredictedBetti(case=case, e=e, r=r, reg_R=reg_R, cwl=cwl, table=table)


def predicted_table(pred: PredictedBetti) -> Optional[BettiTable]:
    if pred.table is None:
        return None
    return BettiTable({(i, j): v for i, j, v in pred.table})


def compare_with_prediction(bt: BettiTable, pred: PredictedBetti) -> list[str]:
    """Human-readable mismatches between a computed table and a prediction."""
    table = predicted_table(pred)
    if table is not None:
        keys = sorted(set(bt.entries) | set(table.entries))
        diffs = [(k, bt[k], table[k]) for k in keys if bt[k] != table[k]]
        return [f"β_{i},{j} = {got}, predicted {want}" for (i, j), got, want in diffs]
    out = []
    r = pred.r
    for row in pred.constraints or []:
        upper = bt[(row.i, r)]
        shifted = bt[(row.i - 1, r + 1)]
        if upper - shifted != row.difference:
            out.append(f"β_{row.i},{r} - β_{row.i - 1},{r + 1} = {upper - shifted}, predicted {row.difference}")
        if upper > row.cap:
            out.append(f"β_{row.i},{r} = {upper} exceeds {row.cap}")
        if shifted > row.shifted_cap:
            out.append(f"β_{row.i - 1},{r + 1} = {shifted} exceeds {row.shifted_cap}")
    return out


def allowed_support(e: int, r: int, reg_R: int) -> set[tuple[int, int]]:
    return {(0, 0)} | {(i, r) for i in range(1, e + 1)} | {(i, reg_R) for i in range(1, e + 2)}


def model_ideal_betti(e: int, r: int, deg_uv: int, reading: Reading = "extended") -> BettiTable:
    """Betti table of the ideal (x0..x_{e-1})^{r+1} + (uv), ideal convention.

    For deg(uv) = r + 1 the two summands share row r + 1; `reading` picks whether
    their C(e, i) term runs over 0 ≤ i < e or 0 ≤ i ≤ e.
    """
    if deg_uv < r + 1:
        raise InputError(f"deg(uv) = {deg_uv} is below r + 1 = {r + 1}")
    entries: dict[tuple[int, int], int] = {}
    for i in range(e):
        entries[(i, r + 1)] = comb(e + r, i + r + 1) * comb(r + i, r)
    if deg_uv == r + 1:
        top = e + 1 if reading == "extended" else e
        for i in range(top):
            entries[(i, r + 1)] = entries.get((i, r + 1), 0) + comb(e, i)
    else:
        for i in range(e + 1):
            entries[(i, deg_uv)] = comb(e, i)
    return BettiTable(entries)


def model_reading(bt: BettiTable, e: int, r: int, deg_uv: int) -> Literal["literal", "extended", "both", "neither"]:
    """Which reading of the model-ideal formula matches the computed S/I table."""
    ideal_table = bt.ideal_convention()
    literal = model_ideal_betti(e, r, deg_uv, "literal") == ideal_table
    extended = model_ideal_betti(e, r, deg_uv, "extended") == ideal_table
    if literal and extended:
        return "both"
    if literal:
        return "literal"
    if extended:
        return "extended"
    return "neither"


# ---- classification


def almost_maximal_case(reg_R: int, r: int) -> Optional[Literal["a", "b", "c"]]:
    if reg_R == r:
        return "a"
    if reg_R == r + 1:
        return "b"
    if reg_R > r + 1:
        return "c"
    return None


def _is_linear_ideal_table(bt: BettiTable, r: int) -> bool:
    return all(j == r for (i, j) in bt.entries if i >= 1)


def classify(analysis: IdealAnalysis, cwl: Optional[bool] = None) -> Classification:
    """MaximalDegreeACM, AlmostMaximal (case a/b/c) or Other.

    Both sides of the equivalence "(deg, depth) ⟺ initial ideal shape" are computed;
    every disagreement lands in `discrepancies`.
    """
    if analysis.reduction is None:
        raise PreconditionError("classification needs the reduction number")
    dims, inv, bt = analysis.dims, analysis.invariants, analysis.betti
    e, n, r = dims.codim, dims.n, analysis.reduction.r
    reg_R = inv.reg
    bound = gbinom(e + r, e)
    ring = analysis.ideal.ring
    out = Classification(
        status="Other", e=e, r=r, n=n, deg=dims.degree, reg_R=reg_R, depth=inv.depth, pdim=inv.pdim
    )
    shape = initial_ideal_shape(analysis, e, r)
    if shape is not None:
        u, v, source = shape
        out.u = ring.format_monomial(u)
        out.v = ring.format_monomial(v)
        out.deg_uv = sum(u) + sum(v)
        out.shape_source = source

    almost = dims.degree == bound - 1 and inv.depth == n
    if dims.degree == bound:
        out.status = "MaximalDegreeACM"
        out.minimal_degree = dims.degree == e + 1
        if not inv.is_cm:
            out.discrepancies.append("maximal degree but S/I is not Cohen-Macaulay")
        if not _is_linear_ideal_table(bt, r):
            out.discrepancies.append(f"maximal degree but the resolution is not {r + 1}-linear")
    elif almost:
        out.status = "AlmostMaximal"
        out.case = almost_maximal_case(reg_R, r)
        if out.case is None:
            out.discrepancies.append(f"reg(R) = {reg_R} is below r = {r}")
        if inv.pdim != e + 1:
            out.discrepancies.append(f"pdim = {inv.pdim}, expected e + 1 = {e + 1}")
        outside = sorted(set(bt.entries) - allowed_support(e, r, reg_R))
        if outside:
            out.discrepancies.append(f"Betti entries outside the almost maximal shape: {outside}")
        if out.case is not None:
            out.predicted = predicted_betti(out.case, e, r, reg_R, cwl if out.case == "b" else None)
            out.discrepancies.extend(compare_with_prediction(bt, out.predicted))

    if (shape is not None) != almost:
        out.discrepancies.append(
            f"(deg, depth) test says {almost}, initial ideal shape test says {shape is not None}"
        )
    if almost and out.deg_uv is not None and out.deg_uv - 1 != reg_R:
        out.discrepancies.append(f"reg(R) = {reg_R} but deg(uv) - 1 = {out.deg_uv - 1}")
    if shape is not None and out.deg_uv is not None and analysis.ideal.is_monomial():
        out.model_reading = model_reading(bt, e, r, out.deg_uv)

    for d in out.discrepancies:
        log.warning(f"classification: {d}")
    log.info(f"classified as {out.status}{f' case {out.case}' if out.case else ''}: e={e}, r={r}, deg={dims.degree}")
    return out


# ---- componentwise linearity theorem


def linearity_case(reg_R: int, r: int, beta_1_rp1: int) -> LinearityCase:
    if reg_R == r:
        return "a-i"
    if reg_R == r + 1:
        if beta_1_rp1 == 1:
            return "a-ii"
        if beta_1_rp1 == 0:
            return "b"
        return "not-applicable"
    if reg_R >= r + 2:
        return "a-iii"
    return "not-applicable"


def thm45_verdict(reg_R: int, r: int, beta_1_rp1: int) -> bool:
    """Componentwise linear unless reg(R) = r + 1 and β_{1,r+1}(R) = 0."""
    return not (reg_R == r + 1 and beta_1_rp1 == 0)


@dataclass
class ComponentData:
    """I_<d> together with its Betti table and Hilbert data."""

    degree: int
    ideal: Ideal
    betti: BettiTable
    dims: DimensionData
    linear: bool

    @property
    def is_cm(self) -> bool:
        return self.ideal.ring.nvars - self.betti.pdim == self.dims.krull_dim


def component_data(I: Ideal, d: int) -> ComponentData:
    comp = degree_component_ideal(I, d)
    if comp.is_zero:
        dims = dimension_degree(hilbert_series(comp))
        return ComponentData(d, comp, BettiTable({(0, 0): 1}), dims, False)
    bt = resolve_betti(comp)
    dims = dimension_degree(hilbert_series(comp))
    return ComponentData(d, comp, bt, dims, has_linear_resolution(comp, bt).linear)


def check_prop43(
    I: Ideal,
    r: int,
    betti: Optional[BettiTable] = None,
    matrix=None,
    component: Optional[ComponentData] = None,
) -> ComponentLinearityReport:
    """Linearity of I_<r+1> against the (reg, β_{1,r+1}) condition, with its consequences.

    `matrix` is the generic change of coordinates used for the initial ideal in case b.
    """
    bt = betti if betti is not None else resolve_betti(I)
    reg_R = bt.reg
    beta = bt[(1, r + 1)]
    case = linearity_case(reg_R, r, beta)
    comp = component if component is not None else component_data(I, r + 1)
    details: dict = {"reg_R": reg_R, "r": r, "component_betti": comp.betti.to_json()}
    if case == "not-applicable":
        return ComponentLinearityReport(case=case, beta_1_rp1=beta, component_linear=comp.linear, holds=True, details=details)

    holds = comp.linear == (case != "b")
    cm = None
    single = None
    if case in ("a-ii", "a-iii"):
        cm = comp.is_cm
        holds = holds and cm
    if case == "b":
        J = comp.ideal if matrix is None else comp.ideal.apply_linear_change(matrix)
        initial_bt = resolve_betti(J.groebner().initial_ideal().to_ideal())
        details["initial_beta_1_rp1"] = initial_bt[(1, r + 1)]
        single = set(generator_degrees(bt)) == {r + 1}
        holds = holds and initial_bt[(1, r + 1)] == 1 and single
    if not holds:
        log.warning(f"I_<{r + 1}> check failed in case {case}: {details}")
    return ComponentLinearityReport(
        case=case,
        beta_1_rp1=beta,
        component_linear=comp.linear,
        component_cm=cm,
        generated_in_single_degree=single,
        holds=holds,
        details=details,
    )


def check_acm_embedding(
    I: Ideal,
    e: int,
    r: int,
    dims: DimensionData,
    case: LinearityCase,
    component: Optional[ComponentData] = None,
) -> ACMEmbeddingReport:
    """Y = Proj(S/I_<r+1>) has the dimension of X, is ACM, (r+1)-linear and of maximal degree."""
    if case not in ("a-ii", "a-iii"):
        return ACMEmbeddingReport(applicable=False)
    comp = component if component is not None else component_data(I, r + 1)
    return ACMEmbeddingReport(
        applicable=True,
        same_dimension=comp.dims.krull_dim == dims.krull_dim,
        acm=comp.is_cm,
        linear=comp.linear,
        maximal_degree=comp.dims.degree == gbinom(e + r, e),
        degree=comp.dims.degree,
    )


def check_bounds_prop49(
    e: int, r: int, reg_R: int, deg: Optional[int] = None, applicable: bool = True
) -> BoundsReport:
    """3 ≤ r + 1 ≤ reg(X) ≤ C(e+r, e) - e with reg(X) = reg(R) + 1, and reg(X) ≤ deg - e + 1."""
    reg_X = reg_R + 1
    chain = [3, r + 1, reg_X, gbinom(e + r, e) - e]
    slack = [b - a for a, b in zip(chain, chain[1:])]
    holds = all(s >= 0 for s in slack)
    if deg is not None:
        holds = holds and reg_X <= deg - e + 1
    return BoundsReport(applicable=applicable, chain=chain, slack=slack, holds=holds)
