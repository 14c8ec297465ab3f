"""Theorem checks over a finished analysis.

Each check returns a CheckResult with status pass, fail, flagged (a known
disagreement with a printed formula) or skipped (hypotheses not met).
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from graded_workbench.algebra.hilbert import cor34_hilbert_polynomial, genus_closed_forms
from graded_workbench.algebra.resolution import (
    chi_closed_form,
    chi_noether_pattern,
    chi_over_noether,
    chi_statistics,
)
from graded_workbench.errors import TheoremViolation
from graded_workbench.theory.analysis import IdealAnalysis
from graded_workbench.theory.classifier import (
    ComponentData,
    check_acm_embedding,
    check_bounds_prop49,
    check_prop43,
    classify,
    compare_with_prediction,
    component_data,
    linearity_case,
    predicted_betti,
    thm45_verdict,
)
from graded_workbench.theory.componentwise import (
    check_truncation_structure,
    componentwise_linear,
    cwl_via_gin_crosscheck,
)
from graded_workbench.theory.models import Classification, CheckResult, CWLReport, GinCrosscheck

log = logging.getLogger(__name__)


@dataclass
class Verification:
    classification: Classification
    cwl: CWLReport
    crosscheck: Optional[GinCrosscheck]
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]


def _result(name: str, ok: bool, details: dict, message: str = "") -> CheckResult:
    return CheckResult(name=name, status="pass" if ok else "fail", details=details, message=message)


def _skipped(name: str, message: str) -> CheckResult:
    return CheckResult(name=name, status="skipped", message=message)


def _almost(cls: Classification) -> bool:
    return cls.status == "AlmostMaximal" and cls.case is not None


# ---- resolution-level identities


def check_euler(analysis: IdealAnalysis) -> CheckResult:
    """Σ (-1)^i β_{i,j} t^{i+j} equals the Hilbert numerator."""
    euler = analysis.betti.euler_numerator()
    ok = euler == analysis.hilbert.numerator
    return _result("euler_identity", ok, {"numerator": analysis.hilbert.numerator_list()})


def check_cancellation(analysis: IdealAnalysis) -> CheckResult:
    ok = analysis.betti.leq(analysis.initial_betti)
    return _result("betti_below_initial", ok, {"initial_betti": analysis.initial_betti.to_json()})


def check_oracle(analysis: IdealAnalysis) -> CheckResult:
    if analysis.oracle_betti is None:
        return _skipped("koszul_oracle", "oracle not requested")
    ok = analysis.oracle_betti == analysis.betti
    return _result("koszul_oracle", ok, {"oracle": analysis.oracle_betti.to_json()})


# ---- classification-level checks


def check_initial_ideal_equivalence(analysis: IdealAnalysis, cls: Classification) -> CheckResult:
    """(deg, depth) test ⟺ initial ideal shape, and reg(R) = deg(uv) - 1."""
    almost = cls.status == "AlmostMaximal"
    shape = cls.u is not None
    ok = almost == shape
    if almost and shape:
        ok = ok and cls.deg_uv is not None and cls.deg_uv - 1 == cls.reg_R
    details = {"almost_maximal": almost, "shape": shape, "u": cls.u, "v": cls.v, "source": cls.shape_source}
    return _result("initial_ideal_equivalence", ok, details)


def check_betti_shape(analysis: IdealAnalysis, cls: Classification) -> CheckResult:
    if not _almost(cls) or cls.predicted is None:
        return _skipped("betti_shape", "not almost maximal")
    problems = compare_with_prediction(analysis.betti, cls.predicted)
    return _result("betti_shape", not problems, {"case": cls.case}, "; ".join(problems))


def check_componentwise_table(analysis: IdealAnalysis, cls: Classification, cwl: CWLReport) -> CheckResult:
    if not _almost(cls) or cls.case != "b" or not cwl.overall:
        return _skipped("componentwise_table", "needs case b with a componentwise linear ideal")
    pred = predicted_betti("b", cls.e, cls.r, cls.reg_R, cwl=True)
    problems = compare_with_prediction(analysis.betti, pred)
    return _result("componentwise_table", not problems, {"predicted": pred.table}, "; ".join(problems))


def check_chi_noether(analysis: IdealAnalysis, cls: Classification) -> CheckResult:
    """χ over a Noether normalization, recovered from χ over S_0."""
    if not _almost(cls):
        return _skipped("chi_over_noether", "not almost maximal")
    computed = chi_over_noether(analysis.betti, cls.e)
    expected = chi_noether_pattern(cls.e, cls.r, cls.reg_R, len(computed))
    printed = chi_noether_pattern(cls.e, cls.r, cls.reg_R, len(computed), printed_value=True)
    degree = sum((-1) ** m * c for m, c in enumerate(computed))
    details = {"computed": computed, "expected": expected, "printed": printed, "degree": degree}
    if computed != expected or degree != cls.deg:
        return _result("chi_over_noether", False, details)
    if computed != printed:
        return CheckResult(
            name="chi_over_noether",
            status="flagged",
            details=details,
            message=f"entry at reg+1 is (-1)^reg = {expected[cls.reg_R + 1]}, not 1",
        )
    return _result("chi_over_noether", True, details)


def check_chi_closed_form(analysis: IdealAnalysis, cls: Classification) -> CheckResult:
    if not _almost(cls):
        return _skipped("chi_closed_form", "not almost maximal")
    computed = chi_statistics(analysis.betti)
    closed = chi_closed_form(cls.e, cls.r, cls.reg_R, len(computed))
    printed = chi_closed_form(cls.e, cls.r, cls.reg_R, len(computed), printed_sign=True)
    details = {"computed": computed, "closed_form": closed, "printed_sign": printed}
    if computed != closed:
        return _result("chi_closed_form", False, details)
    if computed != printed:
        return CheckResult(
            name="chi_closed_form",
            status="flagged",
            details=details,
            message="sign (-1)^(reg-r) on the last summand disagrees; (-1)^reg matches",
        )
    return _result("chi_closed_form", True, details)


def check_hilbert_polynomial(analysis: IdealAnalysis, cls: Classification) -> CheckResult:
    if not _almost(cls) or analysis.hilbert_poly is None:
        return _skipped("hilbert_polynomial", "not almost maximal")
    expected = cor34_hilbert_polynomial(cls.e, cls.r, cls.reg_R, cls.n)
    genus = genus_closed_forms(cls.e, cls.r, cls.reg_R, cls.n)
    details = {"computed": str(analysis.hilbert_poly), "expected": str(expected), "genus": genus.to_dict()}
    if analysis.hilbert_poly != expected:
        return _result("hilbert_polynomial", False, details)
    if genus.flagged:
        return CheckResult(
            name="hilbert_polynomial",
            status="flagged",
            details=details,
            message=f"genus closed form {genus.closed_form} differs from (-1)^n (P(0) - 1) = {genus.direct}",
        )
    return _result("hilbert_polynomial", True, details)


def check_componentwise_verdict(analysis: IdealAnalysis, cls: Classification, cwl: CWLReport) -> CheckResult:
    if not _almost(cls):
        return _skipped("componentwise_verdict", "not almost maximal")
    beta = analysis.betti[(1, cls.r + 1)]
    formula = thm45_verdict(cls.reg_R, cls.r, beta)
    details = {"formula": formula, "direct": cwl.overall, "case": cwl.linearity_case, "beta_1_rp1": beta}
    if formula != cwl.overall:
        err = TheoremViolation("componentwise_verdict", f"formula says {formula}, direct computation {cwl.overall}")
        log.error(str(err))
        return _result("componentwise_verdict", False, details, str(err))
    return _result("componentwise_verdict", True, details)


def check_gin_crosscheck(cwl: CWLReport, crosscheck: Optional[GinCrosscheck]) -> CheckResult:
    if crosscheck is None:
        return _skipped("gin_crosscheck", "Gin not computed")
    ok = crosscheck.verdict == cwl.overall
    return _result("gin_crosscheck", ok, crosscheck.model_dump())


def check_components(
    analysis: IdealAnalysis, cls: Classification, component: Optional[ComponentData]
) -> list[CheckResult]:
    if not _almost(cls) or component is None:
        return [_skipped("component_linearity", "not almost maximal"), _skipped("linear_acm_embedding", "not almost maximal")]
    matrix = analysis.gin.matrix if analysis.gin is not None else None
    linearity = check_prop43(analysis.ideal, cls.r, analysis.betti, matrix=matrix, component=component)
    if linearity.case == "not-applicable":
        first = _skipped("component_linearity", f"β_1,{cls.r + 1} = {linearity.beta_1_rp1}")
    else:
        first = _result("component_linearity", linearity.holds, linearity.model_dump())
    embedding = check_acm_embedding(analysis.ideal, cls.e, cls.r, analysis.dims, linearity.case, component=component)
    if not embedding.applicable:
        second = _skipped("linear_acm_embedding", f"case {linearity.case}")
    else:
        second = _result("linear_acm_embedding", embedding.holds, embedding.model_dump())
    return [first, second]


def check_bounds(analysis: IdealAnalysis, cls: Classification) -> CheckResult:
    if not _almost(cls):
        return _skipped("regularity_bounds", "not almost maximal")
    applicable = not analysis.ideal.is_monomial()
    report = check_bounds_prop49(cls.e, cls.r, cls.reg_R, cls.deg, applicable=applicable)
    if not applicable:
        return CheckResult(
            name="regularity_bounds",
            status="skipped",
            details=report.model_dump(),
            message="bounds apply to varieties, not monomial subschemes",
        )
    return _result("regularity_bounds", report.holds, report.model_dump())


def check_truncation(analysis: IdealAnalysis, cls: Classification) -> CheckResult:
    if not _almost(cls):
        return _skipped("truncation_structure", "not almost maximal")
    report = check_truncation_structure(analysis.ideal, cls.r, analysis.betti)
    if not report.applicable:
        return _skipped("truncation_structure", "generators outside degrees r+1 and reg(I)")
    details = {"per_step": {str(k): v for k, v in report.per_step.items()}, "reg_ideal": report.reg_ideal}
    return _result("truncation_structure", report.holds, details)


def verify(analysis: IdealAnalysis, audit: bool = False) -> Verification:
    """Componentwise linearity, classification and every theorem check."""
    cwl = componentwise_linear(analysis.ideal, analysis.betti, audit=audit)
    crosscheck = None
    if analysis.gin is not None:
        crosscheck = cwl_via_gin_crosscheck(analysis.ideal, None, analysis.betti, gin=analysis.gin)
    cls = classify(analysis, cwl=cwl.overall)
    if _almost(cls):
        cwl.linearity_case = linearity_case(cls.reg_R, cls.r, analysis.betti[(1, cls.r + 1)])
    component = component_data(analysis.ideal, cls.r + 1) if _almost(cls) else None

    runners: list[Callable[[], CheckResult]] = [
        lambda: check_euler(analysis),
        lambda: check_cancellation(analysis),
        lambda: check_oracle(analysis),
        lambda: check_initial_ideal_equivalence(analysis, cls),
        lambda: check_betti_shape(analysis, cls),
        lambda: check_componentwise_table(analysis, cls, cwl),
        lambda: check_chi_noether(analysis, cls),
        lambda: check_chi_closed_form(analysis, cls),
        lambda: check_hilbert_polynomial(analysis, cls),
        lambda: check_componentwise_verdict(analysis, cls, cwl),
        lambda: check_gin_crosscheck(cwl, crosscheck),
        lambda: check_bounds(analysis, cls),
        lambda: check_truncation(analysis, cls),
    ]
    checks = [run() for run in runners]
    checks.extend(check_components(analysis, cls, component))
    for c in checks:
        if c.status == "fail":
            log.error(f"check {c.name} failed: {c.message}")
        else:
            log.debug(f"check {c.name}: {c.status}")
    return Verification(classification=cls, cwl=cwl, crosscheck=crosscheck, checks=checks)
