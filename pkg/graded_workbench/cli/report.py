"""Run reports: everything `analyze` found about one ideal, as text or JSON."""

import logging
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from graded_workbench.algebra.polynomial import DEGREVLEX, Ideal, OrderSpec
from graded_workbench.settings import WORKBENCH_SEED, WORKBENCH_TRIALS
from graded_workbench.theory.analysis import IdealAnalysis, analyze_ideal
from graded_workbench.theory.checks import Verification, verify
from graded_workbench.theory.models import CheckResult, Classification, CWLReport, GinCrosscheck
from graded_workbench.utils.json_utils import canonical_json
from graded_workbench.utils.text_utils import render_betti_table

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class InputEcho(BaseModel):
    kind: Literal["file", "curve", "ideal"]
    source: str
    variables: List[str]
    generators: List[str]


class InvariantReport(BaseModel):
    num_vars: int
    krull_dim: int
    n: int
    e: int
    degree: int
    depth: int
    pdim: int
    reg: int
    is_cm: bool
    r: Optional[int] = None
    artinian_hilbert: List[int] = Field(default_factory=list)
    hilbert_numerator: List[int]
    reduced_numerator: List[int]
    hilbert_polynomial: Optional[str] = None
    groebner_size: int
    initial_ideal: List[str]
    gin: Optional[List[str]] = None


class BettiReport(BaseModel):
    table: Dict[str, Any]
    text: str
    initial: Dict[str, Any]
    oracle: Optional[Dict[str, Any]] = None


class CWLSection(BaseModel):
    report: CWLReport
    crosscheck: Optional[GinCrosscheck] = None


class RunReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    input: InputEcho
    seed: int
    char: int
    invariants: InvariantReport
    betti: BettiReport
    classification: Classification
    cwl: CWLSection
    checks: List[CheckResult]
    timings: Dict[str, float] = Field(default_factory=dict)

    @property
    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> str:
        return canonical_json(self.model_dump(mode="json", by_alias=True))


def echo_ideal(ideal: Ideal, kind: Literal["file", "curve", "ideal"], source: str) -> InputEcho:
    return InputEcho(
        kind=kind,
        source=source,
        variables=list(ideal.ring.names),
        generators=[g.to_string() for g in ideal.generators],
    )


def invariant_report(analysis: IdealAnalysis) -> InvariantReport:
    dims, inv = analysis.dims, analysis.invariants
    ring = analysis.ideal.ring
    return InvariantReport(
        num_vars=analysis.num_vars,
        krull_dim=dims.krull_dim,
        n=dims.n,
        e=dims.codim,
        degree=dims.degree,
        depth=inv.depth,
        pdim=inv.pdim,
        reg=inv.reg,
        is_cm=inv.is_cm,
        r=analysis.r,
        artinian_hilbert=list(analysis.reduction.artinian_hilbert) if analysis.reduction else [],
        hilbert_numerator=analysis.hilbert.numerator_list(),
        reduced_numerator=analysis.hilbert.reduced_list(),
        hilbert_polynomial=str(analysis.hilbert_poly) if analysis.hilbert_poly is not None else None,
        groebner_size=len(analysis.gb),
        initial_ideal=[ring.format_monomial(m) for m in analysis.initial.generators],
        gin=[ring.format_monomial(m) for m in analysis.gin.ideal.generators] if analysis.gin else None,
    )


def build_report(
    echo: InputEcho,
    analysis: IdealAnalysis,
    verification: Verification,
    timings: bool = False,
) -> RunReport:
    bt = analysis.betti
    return RunReport(
        input=echo,
        seed=analysis.seed,
        char=analysis.ideal.ring.p,
        invariants=invariant_report(analysis),
        betti=BettiReport(
            table=bt.to_json(),
            text=render_betti_table(bt),
            initial=analysis.initial_betti.to_json(),
            oracle=analysis.oracle_betti.to_json() if analysis.oracle_betti is not None else None,
        ),
        classification=verification.classification,
        cwl=CWLSection(report=verification.cwl, crosscheck=verification.crosscheck),
        checks=verification.checks,
        timings=dict(sorted(analysis.timings.items())) if timings else {},
    )


def run_analysis(
    ideal: Ideal,
    echo: InputEcho,
    seed: int = WORKBENCH_SEED,
    *,
    order: OrderSpec = DEGREVLEX,
    oracle: bool = False,
    trials: int = WORKBENCH_TRIALS,
    gin: bool = True,
    timings: bool = False,
) -> RunReport:
    """The whole analyze pipeline: invariants, resolution, classification, checks."""
    analysis = analyze_ideal(ideal, seed, order=order, oracle=oracle, trials=trials, gin=gin)
    verification = verify(analysis)
    report = build_report(echo, analysis, verification, timings=timings)
    log.info(f"{len(report.failed)} of {len(report.checks)} checks failed")
    return report


_STATUS = {"pass": "PASS", "fail": "FAIL", "flagged": "FLAG", "skipped": "SKIP"}


def render_text(report: RunReport) -> str:
    inv = report.invariants
    cls = report.classification
    lines = [
        f"input: {report.input.kind} {report.input.source}".rstrip(),
        f"ring: F_{report.char}[{', '.join(report.input.variables)}], seed {report.seed}",
        "",
        f"dim {inv.krull_dim} (n = {inv.n}), codim e = {inv.e}, degree {inv.degree}",
        f"pdim {inv.pdim}, depth {inv.depth}, reg {inv.reg}, {'CM' if inv.is_cm else 'not CM'}",
        f"reduction number r = {inv.r}, Artinian h-vector {tuple(inv.artinian_hilbert)}",
        f"Hilbert numerator {inv.hilbert_numerator}, reduced {inv.reduced_numerator}",
    ]
    if inv.hilbert_polynomial is not None:
        lines.append(f"Hilbert polynomial P(T) = {inv.hilbert_polynomial}")
    if inv.gin is not None:
        lines.append(f"Gin: ({', '.join(inv.gin)})")
    lines += ["", "Betti table of S/I:", report.betti.text.rstrip("\n"), ""]

    status = cls.status + (f" (case {cls.case})" if cls.case else "")
    lines.append(f"classification: {status}")
    if cls.u is not None:
        lines.append(f"  in(I) = (x0..x{cls.e - 1})^{cls.r + 1} + (uv), u = {cls.u}, v = {cls.v} [{cls.shape_source}]")
    if cls.minimal_degree:
        lines.append("  minimal degree")
    if cls.model_reading is not None:
        lines.append(f"  model-ideal formula reading: {cls.model_reading}")
    for d in cls.discrepancies:
        lines.append(f"  discrepancy: {d}")

    cwl = report.cwl.report
    lines.append(f"componentwise linear: {cwl.overall} (case {cwl.linearity_case})")
    for c in cwl.per_degree:
        lines.append(f"  I_<{c.d}>: {c.num_gens} generators, reg {c.reg}, {'linear' if c.linear else 'not linear'}")
    if report.cwl.crosscheck is not None:
        x = report.cwl.crosscheck
        lines.append(f"  Gin cross-check: stable={x.stable}, same Betti table={x.same_betti} (over F_{x.characteristic})")

    lines += ["", "checks:"]
    for c in report.checks:
        suffix = f": {c.message}" if c.message else ""
        lines.append(f"  {_STATUS[c.status]} {c.name}{suffix}")
    if report.timings:
        lines += ["", "timings:"] + [f"  {k}: {v:.3f}s" for k, v in report.timings.items()]
    return "\n".join(lines) + "\n"


def render_report(report: RunReport, fmt: Literal["text", "json"] = "text") -> str:
    if fmt == "json":
        return report.to_json()
    return render_text(report)
