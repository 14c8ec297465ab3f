"""Self-test: the two curve examples, the model-ideal sweep and the oracle comparisons.

Every check has a stable name. Goldens live in GOLDENS and can be overridden
per run, which is how a corrupted fixture is simulated.
"""

import copy
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Any, Callable, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from graded_workbench.algebra.field import child_seeds, make_rng
from graded_workbench.algebra.monomial_ideal import MonomialIdeal, power_of_variables
from graded_workbench.algebra.polynomial import Ideal, Ring
from graded_workbench.algebra.resolution import (
    BettiTable,
    betti_koszul_oracle,
    betti_stable_monomial,
    resolve_betti,
)
from graded_workbench.cli.ideal_file import curve_ideal
from graded_workbench.cli.report import echo_ideal, run_analysis
from graded_workbench.errors import WorkbenchError
from graded_workbench.settings import WORKBENCH_SEED
from graded_workbench.theory.analysis import IdealAnalysis, analyze_ideal
from graded_workbench.theory.checks import Verification, verify
from graded_workbench.theory.classifier import check_bounds_prop49, component_data
from graded_workbench.theory.componentwise import ModelInstance, model_sweep
from graded_workbench.utils.json_utils import canonical_json
from graded_workbench.utils.text_utils import parse_betti_table, render_betti_table

log = logging.getLogger(__name__)

# Goldens were recorded over this prime.
REFERENCE_CHAR = 32003

QUINTIC_FORMS = "s^5, s^4*t+s^3*t^2, s*t^4, t^5"
NONIC_FORMS = "s^9, s^4*t^5+s^5*t^4, s^4*t^5+s^7*t^2, t^9"

GOLDEN_NONIC_TABLE = (
    "  | 0 1 2 3\n"
    "--+--------\n"
    "0 | 1 – – –\n"
    "1 | – – – –\n"
    "2 | – – – –\n"
    "3 | – 5 3 –\n"
    "4 | – – 2 1\n"
)

GOLDENS: Dict[str, Dict[str, Any]] = {
    "quintic": {
        "forms": QUINTIC_FORMS,
        "degree": 5,
        "e": 2,
        "r": 2,
        "depth": 1,
        "reg_R": 3,
        "artinian_hilbert": [1, 2, 3],
        "betti": {0: [1], 2: [0, 4, 3], 3: [0, 1, 2, 1]},
        "hilbert_polynomial": "5*T + 1",
        "genus": {"direct": 0, "closed_form": 1},
        "cwl": True,
        "linearity_case": "a-ii",
        "gin_extra": (2, 0, 2, 0),
    },
    "nonic": {
        "forms": NONIC_FORMS,
        "degree": 9,
        "e": 2,
        "r": 3,
        "depth": 1,
        "reg_R": 4,
        "artinian_hilbert": [1, 2, 3, 4],
        "betti": {0: [1], 3: [0, 5, 3], 4: [0, 0, 2, 1]},
        "hilbert_polynomial": "9*T - 6",
        "genus": {"direct": 7, "closed_form": 8},
        "cwl": False,
        "linearity_case": "b",
        "gin_extra": (3, 0, 2, 0),
    },
    "quintic_components": {
        3: {"row": 2, "values": [4, 3], "cm": True},
        4: {"row": 3, "values": [14, 26, 17, 4], "depth": 0},
    },
    "random_monomial": {"count": 50, "max_vars": 4, "max_gens": 5, "max_degree": 4},
}

# linearity case and almost maximal case of a model ideal, by deg v.
MODEL_CASES = {1: ("a-i", "a"), 2: ("a-ii", "b"), 3: ("a-iii", "c")}


class SelftestCheck(BaseModel):
    name: str
    status: Literal["pass", "fail", "flagged"]
    message: str = ""


class SelftestReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(1, alias="schema")
    seed: int
    char: int
    checks: List[SelftestCheck]

    @property
    def failed(self) -> List[SelftestCheck]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> str:
        return canonical_json(self.model_dump(mode="json", by_alias=True))

    def render_text(self) -> str:
        lines = [f"{c.status.upper():7} {c.name}" + (f": {c.message}" if c.message else "") for c in self.checks]
        passed = sum(c.status == "pass" for c in self.checks)
        flagged = sum(c.status == "flagged" for c in self.checks)
        lines.append(f"{passed} passed, {flagged} flagged, {len(self.failed)} failed")
        return "\n".join(lines) + "\n"


def merged_goldens(overrides: Optional[Dict[str, Dict[str, Any]]] = None) -> Dict[str, Dict[str, Any]]:
    goldens = copy.deepcopy(GOLDENS)
    for key, values in (overrides or {}).items():
        goldens.setdefault(key, {}).update(values)
    return goldens


@dataclass
class _Fixture:
    name: str
    analysis: IdealAnalysis
    verification: Verification


@dataclass
class _Run:
    seed: int
    char: int
    goldens: Dict[str, Dict[str, Any]]
    curves: Dict[str, _Fixture] = field(default_factory=dict)
    models: List[tuple[ModelInstance, _Fixture]] = field(default_factory=list)

    def curve(self, name: str) -> _Fixture:
        if name not in self.curves:
            ideal = curve_ideal(self.goldens[name]["forms"], self.char)
            analysis = analyze_ideal(ideal, self.seed, oracle=True)
            self.curves[name] = _Fixture(name, analysis, verify(analysis))
        return self.curves[name]

    def sweep(self) -> List[tuple[ModelInstance, _Fixture]]:
        if not self.models:
            for inst in model_sweep():
                analysis = analyze_ideal(inst.ideal(self.char), self.seed, gin=False)
                self.models.append((inst, _Fixture(inst.label(), analysis, verify(analysis))))
            log.info(f"model sweep: {len(self.models)} instances")
        return self.models


def _compare(problems: list[str], label: str, got: Any, expected: Any) -> None:
    if got != expected:
        problems.append(f"{label} = {got}, expected {expected}")


def _failed_checks(fx: _Fixture) -> list[str]:
    return [f"{fx.name}: {c.name}" for c in fx.verification.checks if c.status == "fail"]


# ---- curve examples


def _check_curve(run: _Run, name: str) -> list[str]:
    golden = run.goldens[name]
    fx = run.curve(name)
    a, cls = fx.analysis, fx.verification.classification
    problems: list[str] = []
    _compare(problems, "degree", a.dims.degree, golden["degree"])
    _compare(problems, "e", a.e, golden["e"])
    _compare(problems, "r", a.r, golden["r"])
    _compare(problems, "depth", a.invariants.depth, golden["depth"])
    _compare(problems, "reg(R)", a.invariants.reg, golden["reg_R"])
    if a.reduction is not None:
        _compare(problems, "Artinian h", list(a.reduction.artinian_hilbert), golden["artinian_hilbert"])
    _compare(problems, "Betti table", a.betti, BettiTable.from_rows(golden["betti"]))
    _compare(problems, "P(T)", str(a.hilbert_poly), golden["hilbert_polynomial"])
    _compare(problems, "status", cls.status, "AlmostMaximal")
    _compare(problems, "componentwise linear", fx.verification.cwl.overall, golden["cwl"])
    _compare(problems, "linearity case", fx.verification.cwl.linearity_case, golden["linearity_case"])
    problems.extend(_failed_checks(fx))
    return problems


def check_quintic(run: _Run) -> list[str]:
    return _check_curve(run, "quintic")


def check_nonic(run: _Run) -> list[str]:
    problems = _check_curve(run, "nonic")
    if render_betti_table(run.curve("nonic").analysis.betti) != GOLDEN_NONIC_TABLE:
        problems.append("computed nonic table renders differently from the golden text")
    return problems


def check_quintic_components(run: _Run) -> list[str]:
    fx = run.curve("quintic")
    problems: list[str] = []
    for d, golden in run.goldens["quintic_components"].items():
        comp = component_data(fx.analysis.ideal, d)
        row = [comp.betti[(i, golden["row"])] for i in range(1, len(golden["values"]) + 1)]
        _compare(problems, f"I_<{d}> row {golden['row']}", row, golden["values"])
        if "cm" in golden:
            _compare(problems, f"I_<{d}> Cohen-Macaulay", comp.is_cm, golden["cm"])
        if "depth" in golden:
            depth = comp.ideal.ring.nvars - comp.betti.pdim
            _compare(problems, f"I_<{d}> depth", depth, golden["depth"])
    return problems


def check_genus_flags(run: _Run) -> list[str]:
    problems: list[str] = []
    for name in ("quintic", "nonic"):
        result = next(c for c in run.curve(name).verification.checks if c.name == "hilbert_polynomial")
        genus = result.details.get("genus", {})
        expected = run.goldens[name]["genus"]
        _compare(problems, f"{name} genus", {k: genus.get(k) for k in expected}, expected)
        _compare(problems, f"{name} hilbert_polynomial status", result.status, "flagged")
    return problems


def check_quintic_componentwise_table(run: _Run) -> list[str]:
    result = next(c for c in run.curve("quintic").verification.checks if c.name == "componentwise_table")
    return [] if result.status == "pass" else [f"componentwise_table is {result.status}: {result.message}"]


# ---- model sweep


def check_sweep_equivalence(run: _Run) -> list[str]:
    problems = []
    instances = run.sweep()
    if len(instances) < 20:
        problems.append(f"only {len(instances)} model instances")
    for inst, fx in instances:
        cls = fx.verification.classification
        if cls.status != "AlmostMaximal" or cls.u is None:
            problems.append(f"{inst.label()}: status {cls.status}, shape {cls.u is not None}")
        elif cls.deg_uv is None or cls.deg_uv - 1 != cls.reg_R:
            problems.append(f"{inst.label()}: reg(R) = {cls.reg_R}, deg(uv) = {cls.deg_uv}")
    return problems


def check_sweep_betti_shape(run: _Run) -> list[str]:
    problems = []
    for inst, fx in run.sweep():
        cls = fx.verification.classification
        _compare(problems, f"{inst.label()} case", cls.case, MODEL_CASES[inst.deg_v][1])
        shape = next(c for c in fx.verification.checks if c.name == "betti_shape")
        if shape.status != "pass":
            problems.append(f"{inst.label()}: betti_shape {shape.status} {shape.message}")
        if cls.model_reading not in ("extended", "both"):
            problems.append(f"{inst.label()}: model-ideal formula reading {cls.model_reading}")
    return problems


def check_sweep_chi(run: _Run) -> list[str]:
    problems = []
    for inst, fx in run.sweep():
        for c in fx.verification.checks:
            if c.name in ("chi_over_noether", "chi_closed_form", "euler_identity") and c.status == "fail":
                problems.append(f"{inst.label()}: {c.name}")
    return problems


def check_sweep_componentwise(run: _Run) -> list[str]:
    problems = []
    for inst, fx in run.sweep():
        cwl = fx.verification.cwl
        if not cwl.overall:
            problems.append(f"{inst.label()} is not componentwise linear")
        _compare(problems, f"{inst.label()} linearity case", cwl.linearity_case, MODEL_CASES[inst.deg_v][0])
        problems.extend(_failed_checks(fx))
    return problems


# ---- oracles and fixtures


def random_monomial_ideal(rng, max_vars: int, max_gens: int, max_degree: int, p: int) -> Ideal:
    N = int(rng.integers(2, max_vars + 1))
    ring = Ring.standard(N, p)
    gens = []
    for _ in range(int(rng.integers(1, max_gens + 1))):
        exps = [0] * N
        for _ in range(int(rng.integers(1, max_degree + 1))):
            exps[int(rng.integers(0, N))] += 1
        gens.append(ring.monomial(tuple(exps)))
    return Ideal(ring, gens)


def check_oracle_curves(run: _Run) -> list[str]:
    problems = []
    for name in ("quintic", "nonic"):
        a = run.curve(name).analysis
        if a.oracle_betti != a.betti:
            problems.append(f"{name}: Koszul {a.oracle_betti!r} vs Schreyer {a.betti!r}")
        if not a.betti.leq(a.initial_betti):
            problems.append(f"{name}: cancellation fails against in(I)")
    return problems


def check_oracle_random(run: _Run) -> list[str]:
    spec = run.goldens["random_monomial"]
    rng = make_rng(child_seeds(run.seed, 3)[2])
    problems = []
    for k in range(spec["count"]):
        I = random_monomial_ideal(rng, spec["max_vars"], spec["max_gens"], spec["max_degree"], run.char)
        schreyer = resolve_betti(I)
        koszul = betti_koszul_oracle(I, row_cap=schreyer.reg)
        if schreyer != koszul:
            problems.append(f"ideal {k} ({', '.join(g.to_string() for g in I.generators)})")
    return problems


def check_gin_fixtures(run: _Run) -> list[str]:
    problems = []
    for name in ("quintic", "nonic"):
        golden = run.goldens[name]
        a = run.curve(name).analysis
        ring = a.ideal.ring
        expected = power_of_variables(ring, golden["e"], golden["r"] + 1) + MonomialIdeal(ring, [golden["gin_extra"]])
        if a.gin is None:
            problems.append(f"{name}: Gin not computed")
            continue
        _compare(problems, f"{name} Gin", str(a.gin.ideal), str(expected))
        ek = betti_stable_monomial(a.gin.ideal)
        _compare(problems, f"{name} Eliahou-Kervaire table", ek, resolve_betti(a.gin.ideal.to_ideal()))
    return problems


def check_golden_rendering(run: _Run) -> list[str]:
    bt = BettiTable.from_rows(run.goldens["nonic"]["betti"])
    text = render_betti_table(bt)
    problems = []
    if text != GOLDEN_NONIC_TABLE:
        problems.append("rendered nonic table differs from the golden text")
    if BettiTable(parse_betti_table(GOLDEN_NONIC_TABLE)) != bt:
        problems.append("parsing the golden text does not give the nonic table")
    return problems


def check_sharp_bounds(run: _Run) -> list[str]:
    problems = []
    upper_hit = lower_hit = False
    for name in ("quintic", "nonic"):
        cls = run.curve(name).verification.classification
        report = check_bounds_prop49(cls.e, cls.r, cls.reg_R, cls.deg)
        if not report.holds:
            problems.append(f"{name}: chain {report.chain} fails")
        if cls.e == 2 and cls.r == 2 and report.chain[2] == comb(4, 2) - 2:
            upper_hit = True
    for inst, fx in run.sweep():
        cls = fx.verification.classification
        if cls.r >= 2 and cls.reg_R == cls.r:
            lower_hit = True
    if not upper_hit:
        problems.append("no e=2, r=2 fixture reaches reg(X) = C(4,2) - 2")
    if not lower_hit:
        problems.append("no fixture reaches reg(X) = r + 1")
    return problems


def check_determinism(run: _Run) -> list[str]:
    ideal = curve_ideal(run.goldens["quintic"]["forms"], run.char)
    echo = echo_ideal(ideal, "curve", run.goldens["quintic"]["forms"])
    first = run_analysis(ideal, echo, run.seed, gin=False).to_json()
    second = run_analysis(ideal, echo, run.seed, gin=False).to_json()
    return [] if first == second else ["two runs with the same seed differ"]


SELFTEST_CHECKS: Dict[str, Callable[[_Run], list[str]]] = {
    "quintic_end_to_end": check_quintic,
    "quintic_components": check_quintic_components,
    "nonic_end_to_end": check_nonic,
    "genus_closed_form_flag": check_genus_flags,
    "quintic_componentwise_table": check_quintic_componentwise_table,
    "model_sweep_equivalence": check_sweep_equivalence,
    "model_sweep_betti_shape": check_sweep_betti_shape,
    "model_sweep_chi": check_sweep_chi,
    "model_sweep_componentwise": check_sweep_componentwise,
    "oracle_curves": check_oracle_curves,
    "oracle_random_monomial": check_oracle_random,
    "gin_fixtures": check_gin_fixtures,
    "golden_rendering": check_golden_rendering,
    "regularity_bounds_sharp": check_sharp_bounds,
    "deterministic_report": check_determinism,
}


def run_selftest(
    seed: int = WORKBENCH_SEED,
    char: int = REFERENCE_CHAR,
    goldens: Optional[Dict[str, Dict[str, Any]]] = None,
    only: Optional[List[str]] = None,
) -> SelftestReport:
    """Run the named checks (all by default). Off the reference prime, failures are flagged."""
    run = _Run(seed=seed, char=char, goldens=merged_goldens(goldens))
    results: list[SelftestCheck] = []
    for name, check in SELFTEST_CHECKS.items():
        if only is not None and name not in only:
            continue
        try:
            problems = check(run)
        except WorkbenchError as e:
            problems = [f"raised {type(e).__name__}: {e}"]
        if not problems:
            results.append(SelftestCheck(name=name, status="pass"))
        elif char != REFERENCE_CHAR:
            results.append(
                SelftestCheck(name=name, status="flagged", message="characteristic-sensitive: " + "; ".join(problems))
            )
        else:
            results.append(SelftestCheck(name=name, status="fail", message="; ".join(problems)))
        log.info(f"selftest {name}: {results[-1].status}")
    return SelftestReport(seed=seed, char=char, checks=results)
