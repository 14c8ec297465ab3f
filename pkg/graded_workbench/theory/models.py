from typing import Literal, Optional, List, Dict, Any

from pydantic import BaseModel, Field


LinearityCase = Literal["a-i", "a-ii", "a-iii", "b", "not-applicable"]
CheckStatus = Literal["pass", "fail", "flagged", "skipped"]


class DegreeCheck(BaseModel):
    d: int
    num_gens: int
    reg: Optional[int]
    linear: bool


class CWLReport(BaseModel):
    degrees_checked: List[int]
    per_degree: List[DegreeCheck]
    overall: bool
    linearity_case: LinearityCase = "not-applicable"


class GinCrosscheck(BaseModel):
    """Stability of Gin(I) and equality of Betti tables; verdict over F_p only."""
    gin: List[str]
    stable: bool
    same_betti: bool
    verdict: bool
    trials: int
    characteristic: int


class TruncationReport(BaseModel):
    applicable: bool
    r: int
    reg_ideal: int
    per_step: Dict[int, bool] = Field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.per_step.values())


class ConstraintRow(BaseModel):
    """β_{i,r} - β_{i-1,r+1} = difference, with β_{i,r} ≤ cap and β_{i-1,r+1} ≤ shifted_cap."""
    i: int
    difference: int
    cap: int
    shifted_cap: int


class PredictedBetti(BaseModel):
    case: Literal["a", "b", "c"]
    e: int
    r: int
    reg_R: int
    cwl: Optional[bool] = None
    table: Optional[List[List[int]]] = None
    constraints: Optional[List[ConstraintRow]] = None


class Classification(BaseModel):
    status: Literal["MaximalDegreeACM", "AlmostMaximal", "Other"]
    case: Optional[Literal["a", "b", "c"]] = None
    e: int
    r: int
    n: int
    deg: int
    reg_R: int
    depth: int
    pdim: int
    u: Optional[str] = None
    v: Optional[str] = None
    deg_uv: Optional[int] = None
    shape_source: Optional[str] = None
    minimal_degree: bool = False
    model_reading: Optional[Literal["literal", "extended", "both", "neither"]] = None
    predicted: Optional[PredictedBetti] = None
    discrepancies: List[str] = Field(default_factory=list)


class ComponentLinearityReport(BaseModel):
    case: LinearityCase
    beta_1_rp1: int
    component_linear: bool
    component_cm: Optional[bool] = None
    generated_in_single_degree: Optional[bool] = None
    holds: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class ACMEmbeddingReport(BaseModel):
    applicable: bool
    same_dimension: Optional[bool] = None
    acm: Optional[bool] = None
    linear: Optional[bool] = None
    maximal_degree: Optional[bool] = None
    degree: Optional[int] = None

    @property
    def holds(self) -> bool:
        return not self.applicable or bool(self.same_dimension and self.acm and self.linear and self.maximal_degree)


class BoundsReport(BaseModel):
    """3 ≤ r+1 ≤ reg(X) ≤ C(e+r, e) - e, with the slack at each step."""
    applicable: bool
    chain: List[int]
    slack: List[int]
    holds: bool


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    details: Dict[str, Any] = Field(default_factory=dict)
    message: str = ""
