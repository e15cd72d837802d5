from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .models import AlphaMode, RowFlag, ZeroMethod


# --- Scenario Schemas ---
class TargetSpec(BaseModel):
    form: str
    degree: int = Field(..., ge=1)


class ScenarioSpec(BaseModel):
    """A scenario file: the curve, the target hypersurfaces and the radii to evaluate on."""

    n: int = Field(..., ge=1)
    curve: List[str]
    targets: List[TargetSpec]
    epsilon: Union[str, float] = "1/2"
    r_grid: List[float]
    alpha_override: Optional[int] = None
    M_override: Optional[int] = Field(None, ge=1)
    tol: Optional[float] = Field(None, gt=0)
    description: Optional[str] = None

    @field_validator("r_grid")
    @classmethod
    def check_grid(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("r_grid must not be empty")
        if any(r <= 0 for r in value) or any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("r_grid must be positive and strictly ascending")
        return value

    @model_validator(mode="after")
    def check_shape(self) -> "ScenarioSpec":
        if len(self.curve) != self.n + 1:
            raise ValueError(f"curve needs n+1 = {self.n + 1} components, got {len(self.curve)}")
        if not self.targets:
            raise ValueError("at least one target is required")
        return self


# --- Report Schemas ---
class SmtRow(BaseModel):
    r: float
    T: float
    N_truncated: List[float]
    rhs: float
    lhs: float
    margin: float
    equalized_rhs: float
    flags: List[RowFlag] = []

    model_config = ConfigDict(from_attributes=True)


class SmtMeta(BaseModel):
    n: int
    q: int
    d: int
    epsilon: str
    alpha: int
    alpha_mode: AlphaMode
    truncation: int
    truncation_source: str
    m_exact: int
    m_closed_form: int
    closed_form_exceeded: bool
    targets: List[str]
    curve: List[str]


class SmtReport(BaseModel):
    meta: SmtMeta
    rows: List[SmtRow]


class TargetValuesOut(BaseModel):
    m: float
    n: int
    n_truncated: int
    N: float
    N_truncated: float
    residual: float

    model_config = ConfigDict(from_attributes=True)


class NevanlinnaRowOut(BaseModel):
    r: float
    r_used: float
    T: float
    targets: List[TargetValuesOut]

    model_config = ConfigDict(from_attributes=True)


class NevanlinnaReport(BaseModel):
    targets: List[str]
    truncation: Optional[int] = None
    rows: List[NevanlinnaRowOut]


class TheoremRRow(BaseModel):
    r: float
    proximity_max: float
    N_W: float
    lhs: float
    rhs: float
    difference: float

    model_config = ConfigDict(from_attributes=True)


class TheoremRReport(BaseModel):
    m: int
    forms: List[str]
    wronskian: str
    independent_subsets: int
    maximal_subsets: int
    rows: List[TheoremRRow]


class SubsetConstant(BaseModel):
    subset: List[int]
    c1: float


class ProximitySumRow(BaseModel):
    r: float
    r_used: float
    proximity_sum: float
    subset_integral: float
    constant: float
    margin: float
    pointwise_slack: float
    holds: bool


class ProximitySumReport(BaseModel):
    n: int
    q: int
    d: int
    targets: List[str]
    c1: float
    constants: List[SubsetConstant]
    rows: List[ProximitySumRow]


# --- Request / Response Schemas ---
class BoundRequest(BaseModel):
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    epsilon: Union[str, float]
    alpha: Optional[int] = None
    gammas: Optional[List[str]] = None


class BoundResponse(BaseModel):
    n: int
    d: int
    epsilon: str
    alpha: int
    alpha_mode: AlphaMode
    m_exact: int
    m_closed_form: int
    closed_form_exceeded: bool
    delta_lower: str
    delta: Optional[int] = None
    ratio: Optional[str] = None


class FiltrationRequest(BaseModel):
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    alpha: int = Field(..., ge=0)
    gammas: Optional[List[str]] = None  # defaults to x_j^d, j = 1..n


class FiltrationLevelOut(BaseModel):
    index: List[int]
    dim: int
    delta: int


class FiltrationResponse(BaseModel):
    gammas: List[str]
    alpha: int
    dimension: int
    big_delta: Optional[int] = None
    delta_lower: str
    levels: List[FiltrationLevelOut]
    basis: List[str]


class ZerosRequest(BaseModel):
    expr: str
    radius: float = Field(..., gt=0)
    tol: Optional[float] = Field(None, gt=0)


class ZeroOut(BaseModel):
    re: float
    im: float
    multiplicity: int
    certified_radius: float


class ZerosResponse(BaseModel):
    expr: str
    radius: float
    method: ZeroMethod
    winding: int
    zeros: List[ZeroOut]


# --- Lemma suite ---
class LemmaCase(BaseModel):
    block: str
    case: str
    passed: bool
    detail: str = ""


class LemmaSummary(BaseModel):
    cases: List[LemmaCase] = []

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c.passed)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def by_block(self) -> Dict[str, List[LemmaCase]]:
        blocks: Dict[str, List[LemmaCase]] = {}
        for case in self.cases:
            blocks.setdefault(case.block, []).append(case)
        return blocks
