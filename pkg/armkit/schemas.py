from datetime import datetime
from typing import List, Optional, Dict, Any
from pydantic import BaseModel, Field, model_validator
from enum import Enum


class Outcome(str, Enum):
    """How a run ended."""
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    OUTPUT = "output"
    FUEL_EXHAUSTED = "fuel_exhausted"


class RunResult(BaseModel):
    """Outcome of one machine run with exact step accounting."""
    outcome: Outcome
    det_steps: int = 0
    weak_steps: Optional[int] = None
    strong_steps: Optional[int] = None
    explored: int = 0
    output: Optional[str] = None

    @model_validator(mode="after")
    def _weak_not_above_strong(self):
        if self.weak_steps is not None and self.strong_steps is not None:
            if self.weak_steps > self.strong_steps:
                raise ValueError("weak_steps must not exceed strong_steps")
        return self

    @property
    def accepted(self) -> bool:
        return self.outcome == Outcome.ACCEPTED


class RelationReport(BaseModel):
    """Result of validate_relation; bound None means unbounded."""
    wellformed: bool
    bound: Optional[int] = None

    @property
    def bounded(self) -> bool:
        return self.bound is not None


class StepSample(BaseModel):
    n: int
    steps_med: float
    steps_min: int
    steps_max: int
    weak_med: Optional[float] = None
    strong_med: Optional[float] = None
    meta: Dict[str, Any] = Field(default_factory=dict)


class StepProfile(BaseModel):
    """Measured (size, steps) samples of one program."""
    program: str = ""
    generator: str = ""
    samples: List[StepSample]

    @model_validator(mode="after")
    def _sizes_increase(self):
        sizes = [s.n for s in self.samples]
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sample sizes must be strictly increasing")
        if any(s.steps_min < 1 for s in self.samples):
            raise ValueError("every sample needs at least one step")
        return self


class GrowthModel(str, Enum):
    CONST = "const"
    LOG = "log n"
    N_OVER_LOG = "n/log n"
    LINEAR = "n"
    N_LOG_N = "n log n"
    QUADRATIC = "n^2"
    CUBIC = "n^3"
    POLYLOG3 = "polylog-deg3"


class GrowthFit(BaseModel):
    model: GrowthModel
    a: float
    b: float
    residual: float
    residuals: Dict[str, float] = Field(default_factory=dict)


class Mismatch(BaseModel):
    instance: str
    expected: Any = None
    got: Any = None


class VerificationReport(BaseModel):
    stdlib_id: str
    checked: int = 0
    mismatches: List[Mismatch] = Field(default_factory=list)
    fuel_exhausted: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.fuel_exhausted


# ---------- HTTP request bodies ----------

class RunRequest(BaseModel):
    program: Optional[str] = None
    stdlib_id: Optional[str] = Field(default=None, alias="stdlibId")
    input: str = ""
    fuel: Optional[int] = None
    seed: int = 0

    class Config:
        populate_by_name = True


class VerifyRequest(BaseModel):
    stdlib_id: str = Field(alias="stdlibId")
    count: int = 20
    max_size: int = Field(default=8, alias="maxSize")

    class Config:
        populate_by_name = True


class FitRequest(BaseModel):
    samples: List[StepSample]


class ProfileCreate(BaseModel):
    profile: StepProfile
    fit: bool = True


class StoredProfile(BaseModel):
    id: int
    profile: StepProfile
    fit: Optional[GrowthFit] = None
    created_at: Optional[datetime] = None
