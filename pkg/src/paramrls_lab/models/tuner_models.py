from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from paramrls_lab.config import DEFAULT_PENALTY
from paramrls_lab.problems import Problem


class Operator(str, Enum):
    """Local-search operators on the parameter value."""
    PM1 = "pm1"
    PM12 = "pm12"


class Metric(str, Enum):
    """F: best fitness with last-improvement tie-break. T: penalised capped optimisation time."""
    F = "f"
    T = "t"


class Engine(str, Enum):
    BITWISE = "bitwise"
    LEAP = "leap"


class ParamSpace(BaseModel):
    model_config = ConfigDict(frozen=True)

    phi: int = Field(ge=1)

    def contains(self, theta: int) -> bool:
        return 1 <= theta <= self.phi


class TunerConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: ParamSpace
    operator: Operator = Operator.PM1
    metric: Metric = Metric.F
    kappa: int = Field(ge=0)
    runs: int = Field(default=1, ge=1)
    evaluations: int = Field(default=1, ge=1)
    penalty: float = Field(default=DEFAULT_PENALTY, ge=1.0)
    problem: Problem
    engine: Engine = Engine.LEAP
    # Optional extra stop: this many loop iterations in a row without a change of the active parameter.
    stall_limit: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_space_fits_problem(self):
        if self.space.phi > self.problem.n:
            raise ValueError(f"phi={self.space.phi} exceeds problem size n={self.problem.n}")
        return self


class TunerStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    step: int
    theta: int
    proposed: int
    feasible: bool
    winner: int


class TunerTrace(BaseModel):
    initial_theta: int
    steps: List[TunerStep] = Field(default_factory=list)
    returned_theta: int
    evaluations_used: int = 0

    def first_hit(self, value: int) -> Optional[int]:
        """Loop iteration after which the active parameter first equals value; 0 if it started there."""
        if self.initial_theta == value:
            return 0
        for s in self.steps:
            if s.winner == value:
                return s.step
        return None

    def csv_header(self) -> List[str]:
        return ["step", "theta", "theta_proposed", "feasible", "winner"]

    def csv_rows(self) -> List[List[str]]:
        return [
            [str(s.step), str(s.theta), str(s.proposed), "true" if s.feasible else "false", str(s.winner)]
            for s in self.steps
        ]
