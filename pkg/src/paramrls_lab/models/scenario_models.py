from enum import Enum
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from paramrls_lab.config import DEFAULT_PENALTY
from paramrls_lab.models.tuner_models import Engine, Metric, Operator
from paramrls_lab.problems import ProblemKind


class Mode(str, Enum):
    TUNE = "tune"
    RACE = "race"
    DRIFT = "drift"
    TABLE = "table"
    WALK = "walk"
    RUNTIME = "runtime"


def _lower(value):
    return value.lower() if isinstance(value, str) else value


class ProblemSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: ProblemKind
    n: int = Field(ge=1)
    # "identity", "random" or a hex-encoded bit string of length n
    shift: str = "identity"

    _kind_lower = field_validator("kind", mode="before")(classmethod(lambda cls, v: _lower(v)))


class TunerSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    phi: int = Field(default=1, ge=1)
    operator: Operator = Operator.PM1
    metric: Metric = Metric.F
    # integer literal or expression in n, e.g. "4*n", "floor(0.03*n)", "n*n/4"
    kappa: Union[int, str] = 0
    runs: int = Field(default=1, ge=1)
    evaluations: int = Field(default=1, ge=1)
    penalty: float = Field(default=DEFAULT_PENALTY, ge=1.0)
    engine: Engine = Engine.LEAP
    stall_limit: Optional[int] = Field(default=None, ge=1)

    _enum_lower = field_validator("operator", "metric", "engine", mode="before")(classmethod(lambda cls, v: _lower(v)))


class RaceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    a: int = Field(ge=1)
    b: int = Field(ge=1)

    @model_validator(mode="after")
    def _ordered(self):
        if self.a >= self.b:
            raise ValueError(f"race needs a < b, got a={self.a}, b={self.b}")
        return self


class DriftSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    ks: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5], min_length=1)
    distances: List[int] = Field(min_length=1)
    samples: int = Field(default=10_000, ge=2)


class TableSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    periods: int = Field(default=80, ge=0)
    precision: str = "double"


class WalkSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    phi: int = Field(ge=1)


class RuntimeSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    ks: List[int] = Field(min_length=1)
    # runs are capped at kappa_factor times the expected optimisation time
    kappa_factor: int = Field(default=100, ge=1)
    engine: Engine = Engine.LEAP


_REQUIRED_SECTIONS = {
    Mode.TUNE: ("problem", "tuner"),
    Mode.RACE: ("problem", "tuner", "race"),
    Mode.DRIFT: ("problem", "drift"),
    Mode.TABLE: ("table",),
    Mode.WALK: ("walk",),
    Mode.RUNTIME: ("problem", "runtime"),
}


class Scenario(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    mode: Mode
    problem: Optional[ProblemSpec] = None
    tuner: Optional[TunerSpec] = None
    race: Optional[RaceSpec] = None
    drift: Optional[DriftSpec] = None
    table: Optional[TableSpec] = None
    walk: Optional[WalkSpec] = None
    runtime: Optional[RuntimeSpec] = None
    replicates: int = Field(default=1, ge=1)
    master_seed: int = Field(default=0, ge=0, le=2**64 - 1)

    _mode_lower = field_validator("mode", mode="before")(classmethod(lambda cls, v: _lower(v)))

    @model_validator(mode="after")
    def _sections_for_mode(self):
        for section in _REQUIRED_SECTIONS[self.mode]:
            if getattr(self, section) is None:
                raise ValueError(f"mode '{self.mode.value}' requires a '{section}' section")
        return self
