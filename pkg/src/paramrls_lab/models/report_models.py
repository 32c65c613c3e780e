from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, model_validator

Cell = Union[int, float, str, None]


class Estimate(BaseModel):
    name: str
    value: float
    ci_low: float
    ci_high: float
    confidence: float = 0.95

    @model_validator(mode="after")
    def _interval_contains_value(self):
        if not self.ci_low <= self.value <= self.ci_high:
            raise ValueError(f"interval [{self.ci_low}, {self.ci_high}] does not contain {self.value}")
        return self


class Report(BaseModel):
    """Outcome of one scenario.

    `counts` holds per-outcome tallies over replicates (returned k, race winner). Modes without a
    per-replicate outcome (drift, table, walk, runtime) leave it empty and fill `rows` instead.
    """

    scenario: str
    mode: str
    seed: int
    replicates: int
    counts: Dict[str, int] = Field(default_factory=dict)
    estimates: List[Estimate] = Field(default_factory=list)
    statistics: Dict[str, Optional[float]] = Field(default_factory=dict)
    columns: List[str] = Field(default_factory=list)
    rows: List[List[Cell]] = Field(default_factory=list)
    version: str
    # seconds; kept out of serialized output so reruns stay byte-identical
    wall_time: float = Field(default=0.0, exclude=True)

    @model_validator(mode="after")
    def _counts_match_replicates(self):
        if self.counts and sum(self.counts.values()) != self.replicates:
            raise ValueError(f"counts sum to {sum(self.counts.values())}, expected {self.replicates}")
        return self

    def estimate(self, name: str) -> Estimate:
        for e in self.estimates:
            if e.name == name:
                return e
        raise KeyError(name)
