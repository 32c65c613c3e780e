from typing import Dict, List, Tuple
from pydantic import BaseModel, ConfigDict, Field, model_validator

TABLE_KS = (1, 3, 5)


class DriftQuery(BaseModel):
    """Expected one-step decrease of the OneMax distance s for RLS_k on n bits."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    k: int = Field(ge=1)
    s: int = Field(ge=0)

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.k > self.n:
            raise ValueError(f"k must not exceed n (k={self.k}, n={self.n})")
        if self.s > self.n:
            raise ValueError(f"s must not exceed n (s={self.s}, n={self.n})")
        return self


class RaceModel(BaseModel):
    """Two processes starting at 0; A gains alpha w.p. p_a per step, B gains beta w.p. p_b."""
    model_config = ConfigDict(frozen=True)

    p_a: float = Field(ge=0.0, le=1.0)
    p_b: float = Field(ge=0.0, le=1.0)
    alpha: float = Field(ge=0.0)
    beta: float = Field(ge=0.0)
    t: int = Field(ge=0)

    @model_validator(mode="after")
    def _check_steps(self):
        if self.alpha + self.beta <= 0:
            raise ValueError("alpha + beta must be positive")
        return self

    @property
    def q(self) -> float:
        """Probability that exactly one process progresses in a step."""
        return self.p_a * (1 - self.p_b) + (1 - self.p_a) * self.p_b

    @property
    def q_a(self) -> float:
        q = self.q
        return self.p_a * (1 - self.p_b) / q if q > 0 else 0.5

    @property
    def q_b(self) -> float:
        q = self.q
        return self.p_b * (1 - self.p_a) / q if q > 0 else 0.5


class RecurrenceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    i: int
    bounds: Dict[int, Tuple[float, float]]


class RecurrenceTable(BaseModel):
    """Leading constants [c_l, c_u] of the fixed-budget distance bounds per period and k."""
    model_config = ConfigDict(frozen=True)

    periods: int
    precision: str = "double"
    rows: List[RecurrenceRow]

    def interval(self, i: int, k: int) -> Tuple[float, float]:
        return self.rows[i].bounds[k]

    def gaps(self, i: int = -1) -> Dict[str, float]:
        """Separation between neighbouring intervals at period i (default: last)."""
        row = self.rows[i]
        return {
            "1-3": row.bounds[3][0] - row.bounds[1][1],
            "3-5": row.bounds[5][0] - row.bounds[3][1],
        }

    def csv_header(self) -> List[str]:
        header = ["i"]
        for k in TABLE_KS:
            header += [f"c_l_{k}", f"c_u_{k}"]
        return header

    def csv_rows(self) -> List[List[str]]:
        out = []
        for row in self.rows:
            cells = [str(row.i)]
            for k in TABLE_KS:
                lo, hi = row.bounds[k]
                cells += [repr(lo), repr(hi)]
            out.append(cells)
        return out
