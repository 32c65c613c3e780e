"""Ridge* and OneMax instances under an XOR shift."""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from paramrls_lab.bitcore import BitString, RngStream
from paramrls_lab.config import SHIFT_STREAM_ID
from paramrls_lab.errors import InvalidArgumentError


class ProblemKind(str, Enum):
    ONEMAX = "onemax"
    RIDGESTAR = "ridgestar"


@dataclass(frozen=True)
class Problem:
    n: int
    kind: ProblemKind
    shift: BitString
    target_k: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError(f"n must be positive, got {self.n}")
        if self.shift.n != self.n:
            raise InvalidArgumentError(f"Shift has length {self.shift.n}, expected {self.n}")
        if not 1 <= self.target_k <= self.n:
            raise InvalidArgumentError(f"target_k must lie in [1, {self.n}], got {self.target_k}")
        object.__setattr__(self, "kind", ProblemKind(self.kind))

    @classmethod
    def identity(cls, kind, n: int, target_k: int = 1) -> "Problem":
        return cls(n=n, kind=ProblemKind(kind), shift=BitString.zeros(n), target_k=target_k)


def make_problem(kind, n: int, shift: str = "identity", master_seed: int = 0, target_k: int = 1) -> Problem:
    """Build a Problem from scenario fields; shift is "identity", "random" or a hex bit string."""
    if shift == "identity":
        a = BitString.zeros(n)
    elif shift == "random":
        a = BitString.random(n, RngStream(master_seed, SHIFT_STREAM_ID))
    else:
        a = BitString.from_hex(shift, n)
    return Problem(n=n, kind=ProblemKind(kind), shift=a, target_k=target_k)


def _check_length(p: Problem, x: BitString) -> None:
    if x.n != p.n:
        raise InvalidArgumentError(f"Length mismatch: problem has n={p.n}, string has {x.n}")


def ridge_value(y: np.ndarray) -> int:
    """Ridge* on an unshifted vector: i for 1^i 0^(n-i), -1 elsewhere."""
    i = int(y.sum(dtype=np.int64))
    if y[:i].all() and not y[i:].any():
        return i
    return -1


def fitness(p: Problem, x: BitString) -> int:
    _check_length(p, x)
    y = x.bits ^ p.shift.bits
    if p.kind is ProblemKind.ONEMAX:
        return int(y.sum(dtype=np.int64))
    return ridge_value(y)


def onemax_optimum(p: Problem) -> BitString:
    """The instance optimum z; OneMax fitness is n - d_H(x, z)."""
    return BitString(p.shift.bits ^ 1)


def distance_to_optimum(p: Problem, x: BitString) -> int:
    """Number of bits still wrong on a OneMax instance."""
    if p.kind is not ProblemKind.ONEMAX:
        raise InvalidArgumentError("distance_to_optimum is defined for OneMax instances only")
    return p.n - fitness(p, x)


def string_at_distance(p: Problem, s: int, rng: RngStream) -> BitString:
    """Uniform random OneMax string with exactly s wrong bits."""
    if p.kind is not ProblemKind.ONEMAX:
        raise InvalidArgumentError("string_at_distance is defined for OneMax instances only")
    if not 0 <= s <= p.n:
        raise InvalidArgumentError(f"s must lie in [0, {p.n}], got {s}")
    wrong = rng.generator.choice(p.n, size=s, replace=False)
    y = np.ones(p.n, dtype=np.uint8)
    y[wrong] = 0
    return BitString(y ^ p.shift.bits)


def initial_solution(p: Problem, rng: RngStream) -> BitString:
    if p.kind is ProblemKind.RIDGESTAR:
        return p.shift
    return BitString.random(p.n, rng)


def reachable_optimum(p: Problem, k: int) -> int:
    if not 1 <= k <= p.n:
        raise InvalidArgumentError(f"k must lie in [1, {p.n}], got {k}")
    if p.kind is ProblemKind.RIDGESTAR:
        return (p.n // k) * k
    return p.n


def is_optimal(p: Problem, x: BitString, k: Optional[int] = None) -> bool:
    k = p.target_k if k is None else k
    return fitness(p, x) == reachable_optimum(p, k)
