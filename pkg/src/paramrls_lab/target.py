"""RLS_k runs capped at kappa iterations."""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import stats

from paramrls_lab.bitcore import BitString, RngStream, flip_k_distinct
from paramrls_lab.errors import InvalidArgumentError
from paramrls_lab.models.tuner_models import Engine
from paramrls_lab.problems import Problem, ProblemKind, fitness, initial_solution, reachable_optimum


@dataclass(frozen=True, slots=True)
class RunRecord:
    final_fitness: int
    last_improvement_iter: int
    optimum_hit_iter: Optional[int]
    iterations_executed: int
    trajectory: Optional[Tuple[Tuple[int, int], ...]] = None


def _check_k(p: Problem, k: int) -> None:
    if not 1 <= k <= p.n:
        raise InvalidArgumentError(f"k must lie in [1, {p.n}], got {k}")


def rlsk_step(p: Problem, x: BitString, k: int, rng: RngStream) -> Tuple[BitString, int, bool]:
    """One mutation-selection step; returns (new parent, its fitness, accepted)."""
    _check_k(p, k)
    fx = fitness(p, x)
    y = flip_k_distinct(x, k, rng)
    fy = fitness(p, y)
    if fy >= fx:
        return y, fy, True
    return x, fx, False


def run_rlsk(
    p: Problem,
    k: int,
    kappa: int,
    rng: RngStream,
    engine: Engine = Engine.BITWISE,
    record_trajectory: bool = False,
) -> RunRecord:
    """Run RLS_k for at most kappa iterations, stopping at the reachable optimum.

    Offspring replace the parent when their fitness is not worse; only strict increases
    count as improvements. Iterations are 1-based and 0 means "never improved".
    """
    _check_k(p, k)
    if kappa < 0:
        raise InvalidArgumentError(f"kappa must be non-negative, got {kappa}")
    engine = Engine(engine)
    if engine is Engine.BITWISE:
        return _run_bitwise(p, k, kappa, rng, record_trajectory)
    if p.kind is ProblemKind.RIDGESTAR:
        return _run_leap_ridge(p, k, kappa, rng, record_trajectory)
    return _run_leap_onemax(p, k, kappa, rng, record_trajectory)


def _finish(f, last, hit, executed, traj) -> RunRecord:
    return RunRecord(
        final_fitness=f,
        last_improvement_iter=last,
        optimum_hit_iter=hit,
        iterations_executed=executed,
        trajectory=tuple(traj) if traj is not None else None,
    )


def _run_bitwise(p: Problem, k: int, kappa: int, rng: RngStream, record: bool) -> RunRecord:
    x = initial_solution(p, rng)
    fx = fitness(p, x)
    reach = reachable_optimum(p, k)
    traj: Optional[List[Tuple[int, int]]] = [(0, fx)] if record else None
    if fx == reach:
        return _finish(fx, 0, 0, 0, traj)
    last = 0
    for t in range(1, kappa + 1):
        y = flip_k_distinct(x, k, rng)
        fy = fitness(p, y)
        if fy < fx:
            continue
        if fy > fx:
            last = t
            if traj is not None:
                traj.append((t, fy))
        x, fx = y, fy
        if fx == reach:
            return _finish(fx, last, t, t, traj)
    return _finish(fx, last, None, kappa, traj)


def _run_leap_ridge(p: Problem, k: int, kappa: int, rng: RngStream, record: bool) -> RunRecord:
    # From the path start only the k bits after the current prefix improve: one k-subset out of C(n, k).
    gen = rng.generator
    reach = reachable_optimum(p, k)
    leap = 1.0 / math.comb(p.n, k)
    f, t, last = 0, 0, 0
    traj: Optional[List[Tuple[int, int]]] = [(0, 0)] if record else None
    while f < reach and leap > 0.0:
        t_next = t + int(gen.geometric(leap))
        if t_next > kappa:
            break
        t = last = t_next
        f += k
        if traj is not None:
            traj.append((t, f))
    if f == reach:
        return _finish(f, last, t, t, traj)
    return _finish(f, last, None, kappa, traj)


@lru_cache(maxsize=32)
def onemax_step_law(n: int, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-distance improvement probabilities and conditional jump laws for RLS_k on OneMax.

    Returns (p_improve[s], cdf[s, j], jumps[j]) where jumps[j] = 2i - k for the improving
    hypergeometric outcomes i = floor(k/2)+1 .. k.
    """
    hits = np.arange(k // 2 + 1, k + 1)
    s = np.arange(n + 1)
    pmf = stats.hypergeom.pmf(hits[None, :], n, s[:, None], k)
    pmf = np.nan_to_num(pmf)
    p_improve = pmf.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        cdf = np.cumsum(pmf, axis=1) / p_improve[:, None]
    cdf = np.nan_to_num(cdf)
    cdf[:, -1] = 1.0
    return p_improve, cdf, 2 * hits - k


def _run_leap_onemax(p: Problem, k: int, kappa: int, rng: RngStream, record: bool) -> RunRecord:
    gen = rng.generator
    n = p.n
    p_improve, cdf, jumps = onemax_step_law(n, k)
    s = int(gen.binomial(n, 0.5))
    traj: Optional[List[Tuple[int, int]]] = [(0, n - s)] if record else None
    if s == 0:
        return _finish(n, 0, 0, 0, traj)
    t, last = 0, 0
    while s > 0:
        q = float(p_improve[s])
        if q <= 0.0:
            break
        t_next = t + int(gen.geometric(q))
        if t_next > kappa:
            break
        t = last = t_next
        j = int(np.searchsorted(cdf[s], gen.random(), side="right"))
        s -= int(jumps[min(j, len(jumps) - 1)])
        if traj is not None:
            traj.append((t, n - s))
    if s == 0:
        return _finish(n, last, t, t, traj)
    return _finish(n - s, last, None, kappa, traj)


def capped_opt_time(rec: RunRecord, kappa: int, p_penalty: float) -> float:
    """Optimisation time, or p * kappa when the run missed the optimum."""
    if rec.optimum_hit_iter is not None:
        return rec.optimum_hit_iter
    return p_penalty * kappa
