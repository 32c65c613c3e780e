"""Replicated experiments: races, tuning runs, drift checks, recurrence tables, walks and Ridge* runtimes.

Replicate i draws from RngStream(master_seed, i), so a report depends only on the scenario,
never on the worker count or on scheduling order.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from paramrls_lab._version import __version__
from paramrls_lab.bitcore import RngStream
from paramrls_lab.configurator import evaluate, param_rls, tuning_budget
from paramrls_lab.errors import LabError, OutOfDomainError, ScenarioError
from paramrls_lab.experiments.report import write_trace, write_trajectory
from paramrls_lab.experiments.scenarios import resolve_problem, resolve_tuner_config
from paramrls_lab.experiments.stats import chi_square_uniform, wilson_interval
from paramrls_lab.models.report_models import Estimate, Report
from paramrls_lab.models.scenario_models import Mode, Scenario
from paramrls_lab.models.theory_models import DriftQuery, RaceModel
from paramrls_lab.models.tuner_models import Engine, TunerConfig
from paramrls_lab.problems import Problem, ProblemKind, fitness, string_at_distance
from paramrls_lab.target import rlsk_step, run_rlsk
from paramrls_lab.theory import (
    drift_closed,
    drift_exact,
    expected_opt_time_ridge,
    lazy_walk_hitting_times,
    lazy_walk_matrix,
    mean_first_passage_time,
    race_bound,
    recurrence_table,
)

logger = logging.getLogger("paramrls-lab.experiments")

# traces and trajectories are written for at most this many replicates
TRACE_LIMIT = 10

T = TypeVar("T")


def map_replicates(fn: Callable[[int], T], items: Sequence, workers: int = 1) -> List[T]:
    """fn over items, results in item order; workers > 1 uses a process pool."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def _report(sc: Scenario, started: float, **fields) -> Report:
    rep = Report(
        scenario=sc.name,
        mode=sc.mode.value,
        seed=sc.master_seed,
        replicates=sc.replicates,
        version=__version__,
        wall_time=time.perf_counter() - started,
        **fields,
    )
    logger.info(f"Scenario '{sc.name}' ({sc.mode.value}) finished in {rep.wall_time:.2f}s.")
    return rep


def _proportion(name: str, successes: int, total: int) -> Estimate:
    low, high = wilson_interval(successes, total)
    value = successes / total if total else 0.0
    return Estimate(name=name, value=value, ci_low=min(low, value), ci_high=max(high, value))


def _mean(values: Iterable[float]) -> Optional[float]:
    values = list(values)
    return float(np.mean(values)) if values else None


# --- race --------------------------------------------------------------------


def _race_replicate(cfg: TunerConfig, a: int, b: int, seed: int, i: int) -> bool:
    return evaluate(a, b, cfg, RngStream(seed, i)) == a


def _ridge_race_bound(cfg: TunerConfig, a: int, b: int) -> Optional[float]:
    n = cfg.problem.n
    try:
        return race_bound(RaceModel(p_a=1 / math.comb(n, a), p_b=1 / math.comb(n, b), alpha=a, beta=b, t=cfg.kappa))
    except (OutOfDomainError, ValueError):
        return None


def run_race(sc: Scenario, workers: int = 1) -> Report:
    """Independent evaluations between RLS_a and RLS_b; reports how often a wins."""
    if sc.race is None:
        raise ScenarioError("mode 'race' requires a 'race' section", "race")
    started = time.perf_counter()
    cfg = resolve_tuner_config(sc)
    a, b = sc.race.a, sc.race.b
    logger.info(f"Racing RLS_{a} against RLS_{b} on {cfg.problem.kind.value} n={cfg.problem.n} kappa={cfg.kappa} "
                f"({sc.replicates} replicates, seed={sc.master_seed}, workers={workers}).")
    outcomes = map_replicates(partial(_race_replicate, cfg, a, b, sc.master_seed), range(sc.replicates), workers)
    wins = sum(outcomes)
    statistics = {"kappa": float(cfg.kappa)}
    if cfg.problem.kind is ProblemKind.RIDGESTAR:
        statistics["race_bound"] = _ridge_race_bound(cfg, a, b)
    return _report(
        sc,
        started,
        counts={str(a): wins, str(b): sc.replicates - wins},
        estimates=[_proportion(f"p_{a}_wins", wins, sc.replicates)],
        statistics=statistics,
    )


# --- tune --------------------------------------------------------------------


def _tune_replicate(cfg: TunerConfig, seed: int, keep_trace: bool, i: int):
    trace = param_rls(cfg, RngStream(seed, i))
    return trace.returned_theta, trace.first_hit(1), trace.evaluations_used, trace if keep_trace and i < TRACE_LIMIT else None


def run_tune(sc: Scenario, workers: int = 1, trace_dir: Optional[Path] = None) -> Report:
    """ParamRLS `replicates` times; histogram of the returned parameter and first hits of k=1."""
    started = time.perf_counter()
    cfg = resolve_tuner_config(sc)
    phi = cfg.space.phi
    logger.info(f"Tuning k in [1, {phi}] on {cfg.problem.kind.value} n={cfg.problem.n} kappa={cfg.kappa} "
                f"metric={cfg.metric.value} ({sc.replicates} replicates, seed={sc.master_seed}, workers={workers}).")
    fn = partial(_tune_replicate, cfg, sc.master_seed, trace_dir is not None)
    results = map_replicates(fn, range(sc.replicates), workers)

    counts = {str(k): 0 for k in range(1, phi + 1)}
    hits, used = [], []
    for i, (returned, hit, evaluations_used, trace) in enumerate(results):
        counts[str(returned)] += 1
        used.append(evaluations_used)
        if hit is not None:
            hits.append(hit)
        if trace is not None:
            write_trace(trace, Path(trace_dir) / f"{sc.name}_trace_{i:05d}")

    chi2, chi2_p = chi_square_uniform(list(counts.values()))
    statistics = {
        "kappa": float(cfg.kappa),
        "chi_square": chi2,
        "chi_square_p": chi2_p,
        "theta1_hit_rate": len(hits) / sc.replicates,
        "mean_first_hit_theta1": _mean(hits),
        "mean_evaluations_used": _mean(used),
        "tuning_budget": float(tuning_budget(cfg)),
    }
    return _report(
        sc,
        started,
        counts=counts,
        estimates=[_proportion("p_returned_k1", counts["1"], sc.replicates)],
        statistics=statistics,
    )


# --- drift -------------------------------------------------------------------


def _drift_point(p: Problem, samples: int, seed: int, point: Tuple[int, int]) -> Tuple[float, float]:
    k, s = point
    progress = np.empty(samples)
    for j in range(samples):
        rng = RngStream(seed, j).child(k, s)
        x = string_at_distance(p, s, rng.child(0))
        _, fy, _ = rlsk_step(p, x, k, rng.child(1))
        progress[j] = fy - fitness(p, x)
    return float(progress.mean()), float(progress.std(ddof=1) / math.sqrt(samples))


def run_drift(sc: Scenario, workers: int = 1) -> Report:
    """Monte Carlo one-step progress of RLS_k at pinned OneMax distances against the exact drift."""
    started = time.perf_counter()
    p = resolve_problem(sc)
    if p.kind is not ProblemKind.ONEMAX:
        raise ScenarioError("drift mode needs a OneMax problem", "problem.kind")
    for k in sc.drift.ks:
        if not 1 <= k <= p.n:
            raise ScenarioError(f"k={k} outside [1, {p.n}]", "drift.ks")
    for s in sc.drift.distances:
        if not 0 <= s <= p.n:
            raise ScenarioError(f"distance {s} outside [0, {p.n}]", "drift.distances")
    grid = [(k, s) for k in sc.drift.ks for s in sc.drift.distances]
    logger.info(f"Estimating drift on {len(grid)} (k, s) points with {sc.drift.samples} samples each.")
    estimates = map_replicates(partial(_drift_point, p, sc.drift.samples, sc.master_seed), grid, workers)

    rows, worst = [], 0.0
    for (k, s), (mc_mean, mc_stderr) in zip(grid, estimates):
        q = DriftQuery(n=p.n, k=k, s=s)
        exact = drift_exact(q)
        closed = None
        if k <= 5 and s >= k:
            closed = "true" if drift_closed(q) == exact else "false"
        z = (mc_mean - float(exact)) / mc_stderr if mc_stderr > 0 else None
        if z is not None:
            worst = max(worst, abs(z))
        rows.append([k, s, float(exact), str(exact), closed, mc_mean, mc_stderr, z])
    return _report(
        sc,
        started,
        columns=["k", "s", "exact", "exact_fraction", "closed_matches", "mc_mean", "mc_stderr", "z_score"],
        rows=rows,
        statistics={"max_abs_z": worst},
    )


# --- table -------------------------------------------------------------------


def run_table(sc: Scenario) -> Report:
    started = time.perf_counter()
    table = recurrence_table(sc.table.periods, sc.table.precision)
    rows = []
    for row in table.rows:
        cells = [row.i]
        for k in sorted(row.bounds):
            cells += list(row.bounds[k])
        rows.append(cells)
    gaps = table.gaps()
    return _report(
        sc,
        started,
        columns=table.csv_header(),
        rows=rows,
        statistics={"gap_1_3": gaps["1-3"], "gap_3_5": gaps["3-5"]},
    )


# --- walk --------------------------------------------------------------------


def run_walk(sc: Scenario) -> Report:
    """Exact hitting times of state 1 for the lazy walk on {1..phi}, cross-checked by a sparse solve."""
    started = time.perf_counter()
    phi = sc.walk.phi
    exact = lazy_walk_hitting_times(phi)
    solved = mean_first_passage_time(lazy_walk_matrix(phi), 0)
    bound = 2 * phi * phi
    rows = [[x, float(h), str(h), bound, "true" if h <= bound else "false"] for x, h in enumerate(exact, start=1)]
    deviation = max(abs(float(h) - float(v)) for h, v in zip(exact, solved))
    return _report(
        sc,
        started,
        columns=["start", "hitting_time", "hitting_time_exact", "bound", "within_bound"],
        rows=rows,
        statistics={"max_hitting_time": float(max(exact)), "bound": float(bound), "sparse_solve_deviation": deviation},
    )


# --- runtime -----------------------------------------------------------------


def _runtime_replicate(p: Problem, ks: Tuple[int, ...], kappas: Tuple[int, ...], engine: Engine, seed: int, keep: bool, i: int):
    hits, trajectories = [], []
    for k, kappa in zip(ks, kappas):
        rec = run_rlsk(p, k, kappa, RngStream(seed, i).child(k), engine=engine, record_trajectory=keep and i < TRACE_LIMIT)
        hits.append(rec.optimum_hit_iter)
        trajectories.append(rec.trajectory)
    return hits, trajectories


def run_runtime(sc: Scenario, workers: int = 1, trace_dir: Optional[Path] = None) -> Report:
    """Mean Ridge* optimisation time of RLS_k per k against floor(n/k) * C(n, k)."""
    started = time.perf_counter()
    p = resolve_problem(sc)
    if p.kind is not ProblemKind.RIDGESTAR:
        raise ScenarioError("runtime mode needs a Ridge* problem", "problem.kind")
    ks = tuple(sc.runtime.ks)
    try:
        expected = tuple(expected_opt_time_ridge(p.n, k) for k in ks)
    except LabError as exc:
        raise ScenarioError(str(exc), "runtime.ks")
    kappas = tuple(sc.runtime.kappa_factor * e for e in expected)
    logger.info(f"Measuring Ridge* optimisation times for k={list(ks)} at n={p.n} ({sc.replicates} replicates).")
    fn = partial(_runtime_replicate, p, ks, kappas, sc.runtime.engine, sc.master_seed, trace_dir is not None)
    results = map_replicates(fn, range(sc.replicates), workers)

    rows = []
    for col, (k, e) in enumerate(zip(ks, expected)):
        times = [hits[col] for hits, _ in results if hits[col] is not None]
        missed = sc.replicates - len(times)
        mean = _mean(times)
        stderr = float(np.std(times, ddof=1) / math.sqrt(len(times))) if len(times) > 1 else None
        rel_error = abs(mean - e) / e if mean is not None else None
        below_half = sum(1 for t in times if t <= Fraction(e, 2)) / sc.replicates
        above_double = (sum(1 for t in times if t >= 2 * e) + missed) / sc.replicates
        rows.append([k, e, mean, stderr, rel_error, below_half, above_double, missed])
    if trace_dir is not None:
        for i, (_, trajectories) in enumerate(results[:TRACE_LIMIT]):
            for k, traj in zip(ks, trajectories):
                write_trajectory(traj, Path(trace_dir) / f"{sc.name}_k{k}_{i:05d}.csv")
    return _report(
        sc,
        started,
        columns=["k", "expected", "mc_mean", "mc_stderr", "rel_error", "frac_below_half", "frac_above_double", "missed"],
        rows=rows,
    )


def run_scenario(sc: Scenario, workers: int = 1, trace_dir: Optional[Path] = None) -> Report:
    """Dispatch on the scenario mode."""
    if sc.mode is Mode.RACE:
        return run_race(sc, workers)
    if sc.mode is Mode.TUNE:
        return run_tune(sc, workers, trace_dir)
    if sc.mode is Mode.DRIFT:
        return run_drift(sc, workers)
    if sc.mode is Mode.TABLE:
        return run_table(sc)
    if sc.mode is Mode.WALK:
        return run_walk(sc)
    return run_runtime(sc, workers, trace_dir)
