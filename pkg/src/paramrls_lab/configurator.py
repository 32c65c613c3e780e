"""ParamRLS: random local search over the parameter k of RLS_k, with eval-F and eval-T comparisons."""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

from paramrls_lab.bitcore import RngStream
from paramrls_lab.errors import InvalidArgumentError
from paramrls_lab.models.tuner_models import (
    Metric,
    Operator,
    ParamSpace,
    TunerConfig,
    TunerStep,
    TunerTrace,
)
from paramrls_lab.target import RunRecord, capped_opt_time, run_rlsk

logger = logging.getLogger("paramrls-lab.configurator")

_DELTAS = {
    Operator.PM1: (-1, 1),
    Operator.PM12: (-2, -1, 1, 2),
}

# Sub-stream keys below an evaluation's RngStream.
_SIDE_THETA, _SIDE_THETA2, _TIE_BREAK = 0, 1, 2
# Sub-stream keys below a tuner replicate's RngStream.
_TUNER_OWN, _TUNER_EVALS = 0, 1

Runner = Callable[[int, RngStream], RunRecord]
Evaluator = Callable[[int, int, TunerConfig, RngStream], int]


@dataclass(frozen=True)
class Infeasible:
    """A mutation that stepped outside [1, phi]."""
    proposed: int


def mutate(theta: int, op: Operator, space: ParamSpace, rng: RngStream) -> Union[int, Infeasible]:
    if not space.contains(theta):
        raise InvalidArgumentError(f"theta={theta} outside [1, {space.phi}]")
    deltas = _DELTAS[Operator(op)]
    proposed = theta + deltas[int(rng.generator.integers(len(deltas)))]
    if space.contains(proposed):
        return proposed
    return Infeasible(proposed)


def _check_pair(theta: int, theta2: int, cfg: TunerConfig) -> None:
    for value in (theta, theta2):
        if not cfg.space.contains(value):
            raise InvalidArgumentError(f"parameter {value} outside [1, {cfg.space.phi}]")


def _default_runner(cfg: TunerConfig) -> Runner:
    def run(k: int, rng: RngStream) -> RunRecord:
        return run_rlsk(cfg.problem, k, cfg.kappa, rng, engine=cfg.engine)
    return run


def _coin(theta: int, theta2: int, rng: RngStream) -> int:
    return theta if rng.child(_TIE_BREAK).generator.random() < 0.5 else theta2


def compare_runs_f(rec: RunRecord, rec2: RunRecord) -> int:
    """+1 if rec wins, -1 if rec2 wins, 0 for a full tie (fitness, then earlier last improvement)."""
    if rec.final_fitness != rec2.final_fitness:
        return 1 if rec.final_fitness > rec2.final_fitness else -1
    if rec.last_improvement_iter != rec2.last_improvement_iter:
        return 1 if rec.last_improvement_iter < rec2.last_improvement_iter else -1
    return 0


def eval_f(theta: int, theta2: int, cfg: TunerConfig, rng: RngStream, runner: Optional[Runner] = None) -> int:
    _check_pair(theta, theta2, cfg)
    run = runner or _default_runner(cfg)
    wins = wins2 = 0
    for j in range(cfg.runs):
        outcome = compare_runs_f(run(theta, rng.child(_SIDE_THETA, j)), run(theta2, rng.child(_SIDE_THETA2, j)))
        if outcome > 0:
            wins += 1
        elif outcome < 0:
            wins2 += 1
    if wins != wins2:
        return theta if wins > wins2 else theta2
    return _coin(theta, theta2, rng)


def eval_t(theta: int, theta2: int, cfg: TunerConfig, rng: RngStream, runner: Optional[Runner] = None) -> int:
    _check_pair(theta, theta2, cfg)
    run = runner or _default_runner(cfg)
    time = time2 = 0.0
    for j in range(cfg.runs):
        time += capped_opt_time(run(theta, rng.child(_SIDE_THETA, j)), cfg.kappa, cfg.penalty)
        time2 += capped_opt_time(run(theta2, rng.child(_SIDE_THETA2, j)), cfg.kappa, cfg.penalty)
    if time != time2:
        return theta if time < time2 else theta2
    return _coin(theta, theta2, rng)


def evaluate(theta: int, theta2: int, cfg: TunerConfig, rng: RngStream) -> int:
    """Dispatch to eval_f or eval_t according to the configured metric."""
    if cfg.metric is Metric.F:
        return eval_f(theta, theta2, cfg, rng)
    return eval_t(theta, theta2, cfg, rng)


def param_rls(cfg: TunerConfig, rng: RngStream, evaluator: Optional[Evaluator] = None) -> TunerTrace:
    """Run ParamRLS for cfg.evaluations loop iterations.

    Infeasible proposals keep the active parameter and use no target runs; they are still
    recorded in the trace and still count as a loop iteration.
    """
    compare = evaluator or evaluate
    own = rng.child(_TUNER_OWN)
    theta = int(own.generator.integers(1, cfg.space.phi + 1))
    initial = theta
    steps = []
    used = 0
    unchanged = 0
    for step in range(1, cfg.evaluations + 1):
        proposal = mutate(theta, cfg.operator, cfg.space, own)
        if isinstance(proposal, Infeasible):
            steps.append(TunerStep(step=step, theta=theta, proposed=proposal.proposed, feasible=False, winner=theta))
            winner = theta
        else:
            winner = compare(theta, proposal, cfg, rng.child(_TUNER_EVALS, step))
            used += 1
            steps.append(TunerStep(step=step, theta=theta, proposed=proposal, feasible=True, winner=winner))
        unchanged = unchanged + 1 if winner == theta else 0
        theta = winner
        if cfg.stall_limit is not None and unchanged >= cfg.stall_limit:
            logger.debug(f"Stopping after {step} iterations without a change of theta={theta}.")
            break
    return TunerTrace(initial_theta=initial, steps=steps, returned_theta=theta, evaluations_used=used)


def tuning_budget(cfg: TunerConfig, instances: int = 1) -> int:
    """Total target iterations granted: T * |instances| * kappa * r."""
    return cfg.evaluations * instances * cfg.kappa * cfg.runs
