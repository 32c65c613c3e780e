from collections import Counter

import pytest
from scipy import stats

from paramrls_lab.bitcore import RngStream
from paramrls_lab.configurator import (
    _SIDE_THETA,
    _SIDE_THETA2,
    Infeasible,
    compare_runs_f,
    eval_f,
    eval_t,
    evaluate,
    mutate,
    param_rls,
    tuning_budget,
)
from paramrls_lab.errors import InvalidArgumentError
from paramrls_lab.models.tuner_models import Metric, Operator, ParamSpace
from paramrls_lab.target import RunRecord, run_rlsk


def record(fitness=0, last=0, hit=None, executed=10) -> RunRecord:
    return RunRecord(final_fitness=fitness, last_improvement_iter=last, optimum_hit_iter=hit, iterations_executed=executed)


def fixed_runner(by_k):
    """Runner returning a fixed record per parameter value."""
    return lambda k, rng: by_k[k]


def smaller_wins(theta, theta2, cfg, rng):
    return min(theta, theta2)


def always_tie(theta, theta2, cfg, rng):
    return theta if rng.generator.random() < 0.5 else theta2


# --- mutate ---

@pytest.mark.statistical
def test_pm1_moves_up_or_down_evenly():
    stream = RngStream(3)
    space = ParamSpace(phi=5)
    counts = Counter(mutate(3, Operator.PM1, space, stream) for _ in range(20_000))
    assert set(counts) == {2, 4}
    assert abs(counts[2] / 20_000 - 0.5) < 0.02


def test_pm1_at_lower_boundary_can_be_infeasible():
    stream = RngStream(4)
    results = {mutate(1, Operator.PM1, ParamSpace(phi=5), stream) for _ in range(200)}
    assert results == {2, Infeasible(0)}


def test_pm12_at_upper_boundary():
    stream = RngStream(5)
    results = {mutate(5, Operator.PM12, ParamSpace(phi=5), stream) for _ in range(400)}
    assert results == {3, 4, Infeasible(6), Infeasible(7)}


def test_mutate_rejects_theta_outside_space():
    with pytest.raises(InvalidArgumentError):
        mutate(6, Operator.PM1, ParamSpace(phi=5), RngStream(0))


# --- eval-F ---

def test_compare_runs_f_order():
    assert compare_runs_f(record(5), record(3)) == 1
    assert compare_runs_f(record(4, last=2), record(4, last=5)) == 1
    assert compare_runs_f(record(4, last=5), record(4, last=2)) == -1
    assert compare_runs_f(record(4, last=2), record(4, last=2)) == 0


def test_eval_f_prefers_higher_fitness(ridge10, make_cfg):
    cfg = make_cfg(ridge10)
    runner = fixed_runner({1: record(5), 2: record(3)})
    assert eval_f(1, 2, cfg, RngStream(0), runner=runner) == 1
    assert eval_f(2, 1, cfg, RngStream(0), runner=runner) == 1


def test_eval_f_breaks_fitness_ties_by_earlier_improvement(ridge10, make_cfg):
    cfg = make_cfg(ridge10)
    runner = fixed_runner({1: record(4, last=2), 2: record(4, last=5)})
    assert eval_f(1, 2, cfg, RngStream(0), runner=runner) == 1


@pytest.mark.statistical
def test_eval_f_full_tie_is_a_coin_flip(ridge10, make_cfg):
    cfg = make_cfg(ridge10)
    runner = fixed_runner({1: record(4, last=3), 2: record(4, last=3)})
    wins = sum(eval_f(1, 2, cfg, RngStream(8, i), runner=runner) == 1 for i in range(10_000))
    assert abs(wins / 10_000 - 0.5) < 0.02


def test_eval_f_counts_wins_over_runs(ridge10, make_cfg):
    cfg = make_cfg(ridge10, runs=3)
    calls = Counter()

    def runner(k, rng):
        calls[k] += 1
        # theta=1 wins the first run only, theta=2 the other two
        return record(5 if (k == 1 and calls[k] == 1) or (k == 2 and calls[k] > 1) else 3)

    assert eval_f(1, 2, cfg, RngStream(0), runner=runner) == 2
    assert calls == {1: 3, 2: 3}


def test_eval_rejects_values_outside_space(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=3)
    with pytest.raises(InvalidArgumentError):
        eval_f(1, 4, cfg, RngStream(0))


# --- eval-T ---

def test_eval_t_prefers_smaller_capped_time(ridge10, make_cfg):
    cfg = make_cfg(ridge10, kappa=10, penalty=10, metric=Metric.T)
    runner = fixed_runner({1: record(hit=4), 2: record(hit=None)})
    assert eval_t(1, 2, cfg, RngStream(0), runner=runner) == 1
    assert eval_t(2, 1, cfg, RngStream(0), runner=runner) == 1


@pytest.mark.statistical
@pytest.mark.parametrize("hits", [(None, None), (7, 7)])
def test_eval_t_equal_sums_are_coin_flips(ridge10, make_cfg, hits):
    cfg = make_cfg(ridge10, kappa=10, runs=2, metric=Metric.T)
    runner = fixed_runner({1: record(hit=hits[0]), 2: record(hit=hits[1])})
    wins = sum(eval_t(1, 2, cfg, RngStream(9, i), runner=runner) == 1 for i in range(10_000))
    assert abs(wins / 10_000 - 0.5) < 0.02


def test_evaluate_dispatches_on_metric(ridge10, make_cfg):
    # kappa=0: nobody moves, so eval-F ties every run and eval-T sums are equal
    for metric in (Metric.F, Metric.T):
        cfg = make_cfg(ridge10, kappa=0, metric=metric)
        assert evaluate(1, 2, cfg, RngStream(1)) in (1, 2)


def test_large_cutoff_ridge_evaluation_prefers_the_higher_reachable_optimum(ridge10, make_cfg):
    # RLS_1 reaches 10 while RLS_3 can reach at most 9
    cfg = make_cfg(ridge10, kappa=5_000)
    assert all(evaluate(1, 3, cfg, RngStream(12, i)) == 1 for i in range(50))


def test_large_cutoff_ridge_evaluation_is_decided_by_last_improvement(ridge10, make_cfg):
    # k=1 and k=2 both reach 10, so only the time of the last improvement separates them
    cfg = make_cfg(ridge10, kappa=100_000)
    decided = 0
    for i in range(30):
        rng = RngStream(21, i)
        rec = run_rlsk(ridge10, 1, cfg.kappa, rng.child(_SIDE_THETA, 0), engine=cfg.engine)
        rec2 = run_rlsk(ridge10, 2, cfg.kappa, rng.child(_SIDE_THETA2, 0), engine=cfg.engine)
        assert rec.final_fitness == rec2.final_fitness == 10
        if rec.last_improvement_iter == rec2.last_improvement_iter:
            continue
        expected = 1 if rec.last_improvement_iter < rec2.last_improvement_iter else 2
        assert eval_f(1, 2, cfg, rng) == expected
        decided += 1
    assert decided >= 25


@pytest.mark.statistical
@pytest.mark.parametrize("metric", [Metric.F, Metric.T])
def test_swapping_the_pair_mirrors_the_winner_distribution(ridge10, make_cfg, metric):
    cfg = make_cfg(ridge10, kappa=30, metric=metric)
    trials = 4_000
    first = sum(evaluate(1, 2, cfg, RngStream(22, i)) == 1 for i in range(trials))
    swapped = sum(evaluate(2, 1, cfg, RngStream(23, i)) == 1 for i in range(trials))
    assert abs(first - swapped) / trials < 0.05


# --- param_rls ---

def test_singleton_space_never_moves(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=1, evaluations=20)
    trace = param_rls(cfg, RngStream(0))
    assert trace.returned_theta == 1
    assert trace.evaluations_used == 0
    assert len(trace.steps) == 20
    assert not any(s.feasible for s in trace.steps)


def test_trace_records_every_iteration(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=4, evaluations=30, operator=Operator.PM12)
    trace = param_rls(cfg, RngStream(2), evaluator=smaller_wins)
    assert [s.step for s in trace.steps] == list(range(1, 31))
    assert trace.evaluations_used == sum(s.feasible for s in trace.steps)
    for prev, cur in zip(trace.steps, trace.steps[1:]):
        assert cur.theta == prev.winner
    assert trace.returned_theta == trace.steps[-1].winner
    for s in trace.steps:
        assert 1 <= s.winner <= 4
        assert s.winner in (s.theta, s.proposed)
        assert s.feasible == (1 <= s.proposed <= 4)


def test_param_rls_is_reproducible(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=4, kappa=200, evaluations=15)
    assert param_rls(cfg, RngStream(77)) == param_rls(cfg, RngStream(77))


def test_stall_limit_stops_early(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=5, evaluations=100, stall_limit=3)
    trace = param_rls(cfg, RngStream(1), evaluator=lambda a, b, c, r: a)
    assert len(trace.steps) == 3
    assert trace.returned_theta == trace.initial_theta


@pytest.mark.statistical
def test_rigged_smaller_wins_returns_one(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=10, evaluations=400)
    returned = [param_rls(cfg, RngStream(13, i), evaluator=smaller_wins).returned_theta for i in range(1_000)]
    assert returned.count(1) >= 990


@pytest.mark.statistical
def test_rigged_ties_return_uniform_values(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=5, evaluations=200)
    counts = Counter(param_rls(cfg, RngStream(14, i), evaluator=always_tie).returned_theta for i in range(2_000))
    assert set(counts) == {1, 2, 3, 4, 5}
    assert stats.chisquare([counts[k] for k in range(1, 6)]).pvalue > 0.01


def test_first_hit(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=6, evaluations=60)
    trace = param_rls(cfg, RngStream(4), evaluator=smaller_wins)
    hit = trace.first_hit(1)
    if trace.initial_theta == 1:
        assert hit == 0
    else:
        assert trace.steps[hit - 1].winner == 1
        assert all(s.winner != 1 for s in trace.steps[: hit - 1])
    assert trace.first_hit(7) is None


def test_trace_csv(ridge10, make_cfg):
    cfg = make_cfg(ridge10, phi=1, evaluations=2)
    trace = param_rls(cfg, RngStream(0))
    assert trace.csv_header() == ["step", "theta", "theta_proposed", "feasible", "winner"]
    assert trace.csv_rows()[0][0] == "1"
    assert trace.csv_rows()[0][3] == "false"


def test_tuning_budget(ridge10, make_cfg):
    cfg = make_cfg(ridge10, kappa=25, runs=4, evaluations=10)
    assert tuning_budget(cfg) == 10 * 25 * 4
    assert tuning_budget(cfg, instances=3) == 3 * 10 * 25 * 4


def test_config_rejects_phi_above_n(ridge10, make_cfg):
    with pytest.raises(ValueError):
        make_cfg(ridge10, phi=11)
