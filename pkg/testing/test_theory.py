import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from paramrls_lab.errors import OutOfDomainError, ResourceLimitError, UnsupportedParameterError
from paramrls_lab.models.theory_models import TABLE_KS, DriftQuery, RaceModel
from paramrls_lab.theory import (
    RACE_EXACT_MAX_T,
    drift_closed,
    drift_exact,
    drift_upper_bound,
    expected_opt_time_ridge,
    improvement_probability,
    lazy_walk_hitting_time,
    lazy_walk_hitting_times,
    lazy_walk_matrix,
    mean_first_passage_time,
    race_bound,
    race_exact,
    recurrence_table,
    ridge_leap_probability,
    ridge_opt_time_bounds,
)

# (i, {k: (c_l, c_u)}) rows of the published leading-constant table
REFERENCE_ROWS = {
    1: {1: (0.475, 0.47625), 3: (0.4625, 0.4679140625), 5: (0.4375, 0.4581298828125)},
    2: {1: (0.45125, 0.4536875), 3: (0.4304140625, 0.4401256227203369), 5: (0.3956298828125, 0.427167293913044)},
    10: {
        1: (0.29936846961918945, 0.30940004613823),
        3: (0.2785144816915116, 0.3043789342147279),
        5: (0.2576480700149588, 0.3115964049062649),
    },
    40: {
        1: (0.06425607828255167, 0.08604327436842411),
        3: (0.12170639850743073, 0.15698453139178326),
        5: (0.1475788873595957, 0.208471788105288),
    },
    79: {
        1: (0.008692302307901915, 0.033257687192506866),
        3: (0.07067836567176213, 0.10742905096565734),
        5: (0.10822158890977371, 0.1700878480303016),
    },
    80: {
        1: (0.00825768719250682, 0.03284480283288153),
        3: (0.06992905096565742, 0.10669554014031371),
        5: (0.10758784803030164, 0.16946517555735155),
    },
}


def dq(n, k, s):
    return DriftQuery(n=n, k=k, s=s)


# --- drift ---

@pytest.mark.parametrize("query, expected", [
    (dq(10, 3, 0), Fraction(0)),
    (dq(10, 1, 4), Fraction(2, 5)),
    (dq(4, 2, 2), Fraction(1, 3)),
])
def test_drift_exact_examples(query, expected):
    assert drift_exact(query) == expected


@pytest.mark.parametrize("query, expected", [
    (dq(10, 1, 10), Fraction(1)),
    (dq(10, 3, 5), Fraction(2, 3)),
    (dq(10, 5, 5), Fraction(5, 7)),
])
def test_drift_closed_examples(query, expected):
    assert drift_closed(query) == expected


def test_drift_closed_matches_exact_sum():
    cases = 0
    for n in range(1, 31):
        for k in range(1, min(5, n) + 1):
            for s in range(k, n + 1):
                q = dq(n, k, s)
                assert drift_closed(q) == drift_exact(q), (n, k, s)
                cases += 1
    assert cases > 1_500


def test_drift_closed_domain():
    with pytest.raises(UnsupportedParameterError):
        drift_closed(dq(10, 6, 8))
    with pytest.raises(OutOfDomainError):
        drift_closed(dq(10, 3, 2))


def test_drift_ratios_between_neighbouring_k():
    for n in range(5, 31):
        for s in range(5, n + 1):
            assert drift_exact(dq(n, 2, s)) == Fraction(2, 3) * drift_exact(dq(n, 3, s))
            assert drift_exact(dq(n, 4, s)) == Fraction(4, 5) * drift_exact(dq(n, 5, s))


def test_drift_is_monotone_in_distance():
    for n in range(1, 31):
        for k in range(1, min(5, n) + 1):
            values = [drift_exact(dq(n, k, s)) for s in range(k, n + 1)]
            assert values == sorted(values)


def test_even_k_drift_is_dominated_by_next_odd_k():
    for n in range(5, 31):
        for k in (2, 4):
            for s in range(k, n + 1):
                assert drift_exact(dq(n, k, s)) <= drift_exact(dq(n, k + 1, s))


def test_drift_upper_bounds_dominate():
    for n in range(6, 31):
        for k in TABLE_KS:
            for s in range(0, n + 1):
                assert drift_exact(dq(n, k, s)) <= drift_upper_bound(dq(n, k, s))
    with pytest.raises(UnsupportedParameterError):
        drift_upper_bound(dq(10, 2, 4))


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 60), data=st.data())
def test_improvement_probability_brackets(n, data):
    k = data.draw(st.integers(1, n))
    s = data.draw(st.integers(0, n))
    q = dq(n, k, s)
    prob, drift = improvement_probability(q), drift_exact(q)
    assert drift / k <= prob <= drift
    assert 0 <= prob <= 1


# --- recurrences ---

@pytest.mark.parametrize("i", sorted(REFERENCE_ROWS))
def test_recurrence_table_reproduces_reference(i):
    table = recurrence_table(80)
    for k, (low, high) in REFERENCE_ROWS[i].items():
        got_low, got_high = table.interval(i, k)
        assert got_low == pytest.approx(low, rel=1e-12)
        assert got_high == pytest.approx(high, rel=1e-12)


def test_recurrence_table_shape_and_order():
    table = recurrence_table(80)
    assert len(table.rows) == 81
    for k in TABLE_KS:
        assert table.interval(0, k) == (0.5, 0.5)
        lows = [table.interval(i, k)[0] for i in range(81)]
        highs = [table.interval(i, k)[1] for i in range(81)]
        assert all(0 <= lo <= hi <= 0.5 for lo, hi in zip(lows, highs))
        assert lows == sorted(lows, reverse=True)
        assert highs == sorted(highs, reverse=True)


def test_final_intervals_are_separated():
    gaps = recurrence_table(80).gaps()
    assert gaps["1-3"] > 0.03
    assert gaps["3-5"] > 0.0008


def test_decimal_precision_agrees_with_double():
    double, decimal = recurrence_table(80), recurrence_table(80, precision="decimal")
    for i in range(81):
        for k in TABLE_KS:
            assert decimal.interval(i, k) == pytest.approx(double.interval(i, k), rel=1e-12)


def test_recurrence_csv_layout():
    table = recurrence_table(1)
    assert table.csv_header() == ["i", "c_l_1", "c_u_1", "c_l_3", "c_u_3", "c_l_5", "c_u_5"]
    row = table.csv_rows()[1]
    assert row[0] == "1"
    expected = [0.475, 0.47625, 0.4625, 0.4679140625, 0.4375, 0.4581298828125]
    assert [float(cell) for cell in row[1:]] == pytest.approx(expected, rel=1e-12)


def test_zero_periods_is_the_start_row():
    assert len(recurrence_table(0).rows) == 1


# --- Ridge* ---

@pytest.mark.parametrize("n, k, expected", [(10, 1, 100), (10, 2, 225), (10, 3, 360), (2, 1, 4)])
def test_expected_opt_time_ridge(n, k, expected):
    assert expected_opt_time_ridge(n, k) == expected


def test_expected_opt_time_needs_k_at_most_half_n():
    with pytest.raises(OutOfDomainError):
        expected_opt_time_ridge(10, 6)


def test_ridge_leap_probability_and_window():
    assert ridge_leap_probability(10, 2) == Fraction(1, 45)
    assert ridge_opt_time_bounds(10, 2) == (Fraction(225, 2), 450)


# --- races ---

def race(p_a, p_b, alpha=1, beta=1, t=10):
    return RaceModel(p_a=p_a, p_b=p_b, alpha=alpha, beta=beta, t=t)


def test_race_bound_examples():
    assert race_bound(race(0.3, 0.1, t=0)) == 1.0
    assert race_bound(race(0.4, 0.4)) >= 1.0 - 1e-12
    assert race_bound(race(0.5, 0.0, t=10)) == pytest.approx(math.exp(-5))
    with pytest.raises(OutOfDomainError):
        race_bound(race(0.1, 0.3))


def test_race_exact_examples():
    assert race_exact(race(0.3, 0.1, t=0)) == 1.0
    assert race_exact(race(0.5, 0.5, t=1)) == pytest.approx(0.75)
    assert race_exact(race(0.5, 0.5, t=1), exact=True) == Fraction(3, 4)
    with pytest.raises(ResourceLimitError):
        race_exact(race(0.5, 0.1, t=RACE_EXACT_MAX_T + 1))
    with pytest.raises(OutOfDomainError):
        race_exact(race(0.1, 0.3))


def test_race_exact_float_and_rational_agree():
    for p_a, p_b, alpha, beta in [(0.5, 0.25, 1, 2), (0.75, 0.5, 3, 1), (0.25, 0.125, 2, 2)]:
        m = race(p_a, p_b, alpha, beta, t=30)
        assert race_exact(m) == pytest.approx(float(race_exact(m, exact=True)), abs=1e-12)


def test_race_exact_never_exceeds_bound():
    grid = [round(0.1 * i, 1) for i in range(1, 10)]
    for p_a in grid:
        for p_b in (p for p in grid if p <= p_a):
            for alpha, beta in itertools.product((1, 2, 3), repeat=2):
                for t in (1, 10, 50, 200):
                    m = race(p_a, p_b, alpha, beta, t)
                    assert race_exact(m) <= min(1.0, race_bound(m)) + 1e-12, (p_a, p_b, alpha, beta, t)


def _literal_race(p_a, p_b, alpha, beta, t):
    """P(B not behind A) for two independent processes, A moving by alpha and B by beta."""
    a_moves = stats.binom.pmf(np.arange(t + 1), t, p_a)
    b_moves = stats.binom.pmf(np.arange(t + 1), t, p_b)
    return math.fsum(a_moves[i] * b_moves[j] for i in range(t + 1) for j in range(t + 1) if j * beta >= i * alpha)


def _enumerated_race(p_a, p_b, t):
    total = 0.0
    for outcome in itertools.product(((0, 0), (0, 1), (1, 0), (1, 1)), repeat=t):
        prob, a, b = 1.0, 0, 0
        for move_a, move_b in outcome:
            prob *= (p_a if move_a else 1 - p_a) * (p_b if move_b else 1 - p_b)
            a, b = a + move_a, b + move_b
        if b >= a:
            total += prob
    return total


@pytest.mark.parametrize("t", [0, 1, 2, 5, 6])
def test_race_exact_matches_sequence_enumeration(t):
    assert race_exact(race(0.6, 0.35, t=t)) == pytest.approx(_enumerated_race(0.6, 0.35, t), abs=1e-12)


@pytest.mark.parametrize("t", [3, 8, 12])
@pytest.mark.parametrize("step", [1, 2])
def test_race_exact_matches_literal_process_for_equal_steps(t, step):
    for p_a, p_b in [(0.5, 0.5), (0.7, 0.2), (0.9, 0.6)]:
        m = race(p_a, p_b, step, step, t)
        assert race_exact(m) == pytest.approx(_literal_race(p_a, p_b, step, step, t), abs=1e-12)


def test_race_exact_with_unequal_steps_is_not_the_literal_race():
    # a step where both move is counted as neutral even though A gains 2 and B only 1
    m = race(0.5, 0.5, alpha=2, beta=1, t=1)
    assert race_exact(m) == pytest.approx(0.75)
    assert race_exact(m, exact=True) == Fraction(3, 4)
    assert _literal_race(0.5, 0.5, 2, 1, 1) == pytest.approx(0.5)


# --- lazy walk ---

def test_lazy_walk_examples():
    assert lazy_walk_hitting_time(1, 1) == 0
    assert lazy_walk_hitting_time(2, 2) == 4
    assert lazy_walk_hitting_time(10, 10) <= 200


def test_lazy_walk_closed_form():
    for phi in range(1, 31):
        for x, h in enumerate(lazy_walk_hitting_times(phi), start=1):
            assert h == 2 * (x - 1) * (2 * phi - x)


def test_lazy_walk_bound_up_to_100():
    for phi in range(1, 101):
        assert max(lazy_walk_hitting_times(phi)) <= 2 * phi * phi


def test_sparse_passage_times_match_exact_solution():
    phi = 25
    solved = mean_first_passage_time(lazy_walk_matrix(phi), 0)
    exact = [float(h) for h in lazy_walk_hitting_times(phi)]
    assert np.allclose(solved, exact, rtol=1e-9, atol=1e-9)


def test_lazy_walk_matrix_is_stochastic():
    P = lazy_walk_matrix(6)
    assert np.allclose(P.sum(axis=1), 1.0)
    assert P[0, 0] == pytest.approx(0.75)
    assert P[3, 3] == pytest.approx(0.5)
