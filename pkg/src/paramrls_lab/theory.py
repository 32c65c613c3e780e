"""Analytical oracles: drift, fixed-budget recurrences, Ridge* times, race probabilities, lazy-walk hitting times."""
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Dict, Tuple

import numpy as np
from scipy import stats
from scipy.sparse import csr_matrix, eye
from scipy.sparse.linalg import spsolve

from paramrls_lab.errors import (
    InvalidArgumentError,
    OutOfDomainError,
    ResourceLimitError,
    UnsupportedParameterError,
)
from paramrls_lab.models.theory_models import (
    TABLE_KS,
    DriftQuery,
    RaceModel,
    RecurrenceRow,
    RecurrenceTable,
)

RACE_EXACT_MAX_T = 10_000
RACE_RATIONAL_MAX_T = 64

# --- Drift -------------------------------------------------------------------


def drift_exact(q: DriftQuery) -> Fraction:
    """Hypergeometric drift sum over flips that hit more wrong bits than right ones."""
    n, k, s = q.n, q.k, q.s
    total = 0
    for i in range(k // 2 + 1, k + 1):
        total += (2 * i - k) * math.comb(s, i) * math.comb(n - s, k - i)
    return Fraction(total, math.comb(n, k))


def drift_closed(q: DriftQuery) -> Fraction:
    n, k, s = q.n, q.k, q.s
    if k > 5:
        raise UnsupportedParameterError(f"Closed drift forms exist for k <= 5 only, got k={k}")
    if s < k:
        raise OutOfDomainError(f"Closed drift forms hold for s >= k (s={s}, k={k}); use drift_exact")
    if k == 1:
        return Fraction(s, n)
    if k == 2:
        return Fraction(2 * s * (s - 1), n * (n - 1))
    if k == 3:
        return Fraction(3 * s * (s - 1), n * (n - 1))
    # k = 4, 5 share the factor s(s-1)(s-2)(n - s/2 - 3/2) / (n(n-1)(n-2)(n-3))
    core = Fraction(s * (s - 1) * (s - 2) * (2 * n - s - 3), 2 * n * (n - 1) * (n - 2) * (n - 3))
    return 8 * core if k == 4 else 10 * core


def drift_upper_bound(q: DriftQuery) -> Fraction:
    """s/n, 3s^2/n^2 and 10s^3/n^3 for k = 1, 3, 5."""
    n, k, s = q.n, q.k, q.s
    bounds = {1: Fraction(s, n), 3: Fraction(3 * s * s, n * n), 5: Fraction(10 * s**3, n**3)}
    if k not in bounds:
        raise UnsupportedParameterError(f"Drift upper bounds are provided for k in {{1, 3, 5}}, got k={k}")
    return bounds[k]


def improvement_probability(q: DriftQuery) -> Fraction:
    """Exact probability that one RLS_k step strictly reduces the OneMax distance s."""
    n, k, s = q.n, q.k, q.s
    hits = sum(math.comb(s, i) * math.comb(n - s, k - i) for i in range(k // 2 + 1, k + 1))
    return Fraction(hits, math.comb(n, k))


# --- Ridge* ------------------------------------------------------------------


def _check_ridge_k(n: int, k: int) -> None:
    if n < 1 or k < 1:
        raise InvalidArgumentError(f"n and k must be positive (n={n}, k={k})")
    if 2 * k > n:
        raise OutOfDomainError(f"Ridge* optimisation time formula needs k <= n/2 (n={n}, k={k})")


def expected_opt_time_ridge(n: int, k: int) -> int:
    _check_ridge_k(n, k)
    return (n // k) * math.comb(n, k)


def ridge_leap_probability(n: int, k: int) -> Fraction:
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"k must lie in [1, {n}], got {k}")
    return Fraction(1, math.comb(n, k))


def ridge_opt_time_bounds(n: int, k: int) -> Tuple[Fraction, int]:
    """Concentration window (C(n,k)floor(n/k)/2, 2C(n,k)floor(n/k)) for the Ridge* optimisation time."""
    expected = expected_opt_time_ridge(n, k)
    return Fraction(expected, 2), 2 * expected


# --- Fixed-budget recurrences ------------------------------------------------

_LOWER_DECAY: Dict[int, Callable] = {
    1: lambda c: c / 20,
    3: lambda c: 3 * c * c / 20,
    5: lambda c: 10 * c * c * c / 20,
}


def recurrence_table(periods: int, precision: str = "double") -> RecurrenceTable:
    """Iterate the leading-constant recurrences from c = 1/2.

    Lower bounds decay with the previous lower bound, upper bounds with the freshly computed
    lower bound of the same period.
    """
    if periods < 0:
        raise InvalidArgumentError(f"periods must be non-negative, got {periods}")
    if precision == "double":
        return _iterate_recurrences(periods, float(0.5), precision, convert=float)
    if precision == "decimal":
        with localcontext() as ctx:
            ctx.prec = 50
            return _iterate_recurrences(periods, Decimal(1) / 2, precision, convert=float)
    raise InvalidArgumentError(f"precision must be 'double' or 'decimal', got {precision!r}")


def _iterate_recurrences(periods, start, precision, convert) -> RecurrenceTable:
    lower = {k: start for k in TABLE_KS}
    upper = {k: start for k in TABLE_KS}
    rows = [RecurrenceRow(i=0, bounds={k: (convert(start), convert(start)) for k in TABLE_KS})]
    for i in range(1, periods + 1):
        for k in TABLE_KS:
            decay = _LOWER_DECAY[k]
            lower[k] = lower[k] - decay(lower[k])
            upper[k] = upper[k] - decay(lower[k])
        rows.append(RecurrenceRow(i=i, bounds={k: (convert(lower[k]), convert(upper[k])) for k in TABLE_KS}))
    return RecurrenceTable(periods=periods, precision=precision, rows=rows)


# --- Race probabilities ------------------------------------------------------


def _check_race(m: RaceModel) -> None:
    if m.p_b > m.p_a:
        raise OutOfDomainError(f"race bounds need p_b <= p_a (p_a={m.p_a}, p_b={m.p_b})")


def race_bound(m: RaceModel) -> float:
    """Upper bound on P(progress of B >= progress of A) after t steps."""
    _check_race(m)
    q = m.q
    if q == 0 or m.t == 0:
        return 1.0
    w_a = m.alpha / (m.alpha + m.beta)
    w_b = m.beta / (m.alpha + m.beta)
    return math.exp(-q * m.t * (1 - 2 * m.q_b**w_a * m.q_a**w_b))


def _threshold(ell: int, alpha, beta) -> int:
    """ceil(ell * alpha / (alpha + beta)) in exact arithmetic."""
    a, b = Fraction(alpha), Fraction(beta)
    return math.ceil(ell * a / (a + b))


def race_exact(m: RaceModel, exact: bool = False):
    """P(progress of B >= progress of A), summing over the number of one-sided steps.

    Steps where both or neither process moves are neutral; among the l one-sided steps,
    B needs at least ceil(l * alpha / (alpha + beta)) of them.

    This is the literal probability only when alpha == beta. Otherwise a step where both
    move still shifts the gap by alpha - beta, so the sum is a different quantity: with
    p_a = p_b = 1/2, alpha = 2, beta = 1, t = 1 it gives 3/4 where the two processes
    give 1/2.

    Args:
        m: The race; requires p_b <= p_a and t <= RACE_EXACT_MAX_T.
        exact: Sum in rational arithmetic and return a Fraction (t <= RACE_RATIONAL_MAX_T).
    """
    _check_race(m)
    if m.t > RACE_EXACT_MAX_T:
        raise ResourceLimitError(f"race_exact supports t <= {RACE_EXACT_MAX_T}, got {m.t}")
    if exact:
        return _race_exact_rational(m)
    q = m.q
    if q == 0 or m.t == 0:
        return 1.0
    ells = np.arange(m.t + 1)
    need = np.array([_threshold(int(ell), m.alpha, m.beta) for ell in ells])
    weights = stats.binom.pmf(ells, m.t, q)
    tails = stats.binom.sf(need - 1, ells, m.q_b)
    return min(1.0, math.fsum((weights * tails).tolist()))


def _race_exact_rational(m: RaceModel) -> Fraction:
    if m.t > RACE_RATIONAL_MAX_T:
        raise ResourceLimitError(f"rational race_exact supports t <= {RACE_RATIONAL_MAX_T}, got {m.t}")
    p_a, p_b = Fraction(m.p_a), Fraction(m.p_b)
    q = p_a * (1 - p_b) + (1 - p_a) * p_b
    if q == 0 or m.t == 0:
        return Fraction(1)
    q_b = p_b * (1 - p_a) / q
    q_a = 1 - q_b
    total = Fraction(0)
    for ell in range(m.t + 1):
        need = _threshold(ell, m.alpha, m.beta)
        tail = sum(math.comb(ell, i) * q_b**i * q_a ** (ell - i) for i in range(need, ell + 1))
        total += math.comb(m.t, ell) * q**ell * (1 - q) ** (m.t - ell) * tail
    return total


# --- Lazy random walk --------------------------------------------------------


def lazy_walk_hitting_time(phi: int, start: int, down: Fraction = Fraction(1, 4), up: Fraction = Fraction(1, 4)) -> Fraction:
    """Expected first hitting time of state 1 for the lazy walk on {1..phi}.

    Moves past phi are blocked and become self-loops. Solved exactly with the Thomas algorithm.
    """
    if phi < 1:
        raise InvalidArgumentError(f"phi must be positive, got {phi}")
    if not 1 <= start <= phi:
        raise InvalidArgumentError(f"start must lie in [1, {phi}], got {start}")
    if start == 1:
        return Fraction(0)
    return lazy_walk_hitting_times(phi, down, up)[start - 1]


def lazy_walk_hitting_times(phi: int, down: Fraction = Fraction(1, 4), up: Fraction = Fraction(1, 4)) -> list:
    """Hitting times of state 1 from every start 1..phi (index 0 is state 1)."""
    down, up = Fraction(down), Fraction(up)
    if down <= 0 or up < 0 or down + up > 1:
        raise InvalidArgumentError(f"Invalid walk probabilities down={down}, up={up}")
    if phi == 1:
        return [Fraction(0)]
    # unknowns h(2..phi); row x: -down*h(x-1) + (down+up)*h(x) - up*h(x+1) = 1, last row has no up term
    size = phi - 1
    sub = [-down] * size
    diag = [down + up] * (size - 1) + [down]
    sup = [-up] * size
    rhs = [Fraction(1)] * size
    for i in range(1, size):
        w = sub[i] / diag[i - 1]
        diag[i] -= w * sup[i - 1]
        rhs[i] -= w * rhs[i - 1]
    h = [Fraction(0)] * size
    h[-1] = rhs[-1] / diag[-1]
    for i in range(size - 2, -1, -1):
        h[i] = (rhs[i] - sup[i] * h[i + 1]) / diag[i]
    return [Fraction(0)] + h


def lazy_walk_matrix(phi: int, down: float = 0.25, up: float = 0.25) -> np.ndarray:
    """Row-stochastic transition matrix of the lazy walk; blocked moves fold into the diagonal."""
    P = np.zeros((phi, phi))
    for x in range(phi):
        if x > 0:
            P[x, x - 1] = down
        if x < phi - 1:
            P[x, x + 1] = up
        P[x, x] = 1.0 - P[x].sum()
    return P


def mean_first_passage_time(T, target: int) -> np.ndarray:
    """Mean first passage times to `target` for a transition matrix T (floating point)."""
    T = csr_matrix(T)
    dim = T.shape[0]
    A = (eye(dim, dim) - T).tolil()
    A[target, :] = 0.0
    A[target, target] = 1.0
    b = np.ones(dim)
    b[target] = 0.0
    return spsolve(A.tocsr(), b)
