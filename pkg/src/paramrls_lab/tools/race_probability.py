import json

from paramrls_lab.errors import ResourceLimitError
from paramrls_lab.models.theory_models import RaceModel
from paramrls_lab.theory import RACE_EXACT_MAX_T, race_bound, race_exact


async def _call_race_probability(p_a: float, p_b: float, alpha: float, beta: float, t: int) -> str:
    """P(B not behind A) after t steps: the exponential bound and, when t allows, the exact sum.

    Args:
        p_a: Per-step probability that A moves; must be >= p_b.
        p_b: Per-step probability that B moves.
        alpha: Step size of A.
        beta: Step size of B.
        t: Number of steps.

    Uses a RaceModel for input validation. For t above RACE_EXACT_MAX_T the exact value is
    null and `note` says why. The exact sum treats a step where both move as neutral, so it
    is the literal probability only for alpha == beta.
    """
    m = RaceModel(p_a=p_a, p_b=p_b, alpha=alpha, beta=beta, t=t)
    result = {"q": m.q, "q_a": m.q_a, "q_b": m.q_b, "bound": race_bound(m)}
    try:
        result["exact"] = race_exact(m)
    except ResourceLimitError as e:
        result["exact"] = None
        result["note"] = str(e)
    if alpha != beta and t <= RACE_EXACT_MAX_T:
        result["note"] = "alpha != beta: steps where both processes move are counted as neutral"
    return json.dumps(result, indent=2)
