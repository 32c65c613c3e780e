import json

from paramrls_lab.errors import LabError
from paramrls_lab.models.theory_models import DriftQuery
from paramrls_lab.theory import drift_closed, drift_exact, drift_upper_bound, improvement_probability


async def _call_drift(n: int, k: int, s: int) -> str:
    """Exact one-step drift of RLS_k on OneMax, n bits, s of them wrong.

    Args:
        n: Problem size.
        k: Number of distinct bits flipped per step, 1 <= k <= n.
        s: Distance to the optimum, 0 <= s <= n.

    Returns a JSON object with the drift as a fraction string and as a float, the probability
    of a strict improvement, and, where defined, the closed form (k <= 5, s >= k) and the
    upper bound. Undefined extras are null rather than errors.
    """
    q = DriftQuery(n=n, k=k, s=s)
    exact = drift_exact(q)
    result = {
        "n": n,
        "k": k,
        "s": s,
        "drift": str(exact),
        "drift_float": float(exact),
        "improvement_probability": str(improvement_probability(q)),
    }
    # optional extras: present only where the formula is defined
    for key, fn in (("closed_form", drift_closed), ("upper_bound", drift_upper_bound)):
        try:
            result[key] = str(fn(q))
        except LabError:
            result[key] = None
    return json.dumps(result, indent=2)
