import json

from paramrls_lab.theory import expected_opt_time_ridge, ridge_opt_time_bounds


async def _call_expected_opt_time_ridge(n: int, k: int) -> str:
    """Expected Ridge* optimisation time floor(n/k) * C(n, k) of RLS_k, plus its
    concentration window [E/2, 2E]. Requires k <= n/2."""
    expected = expected_opt_time_ridge(n, k)
    low, high = ridge_opt_time_bounds(n, k)
    return json.dumps({"n": n, "k": k, "expected_opt_time": expected, "lower_window": str(low), "upper_window": high}, indent=2)
