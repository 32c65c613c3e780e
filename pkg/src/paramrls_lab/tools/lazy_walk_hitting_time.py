import json

from paramrls_lab.theory import lazy_walk_hitting_time


async def _call_lazy_walk_hitting_time(phi: int, start: int) -> str:
    """Handles the exact hitting-time query for the lazy walk on {1..phi}.

    The walk moves down and up with probability 1/4 each and stays put otherwise; a move
    past phi is a self-loop. `bound` is the 2 * phi^2 upper bound on any start.
    """
    h = lazy_walk_hitting_time(phi, start)
    return json.dumps(
        {"phi": phi, "start": start, "hitting_time": str(h), "hitting_time_float": float(h), "bound": 2 * phi * phi},
        indent=2,
    )
