import logging
from typing import Optional

import mcp.types as types
from fastmcp import FastMCP

from paramrls_lab.config import LOGGER_NAME, configure_logging, load_settings
from paramrls_lab.resources import handle_read_resource
from paramrls_lab.tools import (
    _call_run_scenario,
    _call_recurrence_table,
    _call_drift,
    _call_race_probability,
    _call_lazy_walk_hitting_time,
    _call_expected_opt_time_ridge,
    execute_tool_safely
)

logger = logging.getLogger(LOGGER_NAME)

mcp = FastMCP("paramrls-lab")

# --- Resources ---

@mcp.resource("scenario://{name}")
async def read_scenario_resource(name: str) -> str:
    """Raw JSON of a scenario, looked up in PARAMRLS_LAB_SCENARIO_DIR first and then among the built-ins."""
    uri = f"scenario://{name}"
    logger.info(f"Handling read_resource for URI: {uri}")
    return await handle_read_resource(uri=uri)

# --- Individual Tool Handlers ---

@mcp.tool()
async def run_scenario(
    scenario: str,
    replicates: Optional[int] = None,
    master_seed: Optional[int] = None,
    format: str = "json"
) -> list[types.TextContent]:
    """Runs a scenario and returns its report.

    Args:
        scenario: Built-in scenario name (e.g. 'ridge_tuning_time') or path to a scenario JSON file.
        replicates: Optional override of the scenario's replicate count.
        master_seed: Optional override of the scenario's master seed.
        format: 'json' or 'csv'.
    """
    return await execute_tool_safely(
        tool_name='run_scenario',
        tool_impl_func=_call_run_scenario,
        scenario=scenario,
        replicates=replicates,
        master_seed=master_seed,
        format=format
    )

@mcp.tool()
async def recurrence_table(periods: int = 80, precision: str = "double") -> list[types.TextContent]:
    """Leading constants of the fixed-budget distance bounds for k = 1, 3, 5 as CSV.

    Args:
        periods: Number of rows after the start row (default 80).
        precision: 'double' or 'decimal' (50 significant digits).

    Columns are i, then c_l and c_u for each k; c_l <= c_u on every row.
    """
    return await execute_tool_safely(
        tool_name='recurrence_table',
        tool_impl_func=_call_recurrence_table,
        periods=periods,
        precision=precision
    )

@mcp.tool()
async def drift(n: int, k: int, s: int) -> list[types.TextContent]:
    """Exact expected one-step progress of RLS_k on OneMax at distance s from the optimum.

    The drift is returned as an exact fraction string. The closed form (k <= 5, s >= k) and
    the upper bound are included where defined and null otherwise.
    """
    # Delegate execution to the safe wrapper
    return await execute_tool_safely(
        tool_name='drift',
        tool_impl_func=_call_drift,
        n=n,
        k=k,
        s=s
    )

@mcp.tool()
async def race_probability(p_a: float, p_b: float, alpha: float, beta: float, t: int) -> list[types.TextContent]:
    """Probability that process B (steps of beta w.p. p_b) is not behind process A (alpha w.p. p_a) after t steps.

    Requires p_b <= p_a. Returns the exponential upper bound and the exact value for t <= 10000.
    The exact value counts steps where both processes move as neutral; with alpha != beta that
    is not the literal probability, and the result carries a note saying so.
    """
    return await execute_tool_safely(
        tool_name='race_probability',
        tool_impl_func=_call_race_probability,
        p_a=p_a,
        p_b=p_b,
        alpha=alpha,
        beta=beta,
        t=t
    )

@mcp.tool()
async def lazy_walk_hitting_time(phi: int, start: int) -> list[types.TextContent]:
    """Expected time for the lazy walk on {1..phi} to reach 1 from start.

    The walk steps down or up with probability 1/4 each and stays otherwise. Requires 1 <= start <= phi.
    """
    return await execute_tool_safely(
        tool_name='lazy_walk_hitting_time',
        tool_impl_func=_call_lazy_walk_hitting_time,
        phi=phi,
        start=start
    )

@mcp.tool()
async def expected_opt_time_ridge(n: int, k: int) -> list[types.TextContent]:
    """Expected optimisation time floor(n/k) * C(n, k) of RLS_k on Ridge*, for k <= n/2.

    Also returns the window [E/2, 2E] the optimisation time concentrates in.
    """
    # Delegate execution to the safe wrapper
    return await execute_tool_safely(
        tool_name='expected_opt_time_ridge',
        tool_impl_func=_call_expected_opt_time_ridge,
        n=n,
        k=k
    )

def run_server():
    """Run the MCP server loop on stdio."""
    configure_logging(load_settings().log_level)
    try:
        logger.info("Starting FastMCP server run loop...")
        mcp.run()
        logger.info("FastMCP server run loop finished normally.")
    except Exception as e:
        logger.error(f"Error during server run: {e}", exc_info=True)
        raise
    finally:
        logger.info("Shutting down server...")

if __name__ == "__main__":
    run_server()
