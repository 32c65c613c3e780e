import asyncio
import logging
from typing import Optional

from paramrls_lab.config import load_settings
from paramrls_lab.experiments.harness import run_scenario
from paramrls_lab.experiments.report import render_report
from paramrls_lab.experiments.scenarios import load_scenario

tool_logger = logging.getLogger("paramrls-lab.tools")


def _run(scenario: str, replicates: Optional[int], master_seed: Optional[int], format: str) -> str:
    # worker count comes from PARAMRLS_LAB_WORKERS, not from the caller
    settings = load_settings()
    sc = load_scenario(scenario, {"replicates": replicates, "master_seed": master_seed}, settings)
    report = run_scenario(sc, workers=settings.workers)
    return render_report(report, format)


async def _call_run_scenario(
    scenario: str,
    replicates: Optional[int] = None,
    master_seed: Optional[int] = None,
    format: str = "json",
) -> str:
    """Runs a built-in or file scenario off the event loop and renders its report.

    Args:
        scenario: Built-in scenario name or path to a scenario JSON file.
        replicates: Overrides the scenario's replicate count when given.
        master_seed: Overrides the scenario's master seed when given.
        format: 'json' or 'csv'.

    Scenario errors surface as ScenarioError, which execute_tool_safely reports as text.
    """
    return await asyncio.to_thread(_run, scenario, replicates, master_seed, format)
