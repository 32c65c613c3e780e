# src/paramrls_lab/tools/__init__.py

from .run_scenario import _call_run_scenario
from .recurrence_table import _call_recurrence_table
from .drift import _call_drift
from .race_probability import _call_race_probability
from .lazy_walk_hitting_time import _call_lazy_walk_hitting_time
from .expected_opt_time_ridge import _call_expected_opt_time_ridge

from ._utils import execute_tool_safely

__all__ = [
    '_call_run_scenario',
    '_call_recurrence_table',
    '_call_drift',
    '_call_race_probability',
    '_call_lazy_walk_hitting_time',
    '_call_expected_opt_time_ridge',
    'execute_tool_safely'
]
