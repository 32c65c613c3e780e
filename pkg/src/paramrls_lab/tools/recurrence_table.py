from paramrls_lab.experiments.report import csv_text
from paramrls_lab.theory import recurrence_table


async def _call_recurrence_table(periods: int = 80, precision: str = "double") -> str:
    """Leading constants c_l and c_u of the fixed-budget distance bounds for k = 1, 3, 5.

    Args:
        periods: Number of rows after the start row i = 0.
        precision: 'double' or 'decimal' (50 significant digits).
    """
    table = recurrence_table(periods, precision)
    return csv_text(table.csv_header(), table.csv_rows())
