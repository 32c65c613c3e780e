from typing import Optional, Sequence, Tuple

from scipy import stats


def z_value(confidence: float) -> float:
    return float(stats.norm.ppf(0.5 + confidence / 2))


def wilson_interval(successes: int, total: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if total <= 0:
        return (0.0, 1.0)
    z = z_value(confidence)
    p = successes / total
    z2 = z * z
    denom = 1.0 + z2 / total
    center = (p + z2 / (2.0 * total)) / denom
    margin = (z * ((p * (1.0 - p) / total + z2 / (4.0 * total * total)) ** 0.5)) / denom
    return (max(0.0, center - margin), min(1.0, center + margin))


def chi_square_uniform(counts: Sequence[int]) -> Tuple[Optional[float], Optional[float]]:
    """Chi-square statistic and p-value against the uniform law on len(counts) cells."""
    if len(counts) < 2 or sum(counts) == 0:
        return (None, None)
    result = stats.chisquare(list(counts))
    return (float(result.statistic), float(result.pvalue))
