import pytest

from paramrls_lab.bitcore import RngStream
from paramrls_lab.models.tuner_models import Metric, Operator, ParamSpace, TunerConfig
from paramrls_lab.problems import Problem, ProblemKind

from .config import MASTER_SEED


@pytest.fixture
def rng() -> RngStream:
    return RngStream(MASTER_SEED)


@pytest.fixture
def ridge10() -> Problem:
    return Problem.identity(ProblemKind.RIDGESTAR, 10)


@pytest.fixture
def make_cfg():
    """Factory for TunerConfig with small defaults."""
    def build(problem: Problem, phi: int = 5, kappa: int = 10, **kwargs) -> TunerConfig:
        kwargs.setdefault("operator", Operator.PM1)
        kwargs.setdefault("metric", Metric.F)
        return TunerConfig(space=ParamSpace(phi=phi), kappa=kappa, problem=problem, **kwargs)
    return build
