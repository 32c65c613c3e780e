"""Loading scenario files, applying inline overrides and resolving them into runnable configurations."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import ValidationError

from paramrls_lab.config import BUILTIN_SCENARIO_DIR, Settings, load_settings
from paramrls_lab.errors import InvalidArgumentError, ScenarioError
from paramrls_lab.experiments.expressions import evaluate_expression
from paramrls_lab.models.scenario_models import Scenario
from paramrls_lab.models.tuner_models import ParamSpace, TunerConfig
from paramrls_lab.problems import Problem, make_problem

logger = logging.getLogger("paramrls-lab.experiments")


def list_builtin_scenarios() -> List[str]:
    return sorted(p.stem for p in BUILTIN_SCENARIO_DIR.glob("*.json"))


def _search_dirs(settings: Settings) -> List[Path]:
    dirs = []
    if settings.scenario_dir is not None:
        dirs.append(settings.scenario_dir)
    dirs.append(BUILTIN_SCENARIO_DIR)
    return dirs


def find_scenario_file(ref: Union[str, Path], settings: Optional[Settings] = None) -> Path:
    """A path to an existing file, or a scenario name looked up in the scenario directories."""
    path = Path(ref)
    if path.is_file():
        return path
    settings = settings or load_settings()
    name = path.name.removesuffix(".json")
    for directory in _search_dirs(settings):
        candidate = directory / f"{name}.json"
        if candidate.is_file():
            return candidate
    raise ScenarioError(f"No scenario file or built-in scenario named {str(ref)!r}")


def read_scenario_data(ref: Union[str, Path], settings: Optional[Settings] = None) -> Dict[str, Any]:
    path = find_scenario_file(ref, settings)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    except OSError as exc:
        raise ScenarioError(f"Cannot read scenario {path}: {exc}")
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: a scenario must be a JSON object")
    data.setdefault("name", path.stem)
    return data


def apply_overrides(data: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Set dotted keys such as "tuner.kappa" on a copy of the raw scenario data; None values are skipped."""
    merged = json.loads(json.dumps(data))
    for dotted, value in overrides.items():
        if value is None:
            continue
        node = merged
        *parents, leaf = dotted.split(".")
        for part in parents:
            child = node.get(part)
            if child is None:
                child = node[part] = {}
            elif not isinstance(child, dict):
                raise ScenarioError(f"Cannot set {dotted}: '{part}' is not a section", dotted)
            node = child
        node[leaf] = value
    return merged


def parse_scenario(data: Dict[str, Any]) -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as exc:
        raise ScenarioError.from_validation_error(exc)


def load_scenario(ref: Union[str, Path], overrides: Optional[Dict[str, Any]] = None, settings: Optional[Settings] = None) -> Scenario:
    data = read_scenario_data(ref, settings)
    if overrides:
        data = apply_overrides(data, overrides)
    scenario = parse_scenario(data)
    logger.debug(f"Loaded scenario '{scenario.name}' (mode={scenario.mode.value}).")
    return scenario


def resolve_problem(sc: Scenario) -> Problem:
    if sc.problem is None:
        raise ScenarioError(f"mode '{sc.mode.value}' requires a 'problem' section", "problem")
    try:
        return make_problem(sc.problem.kind, sc.problem.n, sc.problem.shift, master_seed=sc.master_seed)
    except InvalidArgumentError as exc:
        raise ScenarioError(str(exc), "problem.shift")


def resolve_kappa(sc: Scenario) -> int:
    return evaluate_expression(sc.tuner.kappa, sc.problem.n, field="tuner.kappa")


def resolve_tuner_config(sc: Scenario) -> TunerConfig:
    """TunerConfig for the scenario; race scenarios widen phi so both contestants are in range."""
    if sc.tuner is None:
        raise ScenarioError(f"mode '{sc.mode.value}' requires a 'tuner' section", "tuner")
    problem = resolve_problem(sc)
    phi = sc.tuner.phi
    if sc.race is not None:
        phi = max(phi, sc.race.b)
    try:
        return TunerConfig(
            space=ParamSpace(phi=phi),
            operator=sc.tuner.operator,
            metric=sc.tuner.metric,
            kappa=resolve_kappa(sc),
            runs=sc.tuner.runs,
            evaluations=sc.tuner.evaluations,
            penalty=sc.tuner.penalty,
            problem=problem,
            engine=sc.tuner.engine,
            stall_limit=sc.tuner.stall_limit,
        )
    except ValidationError as exc:
        raise ScenarioError.from_validation_error(exc, "tuner")
