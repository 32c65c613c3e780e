"""Command-line front-end: one subcommand per experiment mode plus the oracle helpers and the MCP server."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from paramrls_lab._version import __version__
from paramrls_lab.config import configure_logging, load_settings
from paramrls_lab.errors import LabError, ScenarioError
from paramrls_lab.experiments.harness import run_scenario
from paramrls_lab.experiments.report import FORMATS, emit_report
from paramrls_lab.experiments.scenarios import apply_overrides, list_builtin_scenarios, load_scenario, parse_scenario
from paramrls_lab.models.scenario_models import Mode
from paramrls_lab.theory import expected_opt_time_ridge, ridge_leap_probability, ridge_opt_time_bounds

logger = logging.getLogger("paramrls-lab.cli")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2

# sections an inline scenario starts with, so missing fields are reported under their own path
_INLINE_SECTIONS = {
    Mode.TUNE: ("problem", "tuner"),
    Mode.RACE: ("problem", "tuner", "race"),
    Mode.DRIFT: ("problem", "drift"),
    Mode.TABLE: ("table",),
    Mode.WALK: ("walk",),
    Mode.RUNTIME: ("problem", "runtime"),
}


class _JsonErrorParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors end with the same JSON error object as other failures."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": "UsageError", "message": f"{self.prog}: {message}"}) + "\n")
        self.exit(EXIT_USAGE)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="Scenario JSON file or built-in scenario name")
    p.add_argument("--replicates", type=int)
    p.add_argument("--seed", type=int, help="Master seed (64-bit unsigned)")
    p.add_argument("--out", help="Output path (default: stdout)")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--workers", type=int, help="Worker processes (default: PARAMRLS_LAB_WORKERS or 1)")
    p.add_argument("--trace-dir", type=Path, help="Directory for per-replicate traces")


def _add_problem(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=["onemax", "ridgestar"])
    p.add_argument("--n", type=int)
    p.add_argument("--shift", help='"identity", "random" or a hex bit string')


def _add_tuner(p: argparse.ArgumentParser, with_search: bool = True) -> None:
    p.add_argument("--phi", type=int)
    p.add_argument("--kappa", help='Cutoff time: integer or expression in n such as "4*n" or "floor(0.03*n)"')
    p.add_argument("--runs", type=int)
    p.add_argument("--metric", choices=["f", "t"])
    p.add_argument("--penalty", type=float)
    p.add_argument("--engine", choices=["bitwise", "leap"])
    if with_search:
        p.add_argument("--evals", type=int)
        p.add_argument("--operator", choices=["pm1", "pm12"])
        p.add_argument("--stall-limit", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _JsonErrorParser(prog="paramrls-lab", description="ParamRLS / RLS_k experiments and analytical oracles.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help="Logging level (default: PARAMRLS_LAB_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="Run a scenario in whatever mode it declares")
    _add_common(p)

    p = sub.add_parser("tune", help="Replicated ParamRLS tuning runs")
    _add_common(p)
    _add_problem(p)
    _add_tuner(p)

    p = sub.add_parser("race", help="Replicated evaluations of RLS_a against RLS_b")
    _add_common(p)
    _add_problem(p)
    _add_tuner(p, with_search=False)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)

    p = sub.add_parser("drift", help="Monte Carlo drift on OneMax against the exact formula")
    _add_common(p)
    _add_problem(p)
    p.add_argument("--k", type=int, action="append", help="Repeatable")
    p.add_argument("--s", type=int, action="append", help="Distance to the optimum; repeatable")
    p.add_argument("--samples", type=int)

    p = sub.add_parser("table", help="Leading-constant recurrence table")
    _add_common(p)
    p.add_argument("--periods", type=int)
    p.add_argument("--precision", choices=["double", "decimal"])

    p = sub.add_parser("walk", help="Lazy-walk hitting times of state 1")
    _add_common(p)
    p.add_argument("--phi", type=int)

    p = sub.add_parser("runtime", help="Monte Carlo Ridge* optimisation times")
    _add_common(p)
    _add_problem(p)
    p.add_argument("--k", type=int, action="append", help="Repeatable")
    p.add_argument("--kappa-factor", type=int)
    p.add_argument("--engine", choices=["bitwise", "leap"])

    p = sub.add_parser("expected-time", help="Expected Ridge* optimisation time floor(n/k) * C(n, k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    sub.add_parser("scenarios", help="List built-in scenarios")
    sub.add_parser("serve", help="Run the MCP server on stdio")
    return parser


def _overrides(args: argparse.Namespace, mode: Mode) -> Dict[str, Any]:
    get = lambda name: getattr(args, name, None)
    out = {
        "replicates": get("replicates"),
        "master_seed": get("seed"),
        "problem.kind": get("kind"),
        "problem.n": get("n"),
        "problem.shift": get("shift"),
    }
    if mode in (Mode.TUNE, Mode.RACE):
        out.update({
            "tuner.phi": get("phi"),
            "tuner.kappa": get("kappa"),
            "tuner.runs": get("runs"),
            "tuner.evaluations": get("evals"),
            "tuner.metric": get("metric"),
            "tuner.operator": get("operator"),
            "tuner.penalty": get("penalty"),
            "tuner.engine": get("engine"),
            "tuner.stall_limit": get("stall_limit"),
            "race.a": get("a"),
            "race.b": get("b"),
        })
    elif mode is Mode.DRIFT:
        out.update({"drift.ks": get("k"), "drift.distances": get("s"), "drift.samples": get("samples")})
    elif mode is Mode.TABLE:
        out.update({"table.periods": get("periods"), "table.precision": get("precision")})
    elif mode is Mode.WALK:
        out["walk.phi"] = get("phi")
    elif mode is Mode.RUNTIME:
        out.update({"runtime.ks": get("k"), "runtime.kappa_factor": get("kappa_factor"), "runtime.engine": get("engine")})
    return out


def resolve_scenario(args: argparse.Namespace, settings=None):
    """Scenario from --scenario and/or inline flags; inline flags override the file."""
    if args.command == "run":
        if not args.scenario:
            raise ScenarioError("'run' needs --scenario", "scenario")
        return load_scenario(args.scenario, {"replicates": args.replicates, "master_seed": args.seed}, settings)
    mode = Mode(args.command)
    overrides = _overrides(args, mode)
    if args.scenario:
        sc = load_scenario(args.scenario, overrides, settings)
        if sc.mode is not mode:
            raise ScenarioError(f"Scenario '{sc.name}' has mode '{sc.mode.value}', not '{mode.value}'", "mode")
        return sc
    base = {"name": f"inline_{mode.value}", "mode": mode.value}
    for section in _INLINE_SECTIONS[mode]:
        base[section] = {}
    return parse_scenario(apply_overrides(base, overrides))


def _expected_time(args: argparse.Namespace) -> None:
    expected = expected_opt_time_ridge(args.n, args.k)
    low, high = ridge_opt_time_bounds(args.n, args.k)
    leap = ridge_leap_probability(args.n, args.k)
    payload = {
        "n": args.n,
        "k": args.k,
        "expected_opt_time": expected,
        "leap_probability": str(leap),
        "lower_window": str(low),
        "upper_window": high,
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _fail(exc: Exception, code: int) -> int:
    payload = exc.to_dict() if isinstance(exc, LabError) else {"error": "InternalError", "message": str(exc)}
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = load_settings()
    configure_logging(args.log_level or settings.log_level)
    try:
        if args.command == "serve":
            from paramrls_lab.server import run_server
            run_server()
            return EXIT_OK
        if args.command == "scenarios":
            sys.stdout.write("\n".join(list_builtin_scenarios()) + "\n")
            return EXIT_OK
        if args.command == "expected-time":
            _expected_time(args)
            return EXIT_OK
        scenario = resolve_scenario(args, settings)
        workers = args.workers if args.workers is not None else settings.workers
        if workers < 1:
            raise ScenarioError(f"--workers must be >= 1, got {workers}", "workers")
        report = run_scenario(scenario, workers=workers, trace_dir=args.trace_dir)
        emit_report(report, args.format, args.out)
        return EXIT_OK
    except LabError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return _fail(exc, EXIT_USAGE)
    except Exception as exc:
        logger.error(f"Unexpected error: {exc}", exc_info=True)
        return _fail(exc, EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
