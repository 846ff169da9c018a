"""
Command-line front end.

    cone-periodic check --spec system.txt
    cone-periodic bounds --demo example1 --proof-steps 100
    cone-periodic solve-shooting --demo example2
    cone-periodic solve-operator --spec delayed.txt --damping 0.3
    cone-periodic verify example3
    cone-periodic export --demo example1 --out out/example1
    cone-periodic demo example1

Summaries go to stdout as ``name = value`` lines with 16 significant digits;
logs go to stderr. Exit status is 0 on success, 1 when the hypotheses fail and
2 on solver failures and input errors.
"""

import argparse
from collections.abc import Sequence
import logging
from pathlib import Path
import sys

from pydantic import BaseModel, ValidationError

from .config.demos import DemoId
from .config.logging import configure_logging
from .config.settings import get_settings
from .errors import HypothesisError, PeriodicOrbitError
from .models.run_schemas import Command, RunConfig
from .services.orbit_service import OrbitService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_FAILURE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cone-periodic",
        description="Positive periodic solutions of periodic predator-prey systems",
    )
    parser.add_argument("command", choices=[str(c) for c in Command], help="command to run")
    parser.add_argument(
        "target", nargs="?", choices=[str(d) for d in DemoId], help="built-in system (same as --demo)"
    )
    parser.add_argument("--spec", type=Path, help="system spec file")
    parser.add_argument("--demo", choices=[str(d) for d in DemoId], help="built-in system")
    parser.add_argument("--grid", type=int, help="grid size N of operator iterates (power of two)")
    parser.add_argument("--rtol", type=float, help="relative tolerance of the Newton integrations")
    parser.add_argument("--atol", type=float, help="absolute tolerance of the Newton integrations")
    parser.add_argument("--op-tol", dest="operator_tol", type=float, help="Picard residual tolerance")
    parser.add_argument("--damping", type=float, help="Picard averaging weight in (0, 1]")
    parser.add_argument("--seed", type=int, help="seed of the proof-step sampler")
    parser.add_argument("--out", type=Path, help="output directory of export and demo")
    parser.add_argument(
        "--proof-steps", dest="proof_steps", type=int, help="trials per shell for bounds"
    )
    parser.add_argument("--log-level", dest="log_level", help="override LOG_LEVEL")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> tuple[RunConfig, str | None]:
    args = build_parser().parse_args(argv)
    demo = args.demo
    if args.target is not None:
        if demo is not None and demo != args.target:
            raise ValueError(f"conflicting demo ids {args.target!r} and {demo!r}")
        demo = args.target
    fields = {
        key: value
        for key, value in vars(args).items()
        if key not in {"target", "log_level", "demo"} and value is not None
    }
    return RunConfig(demo=demo, **fields), args.log_level


def _flatten(data, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(data, dict):
        rows = []
        for key, value in data.items():
            rows.extend(_flatten(value, f"{prefix}.{key}" if prefix else key))
        return rows
    if isinstance(data, list) and data and isinstance(data[0], dict):
        rows = []
        for i, item in enumerate(data):
            label = item.get("name", i)
            rows.extend(_flatten(item, f"{prefix}[{label}]"))
        return rows
    return [(prefix, data)]


def format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.16g}"
    if isinstance(value, list | tuple):
        return ", ".join(format_value(v) for v in value)
    return str(value)


def emit(summary: BaseModel, out=None) -> None:
    """Print a summary as ``name = value`` lines."""
    out = out or sys.stdout
    for name, value in _flatten(summary.model_dump(mode="json")):
        if value is None:
            continue
        print(f"{name} = {format_value(value)}", file=out)


def run(config: RunConfig, service: OrbitService | None = None) -> int:
    """Execute one command; return the exit status."""
    service = service or OrbitService()
    coeffs = service.load(spec=config.spec, demo=config.demo)
    title = f"{coeffs.variant} periodic solution"

    match config.command:
        case Command.CHECK:
            report = service.check(coeffs)
            emit(report)
            if not report.passed:
                raise HypothesisError(report.failures(), report)
        case Command.BOUNDS:
            emit(service.bounds(coeffs, config))
        case Command.SOLVE_SHOOTING:
            orbit = service.solve_shooting(coeffs, config)
            emit(service.shooting_summary(orbit, config.demo))
        case Command.SOLVE_OPERATOR:
            emit(service.solve_operator(coeffs, config).summary())
        case Command.VERIFY:
            emit(service.verify(coeffs, config))
        case Command.EXPORT:
            emit(service.export(coeffs, config, config.out, title=title))
        case Command.DEMO:
            orbit = service.solve_shooting(coeffs, config)
            emit(service.shooting_summary(orbit, config.demo))
            out_dir = config.out or Path(service.settings.output_dir) / str(config.demo)
            emit(service.export(coeffs, config, out_dir, orbit=orbit, title=f"{config.demo}: {title}"))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    settings = get_settings()
    try:
        config, log_level = parse_config(argv)
    except (ValueError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    configure_logging(settings, log_level)

    try:
        return run(config)
    except HypothesisError as e:
        for failure in e.failures:
            print(f"hypothesis failed: {failure}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except PeriodicOrbitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValueError, ArithmeticError) as e:
        logger.error(f"Unexpected numerical failure: {e!s}", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
