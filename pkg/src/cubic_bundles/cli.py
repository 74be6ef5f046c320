#!/usr/bin/env python3
"""Command-line entry point for scenario checks."""

import argparse
import asyncio
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, List, Optional

from dotenv import load_dotenv

from .errors import CubicBundleError, ScenarioValidationError
from .exact_field import parse_scalar
from .runner import Report, ScenarioRunner, render_report, run_scenario
from .scenario import RequestModel, load_scenario
from .session import ScenarioSession

# Load environment variables
load_dotenv()

# Configure logging
log_level = os.getenv("LOG_LEVEL", "INFO").upper()
logging.basicConfig(level=getattr(logging, log_level, logging.INFO), stream=sys.stderr)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_FINDINGS = 2

SCENARIO_COMMANDS = ("construct", "decide", "roundtrip", "recover")


def _scalar_argument(text: str) -> Any:
    """A scalar given as p/q or in the JSON scalar form."""
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    try:
        parse_scalar(value)
    except (ValueError, ArithmeticError, CubicBundleError) as e:
        raise argparse.ArgumentTypeError(f"not a scalar: {text} ({e})")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubic-bundles", description=__doc__)
    parser.add_argument(
        "--format",
        dest="fmt",
        choices=["text", "structured"],
        default=os.getenv("CUBIC_BUNDLES_REPORT_FORMAT", "text"),
        help="report format (default from CUBIC_BUNDLES_REPORT_FORMAT)",
    )
    parser.add_argument("--cartier-limit", type=_positive, default=None, help="bound of the Cartier search")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in SCENARIO_COMMANDS:
        command = commands.add_parser(name, help=f"run only the {name} request on a scenario")
        command.add_argument("scenario", type=Path)

    classify = commands.add_parser("classify", help="classify the fiber over a point")
    classify.add_argument("--fiber", type=_scalar_argument, required=True)
    classify.add_argument("scenario", type=Path)

    osculate = commands.add_parser("osculate", help="osculating points on a nodal fiber")
    osculate.add_argument("--k", type=_positive, required=True)
    osculate.add_argument("--fiber", type=_scalar_argument, required=True)
    osculate.add_argument("scenario", type=Path)

    cartier = commands.add_parser("cartier", help="Q-Cartier certificate of f^k")
    cartier.add_argument("--xi", type=_scalar_argument, required=True)
    cartier.add_argument("--k", type=_positive, required=True)
    cartier.add_argument("--m", type=_positive, required=True)

    run = commands.add_parser("run", help="run every request of a scenario")
    run.add_argument("scenario", type=Path)
    run.add_argument("--format", dest="run_fmt", choices=["text", "structured"], default=None)
    run.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    return parser


async def _single_request(
    scenario_path: Optional[Path], request: RequestModel, cartier_limit: Optional[int]
) -> Report:
    scenario = load_scenario(scenario_path) if scenario_path is not None else None
    runner = ScenarioRunner(ScenarioSession(scenario, cartier_limit))
    result = await runner.call(request)
    findings: List[str] = list((result.result or {}).get("findings", []))
    if result.kind == "DescriptorInvariantError":
        findings.append(f"{result.tag}: {result.error}")
    return Report(
        scenario=scenario.name if scenario else request.task,
        conductor=scenario.conductor if scenario else parse_scalar(request.xi).conductor,
        results=[result],
        validation_log=[f"scenario '{scenario.name}' validated"] if scenario else [],
        findings=findings,
    )


async def async_main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and return the exit code."""
    args = build_parser().parse_args(argv)
    fmt = args.fmt

    try:
        if args.command == "run":
            report = await run_scenario(args.scenario, args.cartier_limit)
            fmt = args.run_fmt or fmt
        elif args.command in SCENARIO_COMMANDS:
            report = await _single_request(args.scenario, RequestModel(task=args.command), args.cartier_limit)
        elif args.command == "classify":
            request = RequestModel(task="classify", fiber=args.fiber)
            report = await _single_request(args.scenario, request, args.cartier_limit)
        elif args.command == "osculate":
            request = RequestModel(task="osculate", k=args.k, fiber=args.fiber)
            report = await _single_request(args.scenario, request, args.cartier_limit)
        else:
            request = RequestModel(task="cartier", xi=args.xi, k=args.k, m=args.m)
            report = await _single_request(None, request, args.cartier_limit)
    except ScenarioValidationError as e:
        logger.error(f"Invalid scenario: {e}")
        return EXIT_VALIDATION

    output = render_report(report, fmt)
    if args.command == "run" and args.out is not None:
        args.out.write_text(output, encoding="utf-8")
        logger.info(f"report written to {args.out}")
    else:
        sys.stdout.write(output)

    if report.findings or report.has_errors:
        return EXIT_FINDINGS
    return EXIT_OK


def main():
    """Main entry point for the CLI."""
    sys.exit(asyncio.run(async_main()))


if __name__ == "__main__":
    main()
