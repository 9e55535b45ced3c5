"""Command-line scenario runner.

    uncopy run all --format json
    uncopy run cnot-superposition --alpha 0.6 --beta 0,0.8
    uncopy list

Reports go to stdout, diagnostics to stderr. Exit status is 0 when every
scenario passes, 1 when any fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from typing import Sequence

from . import __version__
from .hilbert import NormalizationError
from .scenarios import (
    SCENARIO_ORDER,
    SCENARIOS,
    ScenarioConfig,
    ScenarioReport,
    run_all,
    run_scenario,
)


def parse_complex(text: str) -> complex:
    """Accept ``RE``, ``RE,IM`` or a literal such as ``0.6+0.8i`` / ``0.6+0.8j``."""
    text = text.strip()
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return complex(float(re_part), float(im_part))
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _number(value) -> object:
    if isinstance(value, bool) or isinstance(value, (int, str)):
        return value
    if isinstance(value, complex):
        return {"re": _number(value.real), "im": _number(value.imag)}
    value = float(value)
    if not math.isfinite(value):
        return repr(value)
    return value


def config_dict(config: ScenarioConfig | None) -> dict:
    if config is None:
        return {}
    d = asdict(config)
    return {k: _number(v) for k, v in d.items()}


def report_dict(report: ScenarioReport) -> dict:
    return {
        "scenario": report.scenario,
        "verdict": report.verdict,
        "expected": report.expected,
        "metrics": {k: _number(v) for k, v in report.metrics.items()},
        "tolerance": _number(report.tolerance),
        "seed": report.seed,
    }


def render(reports: Sequence[ScenarioReport], format: str = "text",
           config: ScenarioConfig | None = None) -> bytes:
    if format == "json":
        doc = {
            "tool_version": __version__,
            "config": config_dict(config),
            "reports": [report_dict(r) for r in reports],
        }
        # floats serialize via repr, which round-trips exactly
        return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode()
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    width = max((len(r.scenario) for r in reports), default=0)
    lines = [f"{r.scenario:<{width}}  {r.verdict.upper():<4}  {r.expected}" for r in reports]
    passed = sum(r.passed for r in reports)
    lines.append(f"{passed}/{len(reports)} scenarios passed")
    return ("\n".join(lines) + "\n").encode()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uncopy", description="Run copying/deleting machine scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario or all of them")
    run.add_argument("scenario", choices=list(SCENARIO_ORDER) + ["all"])
    run.add_argument("--alpha", type=parse_complex, default=1 / math.sqrt(2),
                     help="amplitude of |0>, as RE or RE,IM (default 1/sqrt2)")
    run.add_argument("--beta", type=parse_complex, default=1 / math.sqrt(2),
                     help="amplitude of |1>, as RE or RE,IM (default 1/sqrt2)")
    run.add_argument("--tolerance", type=float, default=1e-10)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trials", type=int, default=100)
    run.add_argument("--sigma", type=int, choices=[0, 1], default=0,
                     help="basis index of the blank state")
    run.add_argument("--format", choices=["text", "json"], default="text")

    sub.add_parser("list", help="list scenarios")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        width = max(len(n) for n in SCENARIO_ORDER)
        for name in SCENARIO_ORDER:
            s = SCENARIOS[name]
            print(f"{name:<{width}}  {s.description}: {s.expected}")
        return 0

    try:
        config = ScenarioConfig(alpha=complex(args.alpha), beta=complex(args.beta),
                                tolerance=args.tolerance, seed=args.seed, trials=args.trials,
                                sigma_index=args.sigma, format=args.format)
    except (ValueError, NormalizationError) as exc:
        parser.error(str(exc))

    if args.scenario == "all":
        reports, code = run_all(config)
    else:
        try:
            reports = [run_scenario(args.scenario, config)]
        except Exception as exc:
            print(f"scenario {args.scenario} crashed: {exc}", file=sys.stderr)
            return 1
        code = 0 if reports[0].passed else 1
    for r in reports:
        if "error" in r.metrics:
            print(f"{r.scenario}: {r.metrics['error']}", file=sys.stderr)

    sys.stdout.buffer.write(render(reports, config.format, config))
    sys.stdout.flush()
    return code
