"""Command-line entry point.

Exit status: 0 success, 1 validation/scenario/IO error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import fam, simulator
from .errors import FuzzySosError

_INPUT_NAMES = ("perf_gap", "weight", "funding_gap", "deadline_gap")


def _finite(text):
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def _fail(msg: str) -> int:
    print(f"error: {' '.join(str(msg).split())}", file=sys.stderr)
    return 1


def cmd_validate(args) -> int:
    path = Path(args.rules)
    if not path.is_file():
        return _fail(f"rules not found: {path}")
    try:
        table = fam.parse_rules(path.read_text(encoding="utf-8"))
    except (FuzzySosError, UnicodeDecodeError) as exc:
        return _fail(f"{path}: {exc}")
    print(f"OK: {len(table)} rules")
    return 0


def cmd_gen_rules(args) -> int:
    text = fam.serialize_rules(fam.generate_default_rules())
    try:
        simulator.atomic_write_text(args.output, text)
    except OSError as exc:
        return _fail(exc)
    print(f"wrote {len(text.splitlines()) - 1} rules to {args.output}")
    return 0


def _format_inference(res: fam.InferenceResult) -> str:
    lines = [
        f"funding_adjustment: {res.funding_adjustment:+.6f}",
        f"deadline_adjustment: {res.deadline_adjustment:+.6f}",
        "memberships:",
    ]
    for name, mv in zip(_INPUT_NAMES, res.memberships):
        degrees = " ".join(f"{t}={d:.6f}" for t, d in mv.items())
        lines.append(f"  {name}: {degrees}")
    lines.append(f"fired_rules: {len(res.fired_rules)}")
    for rule, act in res.fired_rules:
        lines.append(f"  {act:.6f}  {rule}")
    return "\n".join(lines)


def cmd_infer(args) -> int:
    if args.rules != "default" and not Path(args.rules).is_file():
        return _fail(f"rules not found: {args.rules}")
    try:
        table = fam.load_rules(args.rules)
        res = fam.infer(table, args.perf_gap, args.weight, args.funding_gap, args.deadline_gap)
    except (FuzzySosError, UnicodeDecodeError) as exc:
        return _fail(exc)
    if args.format == "json":
        print(json.dumps(res.to_dict(), indent=2))
    else:
        print(_format_inference(res))
    return 0


def cmd_run(args) -> int:
    path = Path(args.scenario)
    if not path.is_file():
        return _fail(f"scenario not found: {path}")
    try:
        scenario = simulator.load_scenario(path.read_text(encoding="utf-8"))
        traces, summary, _ = simulator.run(scenario, base_dir=path.parent)
        simulator.write_trace(traces, args.trace)
        simulator.atomic_write_text(args.summary, json.dumps(summary.to_dict(), indent=2) + "\n")
    except (FuzzySosError, OSError, UnicodeDecodeError) as exc:
        return _fail(exc)
    print(json.dumps(summary.to_dict(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzysos", description="Fuzzy SoS/system negotiation engine and simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a rule file")
    p.add_argument("rules")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen-rules", help="write the default 256-rule file")
    p.add_argument("output")
    p.set_defaults(func=cmd_gen_rules)

    p = sub.add_parser("infer", help="one-shot inference with diagnostics")
    p.add_argument("--rules", default="default", help='rule file or "default"')
    p.add_argument("--perf-gap", type=_finite, required=True)
    p.add_argument("--weight", type=_finite, required=True)
    p.add_argument("--funding-gap", type=_finite, required=True)
    p.add_argument("--deadline-gap", type=_finite, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("run", help="run a scenario")
    p.add_argument("scenario")
    p.add_argument("--trace", required=True, help="trace CSV output path")
    p.add_argument("--summary", required=True, help="summary JSON output path")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
