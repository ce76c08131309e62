"""Command-line interface.

Subcommands:
  run          execute a build spec with a chosen engine
  check-trace  lint an externally produced trace log for hazards
  explore      run every permutation of a spec's script build
  verify       property-check the correctness statements

Exit codes: 0 ok, 1 parse or internal error, 2 hazard, 3 precondition
violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .commands import script
from .engines import EngineResult, fabricate, rattle_unchecked
from .errors import DisjointnessViolation
from .formats import (
    FormatError,
    load_spec,
    render,
    report,
    state_from_json,
    state_to_json,
    trace_log_from_text,
)
from .harness import (
    GenParams,
    THEOREMS,
    UnknownTheorem,
    check_theorem,
    permutations,
    validate_preconditions,
)
from .hazards import (
    FileInfoEntry,
    RequiredMode,
    detect_read_write,
    detect_speculative,
    detect_write_write,
    hazard_scan,
    rattle,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HAZARD = 2
EXIT_VIOLATION = 3


def _load_state(path: Optional[str], engine_tag: str):
    if path is None:
        return {}, {}
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        return {}, {}
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc}") from exc
    return state_from_json(data, engine_tag)


def _save_state(path: Optional[str], engine_tag: str, memory, files) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(state_to_json(engine_tag, memory, files), handle, sort_keys=True)
        handle.write("\n")


def cmd_run(args) -> int:
    try:
        spec = load_spec(args.spec)
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    engine_tag = "fabricate" if args.engine == "fabricate" else "rattle"
    try:
        memory, saved_files = _load_state(args.state, engine_tag) if args.engine != "script" else ({}, {})
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    # Persisted outputs survive between invocations; the spec's files are
    # the inputs and take precedence over anything previously written.
    bs, br = spec.script, spec.run_build
    fs = {**saved_files, **spec.files}
    violation = validate_preconditions(spec.oracle, br, bs, fs)
    if violation is not None:
        print(render(report("violation", fs, [], [], violation=f"{violation.kind}: {violation.detail}")))
        return EXIT_VIOLATION

    mode = RequiredMode(args.required_mode)
    try:
        if args.engine == "script":
            final = script(spec.oracle, bs, fs)
            print(render(report("ok", final, bs, [])))
            return EXIT_OK
        if args.engine == "fabricate":
            result = fabricate(spec.oracle, bs, fs, memory)
        elif args.engine == "rattle-unchecked":
            result = rattle_unchecked(spec.oracle, br, fs, memory)
        else:
            outcome = rattle(spec.oracle, br, bs, fs, memory, mode)
            if not isinstance(outcome, EngineResult):
                # State file deliberately untouched on hazard.
                print(render(report("hazard", fs, [], [], hazard=outcome)))
                return EXIT_HAZARD
            result = outcome
    except DisjointnessViolation as exc:
        print(render(report("violation", fs, [], [], violation=str(exc))))
        return EXIT_VIOLATION

    _save_state(args.state, engine_tag, result.memory, result.fs)
    skipped = [cmd for cmd in br if cmd not in result.executed]
    print(render(report("ok", result.fs, result.executed, skipped)))
    return EXIT_OK


def cmd_check_trace(args) -> int:
    try:
        with open(args.trace, encoding="utf-8") as handle:
            log = trace_log_from_text(handle.read())
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    mode = RequiredMode(args.required_mode)
    run_order = [cmd for cmd, _, _ in log.records]
    info = []
    for cmd, reads, writes in log.records:
        hazard = detect_write_write(cmd, writes, info)
        if hazard is None:
            hazard = detect_read_write(cmd, writes, info)
        info = info + [FileInfoEntry(cmd, tuple(reads), tuple(writes))]
        if hazard is None:
            hazard = detect_speculative(info, log.script_order, run_order, mode)
        if hazard is not None:
            print(render(report("hazard", {}, run_order, [], hazard=hazard)))
            return EXIT_HAZARD
    print(render(report("ok", {}, run_order, [])))
    return EXIT_OK


def cmd_explore(args) -> int:
    try:
        spec = load_spec(args.spec)
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    bs, fs = spec.script, spec.files
    if len(bs) > 6:
        print(f"error: script has {len(bs)} commands; explore is capped at 6", file=sys.stderr)
        return EXIT_VIOLATION
    violation = validate_preconditions(spec.oracle, bs, bs, fs)
    if violation is not None:
        print(render(report("violation", fs, [], [], violation=f"{violation.kind}: {violation.detail}")))
        return EXIT_VIOLATION

    reference = script(spec.oracle, bs, fs)
    bs_has_hazard = not isinstance(hazard_scan(spec.oracle, bs, bs, fs), list)
    ok_count = hazard_count = 0
    trichotomy = True
    for br in permutations(bs):
        outcome = rattle(spec.oracle, br, bs, fs, {})
        if isinstance(outcome, EngineResult):
            ok_count += 1
            line = report("ok", outcome.fs, outcome.executed, [c for c in br if c not in outcome.executed])
            holds = bs_has_hazard or outcome.fs == reference
        else:
            hazard_count += 1
            line = report("hazard", fs, [], [], hazard=outcome)
            holds = True  # a raised hazard satisfies the trichotomy
        line["run"] = br
        print(render(line))
        trichotomy = trichotomy and holds
    summary = {"summary": {"ok": ok_count, "hazard": hazard_count, "trichotomy": trichotomy}}
    print(render(summary))
    return EXIT_OK if trichotomy else EXIT_ERROR


def cmd_verify(args) -> int:
    params = GenParams(seed=args.seed, cases=args.cases, max_build_len=args.max_build)
    names = THEOREMS if args.only is None else [args.only]
    all_passed = True
    try:
        for name in names:
            verdict = check_theorem(name, params)
            if not verdict.gating:
                status = "PROBE"
            else:
                status = "PASS" if verdict.passed else "FAIL"
                all_passed = all_passed and verdict.passed
            line = f"{verdict.theorem}: {status} ({verdict.cases_run} cases, {verdict.counterexample_count} counterexamples)"
            if not verdict.gating:
                line += " [not gating]"
            if verdict.counterexample is not None and verdict.gating:
                line += f" counterexample={verdict.counterexample}"
            print(line)
    except UnknownTheorem as exc:
        print(f"error: unknown theorem {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if all_passed else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fwdbuild", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a build spec")
    p_run.add_argument("spec")
    p_run.add_argument(
        "--engine",
        choices=["script", "fabricate", "rattle-unchecked", "rattle"],
        default="rattle",
    )
    p_run.add_argument("--state", default=None, help="memory persistence file")
    p_run.add_argument("--required-mode", choices=["ever", "prefix"], default="ever")
    p_run.set_defaults(func=cmd_run)

    p_trace = sub.add_parser("check-trace", help="lint a trace log for hazards")
    p_trace.add_argument("trace")
    p_trace.add_argument("--required-mode", choices=["ever", "prefix"], default="ever")
    p_trace.set_defaults(func=cmd_check_trace)

    p_explore = sub.add_parser("explore", help="run every permutation of the script build")
    p_explore.add_argument("spec")
    p_explore.set_defaults(func=cmd_explore)

    p_verify = sub.add_parser("verify", help="property-check the correctness statements")
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument("--cases", type=int, default=1000)
    p_verify.add_argument("--max-build", type=int, default=5)
    p_verify.add_argument("--only", default=None, help="run a single named theorem")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
