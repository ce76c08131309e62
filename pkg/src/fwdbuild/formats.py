"""File formats: build specs, persisted engine state, trace logs, reports.

Everything is UTF-8 JSON with sorted object keys so that identical inputs
serialize byte-identically.  A trace log is JSON lines: a header object
carrying the script order, then one record object per executed command.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .commands import (
    Branch,
    Build,
    CommandProgram,
    Concat,
    Digest,
    Eq,
    Expr,
    Lit,
    Oracle,
    Present,
    Read,
    Step,
    Var,
    Write,
    digest,
)
from .engines import Memory
from .fs import FileSystem
from .hazards import Hazard, ReadWrite, Speculative, WriteWrite


class FormatError(ValueError):
    """Malformed spec, state, or trace input."""


# --- program encoding ------------------------------------------------------

def expr_to_json(expr: Expr):
    if isinstance(expr, Lit):
        return {"lit": expr.text}
    if isinstance(expr, Var):
        return {"var": expr.name}
    if isinstance(expr, Concat):
        return {"concat": [expr_to_json(p) for p in expr.parts]}
    if isinstance(expr, Digest):
        return {"digest": expr_to_json(expr.operand)}
    raise FormatError(f"not an expression: {expr!r}")


def expr_from_json(data) -> Expr:
    if not isinstance(data, dict) or len(data) != 1:
        raise FormatError(f"bad expression: {data!r}")
    (kind, value), = data.items()
    if kind == "lit":
        return Lit(value)
    if kind == "var":
        return Var(value)
    if kind == "concat":
        return Concat([expr_from_json(p) for p in value])
    if kind == "digest":
        return Digest(expr_from_json(value))
    raise FormatError(f"unknown expression kind: {kind!r}")


def step_to_json(step: Step):
    if isinstance(step, Read):
        return {"read": {"file": step.file, "bind": step.bind}}
    if isinstance(step, Branch):
        test = "present" if isinstance(step.test, Present) else {"eq": step.test.text}
        return {
            "branch": {
                "var": step.var,
                "test": test,
                "then": [step_to_json(s) for s in step.then],
                "else": [step_to_json(s) for s in step.orelse],
            }
        }
    if isinstance(step, Write):
        return {"write": {"file": step.file, "value": expr_to_json(step.value)}}
    raise FormatError(f"not a step: {step!r}")


def step_from_json(data) -> Step:
    if not isinstance(data, dict) or len(data) != 1:
        raise FormatError(f"bad step: {data!r}")
    (kind, body), = data.items()
    if kind == "read":
        return Read(body["file"], body["bind"])
    if kind == "branch":
        test = Present() if body["test"] == "present" else Eq(body["test"]["eq"])
        return Branch(
            body["var"],
            test,
            [step_from_json(s) for s in body.get("then", [])],
            [step_from_json(s) for s in body.get("else", [])],
        )
    if kind == "write":
        return Write(body["file"], expr_from_json(body["value"]))
    raise FormatError(f"unknown step kind: {kind!r}")


def program_to_json(program: CommandProgram) -> list:
    return [step_to_json(s) for s in program.steps]


def program_from_json(data) -> CommandProgram:
    if not isinstance(data, list):
        raise FormatError("program must be a list of steps")
    return CommandProgram([step_from_json(s) for s in data])


# --- build spec ------------------------------------------------------------

@dataclass
class BuildSpec:
    files: FileSystem
    oracle: Oracle
    script: Build
    run: Optional[Build] = None  # defaults to script when absent

    @property
    def run_build(self) -> Build:
        return self.run if self.run is not None else self.script


def spec_to_json(spec: BuildSpec) -> dict:
    data = {
        "files": dict(spec.files),
        "commands": [
            {"id": cmd, "program": program_to_json(spec.oracle[cmd])}
            for cmd in sorted(spec.oracle)
        ],
        "script": list(spec.script),
    }
    if spec.run is not None:
        data["run"] = list(spec.run)
    return data


def spec_from_json(data) -> BuildSpec:
    try:
        files = dict(data["files"])
        commands = data["commands"]
        script = list(data["script"])
        run = list(data["run"]) if "run" in data else None
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad build spec: {exc}") from exc
    oracle: Oracle = {}
    for entry in commands:
        cmd = entry["id"]
        if cmd in oracle:
            raise FormatError(f"duplicate command definition: {cmd!r}")
        oracle[cmd] = program_from_json(entry["program"])
    for cmd in script:
        if cmd not in oracle:
            raise FormatError(f"script references undefined command: {cmd!r}")
    if run is not None:
        for cmd in run:
            if cmd not in oracle:
                raise FormatError(f"run references undefined command: {cmd!r}")
    return BuildSpec(files, oracle, script, run)


def load_spec(path: str) -> BuildSpec:
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON in {path}: {exc}") from exc
    return spec_from_json(data)


# --- persisted engine state ------------------------------------------------

def state_to_json(engine: str, memory: Memory, files: FileSystem) -> dict:
    """Persisted engine state: the memory plus the resulting file system.

    Carrying the file system is what makes a second CLI invocation a
    fixed point; the spec's ``files`` object only describes the inputs.
    """
    return {
        "engine": engine,
        "memory": {cmd: [[name, value] for name, value in entry] for cmd, entry in memory.items()},
        "files": dict(files),
    }


def state_from_json(data, expected_engine: str) -> tuple[Memory, FileSystem]:
    try:
        engine = data["engine"]
        raw = data["memory"]
        files = dict(data.get("files", {}))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad state file: {exc}") from exc
    if engine != expected_engine:
        raise FormatError(
            f"state file was written by the {engine!r} engine, not {expected_engine!r}"
        )
    memory: Memory = {}
    for cmd, entry in raw.items():
        memory[cmd] = [(name, value) for name, value in entry]
    return memory, files


# --- trace logs ------------------------------------------------------------

@dataclass
class TraceLog:
    script_order: Build
    records: list[tuple[str, list[str], list[str]]] = field(default_factory=list)


def trace_log_to_text(log: TraceLog) -> str:
    lines = [json.dumps({"scriptOrder": log.script_order}, sort_keys=True, separators=(",", ":"))]
    for cmd, reads, writes in log.records:
        lines.append(
            json.dumps(
                {"cmd": cmd, "reads": reads, "writes": writes},
                sort_keys=True,
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + "\n"


def trace_log_from_text(text: str) -> TraceLog:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty trace log")
    try:
        header = json.loads(lines[0])
        script_order = list(header["scriptOrder"])
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"bad trace header: {exc}") from exc
    records = []
    seen = set()
    for line in lines[1:]:
        try:
            data = json.loads(line)
            record = (data["cmd"], list(data["reads"]), list(data["writes"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"bad trace record: {exc}") from exc
        if record[0] in seen:
            raise FormatError(f"duplicate command in trace: {record[0]!r}")
        seen.add(record[0])
        records.append(record)
    return TraceLog(script_order, records)


# --- reports ---------------------------------------------------------------

HAZARD_KINDS = {ReadWrite: "read-write", WriteWrite: "write-write", Speculative: "speculative"}


def hazard_to_json(hazard: Hazard) -> dict:
    if isinstance(hazard, ReadWrite):
        commands = [hazard.earlier_reader, hazard.writer]
    elif isinstance(hazard, WriteWrite):
        commands = [hazard.earlier_writer, hazard.writer]
    else:
        commands = [hazard.writer, hazard.reader]
    return {"kind": HAZARD_KINDS[type(hazard)], "commands": commands, "file": hazard.file}


def fs_digest(fs: FileSystem) -> str:
    """Digest of the canonical (sorted-key, compact) file system serialization."""
    return digest(json.dumps(fs, sort_keys=True, separators=(",", ":")))


def report(
    result: str,
    fs: FileSystem,
    executed: Build,
    skipped: Build,
    hazard: Optional[Hazard] = None,
    violation: Optional[str] = None,
) -> dict:
    data = {
        "result": result,
        "executed": list(executed),
        "skipped": list(skipped),
        "fsDigest": fs_digest(fs),
    }
    if hazard is not None:
        data["hazard"] = hazard_to_json(hazard)
    if violation is not None:
        data["violation"] = violation
    return data


def render(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))
