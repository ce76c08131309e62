"""Hazard detection and the hazard-checked engine.

The execution log (FileInfo) records, in run order, each executed command
with the names it read and wrote.  Three detectors work over that log:

  read-write:   a command writes a file an earlier-run command read;
  write-write:  a command writes a file an earlier-run command wrote;
  speculative:  a command run out of script order (or absent from the
                script) wrote a file later read by a required command.

Whether a command counts as *required* has two modes.  EVER asks whether
all of its script predecessors eventually run, which detects every
speculative hazard.  PREFIX freezes the question at the moment the reader
itself was checked, reproducing a real-world detector that misses hazards
when a command becomes required only after its own hazard check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .commands import Build, Oracle, check_disjoint, interpret, run
from .engines import EngineResult, Memory, should_run
from .errors import DisjointnessViolation
from .fs import FileSystem, extend


@dataclass(frozen=True)
class FileInfoEntry:
    cmd: str
    read_names: tuple[str, ...]
    write_names: tuple[str, ...]


FileInfo = list[FileInfoEntry]


@dataclass(frozen=True)
class ReadWrite:
    writer: str
    earlier_reader: str
    file: str


@dataclass(frozen=True)
class WriteWrite:
    writer: str
    earlier_writer: str
    file: str


@dataclass(frozen=True)
class Speculative:
    writer: str  # ran first, wrote the file
    reader: str  # required command that read it
    file: str


Hazard = Union[ReadWrite, WriteWrite, Speculative]


class RequiredMode(enum.Enum):
    EVER = "ever"
    PREFIX = "prefix"


def entry_for(trace) -> FileInfoEntry:
    return FileInfoEntry(trace.cmd, tuple(trace.read_names), tuple(trace.write_names))


def detect_read_write(cmd: str, writes: list[str], info: FileInfo) -> Optional[ReadWrite]:
    """First write of ``cmd`` that clobbers a file some earlier command read."""
    for entry in info:
        for name in writes:
            if name in entry.read_names:
                return ReadWrite(cmd, entry.cmd, name)
    return None


def detect_write_write(cmd: str, writes: list[str], info: FileInfo) -> Optional[WriteWrite]:
    """First write of ``cmd`` that re-writes a file some earlier command wrote."""
    for entry in info:
        for name in writes:
            if name in entry.write_names:
                return WriteWrite(cmd, entry.cmd, name)
    return None


def _before(x1: str, x2: str, build: Build) -> bool:
    return x1 in build and x2 in build and build.index(x1) < build.index(x2)


def is_required(
    cmd: str, bs: Build, mode: RequiredMode, info: FileInfo, br: Build
) -> bool:
    """Is ``cmd`` demanded by the script build ``bs``.

    PREFIX: all script predecessors of ``cmd`` already appear in ``info``.
    EVER:   all script predecessors appear somewhere in the run build
            ``br``, so they are eventually recorded.
    """
    if cmd not in bs:
        return False
    preds = bs[: bs.index(cmd)]
    if mode is RequiredMode.PREFIX:
        ran = {entry.cmd for entry in info}
        return all(p in ran for p in preds)
    return all(p in br for p in preds)


def detect_speculative(
    info: FileInfo, bs: Build, br: Build, mode: RequiredMode
) -> Optional[Speculative]:
    """First out-of-order write/read pair involving a required reader.

    Scans readers in run order, then earlier writers, then the reader's
    read names.  In PREFIX mode a reader's required status is judged
    against the log as it stood when that reader was checked (the prefix
    of ``info`` ending at its entry), which is exactly what makes PREFIX
    miss hazards whose reader becomes required only later.
    """
    for i2, e2 in enumerate(info):
        req_info = info[: i2 + 1] if mode is RequiredMode.PREFIX else info
        if not is_required(e2.cmd, bs, mode, req_info, br):
            continue
        for e1 in info[:i2]:
            for name in e2.read_names:
                if name in e1.write_names and not _before(e1.cmd, e2.cmd, bs):
                    return Speculative(e1.cmd, e2.cmd, name)
    return None


def run_checked(
    oracle: Oracle,
    cmd: str,
    bs: Build,
    br: Build,
    fs: FileSystem,
    memory: Memory,
    info: FileInfo,
    mode: RequiredMode,
) -> Union[Hazard, tuple[FileSystem, Memory, FileInfo]]:
    """One hazard-checked step.

    A skipped command leaves all state untouched and adds no log entry.
    On a hazard the triggering command's writes and memory update are
    discarded; the inputs are returned to the caller unchanged inside the
    hazard value's context.
    """
    if not should_run(cmd, memory, fs):
        return fs, memory, info
    trace = interpret(oracle, cmd, fs)
    witness = check_disjoint(trace)
    if witness is not None:
        raise DisjointnessViolation(cmd, witness)
    writes = trace.write_names
    hazard: Optional[Hazard] = detect_write_write(cmd, writes, info)
    if hazard is None:
        hazard = detect_read_write(cmd, writes, info)
    if hazard is None:
        hazard = detect_speculative(info + [entry_for(trace)], bs, br, mode)
    if hazard is not None:
        return hazard
    fs2 = extend(fs, list(trace.writes))
    files = list(trace.reads) + [(name, content) for name, content in trace.writes]
    memory2 = {**memory, cmd: files}
    return fs2, memory2, info + [entry_for(trace)]


def rattle(
    oracle: Oracle,
    br: Build,
    bs: Build,
    fs: FileSystem,
    memory: Memory,
    mode: RequiredMode = RequiredMode.EVER,
) -> Union[Hazard, EngineResult]:
    """Hazard-checked engine: run ``br`` while checking against script ``bs``.

    Stops at the first hazard.  In EVER mode a final whole-log sweep backs
    up the per-step checks; it is a no-op when they are exhaustive.
    """
    executed: list[str] = []
    info: FileInfo = []
    for cmd in br:
        outcome = run_checked(oracle, cmd, bs, br, fs, memory, info, mode)
        if not isinstance(outcome, tuple):
            return outcome
        fs2, memory2, info2 = outcome
        if len(info2) > len(info):
            executed.append(cmd)
        fs, memory, info = fs2, memory2, info2
    if mode is RequiredMode.EVER:
        hazard = detect_speculative(info, bs, br, mode)
        if hazard is not None:
            return hazard
    return EngineResult(fs, memory, executed)


def hazard_scan(
    oracle: Oracle,
    br: Build,
    bs: Build,
    fs: FileSystem,
    mode: RequiredMode = RequiredMode.EVER,
) -> Union[Hazard, FileInfo]:
    """Decide hazard-freedom of running ``br`` against script ``bs``.

    Executes every command unconditionally (no memoization, no skipping)
    and returns either the first hazard or the complete execution log
    witnessing hazard-freedom.
    """
    info: FileInfo = []
    for cmd in br:
        fs, trace = run(oracle, cmd, fs)
        writes = trace.write_names
        hazard: Optional[Hazard] = detect_write_write(cmd, writes, info)
        if hazard is None:
            hazard = detect_read_write(cmd, writes, info)
        info = info + [entry_for(trace)]
        if hazard is None:
            hazard = detect_speculative(info, bs, br, mode)
        if hazard is not None:
            return hazard
    return info
