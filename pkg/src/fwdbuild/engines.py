"""Memoizing engines without hazard checking.

Both engines keep a memory of per-command file snapshots and skip a
command when every recorded file still has its recorded value.  The
fabricate-style engine records only the files a command read; the
unchecked rattle-style engine records its writes as well, which is why its
equivalence with the script needs no hazard-freedom assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .commands import Build, Oracle, run
from .fs import FileSystem, lookup

# One snapshot list per command id; replaced wholesale on re-execution.
Memory = dict[str, list[tuple[str, Optional[str]]]]


@dataclass
class EngineResult:
    fs: FileSystem
    memory: Memory
    # Commands actually run, in build order.  Instrumentation for
    # fixed-point and minimality assertions; skipped commands are absent.
    executed: list[str]


def should_run(cmd: str, memory: Memory, fs: FileSystem) -> bool:
    """True iff the command has no memory entry or a recorded file changed."""
    if cmd not in memory:
        return True
    return any(lookup(fs, name) != value for name, value in memory[cmd])


def run_fabricate(
    oracle: Oracle, cmd: str, fs: FileSystem, memory: Memory
) -> tuple[FileSystem, Memory, bool]:
    """One fabricate step: run if needed, recording reads only."""
    if not should_run(cmd, memory, fs):
        return fs, memory, False
    fs2, trace = run(oracle, cmd, fs)
    memory = {**memory, cmd: list(trace.reads)}
    return fs2, memory, True


def run_rattle(
    oracle: Oracle, cmd: str, fs: FileSystem, memory: Memory
) -> tuple[FileSystem, Memory, bool]:
    """One unchecked-rattle step: run if needed, recording reads and writes."""
    if not should_run(cmd, memory, fs):
        return fs, memory, False
    fs2, trace = run(oracle, cmd, fs)
    files = list(trace.reads) + [(name, content) for name, content in trace.writes]
    memory = {**memory, cmd: files}
    return fs2, memory, True


def _fold(step, oracle: Oracle, build: Build, fs: FileSystem, memory: Memory) -> EngineResult:
    executed: list[str] = []
    for cmd in build:
        fs, memory, ran = step(oracle, cmd, fs, memory)
        if ran:
            executed.append(cmd)
    return EngineResult(fs, memory, executed)


def fabricate(oracle: Oracle, build: Build, fs: FileSystem, memory: Memory) -> EngineResult:
    return _fold(run_fabricate, oracle, build, fs, memory)


def rattle_unchecked(oracle: Oracle, build: Build, fs: FileSystem, memory: Memory) -> EngineResult:
    return _fold(run_rattle, oracle, build, fs, memory)
