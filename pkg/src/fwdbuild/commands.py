"""Deterministic command semantics.

A command is a tiny read/branch/write program.  The interpreter consults
the file system only through Read steps, so a command's behavior depends
only on the values it actually read; perturbing anything outside the read
set cannot change the trace.  That property is what lets the memoizing
engines decide skips from recorded reads alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import DisjointnessViolation, UnboundVar, UnknownCmd
from .fs import FileSystem, extend, lookup

Build = list[str]


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    text: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Concat:
    parts: tuple["Expr", ...]

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Digest:
    operand: "Expr"


Expr = Union[Lit, Var, Concat, Digest]


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def digest(text: str) -> str:
    """64-bit FNV-1a over the UTF-8 bytes, as 16 lowercase hex characters."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


# --- steps and programs ----------------------------------------------------

@dataclass(frozen=True)
class Present:
    """Branch test: does the tested file exist."""


@dataclass(frozen=True)
class Eq:
    """Branch test: does the content equal a literal (absent never matches)."""

    text: str


@dataclass(frozen=True)
class Read:
    file: str
    bind: str


@dataclass(frozen=True)
class Branch:
    var: str
    test: Union[Present, Eq]
    then: tuple["Step", ...]
    orelse: tuple["Step", ...]

    def __init__(self, var, test, then, orelse):
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "test", test)
        object.__setattr__(self, "then", tuple(then))
        object.__setattr__(self, "orelse", tuple(orelse))


@dataclass(frozen=True)
class Write:
    file: str
    value: Expr


Step = Union[Read, Branch, Write]


@dataclass(frozen=True)
class CommandProgram:
    steps: tuple[Step, ...]

    def __init__(self, steps):
        object.__setattr__(self, "steps", tuple(steps))


# Oracle: the total mapping from command id to its program.
Oracle = dict[str, CommandProgram]


@dataclass(frozen=True)
class TraceRecord:
    """One command's observed reads and resulting writes.

    ``reads`` keeps the first observation per name; ``writes`` keeps the
    last value per name, in first-write order.
    """

    cmd: str
    reads: tuple[tuple[str, Optional[str]], ...]
    writes: tuple[tuple[str, str], ...]

    @property
    def read_names(self) -> list[str]:
        return [name for name, _ in self.reads]

    @property
    def write_names(self) -> list[str]:
        return [name for name, _ in self.writes]


def _eval(expr: Expr, env: dict[str, Optional[str]]) -> str:
    if isinstance(expr, Lit):
        return expr.text
    if isinstance(expr, Var):
        if expr.name not in env:
            raise UnboundVar(expr.name)
        value = env[expr.name]
        # Absent reads evaluate to empty text; presence is distinguished
        # with Branch(Present), not in expressions.
        return value if value is not None else ""
    if isinstance(expr, Concat):
        return "".join(_eval(part, env) for part in expr.parts)
    if isinstance(expr, Digest):
        return digest(_eval(expr.operand, env))
    raise TypeError(f"not an expression: {expr!r}")


def interpret(oracle: Oracle, cmd: str, fs: FileSystem) -> TraceRecord:
    """Run a command's program against an immutable snapshot of ``fs``.

    Reads always observe ``fs`` itself, never this command's own writes.
    """
    if cmd not in oracle:
        raise UnknownCmd(cmd)
    env: dict[str, Optional[str]] = {}
    reads: dict[str, Optional[str]] = {}
    writes: dict[str, str] = {}

    def go(steps) -> None:
        for step in steps:
            if isinstance(step, Read):
                value = lookup(fs, step.file)
                if step.file not in reads:
                    reads[step.file] = value
                env[step.bind] = value
            elif isinstance(step, Branch):
                if step.var not in env:
                    raise UnboundVar(step.var)
                value = env[step.var]
                if isinstance(step.test, Present):
                    taken = value is not None
                else:
                    taken = value == step.test.text
                go(step.then if taken else step.orelse)
            elif isinstance(step, Write):
                writes[step.file] = _eval(step.value, env)
            else:
                raise TypeError(f"not a step: {step!r}")

    go(oracle[cmd].steps)
    return TraceRecord(cmd, tuple(reads.items()), tuple(writes.items()))


def check_disjoint(trace: TraceRecord) -> Optional[str]:
    """None if the command never wrote one of its inputs, else a witness name."""
    read_names = set(trace.read_names)
    for name in trace.write_names:
        if name in read_names:
            return name
    return None


def run(oracle: Oracle, cmd: str, fs: FileSystem) -> tuple[FileSystem, TraceRecord]:
    """Execute one command and apply its writes to the file system."""
    trace = interpret(oracle, cmd, fs)
    witness = check_disjoint(trace)
    if witness is not None:
        raise DisjointnessViolation(cmd, witness)
    return extend(fs, list(trace.writes)), trace


def script(oracle: Oracle, build: Build, fs: FileSystem) -> FileSystem:
    """Reference semantics: run every command unconditionally, in order."""
    for cmd in build:
        fs, _ = run(oracle, cmd, fs)
    return fs
