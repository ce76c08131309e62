"""Executable model of forward build systems with hazard detection.

Builds are lists of command ids; each command is a small deterministic
read/branch/write program run against an in-memory file system.  On top of
that sit the reference script executor, two memoizing engines, a
hazard-checked engine, and a property-test harness that checks the engines
against the script semantics under arbitrary reorderings.
"""

from .fs import lookup, extend, equivalent
from .commands import (
    Lit,
    Var,
    Concat,
    Digest,
    Read,
    Branch,
    Write,
    Present,
    Eq,
    CommandProgram,
    TraceRecord,
    digest,
    interpret,
    check_disjoint,
    run,
    script,
)
from .engines import EngineResult, should_run, run_fabricate, fabricate, run_rattle, rattle_unchecked
from .hazards import (
    FileInfoEntry,
    ReadWrite,
    WriteWrite,
    Speculative,
    RequiredMode,
    detect_read_write,
    detect_write_write,
    detect_speculative,
    is_required,
    run_checked,
    rattle,
    hazard_scan,
)
from .errors import (
    UnknownCmd,
    UnboundVar,
    DisjointnessViolation,
    BuildTooLarge,
    GenerationExhausted,
)

__all__ = [
    "lookup",
    "extend",
    "equivalent",
    "Lit",
    "Var",
    "Concat",
    "Digest",
    "Read",
    "Branch",
    "Write",
    "Present",
    "Eq",
    "CommandProgram",
    "TraceRecord",
    "digest",
    "interpret",
    "check_disjoint",
    "run",
    "script",
    "EngineResult",
    "should_run",
    "run_fabricate",
    "fabricate",
    "run_rattle",
    "rattle_unchecked",
    "FileInfoEntry",
    "ReadWrite",
    "WriteWrite",
    "Speculative",
    "RequiredMode",
    "detect_read_write",
    "detect_write_write",
    "detect_speculative",
    "is_required",
    "run_checked",
    "rattle",
    "hazard_scan",
    "UnknownCmd",
    "UnboundVar",
    "DisjointnessViolation",
    "BuildTooLarge",
    "GenerationExhausted",
]
