"""Property-test harness.

Generates random-but-replayable build instances, enumerates permutations
of the script build to model every possible speculation order, and checks
each engine-level correctness statement literally against the script
semantics, reporting counterexamples keyed by (seed, case index).
"""

from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass
from typing import Iterator, Optional

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
    run,
    script,
)
from .engines import EngineResult, fabricate, rattle_unchecked
from .errors import BuildTooLarge, DisjointnessViolation, GenerationExhausted
from .fs import FileSystem, equivalent
from .hazards import RequiredMode, Speculative, hazard_scan, rattle

# Instance cap for the suites that enumerate every permutation of a build.
PERMUTATION_CASE_CAP = 200

GENERATION_ATTEMPTS = 10_000


class UnknownTheorem(ValueError):
    """check_theorem was asked for a statement it does not know."""


@dataclass(frozen=True)
class GenParams:
    file_universe: int = 8
    content_alphabet: int = 4
    max_build_len: int = 5
    max_branch_depth: int = 2
    seed: int = 42
    cases: int = 1000

    def __post_init__(self):
        if not (1 <= self.max_build_len <= 6):
            raise ValueError("max_build_len must be in 1..6")
        for name in ("file_universe", "content_alphabet", "max_branch_depth", "cases"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass
class Verdict:
    theorem: str
    passed: bool
    cases_run: int
    gating: bool = True
    counterexample: Optional[dict] = None
    counterexample_count: int = 0


@dataclass(frozen=True)
class PreconditionViolation:
    kind: str  # duplicates | not-a-permutation | unknown-command | disjoint
    detail: str


def validate_preconditions(
    oracle: Oracle, br: Build, bs: Build, fs: FileSystem
) -> Optional[PreconditionViolation]:
    """None when (br, bs, fs) satisfy the engine preconditions.

    Checks duplicate-freedom of both builds, that br is a permutation of
    bs, oracle totality over bs, and that no command along the bs script
    run writes to one of its own inputs.
    """
    for build, label in ((br, "run build"), (bs, "script build")):
        if len(set(build)) != len(build):
            return PreconditionViolation("duplicates", f"duplicate command in {label}")
    if sorted(br) != sorted(bs):
        return PreconditionViolation("not-a-permutation", "run build is not a permutation of script build")
    for cmd in bs:
        if cmd not in oracle:
            return PreconditionViolation("unknown-command", cmd)
    state = fs
    for cmd in bs:
        try:
            state, _ = run(oracle, cmd, state)
        except DisjointnessViolation as exc:
            return PreconditionViolation("disjoint", f"{exc.cmd} writes its own input {exc.name}")
    return None


def permutations(build: Build) -> Iterator[Build]:
    """All orderings of ``build``, lexicographic by original index."""
    if len(build) > 6:
        raise BuildTooLarge(f"{len(build)} commands; permutation enumeration capped at 6")
    for perm in itertools.permutations(build):
        yield list(perm)


# --- instance generation ---------------------------------------------------

def _gen_expr(rng: random.Random, contents: list[str], bound: list[str], depth: int) -> Expr:
    choices = ["lit"]
    if bound:
        choices += ["var", "var"]
    if depth < 2:
        choices += ["concat", "digest"]
    kind = rng.choice(choices)
    if kind == "lit":
        return Lit(rng.choice(contents))
    if kind == "var":
        return Var(rng.choice(bound))
    if kind == "concat":
        return Concat([_gen_expr(rng, contents, bound, depth + 1) for _ in range(2)])
    return Digest(_gen_expr(rng, contents, bound, depth + 1))


def _gen_steps(
    rng: random.Random,
    count: int,
    files: list[str],
    contents: list[str],
    bound: list[str],
    depth: int,
    max_depth: int,
    counter: list[int],
) -> list[Step]:
    steps: list[Step] = []
    for _ in range(count):
        kinds = ["read", "write", "write"]
        if bound and depth < max_depth:
            kinds.append("branch")
        kind = rng.choice(kinds)
        if kind == "read":
            var = f"v{counter[0]}"
            counter[0] += 1
            steps.append(Read(rng.choice(files), var))
            bound.append(var)
        elif kind == "write":
            steps.append(Write(rng.choice(files), _gen_expr(rng, contents, bound, 0)))
        else:
            test = Present() if rng.random() < 0.5 else Eq(rng.choice(contents))
            # Branch bodies get their own copy of the bound list so that a
            # variable bound on one path is never referenced on the other.
            then = _gen_steps(rng, rng.randint(0, 2), files, contents, list(bound), depth + 1, max_depth, counter)
            orelse = _gen_steps(rng, rng.randint(0, 2), files, contents, list(bound), depth + 1, max_depth, counter)
            steps.append(Branch(rng.choice(bound), test, then, orelse))
    return steps


def _static_files(steps) -> tuple[set[str], set[str]]:
    """File names a program could read or write on any path."""
    reads: set[str] = set()
    writes: set[str] = set()
    for step in steps:
        if isinstance(step, Read):
            reads.add(step.file)
        elif isinstance(step, Write):
            writes.add(step.file)
        else:
            for body in (step.then, step.orelse):
                r, w = _static_files(body)
                reads |= r
                writes |= w
    return reads, writes


def gen_instance(params: GenParams, case_index: int) -> tuple[Oracle, Build, FileSystem]:
    """Deterministic instance for (params.seed, case_index).

    Command programs are rejection-sampled until no file appears in both a
    Read and a Write anywhere in the program, so the disjointness
    precondition holds on every path and hence under every permutation.
    """
    rng = random.Random((params.seed << 32) ^ case_index)
    files = [f"f{i}" for i in range(params.file_universe)]
    contents = list(string.ascii_lowercase[: params.content_alphabet])
    for _ in range(GENERATION_ATTEMPTS):
        n = rng.randint(1, params.max_build_len)
        build = [f"c{i}" for i in range(n)]
        oracle: Oracle = {}
        for cmd in build:
            for _ in range(GENERATION_ATTEMPTS):
                counter = [0]
                steps = _gen_steps(
                    rng, rng.randint(1, 3), files, contents, [], 0, params.max_branch_depth, counter
                )
                reads, writes = _static_files(steps)
                if not reads & writes:
                    oracle[cmd] = CommandProgram(steps)
                    break
            else:
                raise GenerationExhausted("could not generate a disjoint command program")
        fs = {f: rng.choice(contents) for f in files if rng.random() < 0.5}
        if validate_preconditions(oracle, build, build, fs) is None:
            return oracle, build, fs
    raise GenerationExhausted(f"no valid instance after {GENERATION_ATTEMPTS} attempts")


# --- theorem checking ------------------------------------------------------

THEOREMS = [
    "unchecked-equivalence",
    "correct-fabricate",
    "soundness",
    "completeness",
    "correct-rattle",
    "reordering",
    "semi-correct",
    "total-correctness",
]


def _ww_free(oracle: Oracle, build: Build, fs: FileSystem) -> bool:
    """True iff the in-order run has no write-write conflict."""
    written: set[str] = set()
    for cmd in build:
        fs, trace = run(oracle, cmd, fs)
        if any(name in written for name in trace.write_names):
            return False
        written.update(trace.write_names)
    return True


def _counterexample(case_index: int, bs: Build, br: Optional[Build], note: str) -> dict:
    return {"case": case_index, "bs": bs, "br": br, "note": note}


def check_theorem(name: str, params: GenParams) -> Verdict:
    """Property-check one correctness statement over a generated corpus."""
    if name not in THEOREMS:
        raise UnknownTheorem(name)

    permutation_suite = name in ("reordering", "semi-correct", "total-correctness")
    cases = min(params.cases, PERMUTATION_CASE_CAP) if permutation_suite else params.cases
    counterexamples = 0
    first: Optional[dict] = None

    for i in range(cases):
        oracle, bs, fs = gen_instance(params, i)
        reference = script(oracle, bs, fs)

        if name == "unchecked-equivalence":
            result = rattle_unchecked(oracle, bs, fs, {})
            if not equivalent(result.fs, reference):
                counterexamples += 1
                first = first or _counterexample(i, bs, None, "rattle_unchecked differs from script")

        elif name == "correct-fabricate":
            # Hazard-freedom is sufficient, but so is the weaker condition
            # of write-write freedom alone; check the union of both filters.
            hazard_free = isinstance(hazard_scan(oracle, bs, bs, fs), list)
            if hazard_free or _ww_free(oracle, bs, fs):
                result = fabricate(oracle, bs, fs, {})
                if not equivalent(result.fs, reference):
                    counterexamples += 1
                    first = first or _counterexample(i, bs, None, "fabricate differs from script")

        elif name == "soundness":
            result = rattle(oracle, bs, bs, fs, {})
            if isinstance(result, EngineResult) and not equivalent(result.fs, reference):
                counterexamples += 1
                first = first or _counterexample(i, bs, None, "checked engine succeeded with wrong file system")

        elif name == "completeness":
            if isinstance(hazard_scan(oracle, bs, bs, fs), list):
                result = rattle(oracle, bs, bs, fs, {})
                if not isinstance(result, EngineResult):
                    counterexamples += 1
                    first = first or _counterexample(i, bs, None, f"hazard on hazard-free build: {result}")

        elif name == "correct-rattle":
            result = rattle(oracle, bs, bs, fs, {})
            if isinstance(result, EngineResult) and not equivalent(result.fs, reference):
                counterexamples += 1
                first = first or _counterexample(i, bs, None, "neither hazard nor equivalent file system")

        elif name == "reordering":
            for br in permutations(bs):
                if isinstance(hazard_scan(oracle, br, bs, fs), list):
                    if not equivalent(script(oracle, br, fs), reference):
                        counterexamples += 1
                        first = first or _counterexample(i, bs, br, "hazard-free reordering differs from script")
                        break

        elif name == "semi-correct":
            bs_has_hazard = not isinstance(hazard_scan(oracle, bs, bs, fs), list)
            for br in permutations(bs):
                result = rattle(oracle, br, bs, fs, {})
                ok = (
                    bs_has_hazard
                    or not isinstance(result, EngineResult)
                    or equivalent(result.fs, reference)
                )
                if not ok:
                    counterexamples += 1
                    first = first or _counterexample(i, bs, br, "partial-correctness trichotomy failed")
                    break

        elif name == "total-correctness":
            # Reported probe, never gating: the stronger statement without
            # the "speculative build has a hazard" escape clause.
            bs_has_hazard = not isinstance(hazard_scan(oracle, bs, bs, fs), list)
            for br in permutations(bs):
                if bs_has_hazard:
                    continue
                result = rattle(oracle, br, bs, fs, {})
                holds = isinstance(result, EngineResult) and equivalent(result.fs, reference)
                if not holds:
                    counterexamples += 1
                    first = first or _counterexample(i, bs, br, "hazard raised (or wrong result) without a script hazard")
                    break

    gating = name != "total-correctness"
    passed = counterexamples == 0 if gating else True
    return Verdict(name, passed, cases, gating, first, counterexamples)


# --- the fixed regression instance -----------------------------------------

def bug_instance() -> tuple[Oracle, Build, Build, FileSystem]:
    """Three commands where only the EVER required mode sees the hazard.

    Script order wants a, then b (reads f), then c (writes f).  The run
    order executes c first, so b reads a value of f the script author
    never intended; b only becomes required after a runs, which is too
    late for the PREFIX detector.
    """
    oracle: Oracle = {
        "a": CommandProgram([Write("h", Lit("A"))]),
        "b": CommandProgram([Read("f", "x"), Write("g", Concat([Lit("saw:"), Var("x")]))]),
        "c": CommandProgram([Write("f", Lit("1"))]),
    }
    bs = ["a", "b", "c"]
    br = ["c", "b", "a"]
    return oracle, bs, br, {}


def bug_regression() -> Verdict:
    """EVER mode must flag Speculative(c, b, f); PREFIX mode must not."""
    oracle, bs, br, fs = bug_instance()
    ever = rattle(oracle, br, bs, fs, {}, RequiredMode.EVER)
    prefix = rattle(oracle, br, bs, fs, {}, RequiredMode.PREFIX)
    expected = Speculative("c", "b", "f")
    passed = ever == expected and isinstance(prefix, EngineResult)
    counterexample = None
    if not passed:
        counterexample = {"ever": repr(ever), "prefix": repr(prefix), "expected": repr(expected)}
    return Verdict("bug-regression", passed, 1, True, counterexample)
