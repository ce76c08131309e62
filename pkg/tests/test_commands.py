import pytest

from fwdbuild.commands import (
    Branch,
    CommandProgram,
    Concat,
    Eq,
    Lit,
    Present,
    Read,
    Var,
    Write,
    check_disjoint,
    digest,
    interpret,
    run,
    script,
)
from fwdbuild.errors import DisjointnessViolation, UnboundVar, UnknownCmd
from fwdbuild.harness import GenParams, gen_instance

COMPILE = CommandProgram(
    [Read("file.c", "x"), Write("file.o", Concat([Lit("obj("), Var("x"), Lit(")")]))]
)


def test_interpret_compile():
    trace = interpret({"cc": COMPILE}, "cc", {"file.c": "int"})
    assert trace.reads == (("file.c", "int"),)
    assert trace.writes == (("file.o", "obj(int)"),)


def test_interpret_empty_program():
    trace = interpret({"noop": CommandProgram([])}, "noop", {"a": "1"})
    assert trace.reads == ()
    assert trace.writes == ()


def test_interpret_content_dependent_reads():
    # An absent header skips the extra read entirely.
    program = CommandProgram(
        [
            Read("h", "x"),
            Branch("x", Present(), [Read("extra", "y")], []),
            Write("out", Lit("k")),
        ]
    )
    trace = interpret({"p": program}, "p", {})
    assert trace.reads == (("h", None),)
    assert trace.writes == (("out", "k"),)
    trace2 = interpret({"p": program}, "p", {"h": "yes", "extra": "e"})
    assert trace2.reads == (("h", "yes"), ("extra", "e"))


def test_interpret_eq_branch_and_absent_var():
    program = CommandProgram(
        [
            Read("a", "x"),
            Branch("x", Eq("on"), [Write("t", Lit("then"))], [Write("t", Lit("else"))]),
            Write("echo", Var("x")),
        ]
    )
    oracle = {"p": program}
    assert interpret(oracle, "p", {"a": "on"}).writes == (("t", "then"), ("echo", "on"))
    # Absent compares unequal to every literal and renders as empty text.
    assert interpret(oracle, "p", {}).writes == (("t", "else"), ("echo", ""))


def test_interpret_duplicate_reads_and_writes():
    program = CommandProgram(
        [Read("a", "x"), Read("a", "y"), Write("o", Lit("1")), Write("o", Lit("2"))]
    )
    trace = interpret({"p": program}, "p", {"a": "v"})
    assert trace.reads == (("a", "v"),)
    assert trace.writes == (("o", "2"),)


def test_interpret_ignores_own_writes():
    program = CommandProgram([Write("a", Lit("new")), Read("a", "x"), Write("o", Var("x"))])
    trace = interpret({"p": program}, "p", {"a": "old"})
    assert dict(trace.writes)["o"] == "old"


def test_interpret_errors():
    with pytest.raises(UnknownCmd):
        interpret({}, "missing", {})
    with pytest.raises(UnboundVar):
        interpret({"p": CommandProgram([Write("o", Var("nope"))])}, "p", {})
    with pytest.raises(UnboundVar):
        interpret({"p": CommandProgram([Branch("nope", Present(), [], [])])}, "p", {})


def test_digest_is_fnv1a_64():
    assert digest("") == "cbf29ce484222325"
    assert digest("a") == "af63dc4c8601ec8c"
    assert digest("a") != digest("b")


def test_check_disjoint():
    trace = interpret({"cc": COMPILE}, "cc", {"file.c": "int"})
    assert check_disjoint(trace) is None
    bad = interpret(
        {"p": CommandProgram([Read("a", "x"), Write("a", Lit("y"))])}, "p", {"a": "v"}
    )
    assert check_disjoint(bad) == "a"
    # A truncating append modeled as write-only is fine.
    echo = interpret({"e": CommandProgram([Write("foo.c", Lit("X"))])}, "e", {"foo.c": "src"})
    assert check_disjoint(echo) is None


def test_run_applies_writes():
    fs, trace = run({"cc": COMPILE}, "cc", {"file.c": "int"})
    assert fs == {"file.c": "int", "file.o": "obj(int)"}
    assert trace.cmd == "cc"


def test_run_rejects_self_writes():
    oracle = {"p": CommandProgram([Read("a", "x"), Write("a", Lit("y"))])}
    with pytest.raises(DisjointnessViolation):
        run(oracle, "p", {"a": "v"})


def test_run_is_deterministic():
    fs = {"file.c": "int"}
    assert run({"cc": COMPILE}, "cc", fs) == run({"cc": COMPILE}, "cc", fs)


def test_script_empty_and_fold():
    oracle = {"cc": COMPILE}
    fs = {"file.c": "int"}
    assert script(oracle, [], fs) == fs
    stepped, _ = run(oracle, "cc", fs)
    assert script(oracle, ["cc"], fs) == stepped


def test_read_closure_property():
    # Changing the file system anywhere outside a command's observed read
    # set leaves its trace bit-identical.
    params = GenParams(cases=50)
    import random

    rng = random.Random(7)
    for i in range(50):
        oracle, build, fs = gen_instance(params, i)
        cmd = rng.choice(build)
        trace = interpret(oracle, cmd, fs)
        read_names = set(trace.read_names)
        perturbed = dict(fs)
        for name in [f"f{j}" for j in range(8)] + ["unrelated"]:
            if name in read_names:
                continue
            if rng.random() < 0.5:
                perturbed[name] = "zzz"
            else:
                perturbed.pop(name, None)
        assert interpret(oracle, cmd, perturbed) == trace
