import json
from pathlib import Path

from fwdbuild.cli import main

DEMO = Path(__file__).resolve().parent.parent / "demo"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


def test_run_gcc_spec_all_engines(capsys, gcc_spec):
    for engine in ("script", "fabricate", "rattle-unchecked", "rattle"):
        code, out, _ = run_cli(capsys, "run", gcc_spec, "--engine", engine)
        assert code == 0
        data = json.loads(out)
        assert data["result"] == "ok"
        assert len(data["executed"]) == 4
    # All engines end in the same final file system.
    digests = set()
    for engine in ("script", "fabricate", "rattle-unchecked", "rattle"):
        _, out, _ = run_cli(capsys, "run", gcc_spec, "--engine", engine)
        digests.add(json.loads(out)["fsDigest"])
    assert len(digests) == 1


def test_run_is_idempotent_with_state(capsys, gcc_spec, tmp_path):
    state = str(tmp_path / "state.json")
    for engine in ("fabricate", "rattle-unchecked", "rattle"):
        statefile = str(tmp_path / f"{engine}.json")
        code, out, _ = run_cli(capsys, "run", gcc_spec, "--engine", engine, "--state", statefile)
        assert code == 0
        first = json.loads(out)
        code, out, _ = run_cli(capsys, "run", gcc_spec, "--engine", engine, "--state", statefile)
        assert code == 0
        second = json.loads(out)
        assert second["executed"] == []
        assert second["fsDigest"] == first["fsDigest"]


def test_state_engines_are_not_interchangeable(capsys, gcc_spec, tmp_path):
    state = str(tmp_path / "state.json")
    code, _, _ = run_cli(capsys, "run", gcc_spec, "--engine", "fabricate", "--state", state)
    assert code == 0
    code, _, err = run_cli(capsys, "run", gcc_spec, "--engine", "rattle", "--state", state)
    assert code == 1
    assert "fabricate" in err


def test_run_conflict_spec_reports_hazard(capsys, conflict_spec, tmp_path):
    state = str(tmp_path / "state.json")
    code, out, _ = run_cli(capsys, "run", conflict_spec, "--engine", "rattle", "--state", state)
    assert code == 2
    data = json.loads(out)
    assert data["result"] == "hazard"
    assert data["hazard"]["kind"] == "read-write"
    assert data["hazard"]["file"] == "foo.c"
    # Hazard leaves the state file unwritten.
    assert not (tmp_path / "state.json").exists()


def test_run_hazardous_spec_still_runs_unchecked(capsys, conflict_spec):
    code, out, _ = run_cli(capsys, "run", conflict_spec, "--engine", "rattle-unchecked")
    assert code == 0
    assert json.loads(out)["result"] == "ok"


def test_run_duplicate_script_is_a_violation(capsys, tmp_path):
    spec = {
        "files": {},
        "commands": [{"id": "a", "program": []}],
        "script": ["a", "a"],
    }
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run_cli(capsys, "run", str(path), "--engine", "rattle")
    assert code == 3
    assert json.loads(out)["result"] == "violation"


def test_run_parse_error(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 1
    assert "error" in err


def test_run_bug_spec_modes(capsys, bug_spec):
    code, out, _ = run_cli(capsys, "run", bug_spec, "--required-mode", "ever")
    assert code == 2
    assert last_json(out)["hazard"] == {"kind": "speculative", "commands": ["c", "b"], "file": "f"}
    code, out, _ = run_cli(capsys, "run", bug_spec, "--required-mode", "prefix")
    assert code == 0


def test_check_trace_stale_compile(capsys):
    trace = str(DEMO / "stale-compile.trace")
    code, out, _ = run_cli(capsys, "check-trace", trace)
    assert code == 2
    data = json.loads(out)
    assert data["hazard"]["kind"] == "speculative"
    assert data["hazard"]["file"] == "file.o"


def test_check_trace_bug_modes(capsys):
    trace = str(DEMO / "bug.trace")
    assert run_cli(capsys, "check-trace", trace, "--required-mode", "prefix")[0] == 0
    assert run_cli(capsys, "check-trace", trace, "--required-mode", "ever")[0] == 2


def test_check_trace_empty_records(capsys, tmp_path):
    path = tmp_path / "empty.trace"
    path.write_text('{"scriptOrder":["a"]}\n')
    code, out, _ = run_cli(capsys, "check-trace", str(path))
    assert code == 0
    assert json.loads(out)["result"] == "ok"


def test_check_trace_malformed(capsys, tmp_path):
    path = tmp_path / "bad.trace"
    path.write_text("garbage\n")
    assert run_cli(capsys, "check-trace", str(path))[0] == 1


def test_explore_gcc(capsys, gcc_spec):
    code, out, _ = run_cli(capsys, "explore", gcc_spec)
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    reports, summary = lines[:-1], lines[-1]["summary"]
    assert len(reports) == 24
    assert summary["ok"] + summary["hazard"] == 24
    assert summary["trichotomy"] is True
    # Only orderings with the link step last can succeed, and all
    # successes land in the same final file system.
    ok = [r for r in reports if r["result"] == "ok"]
    assert len(ok) == 6
    assert all(r["run"][-1] == "gcc -o program" for r in ok)
    assert len({r["fsDigest"] for r in ok}) == 1


def test_explore_single_command(capsys, tmp_path):
    spec = {
        "files": {},
        "commands": [{"id": "a", "program": [{"write": {"file": "x", "value": {"lit": "1"}}}]}],
        "script": ["a"],
    }
    path = tmp_path / "one.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run_cli(capsys, "explore", str(path))
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["result"] == "ok"


def test_explore_conflict_spec(capsys, conflict_spec):
    code, out, _ = run_cli(capsys, "explore", conflict_spec)
    assert code == 0
    summary = last_json(out)["summary"]
    assert summary["hazard"] == 2 and summary["trichotomy"] is True


def test_explore_too_large(capsys, tmp_path):
    spec = {
        "files": {},
        "commands": [{"id": f"c{i}", "program": []} for i in range(7)],
        "script": [f"c{i}" for i in range(7)],
    }
    path = tmp_path / "big.json"
    path.write_text(json.dumps(spec))
    assert run_cli(capsys, "explore", str(path))[0] == 3


def test_verify_small(capsys):
    code, out, _ = run_cli(capsys, "verify", "--cases", "5", "--seed", "7")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 8
    assert all(": PASS" in line or ": PROBE" in line for line in lines)


def test_verify_is_replayable(capsys):
    _, out1, _ = run_cli(capsys, "verify", "--cases", "1", "--seed", "7", "--only", "soundness")
    _, out2, _ = run_cli(capsys, "verify", "--cases", "1", "--seed", "7", "--only", "soundness")
    assert out1 == out2


def test_verify_unknown_theorem(capsys):
    assert run_cli(capsys, "verify", "--only", "bogus")[0] == 1
