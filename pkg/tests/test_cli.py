"""Command-line interface: exit codes, JSON schemas, formats, verification."""

import json
import subprocess
import sys

from satsys.cli import (
    EXIT_IO,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    main,
)

N5_TEXT = "lattice 5\ncover 0 1\ncover 1 4\ncover 0 2\ncover 2 3\ncover 3 4\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_stats_json(capsys):
    code, out, _ = run(capsys, "stats", "--n", "2", "--p", "7")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["density_num"] == "1"
    assert payload["density_den"] == "2"
    assert payload["a"] == "10"
    assert payload["qbinoms"] == ["1", "8", "1"]
    assert payload["bounds_ok"] is True
    assert payload["version"]


def test_stats_big_values_are_strings(capsys):
    code, out, _ = run(capsys, "stats", "--n", "8", "--p", "13")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert int(payload["zeros"]) > 10**20  # decimal string survives magnitude


def test_count_verified(capsys):
    code, out, _ = run(capsys, "count", "--lattice", "subspace", "2", "2",
                       "--verify")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["count"] == "12"
    assert payload["verified"] is True
    assert payload["oracle_method"] == "saturated-cover-backtracking"


def test_count_chain(capsys):
    code, out, _ = run(capsys, "count", "--lattice", "chain", "4", "--verify")
    assert json.loads(out)["count"] == "16"
    assert code == EXIT_OK


def test_count_auto_verify_default_on(capsys):
    code, out, _ = run(capsys, "count", "--lattice", "chain", "3")
    assert code == EXIT_OK
    assert json.loads(out)["verified"] is True


def test_count_no_verify(capsys):
    code, out, _ = run(capsys, "count", "--lattice", "chain", "3", "--no-verify")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["verified"] is None
    assert payload["oracle_method"] is None


def test_count_auto_verify_backs_off_above_caps(capsys):
    # chain(6) tr: 21 comparable pairs and 21 attributes exceed every oracle cap
    code, out, _ = run(capsys, "count", "--lattice", "chain", "6",
                       "--kind", "tr")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["count"] == "429"
    assert payload["verified"] is None  # no oracle fits, silently skipped


def test_count_explicit_verify_above_caps_errors(capsys):
    code, _, err = run(capsys, "count", "--lattice", "chain", "6",
                       "--kind", "tr", "--verify")
    assert code == EXIT_PRECONDITION
    assert "cap" in err


def test_count_budget_incomplete(capsys):
    code, out, _ = run(capsys, "count", "--lattice", "subspace", "2", "3",
                       "--budget", "500")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["count"] == "500"
    assert payload["complete"] is False
    assert payload["verified"] is None


def test_count_workers_env(capsys, monkeypatch):
    monkeypatch.setenv("SATSYS_WORKERS", "2")
    code, out, _ = run(capsys, "count", "--lattice", "chain", "3")
    assert code == EXIT_OK
    assert json.loads(out)["workers"] == 2


def test_count_tr_kind(capsys):
    code, out, _ = run(capsys, "count", "--lattice", "chain", "3",
                       "--kind", "tr", "--verify")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["count"] == "14"
    assert payload["oracle_method"] == "transfer-pair-backtracking"


def test_count_from_context_file(capsys, tmp_path):
    run(capsys, "context", "--lattice", "chain", "3",
        "--output", str(tmp_path / "c.cxt"))
    code, out, _ = run(capsys, "count", "--context", str(tmp_path / "c.cxt"))
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["count"] == "8"
    assert payload["oracle_method"] == "powerset-closure"


def test_context_cxt_stdout(capsys):
    code, out, err = run(capsys, "context", "--lattice", "chain", "2",
                         "--format", "cxt")
    assert code == EXIT_OK
    assert out.startswith("B\n\n2\n2\n")
    summary = json.loads(err)
    assert summary["rows"] == 2 and summary["columns"] == 2


def test_context_pbm_dimensions(capsys):
    code, out, _ = run(capsys, "context", "--lattice", "subspace", "5", "3",
                       "--format", "pbm")
    assert code == EXIT_OK
    assert out.splitlines()[1] == "63 248"


def test_render_alias(capsys, tmp_path):
    target = tmp_path / "sub.pbm"
    code, out, _ = run(capsys, "render", "--lattice", "subspace", "2", "2",
                       "--output", str(target))
    assert code == EXIT_OK
    assert json.loads(out)["format"] == "pbm"
    assert target.read_text().startswith("P1\n4 6\n")


def test_context_non_modular_exit_2(capsys, tmp_path):
    path = tmp_path / "n5.lat"
    path.write_text(N5_TEXT)
    code, _, err = run(capsys, "context", "--lattice", "file", str(path))
    assert code == EXIT_PRECONDITION
    assert "modular" in err


def test_non_modular_tr_context_allowed(capsys, tmp_path):
    path = tmp_path / "n5.lat"
    path.write_text(N5_TEXT)
    code, out, _ = run(capsys, "count", "--lattice", "file", str(path),
                       "--kind", "tr", "--verify")
    assert code == EXIT_OK
    assert json.loads(out)["verified"] is True


def test_enumerate_chain2(capsys):
    code, out, err = run(capsys, "enumerate", "--lattice", "chain", "2")
    assert code == EXIT_OK
    blocks = out.strip().split("\n\n")
    assert len(blocks) == 4
    assert json.loads(err)["systems"] == 4
    for block in blocks:
        lines = block.splitlines()
        assert lines == sorted(lines)
        assert all(line.startswith("arrow ") for line in lines)
    assert len(set(blocks)) == 4


def test_enumerate_tr(capsys):
    code, out, _ = run(capsys, "enumerate", "--lattice", "chain", "2",
                       "--kind", "tr")
    assert code == EXIT_OK
    assert len(out.strip().split("\n\n")) == 5


def test_enumerate_cap(capsys):
    code, _, err = run(capsys, "enumerate", "--lattice", "chain", "4",
                       "--max-systems", "3")
    assert code == EXIT_PRECONDITION
    assert "max-systems" in err


def test_oracle_sat(capsys):
    code, out, _ = run(capsys, "oracle", "sat", "--lattice", "chain", "3")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["count"] == "8"


def test_oracle_tr(capsys):
    code, out, _ = run(capsys, "oracle", "tr", "--lattice", "subspace", "2", "2")
    assert json.loads(out)["count"] == "19"
    assert code == EXIT_OK


def test_oracle_closure(capsys, tmp_path):
    run(capsys, "context", "--lattice", "chain", "2",
        "--output", str(tmp_path / "c.cxt"))
    code, out, _ = run(capsys, "oracle", "closure",
                       "--context", str(tmp_path / "c.cxt"))
    assert code == EXIT_OK
    assert json.loads(out)["count"] == "4"


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "count")[0] == EXIT_USAGE  # no lattice, no context
    assert run(capsys, "stats", "--n", "2")[0] == EXIT_USAGE
    assert run(capsys, "count", "--lattice", "chain", "x")[0] == EXIT_PRECONDITION
    assert run(capsys, "count", "--lattice", "weird", "1")[0] == EXIT_PRECONDITION


def test_io_errors(capsys):
    code, _, err = run(capsys, "count", "--context", "/nonexistent/x.cxt")
    assert code == EXIT_IO
    code, _, _ = run(capsys, "count", "--lattice", "file", "/nonexistent/y.lat")
    assert code == EXIT_IO


def test_checkpoint_mismatch_is_io(capsys, tmp_path):
    path = tmp_path / "cp.json"
    path.write_text("{broken")
    code, _, err = run(capsys, "count", "--lattice", "chain", "3",
                       "--checkpoint", str(path))
    assert code == EXIT_IO
    assert "i/o" in err


def test_mismatch_exit_code_when_oracle_disagrees(capsys, monkeypatch, tmp_path):
    import satsys.cli as cli_mod

    class FakeReport:
        count = 99
        method = "fake"

    monkeypatch.setattr(cli_mod, "enumerate_saturated_brute",
                        lambda lat: FakeReport())
    code, out, err = run(capsys, "count", "--lattice", "chain", "3", "--verify")
    assert code == EXIT_MISMATCH
    payload = json.loads(out)
    assert payload["verified"] is False
    assert "verification failed" in err


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "satsys.cli", "stats", "--n", "2", "--p", "3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["density_num"] == "1" and payload["density_den"] == "2"


def test_version_flag(capsys):
    assert main(["--version"]) == EXIT_OK
    assert "satsys" in capsys.readouterr().out
