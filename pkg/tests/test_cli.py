import json
import subprocess
import sys

import numpy as np
import pytest

from echoalign import cli
from echoalign.codes import build_pnc128
from echoalign.export import read_csv
from echoalign.iq import write_iq


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_code_prints_pnc128(capsys):
    code, out, _ = run(capsys, "code")
    assert code == 0
    assert [int(v) for v in out.strip().split(",")] == build_pnc128().tolist()


def test_simulate_summary(capsys):
    code, out, _ = run(capsys, "simulate", "--scenario", "fig5", "--trials", "50")
    assert code == 0
    assert "success rate: 1.000 (50/50)" in out
    assert "expected target bins: [16, 32]" in out


def test_simulate_writes_outputs(capsys, tmp_path):
    out_path = tmp_path / "run.csv"
    code, out, _ = run(capsys, "simulate", "--scenario", "fig5", "--trials", "7",
                       "--seed", "99", "--out", str(out_path), "--dump-ascans")
    assert code == 0
    records = read_csv(out_path)
    assert len(records) == 7
    assert all(r.reference_detected == r.delay_drawn for r in records)
    assert (tmp_path / "run.ascans.csv").exists()


def test_simulate_json_is_seed_deterministic(capsys, tmp_path):
    for name in ("a", "b"):
        run(capsys, "simulate", "--scenario", "fig5_noisy", "--trials", "20", "--seed", "5",
            "--format", "json", "--out", str(tmp_path / f"{name}.json"))
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "b.json").read_bytes()
    assert json.loads(a)["summary"]["seed"] == 5


def test_dump_ascans_needs_out(capsys):
    code, _, err = run(capsys, "simulate", "--scenario", "fig5", "--dump-ascans")
    assert code == cli.EXIT_PARSE
    assert "--out" in err


def test_process_capture(capsys, tmp_path):
    pnc = build_pnc128().as_complex()
    cap = tmp_path / "cap.iq"
    write_iq(cap, np.concatenate([np.roll(pnc, 9), np.roll(pnc, 100)]))
    report = tmp_path / "report.json"
    code, out, _ = run(capsys, "process", str(cap), "--out", str(report))
    assert code == 0
    assert "window 0: reference bin 9" in out
    assert "window 1: reference bin 100" in out
    doc = json.loads(report.read_text())
    assert [w["reference_bin"] for w in doc["windows"]] == [9, 100]


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("[PASS]") == 3


@pytest.mark.parametrize("argv,expected", [
    (["simulate", "--scenario", "/no/such/file.scenario"], cli.EXIT_IO),
    (["simulate"], cli.EXIT_PARSE),
    (["simulate", "--scenario", "fig5", "--trials", "0"], cli.EXIT_PARSE),
    (["bogus"], cli.EXIT_PARSE),
])
def test_error_exit_codes(capsys, argv, expected):
    assert run(capsys, *argv)[0] == expected


def test_scenario_error_exit_codes(capsys, tmp_path):
    bad_toml = tmp_path / "bad.scenario"
    bad_toml.write_text("[[[")
    assert run(capsys, "simulate", "--scenario", str(bad_toml))[0] == cli.EXIT_PARSE
    invalid = tmp_path / "invalid.scenario"
    invalid.write_text('label = "x"\ntrials = 0\n')
    code, _, err = run(capsys, "simulate", "--scenario", str(invalid))
    assert code == cli.EXIT_VALIDATION
    assert "trials" in err


def test_bad_capture_exit_code(capsys, tmp_path):
    cap = tmp_path / "odd.iq"
    cap.write_bytes(bytes(1027))
    assert run(capsys, "process", str(cap))[0] == cli.EXIT_VALIDATION


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "echoalign", "code"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("0,0,0,1,1,1,-1")
