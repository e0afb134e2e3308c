import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from s3verify.cli import main
from s3verify.config import DEFAULT_TOLERANCES, ConfigurationError, RunConfig
from s3verify.suites import build_report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def test_print_config_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "print-config", "--seed", "11", "--tol.proximity", "2e-3")
    assert code == 0
    path = tmp_path / "run.cfg"
    path.write_text("# saved\n" + out)
    cfg = RunConfig()
    cfg.load_file(str(path))
    assert cfg.seed == 11 and cfg.tol("proximity") == 2e-3
    assert cfg.dump() == out


def test_config_file_then_flags(tmp_path, capsys):
    path = tmp_path / "c.cfg"
    path.write_text("seed = 3\nsize.trig_random = 5\n")
    code, out, _ = run(capsys, "print-config", "--config", str(path), "--seed", "4", "--size.trig_random=6")
    assert code == 0
    assert "seed = 4" in out and "size.trig_random = 6" in out


@pytest.mark.parametrize("argv", [
    ["print-config", "--tol.nonsense", "1"],
    ["print-config", "--size.mesh_grid", "-1"],
    ["print-config", "--delta0", "2"],
    ["print-config", "--tol.proximity"],
    ["verify", "nosuchsuite"],
    ["scan", "genus", "sideways:3"],
    ["extract", "--a", "1,2,3"],
])
def test_configuration_errors_exit_2(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_bad_config_line(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("seed 3\n")
    with pytest.raises(ConfigurationError):
        RunConfig().load_file(str(path))


@given(st.integers(0, 2**40), st.text(min_size=1, max_size=20))
def test_check_streams_independent_of_order(seed, name):
    a, b = RunConfig(seed=seed), RunConfig(seed=seed)
    a.rng("other").normal(size=3)
    assert a.rng(name).integers(0, 2**62) == b.rng(name).integers(0, 2**62)


def test_defaults_are_documented_values():
    assert DEFAULT_TOLERANCES["group_relation"] == 1e-12
    assert DEFAULT_TOLERANCES["equivariance"] == 1e-10
    assert DEFAULT_TOLERANCES["proximity"] == 1e-3


def test_verify_groups_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "groups", "--seed", "7", "--out", str(out))
    report = json.loads(out.read_text())
    assert code == 0 and report["schema"] == 1 and report["summary"]["ok"]
    assert {c["id"] for c in report["checks"]} >= {"groups/d24-order", "groups/q48-order", "groups/g96-order"}
    assert all(c["anchor"] == c["id"] for c in report["checks"])


def test_suite_report_deterministic():
    cfg = RunConfig(seed=7)
    cfg.set("size.trig_random", "50")
    cfg.set("size.trig_full_order", "20")
    cfg.set("size.trig_sampled", "10")
    assert strip_timing(build_report("trigpoly", cfg)) == strip_timing(build_report("trigpoly", cfg))


def test_failing_tolerance_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "groups", "--tol.group_relation", "0")
    assert code == 1
    assert json.loads(out)["summary"]["FAIL"] >= 1


def test_scan_streams_records(capsys):
    code, out, _ = run(capsys, "scan", "genus", "rhozero:5", "--seed", "2")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(lines) == 6
    assert all(r["genus"] == 0 for r in lines[:5])
    assert lines[-1]["summary"]["bounds_hold"]


def test_scan_zeros_mode(capsys):
    code, out, _ = run(capsys, "scan", "zeros", "boundary:5", "--seed", "2")
    recs = [json.loads(l) for l in out.splitlines()][:-1]
    assert code == 0 and all("genus" not in r for r in recs)


def test_extract_writes_mesh(tmp_path, capsys):
    prefix = str(tmp_path / "m")
    code, out, _ = run(capsys, "extract", "--a", "0,0,0,0,0,1", "--r", "1", "--res", "64", "--out", prefix)
    info = json.loads(out)
    assert code == 0 and info["genus"] == 1
    assert (tmp_path / "m.obj").exists() and (tmp_path / "m.csv").exists()


def test_extract_empty_member(capsys):
    code, out, _ = run(capsys, "extract", "--a", "1,0,0,0,0,0", "--res", "16")
    assert code == 1 and json.loads(out)["error"] == "EMPTY_LEVELSET"


def test_link_command(tmp_path, capsys):
    prefix = str(tmp_path / "l")
    code, out, _ = run(capsys, "link", "--a", "0,0,0,0,0,1", "--r", "1", "--theta", "0.4", "--out", prefix)
    info = json.loads(out)
    assert code == 0 and abs(info["linking_number"]) == 1
    assert info["min_F_on_plus"] > 0 > info["max_F_on_minus"]


def test_link_needs_boundary_cutoff(capsys):
    code, out, _ = run(capsys, "link", "--a", "0.3,0.2,0,0.1,0,1", "--r", "1")
    assert code == 1 and json.loads(out)["error"] == "PRECONDITION"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate")
    rows = out.strip().splitlines()
    assert code == 0 and len(rows) == 337
    vals = np.array([[float(x) for x in r.split(",")[3:]] for r in rows[1:]])
    assert np.allclose(np.linalg.norm(vals, axis=1), 1.0)


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "s3verify", "verify", "groups"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["summary"]["ok"]
