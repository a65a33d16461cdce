import json
import os
import subprocess
import sys
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

import curves
from lcurve.audit import AuditReport, Identity, TheoremId, Verdict
from lcurve.cli import main
from lcurve.frenet import FrameKind, FrenetData
from lcurve.report import audit_json, fmt, read_trace_csv, write_audit_json, write_trace_csv

GOLDEN = Path(__file__).parent / "golden"

# a g-rectifying curve in L^3 (see curves.rectifying3) audited for both theorems
AUDIT_ARGS = ["audit", "--kind", "spacelike", "--dim", "3", "--kappa", "1", "--kappa", "1+0.5*s",
              "--sig", "1", "--sig", "-1", "--g", "0.5", "--range", "-1.5", "-0.2", "--step", "0.01",
              "--anchor", "rectifying", "--G0", "0.25", "--theorem", "3.2", "--theorem", "3.3"]
BASE = ["--dim", "3", "--kappa", "1", "--kappa", "0.5", "--sig", "1", "--sig", "-1", "--range", "0", "1",
        "--step", "0.01"]


def run(argv, tmp_path, capsys):
    code = main(argv + ["--out", str(tmp_path)])
    out, err = capsys.readouterr()
    return code, out, err


# --------------------------------------------------------------------------
# exit codes and messages


def test_spec_example_with_all_plus_signatures_is_rejected(tmp_path, capsys):
    argv = ["audit", "--kind", "spacelike", "--dim", "3", "--kappa", "1", "--kappa", "0.5", "--sig", "1",
            "--sig", "1", "--g", "1", "--range", "0", "6.28", "--step", "0.001", "--theorem", "3.2"]
    code, out, err = run(argv, tmp_path, capsys)
    assert code == 1
    assert err.startswith("error: sig:")


def test_audit_writes_report_rows(tmp_path, capsys):
    argv = ["audit", "--kind", "spacelike", "--dim", "3", "--kappa", "1", "--kappa", "0.5", "--sig", "1",
            "--sig", "-1", "--g", "1", "--range", "0", "6.28", "--step", "0.001", "--theorem", "3.2"]
    code, out, err = run(argv, tmp_path, capsys)
    assert code == 0, err
    data = json.loads((tmp_path / "audit_3.2.json").read_text())
    assert data["theorem"] == "3.2"
    assert len(out.splitlines()) == len(data["identities"])
    assert {i["verdict"] for i in data["identities"]} <= {"holds", "holds_with_sign_variant", "fails"}
    assert data["c_estimate"] is not None and np.isfinite(data["c_estimate"])
    # xi_g starts at 0 here, which is not a g-rectifying field
    rows = {i["label"]: i for i in data["identities"]}
    assert rows["3.1-N"]["verdict"] == "fails"


@pytest.mark.parametrize("extra, message", [
    ([], "g: required"),
    (["--g", "1", "--step", "0"], "step: must be positive"),
    (["--g", "1", "--range", "1", "0"], "range:"),
    (["--g", "1", "--s0", "5"], "s0:"),
    (["--g", "1", "--tol", "-1"], "tol:"),
])
def test_validation_errors(tmp_path, capsys, extra, message):
    # later flags win, so the extras override BASE
    code, out, err = run(["audit"] + BASE + extra, tmp_path, capsys)
    assert code == 1
    assert message in err


def test_missing_dim_and_kappa_count(tmp_path, capsys):
    code, _, err = run(["frame", "--range", "0", "1"], tmp_path, capsys)
    assert (code, "dim: required" in err) == (1, True)
    code, _, err = run(["frame", "--dim", "4", "--kappa", "1", "--sig", "1", "--range", "0", "1"], tmp_path, capsys)
    assert code == 1 and "kappa: expected 3" in err


def test_parse_error_names_the_field(tmp_path, capsys):
    argv = ["audit", "--dim", "3", "--kappa", "1", "--kappa", "1+", "--sig", "1", "--sig", "-1", "--g", "1",
            "--range", "0", "1"]
    code, _, err = run(argv, tmp_path, capsys)
    assert code == 1
    assert "kappa2: column 3" in err


def test_vanishing_curvature_is_a_validation_error(tmp_path, capsys):
    argv = ["frame", "--dim", "3", "--kappa", "1", "--kappa", "s", "--sig", "1", "--sig", "-1",
            "--range", "0", "1"]
    code, _, err = run(argv, tmp_path, capsys)
    assert code == 1 and "kappa: curvature 2 vanishes" in err


def test_numeric_failure_reports_node(tmp_path, capsys):
    argv = ["frame", "--dim", "3", "--kappa", "5", "--kappa", "1", "--sig", "1", "--sig", "-1",
            "--range", "0", "2", "--step", "0.5"]
    code, _, err = run(argv, tmp_path, capsys)
    assert code == 2
    assert "(node " in err


def test_domain_violation_exit_code(tmp_path, capsys):
    argv = ["audit", "--dim", "4", "--kappa", "1", "--kappa", "2", "--kappa", "1.3", "--sig", "-1", "--sig", "1",
            "--sig", "1", "--g", "0.91*cos(1.3*s)", "--range", "0", "1", "--theorem", "3.3"]
    code, _, err = run(argv, tmp_path, capsys)
    assert code == 2 and "admissible" in err


def test_argparse_errors_exit_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["audit", "--bogus"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_theorem_kind_mismatch(tmp_path, capsys):
    code, _, err = run(["audit"] + BASE + ["--g", "1", "--theorem", "3.4"], tmp_path, capsys)
    assert code == 1 and "theorem" in err


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = main(["frame"] + BASE + ["--out", str(blocker)])
    _, err = capsys.readouterr()
    assert code == 1
    assert str(blocker) in err


def test_env_tolerance(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LCURVE_TOL", "1e-30")
    code, _, _ = run(AUDIT_ARGS, tmp_path, capsys)
    assert code == 0
    data = json.loads((tmp_path / "audit_3.2.json").read_text())
    assert {i["label"]: i["verdict"] for i in data["identities"]}["3.1-N"] == "fails"
    monkeypatch.setenv("LCURVE_TOL", "tiny")
    code, _, err = run(AUDIT_ARGS, tmp_path, capsys)
    assert code == 1 and "LCURVE_TOL" in err


# --------------------------------------------------------------------------
# modes


def test_frame_and_synthesize(tmp_path, capsys):
    code, out, _ = run(["synthesize"] + BASE, tmp_path, capsys)
    assert code == 0 and "frame residual" in out
    header = (tmp_path / "frames.csv").read_text().splitlines()[0].split(",")
    assert header[:4] == ["s", "T_1", "T_2", "T_3"] and len(header) == 10
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert lines[0] == "s,x1,x2,x3" and len(lines) == 102


def test_classify_mode(tmp_path, capsys):
    args = [a for a in AUDIT_ARGS if a not in ("--theorem", "3.2", "3.3")]
    args[0] = "classify"
    code, out, _ = run(args, tmp_path, capsys)
    assert code == 0
    assert out.strip() == "GRectifying"
    data = json.loads((tmp_path / "classify.json").read_text())
    assert data["theorem"] == "classify"


def test_export_mode(tmp_path, capsys):
    args = [a for a in AUDIT_ARGS if a not in ("--theorem", "3.2", "3.3")]
    args[0] = "export"
    code, _, _ = run(args, tmp_path, capsys)
    assert code == 0
    header, data = read_trace_csv(tmp_path / "export.csv")
    n = 3
    assert header == ["s", "x1", "x2", "x3", "G", "xg1", "xg2", "xg3", "k1", "k2", "w0", "w1"]
    assert len(header) == 1 + n + 1 + n + (n - 1) + (n - 1)
    assert data.shape == (131, len(header))
    code, _, _ = run(args + ["--basis", "normal"], tmp_path, capsys)
    assert read_trace_csv(tmp_path / "export.csv")[0][-2:] == ["theta", "mu1"]


def test_job_file_matches_flags(tmp_path, capsys):
    job = {"dim": 3, "kind": "spacelike", "kappas": ["1", "1+0.5*s"], "sigs": [1, -1], "g": "0.5",
           "range": [-1.5, -0.2], "step": 0.01, "anchor": "rectifying", "G0": 0.25, "theorems": ["3.2", "3.3"]}
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    assert run(["audit", "--job", str(path)], tmp_path / "a", capsys)[0] == 0
    assert run(AUDIT_ARGS, tmp_path / "b", capsys)[0] == 0
    for name in ("audit_3.2.json", "audit_3.3.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    # flags override the file
    code, _, err = run(["audit", "--job", str(path), "--step", "0"], tmp_path, capsys)
    assert code == 1 and "step" in err


def test_bad_job_file(tmp_path, capsys):
    path = tmp_path / "job.json"
    path.write_text("{not json")
    code, _, err = run(["audit", "--job", str(path)], tmp_path, capsys)
    assert code == 1 and "job:" in err
    code, _, err = run(["audit", "--job", str(tmp_path / "missing.json")], tmp_path, capsys)
    assert code == 1 and "job:" in err


# --------------------------------------------------------------------------
# determinism and serialization


def _cli(args, cwd):
    env = dict(os.environ)
    env.pop("LCURVE_TOL", None)
    return subprocess.run([sys.executable, "-m", "lcurve"] + args, cwd=cwd, env=env,
                          capture_output=True, text=True, check=False)


def test_cli_determinism(tmp_path):
    outs = []
    for run_dir in ("one", "two"):
        proc = _cli(AUDIT_ARGS + ["--out", run_dir], tmp_path)
        assert proc.returncode == 0, proc.stderr
        outs.append((proc.stdout, {p.name: p.read_bytes() for p in sorted((tmp_path / run_dir).iterdir())}))
    assert outs[0] == outs[1]
    assert set(outs[0][1]) == {"audit_3.2.json", "audit_3.3.json"}


def hand_made_report():
    ids = [Identity("3.1-N", "<xi_g,N> = 0", 1e-12, 5e-13, Verdict.HOLDS),
           Identity("3.6-literal", "sum_{i=2}^{n-3} eps_{i+1} w_i^2 = c^2", float("inf"), float("inf"),
                    Verdict.HOLDS_WITH_SIGN_VARIANT),
           Identity("3.12", "<xi_g,B_{n-2}> = -eps_{n-1} int k_{n-1} w_{n-3} ds", 0.25, 0.125, Verdict.FAILS)]
    return AuditReport(TheoremId.SPACELIKE_RECTIFYING, ids, 1.5, 2.25, {"n": 3, "h": 0.01, "range": [0.0, 1.0]},
                       ["G anchored at s0=0"])


def test_golden_report(tmp_path):
    path = tmp_path / "r.json"
    write_audit_json(hand_made_report(), path)
    assert path.read_bytes() == (GOLDEN / "audit_report.json").read_bytes()


def test_empty_report_forbidden():
    with pytest.raises(ValueError):
        AuditReport(TheoremId.G_NORMAL, [])


def test_verdict_strings():
    assert [v.value for v in Verdict] == ["holds", "holds_with_sign_variant", "fails"]
    assert json.loads(audit_json(hand_made_report()))["identities"][2]["verdict"] == "fails"


def test_three_node_table(tmp_path):
    # the writer only needs grids and arrays, so a 3-node table can be written directly
    s = np.array([0.0, 0.5, 1.0])
    frames = np.repeat(np.eye(3)[[1, 2, 0]][None], 3, axis=0)
    fd = FrenetData(s, frames, np.ones((3, 2)), (1, -1), FrameKind.SPACELIKE)
    trace = SimpleNamespace(s_grid=s, points=np.arange(9.0).reshape(3, 3) / 7)
    gft = SimpleNamespace(xi_g=np.arange(9.0).reshape(3, 3) / 3, G_values=s / 3)
    path = tmp_path / "t.csv"
    write_trace_csv(trace, fd, gft, path)
    text = path.read_text()
    assert len(text.splitlines()) == 4
    assert text.endswith("\n") and "\r" not in text
    header, data = read_trace_csv(path)
    assert len(header) == 1 + 3 + 1 + 3 + 2 + 2
    assert data[1, 1] == 3 / 7  # bit-identical after the 17-digit round trip


def test_csv_round_trip_bit_identical(tmp_path):
    trace, fd, g, s0, gft = curves.rectifying4(step=1e-2)
    path = tmp_path / "t.csv"
    write_trace_csv(trace, fd, gft, path)
    header, data = read_trace_csv(path)
    np.testing.assert_array_equal(data[:, 0], trace.s_grid)
    np.testing.assert_array_equal(data[:, 1:5], trace.points)
    np.testing.assert_array_equal(data[:, 6:10], gft.xi_g)
    assert len(header) == 1 + 4 + 1 + 4 + 3 + 3


@pytest.mark.parametrize("x", [0.1, 1 / 3, -2.5e-300, 1e300, np.pi, 5e-324])
def test_fmt_round_trip(x):
    assert float(fmt(x)) == x
