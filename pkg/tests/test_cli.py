import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from hsbisep.cli import main
from hsbisep.io import read_state, state_from_text, state_to_text

from oracle import w_density, w_noisy


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def wfile(tmp_path):
    def make(p):
        path = tmp_path / f"w{p}.json"
        path.write_text(state_to_text(w_noisy(p)))
        return path

    return make


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["gen", "mds", "--seed", 7, "--out", a], capsys)[0] == 0
    assert run(["gen", "mds", "--seed", 7, "--out", b], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    run(["gen", "mds", "--seed", 8, "--out", b], capsys)
    assert a.read_bytes() != b.read_bytes()


def test_gen_canonical_spectrum(tmp_path, capsys):
    path = tmp_path / "c.json"
    assert run(["gen", "canonical:1,0,0", "--out", path], capsys)[0] == 0
    vals = np.linalg.eigvalsh(read_state(path))
    assert np.allclose(vals, [0] * 4 + [0.25] * 4, atol=1e-15)


def test_gen_w_noise_one_is_w_state(tmp_path, capsys):
    code, out, _ = run(["gen", "w-noise:1"], capsys)
    assert code == 0
    assert np.allclose(state_from_text(out), w_density(), atol=1e-16)


@pytest.mark.parametrize("kind", ["foo", "canonical:1,2", "canonical:a,b,c", "w-noise:2", "mds:3"])
def test_gen_bad_kind(kind, capsys):
    assert run(["gen", kind], capsys)[0] == 2


def test_gen_invalid_coefficients(capsys):
    code, _, err = run(["gen", "canonical:1,1,0"], capsys)
    assert code == 3 and "minimal eigenvalue" in err


def test_decompose_w(wfile, capsys):
    code, out, _ = run(["decompose", wfile(1)], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 19
    assert sum("mds" in ln for ln in lines) == 7
    zzz = [ln for ln in lines if ln.startswith("ZZZ")]
    assert float(zzz[0].split()[-1]) == pytest.approx(-1, abs=1e-14)


def test_decompose_maximally_mixed(wfile, capsys):
    code, out, _ = run(["decompose", wfile(0)], capsys)
    assert code == 0 and out.strip() == "no nonidentity coefficients"


def test_decompose_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["decompose", bad], capsys)[0] == 2
    m = np.eye(8) / 8
    m[0, 0], m[1, 1] = 0.3, -0.05
    neg = tmp_path / "neg.json"
    neg.write_text(state_to_text(m))
    code, _, err = run(["decompose", neg], capsys)
    assert code == 3 and "minimal eigenvalue" in err
    h = np.eye(8, dtype=complex) / 8
    h[0, 1] = 0.1
    nh = tmp_path / "nh.json"
    nh.write_text(state_to_text(h))
    code, _, err = run(["decompose", nh], capsys)
    assert code == 3 and "Hermitian" in err
    assert run(["decompose", tmp_path / "missing.json"], capsys)[0] == 2


def test_decompose_stdin(wfile, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(wfile(1).read_text()))
    code, out, _ = run(["decompose", "-"], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 19


def test_analyze_verdicts(wfile, capsys):
    _, out, _ = run(["analyze", wfile(0.15)], capsys)
    assert "verdict: biseparable (certified, cut A|BC)" in out
    assert "fully-separable" not in out
    _, out, _ = run(["analyze", wfile(0.25)], capsys)
    assert "verdict: not fully separable (PPT violated, cut A|BC)" in out
    _, out, _ = run(["analyze", wfile(0)], capsys)
    assert "verdict: fully-separable (certified)" in out


def test_analyze_json_full_precision(wfile, capsys):
    code, out, _ = run(["analyze", wfile(0.15), "--format", "json", "--cut", "B|AC"], capsys)
    data = json.loads(out)
    assert code == 0 and data["cut"] == "B|AC"
    assert data["bisep_cost"] == pytest.approx(0.15 * (7 / 3 + 2 * 2**0.5), abs=1e-15)
    assert data["verdicts"] == ["biseparable (certified, cut B|AC)"]


def test_certify_verify_canonical(tmp_path, capsys):
    state, cert = tmp_path / "s.json", tmp_path / "c.json"
    run(["gen", "canonical:0.3,0.4,-0.5", "--out", state], capsys)
    assert run(["certify", state, "--cut", "C|AB", "--out", cert], capsys)[0] == 0
    data = json.loads(cert.read_text())
    assert len(data["terms"]) == 5 and data["bipartition"] == "C|AB"
    code, out, _ = run(["verify", cert, state], capsys)
    assert code == 0 and out.strip().endswith("verification passed")


def test_certify_w_family(tmp_path, capsys):
    cert = tmp_path / "c.json"
    assert run(["certify", "--family", "w-noise", "--p", 0.19, "--out", cert], capsys)[0] == 0
    assert len(json.loads(cert.read_text())["terms"]) == 20
    code, _, err = run(["certify", "--family", "w-noise", "--p", 0.21], capsys)
    assert code == 4 and "threshold" in err
    assert run(["certify", "--family", "w-noise"], capsys)[0] == 2


def test_certify_criterion_and_class_errors(tmp_path, wfile, capsys):
    path = tmp_path / "s.json"
    assert run(["gen", "three-triad:0.2,0.2,0.2,0.2,0.2,0.2,0,0,0", "--out", path], capsys)[0] == 0
    code, _, _ = run(["certify", path], capsys)
    assert code == 0
    code, _, err = run(["certify", wfile(0.15)], capsys)
    assert code == 5 and "MDS" in err
    code, _, err = run(["certify", wfile(0.2), "--method", "general"], capsys)
    assert code == 4 and "norm_sum" in err
    assert run(["certify", wfile(0.15), "--method", "general"], capsys)[0] == 0
    assert run(["certify", wfile(0.1), "--method", "full"], capsys)[0] == 0
    assert run(["certify"], capsys)[0] == 2


def test_certify_optimized_frame(tmp_path, capsys):
    from hsbisep.hs import HSDecomposition, hs_reconstruct

    d = HSDecomposition.from_mapping({s: 0.4 for s in ((1, 1, 1), (2, 3, 2), (3, 2, 3))})
    path = tmp_path / "s.json"
    path.write_text(state_to_text(hs_reconstruct(d)))
    code, _, err = run(["certify", path], capsys)
    assert code == 4 and "norm_sum = 1.2" in err
    cert = tmp_path / "c.json"
    assert run(["certify", path, "--frame", "optimize", "--out", cert], capsys)[0] == 0
    assert run(["verify", cert, path], capsys)[0] == 0


def test_verify_failures(tmp_path, wfile, capsys):
    cert = tmp_path / "c.json"
    run(["certify", "--family", "w-noise", "--p", 0.15, "--out", cert], capsys)
    assert run(["verify", cert, wfile(0.15)], capsys)[0] == 0
    code, out, _ = run(["verify", cert, wfile(0.1)], capsys)
    assert code == 1 and "[FAIL] residual" in out
    data = json.loads(cert.read_text())
    data["terms"][3]["weight"] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(["verify", bad, wfile(0.15)], capsys)
    assert code == 1 and "[FAIL] weights" in out
    junk = tmp_path / "junk.json"
    junk.write_text("[1, 2]")
    assert run(["verify", junk, wfile(0.15)], capsys)[0] == 2
    assert run(["verify", cert, junk], capsys)[0] == 2


def test_sweep_csv(capsys):
    code, out, _ = run(["sweep", 0, 0.3, 31, "--format", "csv"], capsys)
    assert code == 0 and "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == [
        "p", "ppt_min_A", "ppt_min_B", "ppt_min_C", "triad_norm_sum", "l1", "bisep_certified", "full_sep_certified",
    ]  # fmt: skip
    assert len(rows) == 31
    flips = {k: max(float(r["p"]) for r in rows if r[k] == "true") for k in ("full_sep_certified", "bisep_certified")}
    assert flips == {"full_sep_certified": pytest.approx(0.11), "bisep_certified": pytest.approx(0.19)}
    assert max(float(r["p"]) for r in rows if float(r["ppt_min_A"]) >= 0) == pytest.approx(0.2)


def test_sweep_first_row_and_formats(capsys):
    _, out, _ = run(["sweep", 0, 1, 11, "--format", "json"], capsys)
    first = json.loads(out)[0]
    assert first["p"] == 0 and first["bisep_certified"] and first["full_sep_certified"]
    assert min(first["ppt_min_A"], first["ppt_min_B"], first["ppt_min_C"]) > 0
    code, out, _ = run(["sweep", 0, 0.2, 3], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 5


@pytest.mark.parametrize("argv", [["sweep", 0, 0], ["sweep", 0.5, 0.1, 4], ["sweep", 0, 2, 4], ["sweep", "x", 1]])
def test_sweep_bad_range(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_bad_flags(capsys):
    assert run(["analyze", "x.json", "--cut", "Q"], capsys)[0] == 2
    assert run(["nope"], capsys)[0] == 2
    assert run(["gen", "mds", "--seed", -1], capsys)[0] == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "hsbisep", "gen", "canonical:0.5,0.5,0.5"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n_qubits"] == 3
