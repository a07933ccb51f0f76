import json
import math
from pathlib import Path

import numpy as np
import pytest

from harperlab.cli import main, parse_alpha, parse_coupling, parse_range
from harperlab.contfrac import QuadraticSurd


def test_parse_alpha_forms():
    g = parse_alpha("golden")
    assert isinstance(g, QuadraticSurd)
    s = parse_alpha("sqrt:5:-1:1:2")  # (-1 + sqrt 5)/2
    assert float(s) == pytest.approx(float(g))
    assert parse_alpha("0.4142135623") == "0.4142135623"


def test_parse_range_forms():
    assert np.allclose(parse_range("-1:1:0.5"), [-1, -0.5, 0, 0.5, 1])
    assert np.allclose(parse_range("0.3,0.7"), [0.3, 0.7])
    assert np.allclose(parse_range("2.5"), [2.5])


def test_parse_coupling_rejects_bad():
    with pytest.raises(ValueError):
        parse_coupling("1,2")


def test_cf_roundtrip(tmp_path):
    out = tmp_path / "cf.json"
    rc = main(["cf", "--alpha", "golden", "--terms", "20", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["terms"] == [1] * 20
    assert data["convergents"][2] == [2, 3]
    assert data["parity_label"] == "odd"
    sidecar = json.loads((tmp_path / "cf.json.config.json").read_text())
    assert sidecar["terms"] == 20 and "version" in sidecar


def test_esprod_csv_schema_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    for out in (out1, out2):
        rc = main(["esprod", "--alpha", "golden", "--nmax", "6", "--out", str(out)])
        assert rc == 0
    assert out1.read_bytes() == out2.read_bytes()  # byte-identical reruns
    header = out1.read_text().splitlines()[0]
    assert header == "n,q_n,sup_value,argmax_angle,running_min"


def test_phase_diagram_output(tmp_path):
    out = tmp_path / "regions.csv"
    rc = main(["phase-diagram", "--grid", "9", "--plane", "l2=1", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda1,lambda3,region,criticality"
    assert len(lines) == 1 + 81
    assert any(",critical" in ln for ln in lines[1:])


def test_lyapunov_csv(tmp_path):
    out = tmp_path / "le.csv"
    rc = main([
        "lyapunov", "--coupling", "0,0.5,0", "--alpha", "golden",
        "--E", "0.0", "--eps=-0.1:0.1:0.05", "--n-iter", "2000",
        "--phases", "8", "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "E,eps,L,slope"
    assert len(lines) == 1 + 5


def test_dos_outputs_three_files(tmp_path):
    out = tmp_path / "dos.csv"
    rc = main(["dos", "--coupling", "0,1,0", "--alpha", "golden",
               "--n", "64", "--phases", "16", "--out", str(out)])
    assert rc == 0
    for suffix in ("_eigs.csv", "_hist.csv", "_ids.csv"):
        assert (tmp_path / f"dos{suffix}").exists()
    hist = (tmp_path / "dos_hist.csv").read_text().splitlines()
    masses = [float(ln.split(",")[2]) for ln in hist[1:]]
    assert math.isclose(sum(masses), 1.0, abs_tol=1e-9)


def test_fourier_csv(tmp_path, capsys):
    out = tmp_path / "fourier.csv"
    rc = main(["fourier", "--coupling", "0,1,0", "--alpha", "golden",
               "--theta", "0.123456", "--levels", "3", "--out", str(out)])
    assert rc == 0
    assert "verdict" in capsys.readouterr().out
    lines = out.read_text().splitlines()
    assert lines[0] == "l,m_l,re,im,normalized,upper_proxy"
    assert len(lines) == 1 + 9


def test_rotation_csv(tmp_path):
    out = tmp_path / "rot.csv"
    rc = main(["rotation", "--coupling", "0,1,0", "--alpha", "golden",
               "--E=-5,0,5", "--n-iter", "5000", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "E,rho,half_turns,N_pred,drift"
    n_pred = [float(ln.split(",")[3]) for ln in lines[1:]]
    assert n_pred[0] == pytest.approx(0.0, abs=5e-3)
    assert n_pred[2] == pytest.approx(1.0, abs=5e-3)


def test_computation_error_exit_code(tmp_path):
    # rational alpha exhausts its precision budget -> typed error, exit 1
    rc = main(["cf", "--alpha", "0.5", "--terms", "10",
               "--out", str(tmp_path / "x.json")])
    assert rc == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["cf", "--alpha", "golden", "--no-such-flag"])
    assert exc.value.code == 2


def test_unknown_subcommand_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
