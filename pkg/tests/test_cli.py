import json

import pytest

from stokesevans.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_find_kappa1_output(capsys):
    code, out, _ = run_cli(capsys, "indices", "find-kappa1")
    assert code == 0
    assert out.strip() == "1.362782757"


def test_dispersion_roots(capsys):
    code, out, _ = run_cli(capsys, "dispersion", "--kappa", "1", "--sigma", "0")
    assert code == 0
    doc = json.loads(out)
    roots = doc["outputs"]["roots"]
    assert roots == {"k1": -1.0, "k2": 1.0, "k3": 0.0, "k4": 0.0}


def test_dispersion_resonance_spec(capsys):
    code, out, _ = run_cli(capsys, "dispersion", "--kappa", "1", "--sigma", "res:2")
    assert code == 0
    doc = json.loads(out)
    r = doc["outputs"]["roots"]
    assert r["k2"] - r["k4"] == pytest.approx(2.0, abs=1e-11)


def test_stokes_dump(capsys):
    code, out, _ = run_cli(capsys, "stokes", "--kappa", "1.2", "--order", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["outputs"]["order2"]["residual"] < 1e-10
    assert doc["outputs"]["order1"]["phi_terms"]


def test_monodromy_dump_with_provenance(capsys):
    code, out, _ = run_cli(capsys, "monodromy", "--kappa", "1.0",
                           "--sigma", "0", "--order", "1")
    assert code == 0
    doc = json.loads(out)
    assert "a10" in doc["outputs"] and "a01" in doc["outputs"]
    assert doc["provenance"]["a10"][0][0] == "closed-form"


def test_indices_json(capsys):
    code, out, _ = run_cli(capsys, "indices", "--kappa", "1.0", "--which", "ind1")
    assert code == 0
    doc = json.loads(out)
    assert doc["outputs"]["ind1"] < 0


def test_indices_requires_kappa(capsys):
    code, _, err = run_cli(capsys, "indices")
    assert code == 1


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "dispersion", "--kappa", "-1")
    assert code == 2
    assert "domain error" in err


def test_usage_error_exit_code(capsys):
    code, _, _ = run_cli(capsys, "sweep", "--kappa", "1:2:3",
                         "--targets", "nonsense")
    assert code == 1


def test_sweep_csv_determinism(capsys, tmp_path):
    code, out1, _ = run_cli(capsys, "sweep", "--kappa", "0.5:2.5:41",
                            "--targets", "ind1", "--workers", "3")
    assert code == 0
    code, out2, _ = run_cli(capsys, "sweep", "--kappa", "0.5:2.5:41",
                            "--targets", "ind1", "--workers", "3")
    assert out1 == out2
    lines = out1.strip().splitlines()
    assert lines[1] == "kappa,ind1,nu"
    assert len(lines) == 43  # header comment + column row + 41 data rows
    vals = [float(l.split(",")[1]) for l in lines[2:]]
    # exactly one sign change across the sideband threshold
    flips = sum(1 for a, b in zip(vals, vals[1:]) if a * b < 0)
    assert flips == 1


def test_spectrum_bubble_files(capsys, tmp_path):
    out_csv = tmp_path / "bubble.csv"
    code, _, _ = run_cli(capsys, "spectrum", "bubble", "--kappa", "1.5",
                         "--eps", "0.001", "--points", "21",
                         "--out", str(out_csv))
    assert code == 0
    rows = out_csv.read_text().strip().splitlines()
    assert rows[0] == "gamma,re_delta,im_delta"
    assert len(rows) == 1 + 2 * 21
    sidecar = json.loads((tmp_path / "bubble.json").read_text())
    assert sidecar["outputs"]["ind2"] > 0
    assert sidecar["validity_guard"]["eps"] == 0.01


@pytest.mark.slow
def test_find_kappa2_cli(capsys):
    code, out, _ = run_cli(capsys, "indices", "find-kappa2")
    assert code == 0
    assert abs(float(out.strip()) - 1.8494041) < 1e-4


def test_monodromy_resonant_cli(capsys):
    code, out, _ = run_cli(capsys, "monodromy", "--kappa", "1.5",
                           "--sigma", "res:2", "--order", "1")
    assert code == 0
    doc = json.loads(out)
    a01 = doc["outputs"]["a01"]
    flat = [abs(complex(v["re"], v["im"])) for row in a01 for v in row]
    assert max(flat) < 1e-10


def test_consistency_error_exit_code(capsys, monkeypatch):
    import stokesevans.cli as cli
    from stokesevans.indices import ConsistencyError

    def boom(*a, **k):
        raise ConsistencyError("routes disagree")

    monkeypatch.setattr(cli, "bf_coefficients", boom)
    code, _, err = run_cli(capsys, "indices", "--kappa", "1.0", "--which", "ind1")
    assert code == 3
    assert "consistency" in err


def test_indices_both_json(capsys):
    code, out, _ = run_cli(capsys, "indices", "--kappa", "1.5", "--which", "both")
    assert code == 0
    doc = json.loads(out)
    assert doc["outputs"]["ind2"] > 0
    assert doc["outputs"]["ind1"] > 0
    assert doc["outputs"]["d_coeffs"]["d200"]["re"] != 0.0
