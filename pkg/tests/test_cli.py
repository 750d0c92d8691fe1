import json

import pytest

import doublehopf as dh
from doublehopf.chareq import SystemParams
from doublehopf.cli import main

from conftest import EPS, MU, REF_B0, REF_C0, REF_K0, REF_TAU0


def run_cli(*argv):
    return main(list(argv))


def read_csv(path):
    lines = path.read_text().split("\n")
    assert lines[-1] == ""  # trailing LF
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:-1]]
    return header, rows


def test_analyze_report(tmp_path):
    out = tmp_path / "report.json"
    assert run_cli("analyze", "--out", str(out)) == 0
    rep = json.loads(out.read_text())
    assert rep["k0"] == pytest.approx(REF_K0, abs=1e-8)
    assert rep["tau0"] == pytest.approx(REF_TAU0, abs=1e-8)
    assert rep["case"] == "VIa"
    assert rep["nonresonant"] is True
    assert rep["b0"] == pytest.approx(REF_B0, rel=1e-4)
    assert rep["c0"] == pytest.approx(REF_C0, rel=1e-4)
    assert rep["d0"] == -1
    assert rep["duality_residual"] < 1e-8
    assert len(rep["lines"]) == 8
    assert {ln["name"] for ln in rep["lines"]} == {f"L{i}" for i in range(1, 9)}
    # 17-significant-digit serialization round-trips exactly
    hh = dh.find_hopf_hopf(EPS, MU, 1, 1, 4.5, 5.2)
    assert rep["k0"] == hh.k0
    assert rep["tau0"] == hh.tau0


def test_hopf_curves_csv(tmp_path):
    out = tmp_path / "curves.csv"
    assert run_cli("hopf-curves", "--k-range", "4.6:4.8:0.05", "--j-max", "1",
                   "--out", str(out)) == 0
    header, rows = read_csv(out)
    assert header == ["branch_sign", "j", "k", "tau", "omega"]
    assert len(rows) == 2 * 2 * 5
    for sign, j, k, tau, omega in rows[:6]:
        p = SystemParams(EPS, MU, float(k), float(tau))
        assert abs(dh.eval_char(1j * float(omega), p)) < 1e-9


def test_hopf_curves_empty_range(tmp_path):
    out = tmp_path / "curves.csv"
    assert run_cli("hopf-curves", "--k-range", "5:4:0.1", "--out", str(out)) == 0
    header, rows = read_csv(out)
    assert header == ["branch_sign", "j", "k", "tau", "omega"]
    assert rows == []


def test_simulate_roundtrip_uses_report_exactly(tmp_path):
    rep_path = tmp_path / "report.json"
    run_cli("analyze", "--out", str(rep_path))
    rep = json.loads(rep_path.read_text())

    out = tmp_path / "run"
    code = run_cli(
        "simulate", "--alpha1", "-0.1", "--alpha2", "0.1",
        "--report", str(rep_path), "--h-div", "100", "--t-end", "40",
        "--transient", "10", "--stride", "10", "--out", str(out),
    )
    assert code == 0
    cls = json.loads((tmp_path / "run.classification.json").read_text())
    assert cls["k"] == rep["k0"] + (-0.1)
    assert cls["tau"] == rep["tau0"] + 0.1

    header, rows = read_csv(tmp_path / "run.trajectory.csv")
    assert header == ["t", "x", "y", "theta", "y_delayed"]
    assert len(rows) > 10
    header, _ = read_csv(tmp_path / "run.section.csv")
    assert header == ["t", "x", "y_delayed", "direction"]


def test_simulate_outputs_are_reproducible(tmp_path):
    args = (
        "simulate", "--alpha1", "-0.1", "--alpha2", "0.1", "--h-div", "100",
        "--t-end", "30", "--transient", "5", "--stride", "5",
    )
    run_cli(*args, "--out", str(tmp_path / "a"))
    run_cli(*args, "--out", str(tmp_path / "b"))
    for suffix in (".trajectory.csv", ".section.csv", ".classification.json"):
        assert (tmp_path / ("a" + suffix)).read_bytes() == (
            tmp_path / ("b" + suffix)
        ).read_bytes()


def test_simulate_neutral_formulation(tmp_path):
    out = tmp_path / "run"
    code = run_cli(
        "simulate", "--alpha1", "-0.1", "--alpha2", "-0.08",
        "--formulation", "neutral_form", "--h-div", "100", "--t-end", "30",
        "--transient", "5", "--stride", "10", "--out", str(out),
    )
    assert code == 0
    cls = json.loads((tmp_path / "run.classification.json").read_text())
    assert cls["formulation"] == "neutral_form"


def test_error_exit_codes(tmp_path, capsys):
    # negative delay -> parameter validation error
    code = run_cli("simulate", "--alpha1", "0", "--alpha2", "-50.0",
                   "--h-div", "50", "--t-end", "10", "--out",
                   str(tmp_path / "x"))
    assert code == 2
    err = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert err["error"] == "ValueError"

    # bracket without a curve crossing -> domain error
    code = run_cli("analyze", "--bracket", "3.0:3.5",
                   "--out", str(tmp_path / "y.json"))
    assert code == 1
    err = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert err["error"] == "NoSignChange"


def test_blowup_maps_to_error_with_time(tmp_path, capsys):
    code = run_cli(
        "simulate", "--alpha1", "495", "--alpha2", "0", "--x0", "1.0",
        "--h-div", "50", "--t-end", "50", "--transient", "10",
        "--out", str(tmp_path / "b"),
    )
    assert code == 1
    err = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert err["error"] == "NonFiniteState"
    assert 0.0 < err["time"] < 50.0


def test_zero_start_stays_zero(tmp_path):
    out = tmp_path / "z"
    code = run_cli(
        "simulate", "--alpha1", "0", "--alpha2", "0", "--x0", "0", "--y0", "0",
        "--h-div", "50", "--t-end", "20", "--transient", "5", "--out", str(out),
    )
    assert code == 0
    _, rows = read_csv(tmp_path / "z.trajectory.csv")
    assert all(float(r[1]) == 0.0 and float(r[2]) == 0.0 for r in rows)


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "defaults.cfg"
    cfg.write_text("# defaults\nk_range=4.6:4.7:0.05\nj_max=0\n")
    out = tmp_path / "c.csv"
    assert run_cli("--config", str(cfg), "hopf-curves", "--out", str(out)) == 0
    _, rows = read_csv(out)
    assert len(rows) == 2 * 3  # j = 0 only, 3 gains, both signs

    # explicit flag beats the config value
    assert run_cli("--config", str(cfg), "hopf-curves", "--j-max", "1",
                   "--out", str(out)) == 0
    _, rows = read_csv(out)
    assert len(rows) == 4 * 3


def test_line_t_skipped_origin(tmp_path):
    out = tmp_path / "t.csv"
    assert run_cli("line-t", "--iota", "0", "--out", str(out)) == 0
    header, rows = read_csv(out)
    assert header == ["iota", "k", "tau", "label", "divergence_exponent"]
    assert len(rows) == 1
    assert rows[0][3] == "skipped_origin"
    assert float(rows[0][1]) == pytest.approx(REF_K0, abs=1e-8)


def test_analyze_flags_resonant_frequencies(tmp_path, monkeypatch):
    # inject a 1:2-resonant point through the detection hook
    real = dh.find_hopf_hopf(EPS, MU, 1, 1, 4.5, 5.2)
    fake = dh.HopfHopfPoint(
        real.k0, real.tau0, real.omega2 / 2.0, real.omega2, 1, 1
    )
    import doublehopf.cli as cli_mod

    monkeypatch.setattr(cli_mod.hopf_hopf, "find_hopf_hopf",
                        lambda *a, **kw: fake)
    out = tmp_path / "res.json"
    assert run_cli("analyze", "--out", str(out)) == 0
    rep = json.loads(out.read_text())
    assert rep["nonresonant"] is False
    assert rep["nearest_ratio"] == [1, 2]


def test_json_table_format(tmp_path):
    out = tmp_path / "curves.json"
    assert run_cli("--format", "json", "hopf-curves", "--k-range",
                   "4.6:4.7:0.05", "--j-max", "0", "--out", str(out)) == 0
    data = json.loads(out.read_text())
    assert len(data["rows"]) == 2 * 3
    assert data["skipped_k"] == []

    out2 = tmp_path / "t.json"
    assert run_cli("--format", "json", "line-t", "--iota", "0",
                   "--out", str(out2)) == 0
    data = json.loads(out2.read_text())
    assert data["rows"][0]["label"] == "skipped_origin"
