"""コマンドラインのテスト"""
import json
import math

import pytest

from kanshou.io.csv_report import format_value
from kanshou.main import main

PHI = 1e-4


def _write_config(tmp_path, document):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"schema": 1, **document}), encoding="utf-8")
    return str(path)


def _report(text):
    """'key,value' 行を辞書にする"""
    return dict(line.split(",", 1) for line in text.splitlines())


def _csv(text):
    lines = text.splitlines()
    rows = [line.split(",") for line in lines if not line.startswith("#")]
    metadata = dict(line[1:].split(",", 1) for line in lines if line.startswith("#"))
    return rows[0], [[float(v) for v in row] for row in rows[1:]], metadata


def test_evolve_zero_phases(tmp_path, capsys):
    """全位相ゼロ: γ = 1、共起度 0"""
    code = main(["evolve", "--config", _write_config(tmp_path, {"phases": {}})])
    report = _report(capsys.readouterr().out)
    assert code == 0
    assert float(report["abs_LR"]) == pytest.approx(1.0, abs=1e-12)
    assert float(report["concurrence"]) == pytest.approx(0.0, abs=1e-12)


def test_evolve_purified(tmp_path, capsys):
    """純化した φ = 1e-4: |α|, |δ| ≤ 1e-12、共起度 sin(φ/2)"""
    path = _write_config(tmp_path, {"phases": {"phi_RL": PHI, "purify": True}})
    assert main(["evolve", "--config", path]) == 0
    report = _report(capsys.readouterr().out)
    assert float(report["abs_RR"]) <= 1e-12
    assert float(report["abs_LL"]) <= 1e-12
    assert float(report["concurrence"]) == pytest.approx(math.sin(PHI / 2), abs=1e-12)


def test_evolve_maximal_entanglement(tmp_path, capsys):
    """ξ = π: v = 0、共起度 1"""
    path = _write_config(tmp_path, {"phases": {"phi_RL": math.pi}})
    assert main(["evolve", "--config", path]) == 0
    report = _report(capsys.readouterr().out)
    assert abs(float(report["visibility"])) <= 1e-12
    assert float(report["concurrence"]) == pytest.approx(1.0, abs=1e-12)


def test_fig2_defaults(capsys):
    """既定: 721 点、6 本の条件付き曲線、ϑ₂ = φ/2 は π 反転、ϑ₂ = π は同位相"""
    assert main(["fig2"]) == 0
    header, rows, metadata = _csv(capsys.readouterr().out)
    assert header[:2] == ["theta1", "p_R1_uncond"]
    assert len(header) == 8
    assert len(rows) == 721
    anti = float(metadata[f"phase_shift_theta2={format_value(PHI / 2)}"])
    same = float(metadata[f"phase_shift_theta2={format_value(math.pi)}"])
    assert abs(abs(anti) - math.pi) <= 1e-6
    assert abs(same) <= 1e-6
    # ϑ₂ = 0 の曲線は ½ で平坦
    assert all(abs(row[2] - 0.5) <= 1e-9 for row in rows)


def test_fig3_defaults(tmp_path):
    """既定: 可視度 1、P̃_R₁ は 0 と 1 に達する"""
    out = tmp_path / "fig3.csv"
    assert main(["fig3", "--out", str(out)]) == 0
    header, rows, metadata = _csv(out.read_text(encoding="utf-8"))
    assert header == ["theta2", "p_R1_cond"]
    assert len(rows) == 821
    assert [r[0] for r in rows] == sorted(r[0] for r in rows)
    assert abs(float(metadata["visibility"]) - 1.0) <= 1e-6
    values = [r[1] for r in rows]
    assert min(values) <= 1e-9 and max(values) >= 1 - 1e-9


def test_fig3_phi_pi(tmp_path, capsys):
    """φ = π（ϑ₁ = 0）で可視度 0"""
    path = _write_config(tmp_path, {"fig3": {"phi": math.pi, "theta1": 0.0}})
    assert main(["fig3", "--config", path]) == 0
    _, _, metadata = _csv(capsys.readouterr().out)
    assert abs(float(metadata["visibility"])) <= 1e-6


def test_fig3_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["fig3", "--out", str(a)])
    main(["fig3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_snr_zero_interaction(tmp_path, capsys):
    """相互作用なし: N_L₂ = 0 で SNR は未定義と報告"""
    path = _write_config(tmp_path, {"phases": {}, "snr": {"n_pairs": 1000}})
    assert main(["snr", "--config", path]) == 0
    report = _report(capsys.readouterr().out)
    assert report["n_postselected"] == "0"
    assert report["snr"].startswith("undefined")


def test_snr_purified_run(tmp_path, capsys):
    """純化した φ = 1e-4: N_L₂ は 5σ 帯、N_L₁ = 1 の慣例を適用、SNR ≲ N_L₂"""
    path = _write_config(tmp_path, {
        "phases": {"phi_RL": PHI, "purify": True},
        "snr": {"n_pairs": 100_000_000_000},
    })
    assert main(["snr", "--config", path, "--seed", "20231"]) == 0
    report = _report(capsys.readouterr().out)
    assert report["rng"] == "numpy.random.PCG64"
    assert report["seed"] == "20231"
    n = int(report["n_postselected"])
    assert float(report["n_postselected_band_low"]) <= n <= float(report["n_postselected_band_high"])
    assert report["n_L1_regularized"] == "true"
    assert float(report["observed_snr"]) <= float(report["observed_snr_bound"])


def test_snr_band_is_non_negative(tmp_path, capsys):
    """10⁸ 対では期待 N_L₂ ≈ 0.06、帯の下端は 0"""
    path = _write_config(tmp_path, {"phases": {"phi_RL": PHI, "purify": True}})
    assert main(["snr", "--config", path]) == 0
    report = _report(capsys.readouterr().out)
    assert float(report["n_postselected_band_low"]) == 0.0
    assert float(report["n_postselected_band_high"]) > 0.0


def test_snr_is_deterministic(tmp_path, capsys):
    path = _write_config(tmp_path, {"phases": {"phi_RL": 1.0, "theta2": 0.3}, "snr": {"n_pairs": 10000}})
    main(["snr", "--config", path, "--seed", "5"])
    first = capsys.readouterr().out
    main(["snr", "--config", path, "--seed", "5"])
    assert capsys.readouterr().out == first


def test_feasibility_example(tmp_path, capsys):
    """Γ = 1/s, T = 10⁶ s: κ = 1e-42、margin ≈ 2.5e4、合格"""
    path = _write_config(tmp_path, {"physics": {
        "m1": 1e-14, "m2": 1e-14, "tau": 1.0, "separation": 1e-4, "ratio": 100.0,
        "gamma_rate": 1.0, "t_run": 1e6,
    }})
    assert main(["feasibility", "--config", path]) == 0
    report = _report(capsys.readouterr().out)
    assert float(report["kappa"]) == pytest.approx(1e-42, rel=1e-12)
    assert float(report["margin"]) == pytest.approx(2.5e4, rel=0.01)
    assert report["pass"] == "true"
    assert float(report["phi_RL"]) == pytest.approx(0.6329, abs=5e-5)


def test_feasibility_margin_flag(tmp_path, capsys):
    path = _write_config(tmp_path, {"physics": {
        "m1": 1e-14, "m2": 1e-14, "tau": 1.0, "separation": 1e-4, "ratio": 100.0,
        "gamma_rate": 1.0, "t_run": 1e6,
    }})
    assert main(["feasibility", "--config", path, "--margin", "1e5"]) == 0
    assert _report(capsys.readouterr().out)["pass"] == "false"


def test_feasibility_without_physics(capsys):
    assert main(["feasibility"]) == 2
    assert capsys.readouterr().out == ""


def test_invalid_config_exit_code(tmp_path, capsys):
    """設定エラーは終了コード 2、出力なし"""
    path = _write_config(tmp_path, {"phases": {"phi": 1.0}})
    assert main(["evolve", "--config", path]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "unknown key" in captured.err


def test_negative_seed_rejected(capsys):
    assert main(["snr", "--seed", "-1"]) == 2


def test_check_passes(capsys):
    """全スイート合格で終了コード 0、最後の行は要約"""
    assert main(["check"]) == 0
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    summary = lines[-1]
    assert summary["failed"] == 0
    assert summary["first_failure"] is None
    assert all(line["passed"] for line in lines[:-1])


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "kanshou" in capsys.readouterr().out
