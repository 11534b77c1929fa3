"""
性質スイート（オラクル等価性と不変条件）

各性質は乱数シードを固定した数値検査で、失敗すると PropertyFailure を送出する。
run_suites() は全スイートを順に実行し、1行1性質の JSON を返す。
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from kanshou import config
from kanshou.errors import KanshouError
from kanshou.experiment import feasibility, statistics
from kanshou.quantum import analysis, evolution, fringe, postselection, state

logger = logging.getLogger(__name__)

SUITE_SEED = 20231
N_RANDOM_CONFIGS = 1000
N_PURIFICATION_SETS = 100
N_PHYSICAL_SETS = 100
CONDITIONAL_PHIS = (1e-4, 1e-2, 1.0, math.pi - 1e-3)
SIGN_CHANGE_PHIS = (1e-4, 1e-2, 1.0)
MONTE_CARLO_PAIRS = 100_000_000_000


class PropertyFailure(Exception):
    """性質の検査に失敗"""


@dataclass(frozen=True)
class PropertyResult:
    property: str
    passed: bool
    detail: str
    seconds: float


def _expect(condition: bool, message: str):
    if not condition:
        raise PropertyFailure(message)


def _random_configs(n: int, seed: int) -> list[evolution.PhaseConfig]:
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.0, 2.0 * math.pi, size=(n, 6))
    return [evolution.PhaseConfig(*row) for row in values]


# ── 性質 ──

def check_oracle_equivalence() -> str:
    """閉形式の振幅 = 行列による発展（成分ごとに 1e-12）"""
    worst = 0.0
    for cfg in _random_configs(N_RANDOM_CONFIGS, SUITE_SEED):
        diff = np.max(np.abs(
            evolution.amplitudes_closed_form(cfg).amplitudes - evolution.evolve_matrix(cfg).amplitudes
        ))
        worst = max(worst, float(diff))
    _expect(worst <= 1e-12, f"max amplitude deviation {worst:.3e}")
    return f"max deviation {worst:.3e} over {N_RANDOM_CONFIGS} configs"


def check_purification() -> str:
    """ϑ = Δ で α = δ = 0、出力は純粋なエンタングル状態と大域位相を除いて一致"""
    rng = np.random.default_rng(SUITE_SEED + 1)
    worst_amp, worst_fid = 0.0, 1.0
    for phis in rng.uniform(0.0, 2.0 * math.pi, size=(N_PURIFICATION_SETS, 4)):
        cfg = analysis.purified_settings(evolution.PhaseConfig(*phis))
        s = evolution.evolve_matrix(cfg)
        worst_amp = max(worst_amp, abs(s.alpha), abs(s.delta))
        target = analysis.pure_entangled_state(analysis.pattern_params(cfg).xi)
        worst_fid = min(worst_fid, state.fidelity_up_to_global_phase(s, target))
    _expect(worst_amp <= 1e-12, f"|alpha|,|delta| up to {worst_amp:.3e}")
    _expect(worst_fid >= 1.0 - 1e-9, f"fidelity down to {worst_fid!r}")
    return f"max |alpha|,|delta| {worst_amp:.3e}, min fidelity {worst_fid:.15f}"


def check_marginal_formulas() -> str:
    """周辺確率の余弦公式 = 振幅の絶対値² の和"""
    worst = 0.0
    for cfg in _random_configs(N_RANDOM_CONFIGS, SUITE_SEED):
        closed = analysis.marginals_closed_form(cfg)
        direct = analysis.marginals_from_state(evolution.evolve_matrix(cfg))
        worst = max(worst, max(abs(a - b) for a, b in zip(asdict(closed).values(), asdict(direct).values())))
    _expect(worst <= 1e-12, f"max marginal deviation {worst:.3e}")
    return f"max deviation {worst:.3e}"


def check_complementarity() -> str:
    """ξ = π で v = 0、純化した出力の共起度 = 1"""
    cfg = analysis.weak_regime_config(-math.pi)
    pp = analysis.pattern_params(cfg)
    _expect(abs(pp.xi - math.pi) <= 1e-12 or abs(pp.xi + math.pi) <= 1e-12, f"xi = {pp.xi!r}")
    _expect(abs(pp.visibility) <= 1e-12, f"v = {pp.visibility!r}")
    c = analysis.concurrence(evolution.evolve_matrix(analysis.purified_settings(cfg)))
    _expect(abs(c - 1.0) <= 1e-12, f"concurrence = {c!r}")
    return f"v = {pp.visibility:.3e}, concurrence = {c!r}"


def check_conditional_closed_form() -> str:
    """事後選択下の閉形式 = 全エンジン + 事後選択（1e-9）"""
    worst = 0.0
    for phi in CONDITIONAL_PHIS:
        grid = np.union1d(np.linspace(0.0, 2.0 * math.pi, 25), [phi / 2.0, math.pi + phi / 2.0, phi])
        for theta1 in grid:
            for theta2 in grid:
                p_closed, _ = postselection.conditional_prob_closed_form(theta1, theta2, phi)
                p_engine = postselection.engine_conditional(theta1, theta2, phi).p_R1_cond
                worst = max(worst, abs(p_closed - p_engine))
        # ṽ < 0 はちょうど (0, φ) の内側
        inside = np.linspace(0.0, phi, 41)[1:-1]
        outside = np.linspace(phi, 2.0 * math.pi, 201)
        _expect(all(postselection.conditional_visibility(t, phi).v_tilde < 0.0 for t in inside),
                f"v_tilde not negative inside (0, {phi})")
        _expect(all(postselection.conditional_visibility(t, phi).v_tilde >= -1e-12 for t in outside),
                f"v_tilde negative outside (0, {phi})")
        v_min = postselection.conditional_visibility(phi / 2.0, phi).v_tilde
        _expect(abs(v_min + 1.0) <= 1e-9, f"v_tilde(phi/2) = {v_min!r} for phi = {phi}")
    _expect(worst <= 1e-9, f"max conditional deviation {worst:.3e}")
    return f"max deviation {worst:.3e}"


def check_sign_change() -> str:
    """ϑ₁ = φ/2 で相対位相は ϑ₂ = φ/2 で 0、ϑ₂ = π + φ/2 で π。出力切替の位相推定は π ずれる"""
    for phi in SIGN_CHANGE_PHIS:
        plus = postselection.conditional_internal_state(phi / 2.0, phi / 2.0, phi)
        minus = postselection.conditional_internal_state(phi / 2.0, math.pi + phi / 2.0, phi)
        _expect(abs(plus.relative_phase) <= 1e-9, f"phase {plus.relative_phase!r} at theta2 = phi/2, phi = {phi}")
        _expect(abs(abs(minus.relative_phase) - math.pi) <= 1e-9,
                f"phase {minus.relative_phase!r} at theta2 = pi + phi/2, phi = {phi}")
        a = fringe.switching_phase_estimate(
            *postselection.conditional_prob_closed_form(phi / 2.0, phi / 2.0, phi))
        b = fringe.switching_phase_estimate(
            *postselection.conditional_prob_closed_form(phi / 2.0, math.pi + phi / 2.0, phi))
        _expect(abs(abs(a - b) - math.pi) <= 1e-9, f"estimator difference {a - b!r} for phi = {phi}")
    return "relative phases {0, pi} reproduced"


def check_fig2() -> str:
    """ϑ₁ 掃引の縞: (0, φ) 内では π 反転、外側では同位相"""
    phi = config.FIG2_PRESET['phi']
    for theta2, target in ((phi / 2.0, -1.0), (0.0, 0.0), (phi, 0.0)):
        v = postselection.conditional_visibility(theta2, phi).v_tilde
        _expect(abs(v - target) <= 1e-9, f"v_tilde({theta2!r}) = {v!r}, expected {target}")
    grid = np.linspace(config.SWEEP_START, config.SWEEP_STOP, config.SWEEP_POINTS)
    curves = postselection.fig2_curves(phi, grid, (phi / 2.0, 2.0 * phi, math.pi))
    uncond = fringe.fit_fringe(grid, curves['p_R1_uncond'])
    anti = fringe.phase_difference(fringe.fit_fringe(grid, curves['p_R1_cond'][phi / 2.0]), uncond)
    _expect(abs(abs(anti) - math.pi) <= 1e-6, f"phi/2 curve shifted by {anti!r}")
    for theta2 in (2.0 * phi, math.pi):
        shift = fringe.phase_difference(fringe.fit_fringe(grid, curves['p_R1_cond'][theta2]), uncond)
        _expect(abs(shift) <= 1e-6, f"theta2 = {theta2!r} curve shifted by {shift!r}")
    return f"antiphase shift {anti!r}"


def check_fig3() -> str:
    """ϑ₂ 掃引の縞の可視度 |cos(ϑ₁ − φ/2)|"""
    phi = config.FIG3_PRESET['phi']
    grid = fringe.sweep_grid(config.SWEEP_START, config.SWEEP_STOP, config.SWEEP_POINTS,
                             fine_span=phi, fine_points=config.FINE_GRID_POINTS)
    full = postselection.fig3_curve(phi, phi / 2.0, grid)
    _expect(abs(full.visibility - 1.0) <= 1e-6, f"visibility {full.visibility!r} at defaults")
    _expect(np.nanmin(full.p_R1_cond) <= 1e-9 and np.nanmax(full.p_R1_cond) >= 1.0 - 1e-9,
            "p_R1_cond does not span [0, 1]")
    # φ = π は ϑ₁ ≪ π/2 の読み（ϑ₁ = 0）で可視度が消える
    vanished = postselection.fig3_curve(math.pi, 0.0, grid)
    _expect(abs(vanished.visibility) <= 1e-6, f"visibility {vanished.visibility!r} at phi = pi")
    return f"visibility {full.visibility!r} / {vanished.visibility!r}"


def check_kappa_threshold() -> str:
    """16ħ²/G² ≈ 4e-47（2%）、κ は m₁m₂τ/d の2乗則"""
    threshold = feasibility.CODATA_2018.kappa_threshold
    rel = abs(threshold - config.QUOTED_KAPPA_THRESHOLD) / config.QUOTED_KAPPA_THRESHOLD
    _expect(rel <= config.KAPPA_THRESHOLD_REL_TOL, f"threshold {threshold!r} off by {rel:.2%}")
    p = feasibility.PhysicalParams.from_separation(1e-14, 1e-14, 1.0, 1e-4, 100.0, 1.0, 1e6)
    base = feasibility.kappa(p).kappa_value
    doubled = feasibility.kappa(
        feasibility.PhysicalParams.from_separation(2e-14, 1e-14, 1.0, 1e-4, 100.0, 1.0, 1e6)).kappa_value
    _expect(doubled == 4.0 * base, f"square law broken: {doubled!r} vs 4 x {base!r}")
    return f"threshold {threshold!r}"


def check_kappa_identity() -> str:
    """κ の margin = 小角近似の期待 N_L₂（相対 1e-9）"""
    rng = np.random.default_rng(SUITE_SEED + 2)
    worst = 0.0
    for _ in range(N_PHYSICAL_SETS):
        m1, m2 = 10.0 ** rng.uniform(-16, -12, size=2)
        p = feasibility.PhysicalParams.from_separation(
            m1, m2, tau=10.0 ** rng.uniform(-1, 1), d=10.0 ** rng.uniform(-6, -3),
            ratio=100.0, gamma_rate=10.0 ** rng.uniform(0, 3), t_run=10.0 ** rng.uniform(3, 7),
        )
        margin = feasibility.kappa(p).margin
        small = feasibility.expected_postselections(p).small_angle
        worst = max(worst, abs(margin - small) / small)
    _expect(worst <= 1e-9, f"relative gap {worst:.3e}")
    return f"max relative gap {worst:.3e}"


def check_snr_formula() -> str:
    """観測 SNR の最良ケースと期待 SNR の算術"""
    best = statistics.observed_snr(statistics.RunCounts(100, 100, 99, 1, 0)).observed_snr
    _expect(abs(best - math.sqrt(9900.0)) <= 1e-9, f"best-case SNR {best!r}")
    half = statistics.expected_snr(100, 0.5)
    _expect(abs(half - 10.0) <= 1e-12, f"expected SNR {half!r}")
    return f"best-case SNR {best!r}"


def check_monte_carlo() -> str:
    """純化した φ = 1e-4 で N_L₂ は sin²(φ/4)·n の 5σ 帯に入る（期待 62.5 回となる 10¹¹ 対）"""
    phi = config.DEFAULT_PHI
    cfg = analysis.purified_settings(analysis.weak_regime_config(phi))
    counts = statistics.simulate_runs(cfg, MONTE_CARLO_PAIRS, config.DEFAULT_SEED)
    low, high = statistics.binomial_band(MONTE_CARLO_PAIRS, math.sin(phi / 4.0) ** 2)
    _expect(low <= counts.n_postselected <= high,
            f"N_L2 = {counts.n_postselected} outside [{low:.1f}, {high:.1f}]")
    return f"N_L2 = {counts.n_postselected} in [{low:.1f}, {high:.1f}]"


# 順序は固定（最初の失敗が報告される）
SUITES: tuple[tuple[str, Callable[[], str]], ...] = (
    ("oracle_equivalence", check_oracle_equivalence),
    ("purification", check_purification),
    ("marginal_formulas", check_marginal_formulas),
    ("complementarity", check_complementarity),
    ("conditional_closed_form", check_conditional_closed_form),
    ("sign_change", check_sign_change),
    ("fig2_reproduction", check_fig2),
    ("fig3_reproduction", check_fig3),
    ("kappa_threshold", check_kappa_threshold),
    ("kappa_identity", check_kappa_identity),
    ("snr_formula", check_snr_formula),
    ("monte_carlo", check_monte_carlo),
)


def run_suites() -> list[PropertyResult]:
    """全スイートを実行する（例外は失敗として記録）"""
    results = []
    for name, check in SUITES:
        start = time.perf_counter()
        try:
            detail, passed = check(), True
        except PropertyFailure as e:
            detail, passed = str(e), False
        except (KanshouError, ArithmeticError, ValueError) as e:
            detail, passed = f"{type(e).__name__}: {e}", False
        elapsed = time.perf_counter() - start
        logger.info("%s: %s (%.3f s)", name, "pass" if passed else "FAIL", elapsed)
        results.append(PropertyResult(name, passed, detail, elapsed))
    return results


def first_failure(results: list[PropertyResult]) -> str | None:
    return next((r.property for r in results if not r.passed), None)


def to_json_lines(results: list[PropertyResult]) -> str:
    """1性質1行の JSON と最後の要約行（経過時間は含めない）"""
    lines = [
        json.dumps({"property": r.property, "passed": r.passed, "detail": r.detail}, sort_keys=True)
        for r in results
    ]
    lines.append(json.dumps({
        "summary": True,
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "first_failure": first_failure(results),
    }, sort_keys=True))
    return "\n".join(lines) + "\n"
