"""事後選択 (粒子2の検出結果で条件付けた粒子1の状態と統計)"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from kanshou import config
from kanshou.config import Port
from kanshou.errors import DegenerateState, DomainError, ImpossibleOutcome
from kanshou.quantum.analysis import marginals_from_state, weak_regime_config
from kanshou.quantum.evolution import evolve_matrix
from kanshou.quantum.fringe import contrast_visibility
from kanshou.quantum.state import (
    SingleParticleState,
    TwoParticleState,
    principal_phase,
    require_normalized,
    wrap_phase,
)

logger = logging.getLogger(__name__)

# 粒子2のポートごとに残る振幅の添字 (粒子1が R, L の順)
_KEPT_INDICES = {Port.L: (1, 3), Port.R: (0, 2)}


@dataclass(frozen=True)
class PostselectionResult:
    """事後選択後の粒子1の状態 |Φ̃⟩₁ と条件付き確率"""

    outcome: Port
    conditional_state: SingleParticleState
    success_probability: float
    p_R1_cond: float
    p_L1_cond: float


@dataclass(frozen=True)
class ConditionalVisibility:
    """事後選択下の可視度 ṽ（負値は π の位相反転を意味する）"""

    v_tilde: float

    def __post_init__(self):
        if abs(self.v_tilde) > 1.0 + 1e-12:
            raise DomainError(f"|v_tilde| must not exceed 1, got {self.v_tilde!r}")


@dataclass(frozen=True)
class InternalState:
    """
    粒子1の内部状態 |r̃⟩₁（比例定数は再構成しない）

    interference は粒子2側の干渉の種類:
        destructive  相対位相 0（(+) の重ね合わせ）
        constructive 相対位相 π（(−) の重ね合わせ）
        partial      それ以外
        single-branch 片方の係数が消えている（相対位相は nan）
    """

    state: SingleParticleState
    relative_phase: float
    interference: str


@dataclass(frozen=True, eq=False)
class SweepResult:
    """ϑ₂ スイープの結果"""

    theta2: np.ndarray
    p_R1_cond: np.ndarray
    skipped: tuple[int, ...]
    visibility: float

    @property
    def points(self) -> list[tuple[float, float]]:
        """(ϑ₂, P̃_R₁) の組（スキップ点は除く）"""
        return [
            (float(t), float(p))
            for i, (t, p) in enumerate(zip(self.theta2, self.p_R1_cond))
            if i not in self.skipped
        ]


def postselect(s: TwoParticleState, outcome: Port = Port.L) -> PostselectionResult:
    """
    粒子2が outcome ポートで検出された場合に条件付ける

    L₂ なら β|R⟩₁ + δ|L⟩₁ を残し、成功確率 ββ* + δδ* で正規化する。

    Raises:
        ImpossibleOutcome: 残る成分のノルム² がアンダーフロー
    """
    require_normalized(s)
    kept = s.amplitudes[list(_KEPT_INDICES[outcome])]
    weights = kept.real**2 + kept.imag**2
    success = float(weights[0] + weights[1])
    if success <= config.UNDERFLOW_NORM:
        raise ImpossibleOutcome(f"outcome {outcome.value}2 has probability {success!r}")
    p_R1 = float(weights[0] / success)
    p_L1 = float(weights[1] / success)
    return PostselectionResult(
        outcome=outcome,
        conditional_state=SingleParticleState(kept / math.sqrt(success), normalized=True),
        success_probability=success,
        p_R1_cond=p_R1,
        p_L1_cond=p_L1,
    )


def conditional_visibility(theta2: float, phi: float) -> ConditionalVisibility:
    """
    弱結合領域での事後選択可視度

    ṽ = 2 sin(ϑ₂/2) sin((ϑ₂−φ)/2) / [1 − cos(φ/2) cos(ϑ₂ − φ/2)]
    分母は sin²(ϑ₂/2) + sin²((ϑ₂−φ)/2) と恒等的に等しく、桁落ちを避けるためこちらで評価する。
    """
    s_a = math.sin(theta2 / 2.0)
    s_b = math.sin((theta2 - phi) / 2.0)
    # 0/0 は ϑ₂ ≡ 0 かつ φ ≡ 0 (mod 2π) のときだけ（半角の正弦そのもので判定）
    if abs(s_a) <= config.VTILDE_DEGENERATE_TOL and abs(s_b) <= config.VTILDE_DEGENERATE_TOL:
        return ConditionalVisibility(0.0)
    return ConditionalVisibility(2.0 * s_a * s_b / (s_a * s_a + s_b * s_b))


def conditional_prob_closed_form(theta1: float, theta2: float, phi: float) -> tuple[float, float]:
    """
    P̃_R₁ = ½[1 + ṽ cos(π + ϑ₁ − φ/2)]、P̃_L₁ = 1 − P̃_R₁

    φ_RL = φ、他の φ_ij = 0 の弱結合領域でのみ有効。
    """
    v_tilde = conditional_visibility(theta2, phi).v_tilde
    p_R1 = 0.5 * (1.0 - v_tilde * math.cos(theta1 - phi / 2.0))
    return p_R1, 1.0 - p_R1


def conditional_internal_state(theta1: float, theta2: float, phi: float) -> InternalState:
    """
    L₂ で事後選択したときの粒子1の内部状態（出力ビームスプリッタ直前）

    |r̃⟩₁ ∝ (e^{iϑ₂} − e^{iφ})|R⟩₁ + e^{iπ}(e^{iϑ₂} − 1)e^{iϑ₁}|L⟩₁

    Raises:
        DegenerateState: 両係数が DEGENERATE_COEFF_TOL 以下
    """
    # e^{ia} − e^{ib} = 2i sin((a−b)/2) e^{i(a+b)/2}
    amp_R = 2j * math.sin((theta2 - phi) / 2.0) * np.exp(0.5j * (theta2 + phi))
    amp_L = -2j * math.sin(theta2 / 2.0) * np.exp(1j * (theta2 / 2.0 + theta1))
    mag_R, mag_L = abs(amp_R), abs(amp_L)
    if mag_R <= config.DEGENERATE_COEFF_TOL and mag_L <= config.DEGENERATE_COEFF_TOL:
        raise DegenerateState(f"both coefficients vanish at theta2={theta2!r}, phi={phi!r}")

    state = SingleParticleState([amp_R, amp_L])
    if mag_R <= config.DEGENERATE_COEFF_TOL or mag_L <= config.DEGENERATE_COEFF_TOL:
        return InternalState(state, float("nan"), "single-branch")

    relative_phase = principal_phase(amp_L * np.conj(amp_R))
    if abs(relative_phase) <= config.NORM_TOL:
        kind = "destructive"
    elif abs(wrap_phase(relative_phase - math.pi)) <= config.NORM_TOL:
        kind = "constructive"
    else:
        kind = "partial"
    return InternalState(state, relative_phase, kind)


def engine_conditional(theta1: float, theta2: float, phi: float, outcome: Port = Port.L) -> PostselectionResult:
    """弱結合領域の設定を全エンジンで発展させて事後選択する"""
    return postselect(evolve_matrix(weak_regime_config(phi, theta1, theta2)), outcome)


def recovered_interference_sweep(theta1: float, phi: float, theta2_grid) -> SweepResult:
    """
    ϑ₂ を掃引して事後選択下の P̃_R₁ を全エンジンで評価する

    ϑ₂ 依存性は純粋な余弦ではないため、縞の可視度は極値から
    (max − min)/(max + min) で求める（理論値 |cos(ϑ₁ − φ/2)|）。
    不可能な事後選択の点はスキップして記録する。
    """
    grid = np.asarray(theta2_grid, dtype=float)
    values = np.full(grid.shape, np.nan)
    skipped = []
    for i, theta2 in enumerate(grid):
        try:
            values[i] = engine_conditional(theta1, float(theta2), phi).p_R1_cond
        except ImpossibleOutcome:
            skipped.append(i)
    if skipped:
        logger.warning("skipped %d sweep points with zero postselection probability", len(skipped))
    valid = values[~np.isnan(values)]
    visibility = contrast_visibility(valid) if valid.size else float("nan")
    return SweepResult(theta2=grid, p_R1_cond=values, skipped=tuple(skipped), visibility=visibility)


def fig2_curves(phi: float, theta1_grid, theta2_values) -> dict:
    """
    ϑ₁ 掃引での P_R₁（事後選択なし）と、各 ϑ₂ に対する P̃_R₁

    Returns:
        {'theta1': 配列, 'p_R1_uncond': 配列, 'p_R1_cond': {ϑ₂: 配列}}
    """
    theta1_grid = np.asarray(theta1_grid, dtype=float)
    uncond = np.array([
        marginals_from_state(evolve_matrix(weak_regime_config(phi, t1, 0.0))).p_R1
        for t1 in theta1_grid
    ])
    curves = {}
    for theta2 in theta2_values:
        row = np.full(theta1_grid.shape, np.nan)
        for i, t1 in enumerate(theta1_grid):
            try:
                row[i] = engine_conditional(float(t1), float(theta2), phi).p_R1_cond
            except ImpossibleOutcome:
                logger.warning("theta2=%r: postselection impossible at theta1=%r", theta2, t1)
        curves[float(theta2)] = row
    logger.debug("fig2 curves: %d theta1 points x %d theta2 values", theta1_grid.size, len(curves))
    return {'theta1': theta1_grid, 'p_R1_uncond': uncond, 'p_R1_cond': curves}


def fig3_curve(phi: float, theta1: float, theta2_grid) -> SweepResult:
    """ϑ₁ を固定して ϑ₂ を掃引した P̃_R₁ と縞の可視度"""
    return recovered_interference_sweep(theta1, phi, theta2_grid)
