"""干渉・エンタングルメント解析 (周辺確率、可視度、PRP、純化、共起度)"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kanshou import config
from kanshou.errors import DomainError, OrthogonalStates
from kanshou.quantum.evolution import PhaseConfig
from kanshou.quantum.state import (
    TwoParticleState,
    inner_product,
    norm_squared,
    principal_phase,
    require_normalized,
    wrap_phase,
)

# φ の線形結合係数 (φ_RR, φ_RL, φ_LR, φ_LL)
XI_COEFFS = (1, -1, -1, 1)             # ξ  = φ_RR − φ_RL − φ_LR + φ_LL
DELTA1_COEFFS = (0.5, 0.5, -0.5, -0.5)  # Δ₁ = (φ_RR + φ_RL − φ_LR − φ_LL)/2
DELTA2_COEFFS = (-0.5, 0.5, -0.5, 0.5)  # Δ₂ = (−φ_RR + φ_RL − φ_LR + φ_LL)/2


@dataclass(frozen=True)
class PatternParams:
    """干渉パターンの記述子 ξ, v = cos(ξ/2), Δ₁, Δ₂"""

    xi: float
    visibility: float
    delta1: float
    delta2: float


@dataclass(frozen=True)
class MarginalProbabilities:
    """各干渉計の出力ポート検出確率"""

    p_R1: float
    p_L1: float
    p_R2: float
    p_L2: float


def _combine(coeffs, phis) -> float:
    return float(sum(c * p for c, p in zip(coeffs, phis)))


def pattern_params(cfg: PhaseConfig) -> PatternParams:
    """φ_ij から ξ, v, Δ₁, Δ₂ を計算（ϑ は関与しない）"""
    xi = _combine(XI_COEFFS, cfg.phis)
    return PatternParams(
        xi=xi,
        visibility=math.cos(xi / 2.0),
        delta1=_combine(DELTA1_COEFFS, cfg.phis),
        delta2=_combine(DELTA2_COEFFS, cfg.phis),
    )


def marginals_closed_form(cfg: PhaseConfig) -> MarginalProbabilities:
    """
    周辺確率の余弦公式

    P_L₁ = ½[1 + v cos(ϑ₁ − Δ₁)]、P_R₂ = ½[1 + v cos(ϑ₂ − Δ₂)]、
    P_R₁, P_L₂ は π ずれた補数。
    """
    pp = pattern_params(cfg)
    fringe1 = pp.visibility * math.cos(cfg.theta1 - pp.delta1)
    fringe2 = pp.visibility * math.cos(cfg.theta2 - pp.delta2)
    return MarginalProbabilities(
        p_R1=0.5 * (1.0 - fringe1),
        p_L1=0.5 * (1.0 + fringe1),
        p_R2=0.5 * (1.0 + fringe2),
        p_L2=0.5 * (1.0 - fringe2),
    )


def marginals_from_state(s: TwoParticleState) -> MarginalProbabilities:
    """振幅の絶対値² の和から周辺確率を求める"""
    require_normalized(s)
    p = np.abs(s.amplitudes) ** 2
    return MarginalProbabilities(
        p_R1=float(p[0] + p[1]),
        p_L1=float(p[2] + p[3]),
        p_R2=float(p[0] + p[2]),
        p_L2=float(p[1] + p[3]),
    )


def joint_probabilities(s: TwoParticleState) -> np.ndarray:
    """4つの同時検出確率 (|α|², |β|², |γ|², |δ|²)"""
    return np.abs(s.amplitudes) ** 2


def pancharatnam_phase(a, b) -> float:
    """
    Pancharatnam 相対位相 arg⟨a|b⟩（主値 (-π, π]）

    Raises:
        OrthogonalStates: |⟨a|b⟩| ≤ ORTHOGONAL_TOL
    """
    overlap = inner_product(a, b)
    if abs(overlap) <= config.ORTHOGONAL_TOL:
        raise OrthogonalStates(f"|<a|b>| = {abs(overlap):.3e}, relative phase undefined")
    return principal_phase(overlap)


def interference_pattern(a, b, theta):
    """
    e^{iϑ}|a⟩ + |b⟩ の強度

    ⟨a|a⟩ + ⟨b|b⟩ + 2|⟨a|b⟩| cos(ϑ − arg⟨a|b⟩)。theta は配列でもよい。
    """
    overlap = inner_product(a, b)
    return norm_squared(a) + norm_squared(b) + 2.0 * abs(overlap) * np.cos(
        np.asarray(theta) - np.angle(overlap)
    )


def destructive_setting(a, b) -> float:
    """干渉が最小（破壊的）になる ϑ = π + arg⟨a|b⟩"""
    return wrap_phase(math.pi + pancharatnam_phase(a, b))


def purified_settings(cfg: PhaseConfig) -> PhaseConfig:
    """制御位相を ϑ₁ = Δ₁、ϑ₂ = Δ₂ に合わせる（|R⟩₁|R⟩₂, |L⟩₁|L⟩₂ が消える）"""
    pp = pattern_params(cfg)
    return cfg.with_thetas(pp.delta1, pp.delta2)


def weak_regime_config(phi: float, theta1: float = 0.0, theta2: float = 0.0) -> PhaseConfig:
    """弱結合領域: φ_RL = φ、他の3つの重力位相はゼロ"""
    return PhaseConfig(phi_RL=phi, theta1=theta1, theta2=theta2)


def pure_entangled_state(xi: float) -> TwoParticleState:
    """i sin(ξ/4)|R⟩₁|L⟩₂ + cos(ξ/4)|L⟩₁|R⟩₂"""
    return TwoParticleState(
        [0.0, 1j * math.sin(xi / 4.0), math.cos(xi / 4.0), 0.0], normalized=True
    )


def concurrence(s: TwoParticleState) -> float:
    """純粋状態の共起度 C = 2|αδ − βγ|"""
    require_normalized(s)
    c = 2.0 * abs(s.alpha * s.delta - s.beta * s.gamma)
    return min(1.0, c)


def reduced_density_matrix(s: TwoParticleState, particle: int = 1) -> np.ndarray:
    """部分トレースで得た粒子1または2の 2×2 縮約密度行列"""
    m = s.as_matrix()
    if particle == 1:
        return m @ m.conj().T
    if particle == 2:
        return m.T @ m.conj()
    raise DomainError(f"particle must be 1 or 2, got {particle!r}")


def entanglement_entropy(s: TwoParticleState) -> float:
    """粒子1の縮約状態の von Neumann エントロピー（ビット）"""
    require_normalized(s)
    eigenvalues = np.linalg.eigvalsh(reduced_density_matrix(s, 1))
    # 0·log 0 = 0
    eigenvalues = eigenvalues[eigenvalues > 0.0]
    entropy = float(-np.sum(eigenvalues * np.log2(eigenvalues)))
    return min(1.0, max(0.0, entropy))


def information_content(p: float) -> float:
    """情報量 I = −log₂ P（ビット）"""
    if not (0.0 < p <= 1.0):
        raise DomainError(f"probability must lie in (0, 1], got {p!r}")
    return -math.log2(p)
