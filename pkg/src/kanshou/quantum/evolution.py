"""干渉計パイプライン (前選択 → ビームスプリッタ → 位相 → ビームスプリッタ)"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from kanshou import config
from kanshou.errors import DomainError
from kanshou.quantum.state import SingleParticleState, TwoParticleState

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# 入力ビームスプリッタ後の重ね合わせの符号 (RR, RL, LR, LL):
# |L⟩₁|R⟩₂ → ½(|R⟩₁ − |L⟩₁)(|R⟩₂ + |L⟩₂)
PRESELECTED_BRANCH_SIGNS = (1, 1, -1, -1)

# 出力ビームスプリッタの符号: 枝 i からポート a へ（|L⟩ → |R⟩ − |L⟩ なので L→L のみ負）
_PORT_SIGN = {("R", "R"): 1, ("R", "L"): 1, ("L", "R"): 1, ("L", "L"): -1}
_BRANCHES = ("RR", "RL", "LR", "LL")


@dataclass(frozen=True)
class PhaseConfig:
    """
    重力位相 φ_ij と制御位相 ϑ₁, ϑ₂（すべてラジアン、折り返しなし）

    ϑ₁ は枝 |L⟩₁、ϑ₂ は枝 |R⟩₂ に作用する。
    """

    phi_RR: float = 0.0
    phi_RL: float = 0.0
    phi_LR: float = 0.0
    phi_LL: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise DomainError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, value)

    @property
    def phis(self) -> tuple[float, float, float, float]:
        """(φ_RR, φ_RL, φ_LR, φ_LL)"""
        return (self.phi_RR, self.phi_RL, self.phi_LR, self.phi_LL)

    def with_thetas(self, theta1: float, theta2: float) -> "PhaseConfig":
        return replace(self, theta1=theta1, theta2=theta2)

    def branch_phases(self) -> np.ndarray:
        """各枝 (RR, RL, LR, LL) が受け取る総位相"""
        return np.array([
            self.theta2 + self.phi_RR,
            self.phi_RL,
            self.theta1 + self.theta2 + self.phi_LR,
            self.theta1 + self.phi_LL,
        ])


@dataclass(frozen=True, eq=False)
class BranchUnitary:
    """(R, L) 基底で1粒子に作用する 2×2 ユニタリ"""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise DomainError(f"branch unitary must be 2x2, got {m.shape}")
        if not np.allclose(m.conj().T @ m, np.eye(2), rtol=0.0, atol=config.UNITARY_TOL):
            raise DomainError("branch matrix is not unitary")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def apply(self, s: SingleParticleState) -> SingleParticleState:
        return SingleParticleState(self.matrix @ s.amplitudes)

    def __matmul__(self, other: "BranchUnitary") -> "BranchUnitary":
        return BranchUnitary(self.matrix @ other.matrix)


def beam_splitter() -> BranchUnitary:
    """
    対称ビームスプリッタ

    |R⟩ → (|R⟩ + |L⟩)/√2、|L⟩ → (|R⟩ + e^{iπ}|L⟩)/√2。
    分割と合流の両方に同じ行列を使う（自己逆）。
    """
    return BranchUnitary(_INV_SQRT2 * np.array([[1.0, 1.0], [1.0, -1.0]]))


def phase_unitary(cfg: PhaseConfig) -> np.ndarray:
    """
    重力位相と制御位相の対角ユニタリ (4×4)

    対角成分 (e^{i(ϑ₂+φ_RR)}, e^{iφ_RL}, e^{i(ϑ₁+ϑ₂+φ_LR)}, e^{i(ϑ₁+φ_LL)})。
    """
    return np.diag(np.exp(1j * cfg.branch_phases()))


def preselected_state() -> TwoParticleState:
    """前選択状態 |L⟩₁|R⟩₂"""
    return TwoParticleState.basis("LR")


def evolve_matrix(cfg: PhaseConfig) -> TwoParticleState:
    """
    行列演算による全パイプライン（閉形式のオラクル）

    (BS⊗BS) · U(cfg) · (BS⊗BS) |L⟩₁|R⟩₂
    """
    bs = beam_splitter().matrix
    splitter = np.kron(bs, bs)
    psi = splitter @ (phase_unitary(cfg) @ (splitter @ preselected_state().amplitudes))
    return TwoParticleState(psi, normalized=True)


def amplitudes_closed_form(cfg: PhaseConfig) -> TwoParticleState:
    """
    出力振幅 (α, β, γ, δ) の閉形式

    α = [e^{i(ϑ₂+φ_RR)} + e^{iφ_RL} − e^{i(ϑ₁+ϑ₂+φ_LR)} − e^{i(ϑ₁+φ_LL)}]/4 など。
    各項の符号 = 前選択の符号 × 出力ビームスプリッタの符号。
    """
    factors = np.exp(1j * cfg.branch_phases())
    amplitudes = []
    for port in _BRANCHES:
        total = 0j
        for k, branch in enumerate(_BRANCHES):
            sign = (PRESELECTED_BRANCH_SIGNS[k]
                    * _PORT_SIGN[(branch[0], port[0])]
                    * _PORT_SIGN[(branch[1], port[1])])
            total += sign * factors[k]
        amplitudes.append(total / 4.0)
    return TwoParticleState(amplitudes, normalized=True)
