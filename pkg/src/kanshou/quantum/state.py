"""2粒子状態ベクトル (4次元ヒルベルト空間)"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from kanshou import config
from kanshou.errors import DomainError, NotNormalized, ZeroNorm

# 基底の順序は固定: index 0 ↔ |R⟩₁|R⟩₂, 1 ↔ |R⟩₁|L⟩₂, 2 ↔ |L⟩₁|R⟩₂, 3 ↔ |L⟩₁|L⟩₂
BASIS_LABELS = ("RR", "RL", "LR", "LL")
SINGLE_LABELS = ("R", "L")


def _as_amplitudes(values: Sequence[complex], size: int) -> np.ndarray:
    """振幅列を読み取り専用の complex128 配列に変換し、有限性を検査する"""
    amp = np.array(values, dtype=np.complex128).reshape(-1)
    if amp.shape != (size,):
        raise DomainError(f"expected {size} amplitudes, got {amp.shape[0]}")
    if not np.all(np.isfinite(amp)):
        raise DomainError(f"non-finite amplitude in {amp}")
    amp.flags.writeable = False
    return amp


@dataclass(frozen=True, eq=False)
class _StateVector:
    """状態ベクトル共通部（不変）"""

    amplitudes: np.ndarray
    normalized: bool = False

    SIZE = 0

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _as_amplitudes(self.amplitudes, self.SIZE))
        if self.normalized and abs(_norm_squared(self.amplitudes) - 1.0) > config.NORM_TOL:
            raise NotNormalized(
                f"state flagged normalized has norm² {_norm_squared(self.amplitudes)!r}"
            )

    def __len__(self) -> int:
        return self.SIZE

    def __iter__(self):
        return iter(self.amplitudes)

    def __getitem__(self, index: int) -> complex:
        return complex(self.amplitudes[index])

    def allclose(self, other: "_StateVector", atol: float = config.FRESH_NORM_TOL) -> bool:
        """成分ごとの比較（大域位相は区別する）"""
        return bool(np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class TwoParticleState(_StateVector):
    """
    2粒子状態 α|R⟩₁|R⟩₂ + β|R⟩₁|L⟩₂ + γ|L⟩₁|R⟩₂ + δ|L⟩₁|L⟩₂

    amplitudes は (α, β, γ, δ) の順。
    """

    SIZE = 4

    @classmethod
    def basis(cls, label: str) -> "TwoParticleState":
        """基底状態 |i⟩₁|j⟩₂ を返す（label は 'RR', 'RL', 'LR', 'LL'）"""
        amp = np.zeros(4, dtype=np.complex128)
        amp[BASIS_LABELS.index(label)] = 1.0
        return cls(amp, normalized=True)

    @classmethod
    def product(cls, first: "SingleParticleState", second: "SingleParticleState") -> "TwoParticleState":
        """積状態 |a⟩₁ ⊗ |b⟩₂"""
        return cls(np.kron(first.amplitudes, second.amplitudes))

    @property
    def alpha(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def beta(self) -> complex:
        return complex(self.amplitudes[1])

    @property
    def gamma(self) -> complex:
        return complex(self.amplitudes[2])

    @property
    def delta(self) -> complex:
        return complex(self.amplitudes[3])

    def as_matrix(self) -> np.ndarray:
        """行 = 粒子1 (R, L)、列 = 粒子2 (R, L) の 2×2 振幅行列"""
        return self.amplitudes.reshape(2, 2)


@dataclass(frozen=True, eq=False)
class SingleParticleState(_StateVector):
    """1粒子状態 a_R|R⟩ + a_L|L⟩"""

    SIZE = 2

    @classmethod
    def basis(cls, label: str) -> "SingleParticleState":
        amp = np.zeros(2, dtype=np.complex128)
        amp[SINGLE_LABELS.index(label)] = 1.0
        return cls(amp, normalized=True)

    @property
    def amp_R(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def amp_L(self) -> complex:
        return complex(self.amplitudes[1])


def _norm_squared(amp: np.ndarray) -> float:
    return float(np.sum(amp.real**2 + amp.imag**2))


def _check_same_space(a: _StateVector, b: _StateVector):
    if a.SIZE != b.SIZE:
        raise DomainError(f"states live in different spaces: dim {a.SIZE} vs {b.SIZE}")


def inner_product(a: _StateVector, b: _StateVector) -> complex:
    """⟨a|b⟩ = Σ conj(aᵢ)·bᵢ"""
    _check_same_space(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def norm_squared(s: _StateVector) -> float:
    """⟨s|s⟩ = Σ|aᵢ|²"""
    return _norm_squared(s.amplitudes)


def is_normalized(s: _StateVector, tol: float = config.NORM_TOL) -> bool:
    return abs(norm_squared(s) - 1.0) <= tol


def require_normalized(*states: _StateVector):
    """正規化条件を満たさない状態があれば NotNormalized を送出"""
    for s in states:
        if not is_normalized(s):
            raise NotNormalized(f"expected a normalized state, got norm² {norm_squared(s)!r}")


def normalize(s: _StateVector) -> _StateVector:
    """
    状態を正規化する（向きは保存: s / √⟨s|s⟩）

    Raises:
        ZeroNorm: ノルム² が UNDERFLOW_NORM 以下（不可能な事後選択の兆候）
    """
    n2 = norm_squared(s)
    if n2 <= config.UNDERFLOW_NORM:
        raise ZeroNorm(f"cannot normalize a state with norm² {n2!r}")
    return type(s)(s.amplitudes / np.sqrt(n2), normalized=True)


def fidelity_up_to_global_phase(a: _StateVector, b: _StateVector) -> float:
    """|⟨a|b⟩|²（大域位相 e^{iχ} を無視した一致度）"""
    require_normalized(a, b)
    overlap = inner_product(a, b)
    return min(1.0, overlap.real**2 + overlap.imag**2)


def principal_phase(z: complex) -> float:
    """
    arg z を主値 (-π, π] で返す

    np.angle は [-π, π] を返すので、-π 近傍は +π にする。
    """
    angle = float(np.angle(z))
    if angle <= -math.pi + config.PHASE_BOUNDARY_TOL:
        angle = math.pi
    return angle


def wrap_phase(angle: float) -> float:
    """任意の角度を (-π, π] に折り返す"""
    return principal_phase(np.exp(1j * angle))
