"""干渉縞のフィッティング（N点直交検波）と可視度"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kanshou.errors import DomainError
from kanshou.quantum.state import wrap_phase

_GRID_TOL = 1e-9


@dataclass(frozen=True)
class FringeFit:
    """
    c + A cos(θ − θ₀) へのフィット結果

    visibility = A / c（A ≥ 0、符号は phase に吸収される）
    """

    offset: float
    amplitude: float
    phase: float
    visibility: float


def _one_period(theta: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """一周期ちょうどを覆う等間隔グリッドに揃える（重複する終点は落とす）"""
    theta = np.asarray(theta, dtype=float)
    values = np.asarray(values, dtype=float)
    if theta.shape != values.shape or theta.ndim != 1 or theta.size < 4:
        raise DomainError("fringe fit needs matching 1-D arrays with at least 4 points")
    if abs(theta[-1] - theta[0] - 2.0 * math.pi) < _GRID_TOL:
        theta, values = theta[:-1], values[:-1]
    steps = np.diff(theta)
    step = 2.0 * math.pi / theta.size
    if not np.allclose(steps, step, rtol=0.0, atol=_GRID_TOL):
        raise DomainError("fringe fit needs a uniform grid covering exactly one period")
    return theta, values


def fit_fringe(theta, values) -> FringeFit:
    """
    N点位相シフト法と同じ直交成分（平均、cos成分、sin成分）でフィットする

    純粋な余弦波に対しては厳密で、反復を含まない。
    """
    theta, values = _one_period(theta, values)
    offset = float(np.mean(values))
    in_phase = 2.0 * float(np.mean(values * np.cos(theta)))
    quadrature = 2.0 * float(np.mean(values * np.sin(theta)))
    amplitude = math.hypot(in_phase, quadrature)
    phase = math.atan2(quadrature, in_phase)
    visibility = amplitude / offset if offset != 0.0 else float("nan")
    return FringeFit(offset=offset, amplitude=amplitude, phase=phase, visibility=visibility)


def phase_difference(a: FringeFit, b: FringeFit) -> float:
    """2つの縞の位相差 θ₀(a) − θ₀(b) を (-π, π] で返す"""
    return wrap_phase(a.phase - b.phase)


def contrast_visibility(values) -> float:
    """Michelson コントラスト (max − min)/(max + min)"""
    values = np.asarray(values, dtype=float)
    hi, lo = float(np.max(values)), float(np.min(values))
    if hi + lo <= 0.0:
        raise DomainError("contrast undefined for a non-positive signal")
    return (hi - lo) / (hi + lo)


def switching_phase_estimate(p_R1: float, p_L1: float) -> float:
    """出力切替の位相推定 arccos[(P̃_L₁ − P̃_R₁)/(P̃_L₁ + P̃_R₁)]"""
    total = p_L1 + p_R1
    if total <= 0.0:
        raise DomainError("switching phase needs a positive total probability")
    return math.acos(min(1.0, max(-1.0, (p_L1 - p_R1) / total)))


def sweep_grid(start: float, stop: float, points: int, fine_span: float | None = None,
               fine_points: int = 0) -> np.ndarray:
    """
    等間隔グリッド（start, stop を含む）

    fine_span を与えると [0, fine_span] に fine_points 点を加えて昇順に並べ直す
    （φ = 1e-4 の区間は 0.5° 刻みでは解像できないため）。
    """
    if points < 2:
        raise DomainError(f"sweep needs at least 2 points, got {points!r}")
    if not stop > start:
        raise DomainError(f"sweep must be increasing, got [{start!r}, {stop!r}]")
    grid = np.linspace(start, stop, points)
    if fine_span is not None and fine_points > 0:
        grid = np.union1d(grid, np.linspace(0.0, fine_span, fine_points))
    return grid
