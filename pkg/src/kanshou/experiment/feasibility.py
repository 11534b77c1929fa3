"""物理パラメータ層 (重力位相、期待事後選択数、実験要件パラメータ κ)"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields, replace

from kanshou import config
from kanshou.errors import DomainError
from kanshou.quantum.analysis import pattern_params
from kanshou.quantum.evolution import PhaseConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhysicalConstants:
    """物理定数（既定値は CODATA 2018、明示的な設定でのみ上書き）"""

    G: float = config.G          # m³·kg⁻¹·s⁻²
    hbar: float = config.HBAR    # J·s

    def __post_init__(self):
        if not (self.G > 0.0 and self.hbar > 0.0):
            raise DomainError("physical constants must be positive")

    @property
    def kappa_threshold(self) -> float:
        """16ħ²/G² (kg⁴·m⁻²·s²)"""
        return 16.0 * self.hbar**2 / self.G**2


CODATA_2018 = PhysicalConstants()


@dataclass(frozen=True)
class PhysicalParams:
    """
    質量・相互作用時間・枝間距離・線源レート・実験時間

    d_ij は図の枝ペア間距離。幾何から距離への写像は持たない。
    """

    m1: float           # kg
    m2: float           # kg
    tau: float          # s
    d_RR: float         # m
    d_RL: float         # m
    d_LR: float         # m
    d_LL: float         # m
    gamma_rate: float   # pairs/s
    t_run: float        # s

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{f.name} must be finite and strictly positive, got {value!r}")

    @classmethod
    def from_separation(
        cls,
        m1: float,
        m2: float,
        tau: float,
        d: float,
        ratio: float,
        gamma_rate: float,
        t_run: float,
    ) -> "PhysicalParams":
        """d_RL = d、他の3つを ratio·d とする（φ_RL が支配的な弱結合領域）"""
        far = ratio * d
        return cls(m1, m2, tau, d_RR=far, d_RL=d, d_LR=far, d_LL=far,
                   gamma_rate=gamma_rate, t_run=t_run)

    @property
    def distances(self) -> tuple[float, float, float, float]:
        return (self.d_RR, self.d_RL, self.d_LR, self.d_LL)

    @property
    def n_pairs_total(self) -> float:
        """ΓT"""
        return self.gamma_rate * self.t_run


@dataclass(frozen=True)
class ExpectedPostselections:
    """N_L₂ = P_L₂ ΓT の厳密値と小角近似"""

    phi: float
    exact: float
    small_angle: float
    weak_regime: bool

    @property
    def relative_gap(self) -> float:
        if self.exact == 0.0:
            return 0.0 if self.small_angle == 0.0 else float("inf")
        return abs(self.small_angle - self.exact) / self.exact


@dataclass(frozen=True)
class KappaResult:
    """κ = ΓT(m₁m₂τ/d)² と閾値 16ħ²/G² の比較"""

    kappa_value: float
    threshold: float
    margin: float
    passed: bool
    required_margin: float


@dataclass(frozen=True)
class FeasibilityReport:
    """実験条件の評価結果一式"""

    params: PhysicalParams
    phase_config: PhaseConfig
    xi: float
    p_L2: float
    postselections: ExpectedPostselections
    kappa: KappaResult


def gravitational_phase(
    m1: float,
    m2: float,
    tau: float,
    d: float,
    constants: PhysicalConstants = CODATA_2018,
) -> float:
    """φ = G m₁ m₂ τ / (ħ d)"""
    if not (math.isfinite(d) and d > 0.0):
        raise DomainError(f"distance must be positive, got {d!r}")
    return constants.G * m1 * m2 * tau / (constants.hbar * d)


def phase_config_from_physics(
    p: PhysicalParams,
    theta1: float = 0.0,
    theta2: float = 0.0,
    constants: PhysicalConstants = CODATA_2018,
) -> PhaseConfig:
    """各枝ペアの距離から φ_ij を計算し、ϑ はそのまま渡す"""
    phi_RR, phi_RL, phi_LR, phi_LL = (
        gravitational_phase(p.m1, p.m2, p.tau, d, constants) for d in p.distances
    )
    return PhaseConfig(phi_RR, phi_RL, phi_LR, phi_LL, theta1, theta2)


def expected_postselections_from_phase(phi: float, n_pairs_total: float) -> ExpectedPostselections:
    """厳密 sin²(φ/4)ΓT と小角 (φ/4)²ΓT"""
    exact = math.sin(phi / 4.0) ** 2 * n_pairs_total
    small = (phi / 4.0) ** 2 * n_pairs_total
    result = ExpectedPostselections(phi=phi, exact=exact, small_angle=small, weak_regime=False)
    weak = result.relative_gap <= config.SMALL_ANGLE_REL_TOL
    if not weak:
        logger.info("phi = %.3g rad: small-angle count off by %.2g; outside the weak regime", phi, result.relative_gap)
    return replace(result, weak_regime=weak)


def expected_postselections(
    p: PhysicalParams,
    constants: PhysicalConstants = CODATA_2018,
) -> ExpectedPostselections:
    """d ≡ d_RL の重力位相で N_L₂ = P_L₂ ΓT を評価する"""
    phi = gravitational_phase(p.m1, p.m2, p.tau, p.d_RL, constants)
    return expected_postselections_from_phase(phi, p.n_pairs_total)


def kappa(
    p: PhysicalParams,
    required_margin: float = config.DEFAULT_REQUIRED_MARGIN,
    constants: PhysicalConstants = CODATA_2018,
) -> KappaResult:
    """
    κ = ΓT(m₁m₂τ/d)²、d ≡ d_RL

    margin = κ/(16ħ²/G²) は小角近似の N_L₂ と代数的に同じ量。
    """
    value = p.n_pairs_total * (p.m1 * p.m2 * p.tau / p.d_RL) ** 2
    threshold = constants.kappa_threshold
    margin = value / threshold
    return KappaResult(
        kappa_value=value,
        threshold=threshold,
        margin=margin,
        passed=margin >= required_margin,
        required_margin=required_margin,
    )


def required_run_time(
    p: PhysicalParams,
    required_margin: float = config.DEFAULT_REQUIRED_MARGIN,
    constants: PhysicalConstants = CODATA_2018,
) -> float:
    """margin が required_margin に達する実験時間 T (s)"""
    per_second = kappa(p, required_margin, constants).margin / p.t_run
    return required_margin / per_second


def assess(
    p: PhysicalParams,
    theta1: float = 0.0,
    theta2: float = 0.0,
    required_margin: float = config.DEFAULT_REQUIRED_MARGIN,
    constants: PhysicalConstants = CODATA_2018,
) -> FeasibilityReport:
    """位相、P_L₂、期待 N_L₂、κ をまとめて評価する"""
    cfg = phase_config_from_physics(p, theta1, theta2, constants)
    xi = pattern_params(cfg).xi
    posts = expected_postselections(p, constants)
    return FeasibilityReport(
        params=p,
        phase_config=cfg,
        xi=xi,
        p_L2=math.sin(posts.phi / 4.0) ** 2,
        postselections=posts,
        kappa=kappa(p, required_margin, constants),
    )
