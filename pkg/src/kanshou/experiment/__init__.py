"""実験統計・実現可能性 モジュール"""

from .statistics import RecyclePolicy, RunCounts, SnrReport, expected_snr, observed_snr, simulate_runs
from .feasibility import PhysicalConstants, PhysicalParams, gravitational_phase, kappa

__all__ = [
    "RecyclePolicy",
    "RunCounts",
    "SnrReport",
    "expected_snr",
    "observed_snr",
    "simulate_runs",
    "PhysicalConstants",
    "PhysicalParams",
    "gravitational_phase",
    "kappa",
]
