"""量子干渉エンジン モジュール"""

from .state import SingleParticleState, TwoParticleState, fidelity_up_to_global_phase
from .evolution import PhaseConfig, amplitudes_closed_form, evolve_matrix
from .analysis import (
    concurrence,
    entanglement_entropy,
    marginals_closed_form,
    marginals_from_state,
    pattern_params,
    purified_settings,
    weak_regime_config,
)
from .postselection import conditional_visibility, postselect

__all__ = [
    "SingleParticleState",
    "TwoParticleState",
    "fidelity_up_to_global_phase",
    "PhaseConfig",
    "amplitudes_closed_form",
    "evolve_matrix",
    "concurrence",
    "entanglement_entropy",
    "marginals_closed_form",
    "marginals_from_state",
    "pattern_params",
    "purified_settings",
    "weak_regime_config",
    "conditional_visibility",
    "postselect",
]
