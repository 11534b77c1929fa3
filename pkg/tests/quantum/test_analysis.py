"""干渉・エンタングルメント解析のテスト"""
import math
from dataclasses import asdict

import numpy as np
import pytest

from kanshou.errors import DomainError, OrthogonalStates
from kanshou.quantum.analysis import (
    concurrence,
    destructive_setting,
    entanglement_entropy,
    information_content,
    interference_pattern,
    joint_probabilities,
    marginals_closed_form,
    marginals_from_state,
    pancharatnam_phase,
    pattern_params,
    pure_entangled_state,
    purified_settings,
    reduced_density_matrix,
    weak_regime_config,
)
from kanshou.quantum.evolution import PhaseConfig, evolve_matrix
from kanshou.quantum.state import SingleParticleState, TwoParticleState, fidelity_up_to_global_phase

PHI = 1e-4


def test_pattern_params_weak_regime():
    """φ_RL = φ のみ: ξ = −φ、Δ₁ = Δ₂ = φ/2"""
    pp = pattern_params(weak_regime_config(PHI))
    assert pp.xi == pytest.approx(-PHI)
    assert pp.delta1 == pytest.approx(PHI / 2)
    assert pp.delta2 == pytest.approx(PHI / 2)
    assert pp.visibility == pytest.approx(math.cos(PHI / 2))


def test_equal_phases_give_full_visibility():
    """全 φ_ij が等しければ ξ = 0, v = 1"""
    pp = pattern_params(PhaseConfig(0.7, 0.7, 0.7, 0.7))
    assert pp.xi == 0.0
    assert pp.visibility == 1.0


def test_marginal_closed_form_matches_state():
    """周辺確率の余弦公式と振幅からの計算が 1e-12 で一致"""
    rng = np.random.default_rng(11)
    for row in rng.uniform(0, 2 * math.pi, size=(1000, 6)):
        cfg = PhaseConfig(*row)
        a = asdict(marginals_closed_form(cfg))
        b = asdict(marginals_from_state(evolve_matrix(cfg)))
        for key in a:
            assert abs(a[key] - b[key]) <= 1e-12, f"{key}: {a[key]} vs {b[key]}"


def test_marginals_sum_to_one():
    m = marginals_closed_form(PhaseConfig(0.3, 1.2, -0.4, 2.0, 0.1, 0.9))
    assert m.p_R1 + m.p_L1 == pytest.approx(1.0, abs=1e-15)
    assert m.p_R2 + m.p_L2 == pytest.approx(1.0, abs=1e-15)


def test_joint_probabilities_sum_to_one():
    p = joint_probabilities(evolve_matrix(PhaseConfig(0.3, 1.2, -0.4, 2.0, 0.1, 0.9)))
    assert p.sum() == pytest.approx(1.0, abs=1e-12)


def test_purification_removes_rr_and_ll():
    """ϑ = Δ で α = δ = 0、出力は i sin(ξ/4)|RL⟩ + cos(ξ/4)|LR⟩（大域位相を除く）"""
    rng = np.random.default_rng(5)
    for phis in rng.uniform(0, 2 * math.pi, size=(100, 4)):
        cfg = purified_settings(PhaseConfig(*phis))
        s = evolve_matrix(cfg)
        assert abs(s.alpha) <= 1e-12 and abs(s.delta) <= 1e-12
        target = pure_entangled_state(pattern_params(cfg).xi)
        assert fidelity_up_to_global_phase(s, target) >= 1 - 1e-9


def test_purified_weak_state():
    """φ = 1e-4 の純化状態: P_L₂ = sin²(φ/4)、共起度 sin(φ/2)"""
    s = evolve_matrix(purified_settings(weak_regime_config(PHI)))
    assert abs(s.beta) ** 2 == pytest.approx(math.sin(PHI / 4) ** 2, rel=1e-9)
    assert concurrence(s) == pytest.approx(math.sin(PHI / 2), abs=1e-12)


def test_maximal_entanglement_at_xi_pi():
    """ξ = π で v = 0、純化した出力の共起度 1、エントロピー 1 ビット"""
    cfg = weak_regime_config(-math.pi)
    assert abs(pattern_params(cfg).visibility) <= 1e-12
    s = evolve_matrix(purified_settings(cfg))
    assert concurrence(s) == pytest.approx(1.0, abs=1e-12)
    assert entanglement_entropy(s) == pytest.approx(1.0, abs=1e-9)


def test_product_state_has_no_entanglement():
    s = TwoParticleState.basis("LR")
    assert concurrence(s) == 0.0
    assert entanglement_entropy(s) == 0.0


def test_reduced_density_matrix_trace():
    s = pure_entangled_state(1.3)
    for particle in (1, 2):
        rho = reduced_density_matrix(s, particle)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(rho, rho.conj().T)
    with pytest.raises(DomainError):
        reduced_density_matrix(s, 3)


def test_pancharatnam_phase():
    """arg⟨a|b⟩: |R⟩ と e^{i0.4}|R⟩ で 0.4"""
    a = SingleParticleState.basis("R")
    b = SingleParticleState([np.exp(0.4j), 0])
    assert pancharatnam_phase(a, b) == pytest.approx(0.4)


def test_pancharatnam_phase_orthogonal():
    with pytest.raises(OrthogonalStates):
        pancharatnam_phase(SingleParticleState.basis("R"), SingleParticleState.basis("L"))


def test_interference_pattern_extrema():
    """極大は ϑ = arg⟨a|b⟩、極小は π + arg⟨a|b⟩"""
    a = SingleParticleState([0.6, 0.8j])
    b = SingleParticleState([0.8, 0.6])
    prp = pancharatnam_phase(a, b)
    theta = np.linspace(-math.pi, math.pi, 4001)
    intensity = interference_pattern(a, b, theta)
    assert intensity.max() == pytest.approx(float(interference_pattern(a, b, prp)), abs=1e-12)
    low = float(interference_pattern(a, b, destructive_setting(a, b)))
    assert low == pytest.approx(intensity.min(), abs=1e-5)


def test_information_content():
    """情報量 −log₂ P: φ = 1e-4 の稀な事象は約 30.6 ビット"""
    assert information_content(0.5) == 1.0
    p_rare = math.sin(PHI / 4) ** 2
    assert information_content(p_rare) == pytest.approx(-math.log2(p_rare))
    assert 30.5 < information_content(p_rare) < 30.7
    with pytest.raises(DomainError):
        information_content(0.0)


CFG = PhaseConfig(0.3, 1.0, 0.2, 0.5)


def _sweep(values, marginal, which):
    """ϑ₁ または ϑ₂ を掃引し、全エンジンの周辺確率を並べる"""
    out = []
    for t in values:
        cfg = CFG.with_thetas(t, 0.0) if which == 1 else CFG.with_thetas(0.0, t)
        out.append(getattr(marginals_from_state(evolve_matrix(cfg)), marginal))
    return np.array(out)


def test_fringe_amplitude_is_twice_visibility():
    """ϑ₁ 掃引で max P_L₁ − min P_L₁ = 2|v|"""
    pp = pattern_params(CFG)
    grid = np.union1d(np.linspace(-math.pi, math.pi, 721), [pp.delta1, pp.delta1 - math.pi])
    p_L1 = _sweep(grid, "p_L1", 1)
    assert p_L1.max() - p_L1.min() == pytest.approx(2 * abs(pp.visibility), abs=1e-12)


def test_destructive_interference_location():
    """P_R₁ は ϑ₁ = Δ₁、P_L₂ は ϑ₂ = Δ₂ で最小"""
    pp = pattern_params(CFG)
    assert pp.visibility > 0
    grid1 = np.union1d(np.linspace(-math.pi, math.pi, 721), [pp.delta1])
    grid2 = np.union1d(np.linspace(-math.pi, math.pi, 721), [pp.delta2])
    assert grid1[np.argmin(_sweep(grid1, "p_R1", 1))] == pytest.approx(pp.delta1, abs=1e-12)
    assert grid2[np.argmin(_sweep(grid2, "p_L2", 2))] == pytest.approx(pp.delta2, abs=1e-12)


def test_concurrence_law():
    """C(純粋エンタングル状態(ξ)) = |sin(ξ/2)|、ξ ∈ [−2π, 2π]"""
    for xi in np.linspace(-2 * math.pi, 2 * math.pi, 201):
        assert concurrence(pure_entangled_state(xi)) == pytest.approx(abs(math.sin(xi / 2)), abs=1e-12)


def test_entropy_at_quarter_turn():
    """φ = π/2 の純化状態のエントロピーは h(sin²(π/8)) ビット"""
    p = math.sin(math.pi / 8) ** 2
    expected = -p * math.log2(p) - (1 - p) * math.log2(1 - p)
    assert entanglement_entropy(pure_entangled_state(-math.pi / 2)) == pytest.approx(expected, abs=1e-12)
    s = evolve_matrix(purified_settings(weak_regime_config(math.pi / 2)))
    assert entanglement_entropy(s) == pytest.approx(expected, abs=1e-9)
