"""状態ベクトルのテスト"""
import math

import numpy as np
import pytest

from kanshou.errors import DomainError, NotNormalized, ZeroNorm
from kanshou.quantum.state import (
    SingleParticleState,
    TwoParticleState,
    fidelity_up_to_global_phase,
    inner_product,
    is_normalized,
    normalize,
    principal_phase,
    wrap_phase,
)


def test_basis_order():
    """基底の順序は RR, RL, LR, LL"""
    s = TwoParticleState.basis("LR")
    assert np.array_equal(s.amplitudes, [0, 0, 1, 0])
    assert s.gamma == 1.0


def test_product_state_is_kron():
    """|R⟩₁ ⊗ |L⟩₂ = |R⟩₁|L⟩₂"""
    s = TwoParticleState.product(SingleParticleState.basis("R"), SingleParticleState.basis("L"))
    assert s.allclose(TwoParticleState.basis("RL"))


def test_amplitudes_are_read_only():
    """状態は不変"""
    s = TwoParticleState.basis("RR")
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0.0


@pytest.mark.parametrize("bad", [float("nan"), float("inf")])
def test_non_finite_amplitude_rejected(bad):
    """NaN/Inf の振幅は DomainError"""
    with pytest.raises(DomainError):
        TwoParticleState([bad, 0, 0, 0])


def test_wrong_size_rejected():
    with pytest.raises(DomainError):
        TwoParticleState([1, 0])


def test_normalized_flag_is_checked():
    """正規化済みフラグ付きで |Σ|a|² − 1| > 1e-9 なら NotNormalized"""
    with pytest.raises(NotNormalized):
        TwoParticleState([1, 1, 0, 0], normalized=True)


def test_normalize():
    """(1, 1, 0, 0) → (1/√2, 1/√2, 0, 0)"""
    s = normalize(TwoParticleState([1, 1, 0, 0]))
    expected = 1.0 / math.sqrt(2.0)
    assert np.allclose(s.amplitudes, [expected, expected, 0, 0], rtol=0, atol=1e-15)
    assert is_normalized(s, tol=1e-12)


def test_normalize_zero_state():
    """ゼロベクトルは正規化できない"""
    with pytest.raises(ZeroNorm):
        normalize(TwoParticleState([0, 0, 0, 0]))


def test_inner_product_conjugates_first_argument():
    """⟨a|b⟩ は左を複素共役"""
    a = SingleParticleState([1j, 0])
    b = SingleParticleState([1, 0])
    assert inner_product(a, b) == pytest.approx(-1j)


def test_inner_product_different_spaces():
    with pytest.raises(DomainError):
        inner_product(SingleParticleState.basis("R"), TwoParticleState.basis("RR"))


def test_fidelity_ignores_global_phase():
    """e^{iχ}|s⟩ と |s⟩ の忠実度は 1"""
    rng = np.random.default_rng(7)
    s = normalize(TwoParticleState(rng.normal(size=4) + 1j * rng.normal(size=4)))
    rotated = TwoParticleState(np.exp(0.7j) * s.amplitudes)
    f = fidelity_up_to_global_phase(s, rotated)
    assert abs(f - 1.0) <= 1e-12, f"Expected fidelity 1, got {f}"


def test_fidelity_orthogonal_states():
    assert fidelity_up_to_global_phase(TwoParticleState.basis("RR"), TwoParticleState.basis("LL")) == 0.0


def test_principal_phase_range():
    """主値は (-π, π]：-1 の位相は +π"""
    assert principal_phase(-1.0) == pytest.approx(math.pi)
    assert principal_phase(complex(-1.0, -0.0)) == pytest.approx(math.pi)
    assert principal_phase(1j) == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("offset", [0.0, 1e-13, 5e-13])
def test_principal_phase_near_minus_pi(offset):
    """-π のすぐ内側も π に寄せ、π を超えない"""
    angle = principal_phase(np.exp(1j * (-math.pi + offset)))
    assert -math.pi < angle <= math.pi
    assert angle == pytest.approx(math.pi, abs=1e-12)


def _random_states(n, seed):
    rng = np.random.default_rng(seed)
    return [TwoParticleState(rng.normal(size=4) + 1j * rng.normal(size=4)) for _ in range(n)]


def test_self_inner_product_is_real_and_non_negative():
    """⟨a|a⟩ は実数で 0 以上"""
    for s in _random_states(100, seed=11):
        z = inner_product(s, s)
        assert abs(z.imag) <= 1e-15 * z.real
        assert z.real >= 0.0
    assert inner_product(TwoParticleState([0, 0, 0, 0]), TwoParticleState([0, 0, 0, 0])) == 0


def test_normalize_is_idempotent():
    """正規化を2回かけても変わらない"""
    for s in _random_states(100, seed=12):
        once = normalize(s)
        twice = normalize(once)
        assert twice.allclose(once, atol=1e-15)


def test_fidelity_is_symmetric():
    """|⟨a|b⟩|² = |⟨b|a⟩|²"""
    states = [normalize(s) for s in _random_states(50, seed=13)]
    for a, b in zip(states, states[1:]):
        ab = fidelity_up_to_global_phase(a, b)
        ba = fidelity_up_to_global_phase(b, a)
        assert abs(ab - ba) <= 1e-15
        assert 0.0 <= ab <= 1.0


@pytest.mark.parametrize("angle, expected", [
    (3 * math.pi, math.pi),
    (-math.pi, math.pi),
    (2 * math.pi + 0.5, 0.5),
    (-0.5, -0.5),
])
def test_wrap_phase(angle, expected):
    assert wrap_phase(angle) == pytest.approx(expected, abs=1e-12)
