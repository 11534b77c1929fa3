"""κ 閾値テスト - 16ħ²/G² と期待事後選択数の恒等式を確認"""

from kanshou import config
from kanshou.experiment.feasibility import CODATA_2018, PhysicalParams, expected_postselections, kappa


def test_kappa_threshold():
    """
    16ħ²/G² が 4e-47 kg⁴·m⁻²·s² の 2% 以内、margin = (φ/4)²ΓT

    例: m₁ = m₂ = 1e-14 kg, τ = 1 s, d = 1e-4 m, Γ = 1/s, T = 10⁶ s
    """
    threshold = CODATA_2018.kappa_threshold
    rel = abs(threshold - config.QUOTED_KAPPA_THRESHOLD) / config.QUOTED_KAPPA_THRESHOLD
    p = PhysicalParams.from_separation(1e-14, 1e-14, 1.0, 1e-4, 100.0, 1.0, 1e6)
    result = kappa(p)
    small = expected_postselections(p).small_angle

    print("κ 閾値テスト:")
    print(f"  16ħ²/G² = {threshold:.6e} kg⁴·m⁻²·s²（4e-47 との差 {rel:.2%}）")
    print(f"  κ = {result.kappa_value:.6e}, margin = {result.margin:.6e}")
    print(f"  小角近似の期待 N_L2 = {small:.6e}")

    if rel <= config.KAPPA_THRESHOLD_REL_TOL and abs(result.margin - small) <= 1e-9 * small:
        print("  ✅ 合格 - 閾値と恒等式を確認")
        return True
    else:
        print("  ❌ 不合格")
        return False

if __name__ == "__main__":
    test_kappa_threshold()
