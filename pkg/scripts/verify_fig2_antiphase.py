"""ϑ₁ 掃引の縞の位相テスト - (0, φ) 内の ϑ₂ で事後選択した縞が π 反転することを確認"""

import math

import numpy as np
from kanshou import config
from kanshou.quantum.fringe import fit_fringe, phase_difference
from kanshou.quantum.postselection import conditional_visibility, fig2_curves


def test_fig2_antiphase():
    """
    φ = 1e-4 で各 ϑ₂ の P̃_R₁ 曲線を事後選択なしの P_R₁ と比較

    理論値: ṽ < 0 となる 0 < ϑ₂ < φ で位相差 π、外側で 0
    """
    phi = config.FIG2_PRESET['phi']
    theta2_values = [f * phi for f in config.FIG2_PRESET['theta2_fractions']] + [math.pi, 2 * phi]
    grid = np.linspace(config.SWEEP_START, config.SWEEP_STOP, config.SWEEP_POINTS)
    curves = fig2_curves(phi, grid, theta2_values)
    reference = fit_fringe(grid, curves['p_R1_uncond'])

    print("事後選択した縞の位相テスト:")
    print(f"  φ = {phi:g} rad, 格子 {grid.size} 点")
    ok = True
    for theta2 in theta2_values:
        v = conditional_visibility(theta2, phi).v_tilde
        if v == 0.0:
            print(f"  ϑ₂ = {theta2:.3e}: ṽ = 0（縞なし）")
            continue
        shift = phase_difference(fit_fringe(grid, curves['p_R1_cond'][theta2]), reference)
        expected = math.pi if v < 0 else 0.0
        good = abs(abs(shift) - expected) <= 1e-6
        ok &= good
        print(f"  ϑ₂ = {theta2:.3e}: ṽ = {v:+.9f}, 位相差 = {shift:+.9f} rad {'✅' if good else '❌'}")

    if ok:
        print("  ✅ 合格 - (0, φ) 内で π 反転、外側で同位相")
        return True
    else:
        print("  ❌ 不合格 - 位相差が理論値と一致しない")
        return False

if __name__ == "__main__":
    test_fig2_antiphase()
