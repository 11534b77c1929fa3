"""ϑ₂ 縞の可視度テスト - 可視度が |cos(ϑ₁ − φ/2)| に従うことを確認"""

import math

from kanshou import config
from kanshou.quantum.fringe import sweep_grid
from kanshou.quantum.postselection import fig3_curve


def test_fig3_visibility():
    """
    ϑ₂ を 0.5° 刻み + [0, φ] の細分で掃引し、P̃_R₁ の縞の可視度を測る

    理論値: φ = 1e-4, ϑ₁ = φ/2 で 1、φ = π (ϑ₁ = 0) で 0
    """
    cases = [
        (config.FIG3_PRESET['phi'], config.FIG3_PRESET['theta1']),
        (0.4, 0.5),
        (math.pi, 0.0),
    ]
    print("ϑ₂ 縞の可視度テスト:")
    ok = True
    for phi, theta1 in cases:
        grid = sweep_grid(config.SWEEP_START, config.SWEEP_STOP, config.SWEEP_POINTS,
                          fine_span=phi, fine_points=config.FINE_GRID_POINTS)
        sweep = fig3_curve(phi, theta1, grid)
        expected = abs(math.cos(theta1 - phi / 2))
        good = abs(sweep.visibility - expected) <= 1e-6
        ok &= good
        print(f"  φ = {phi:.4g}, ϑ₁ = {theta1:.4g}: 可視度 {sweep.visibility:.9f}"
              f"（理論値 {expected:.9f}）{'✅' if good else '❌'}")

    if ok:
        print("  ✅ 合格 - 可視度は理論値と一致")
        return True
    else:
        print("  ❌ 不合格 - 可視度がずれている")
        return False

if __name__ == "__main__":
    test_fig3_visibility()
