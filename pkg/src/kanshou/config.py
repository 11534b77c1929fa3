"""kanshou 設定・定数"""
import math
from enum import Enum, IntEnum

# 数値許容誤差
NORM_TOL = 1e-9              # 正規化済みフラグ付き状態の許容誤差 |Σ|a|² - 1|
FRESH_NORM_TOL = 1e-12       # normalize() 直後の許容誤差
UNDERFLOW_NORM = 1e-300      # これ以下のノルム²はゼロとみなす（不可能な事後選択）
ORTHOGONAL_TOL = 1e-12       # |⟨a|b⟩| がこれ以下なら PRP は未定義
DEGENERATE_COEFF_TOL = 1e-14  # 条件付き内部状態の係数がこれ以下なら縮退
VTILDE_DEGENERATE_TOL = 1e-14  # ṽ の 0/0 判定閾値
UNITARY_TOL = 1e-12          # U†U = I の許容誤差
PHASE_BOUNDARY_TOL = 1e-12   # 主値 (-π, π] の境界 -π 付近をπへ寄せる幅

# 物理定数 (CODATA 2018)
G = 6.67430e-11              # m³·kg⁻¹·s⁻²
HBAR = 1.054571817e-34       # J·s
QUOTED_KAPPA_THRESHOLD = 4e-47  # kg⁴·m⁻²·s² (1桁表記の閾値 16ħ²/G²)
KAPPA_THRESHOLD_REL_TOL = 0.02  # 1桁表記との比較許容

# 実験パラメータの既定値
DEFAULT_PHI = 1e-4           # rad (弱結合領域の代表値)
DEFAULT_REQUIRED_MARGIN = 1e2  # 「10²倍以上」
SMALL_ANGLE_REL_TOL = 1e-6    # 弱結合領域: 小角近似と厳密値の相対差がこれ以下 (|φ| ≲ 6.9e-3)

# スイープ設定
SWEEP_START = 0.0
SWEEP_STOP = 2.0 * math.pi
SWEEP_POINTS = 721           # 0.5° 刻み
FINE_GRID_POINTS = 101       # [0, φ] に追加する細分点数

# 出力設定
FLOAT_SIGNIFICANT_DIGITS = 17  # 倍精度の往復を保証する桁数
CSV_LINE_TERMINATOR = "\n"

# 乱数
RNG_NAME = "numpy.random.PCG64"
DEFAULT_SEED = 20231

# モンテカルロ既定値
DEFAULT_N_PAIRS = 100_000_000
BINOMIAL_BAND_SIGMA = 5.0

# 設定ファイル
CONFIG_SCHEMA_VERSION = 1


class ExitCode(IntEnum):
    """CLI の終了コード"""
    OK = 0
    CHECK_FAILED = 1
    CONFIG_ERROR = 2
    COMPUTATION_ERROR = 3


class Port(Enum):
    """検出器ポート（干渉計出力）"""
    R = "R"
    L = "L"


# ── 図の再現プリセット ──

FIG2_PRESET = {
    'phi': DEFAULT_PHI,
    # ϑ₂ ∈ {0, φ/4, φ/2, 3φ/4, φ, π}（φ に対する倍率、最後だけ絶対値π）
    'theta2_fractions': (0.0, 0.25, 0.5, 0.75, 1.0),
    'theta2_absolute': (math.pi,),
}

FIG3_PRESET = {
    'phi': DEFAULT_PHI,
    'theta1': DEFAULT_PHI / 2.0,  # ϑ₁ = φ/2
    'fine_grid': True,            # ϑ₂ = φ/2 の破壊的干渉点を必ず含める
}
