"""例外クラス"""


class KanshouError(Exception):
    """kanshou の全例外の基底"""


class StateError(KanshouError, ValueError):
    """状態ベクトルに関する不正"""


class ZeroNorm(StateError):
    """ノルムがアンダーフロー閾値以下で正規化できない"""


class NotNormalized(StateError):
    """正規化済みであるべき状態が |Σ|a|² - 1| > NORM_TOL"""


class OrthogonalStates(StateError):
    """直交する2状態の間では Pancharatnam 位相が定義されない"""


class ImpossibleOutcome(StateError):
    """確率ゼロの検出結果で事後選択しようとした"""


class DegenerateState(StateError):
    """両方の係数が消えて方向が定まらない"""


class DomainError(KanshouError, ValueError):
    """関数の定義域外の入力（非有限値、負の距離、P ∉ (0, 1] など）"""


class NoFailures(DomainError):
    """N_L₁ = 0 のため観測SNRが発散する（正則化は呼び出し側が選ぶ）"""


class ConfigError(KanshouError, ValueError):
    """実行設定ファイルの不正（未知キー、型不一致、不変条件違反）"""
