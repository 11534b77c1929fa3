"""二項モンテカルロによる繰り返し実験と SNR"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from kanshou import config
from kanshou.errors import DomainError, NoFailures
from kanshou.quantum.analysis import joint_probabilities
from kanshou.quantum.evolution import PhaseConfig, evolve_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecyclePolicy:
    """
    事後選択に失敗した粒子対の再注入方針

    max_passes=1 で再注入なし。injection_spacing は波束の時間幅より長くなければならない。
    """

    max_passes: int = 1
    per_pass_loss: float = 0.0
    injection_spacing: float = 1e-3   # s
    packet_width: float = 1e-4        # s

    def __post_init__(self):
        if int(self.max_passes) != self.max_passes or self.max_passes < 1:
            raise DomainError(f"max_passes must be a positive integer, got {self.max_passes!r}")
        if not (0.0 <= self.per_pass_loss < 1.0):
            raise DomainError(f"per_pass_loss must lie in [0, 1), got {self.per_pass_loss!r}")
        if not (self.packet_width > 0.0 and self.injection_spacing > self.packet_width):
            raise DomainError(
                "injection_spacing must exceed the packet width "
                f"({self.injection_spacing!r} <= {self.packet_width!r})"
            )

    @property
    def effective_rate(self) -> float:
        """実効的な注入レート Γ = 1/injection_spacing (pairs/s)"""
        return 1.0 / self.injection_spacing


NO_RECYCLING = RecyclePolicy()


@dataclass(frozen=True)
class RunCounts:
    """検出カウントの集計"""

    n_pairs_injected: int
    n_postselected: int      # N_L₂
    n_R1: int                # N_R₁
    n_L1: int                # N_L₁
    n_recycle_passes: int
    n_total_injections: int = 0
    n_lost: int = 0

    def __post_init__(self):
        if self.n_R1 + self.n_L1 != self.n_postselected:
            raise DomainError("n_R1 + n_L1 must equal n_postselected")

    @property
    def p_hat_L2(self) -> float:
        """事後選択の頻度 N_L₂ / 注入対数"""
        return self.n_postselected / self.n_pairs_injected


@dataclass(frozen=True)
class SnrReport:
    """期待 SNR と観測 SNR"""

    expected_snr: float
    observed_snr: float
    p_hat_R1: float
    p_hat_L1: float
    regularized: bool = False   # N_L₁ = 0 を N_L₁ = 1 に置き換えた


@dataclass(frozen=True)
class SnrStudy:
    """同じ N_L₂ での繰り返し観測 SNR の要約"""

    repetitions: int
    expected_snr: float
    mean_observed_snr: float
    std_observed_snr: float
    n_regularized: int


def expected_snr(n_postselected: int, p_R1_cond: float) -> float:
    """
    期待 SNR = ⟨N_R₁⟩/σ(N_R₁) = √(N_L₂ P̃_R₁/P̃_L₁)

    Raises:
        DomainError: P̃_R₁ ∈ {0, 1}（σ = 0 で定義できない）または N_L₂ < 1
    """
    if n_postselected < 1:
        raise DomainError(f"need at least one postselection, got {n_postselected!r}")
    if not (0.0 < p_R1_cond < 1.0):
        raise DomainError(f"SNR undefined for p_R1_cond={p_R1_cond!r} (zero variance)")
    return math.sqrt(n_postselected * p_R1_cond / (1.0 - p_R1_cond))


def observed_snr(counts: RunCounts, expected: float = float("nan")) -> SnrReport:
    """
    観測 SNR = √(N_L₂ N_R₁/N_L₁) ≲ N_L₂

    Raises:
        DomainError: N_L₂ = 0
        NoFailures: N_L₁ = 0（呼び出し側で N_L₁ = 1 の慣例を選ぶ）
    """
    if counts.n_postselected < 1:
        raise DomainError("observed SNR needs at least one postselection")
    if counts.n_L1 < 1:
        raise NoFailures(f"N_L1 = 0 with N_L2 = {counts.n_postselected}; SNR diverges")
    n = counts.n_postselected
    return SnrReport(
        expected_snr=expected,
        observed_snr=math.sqrt(n * counts.n_R1 / counts.n_L1),
        p_hat_R1=counts.n_R1 / n,
        p_hat_L1=counts.n_L1 / n,
    )


def observed_snr_regularized(counts: RunCounts, expected: float = float("nan")) -> SnrReport:
    """N_L₁ = 0 のとき「最良の実験条件」の慣例 N_L₁ = 1, N_R₁ = N_L₂ − 1 を適用する"""
    try:
        return observed_snr(counts, expected)
    except NoFailures:
        n = counts.n_postselected
        logger.warning("no L1 detections in %d postselections; applying the N_L1 = 1 convention", n)
        best = RunCounts(counts.n_pairs_injected, n, n - 1, 1, counts.n_recycle_passes,
                         counts.n_total_injections, counts.n_lost)
        report = observed_snr(best, expected)
        return SnrReport(report.expected_snr, report.observed_snr,
                         counts.n_R1 / n, counts.n_L1 / n, regularized=True)


def snr_bounds(n_postselected: int) -> tuple[float, float]:
    """観測 SNR の範囲: 最悪 (N_R₁ = 1) √(N/(N−1)) と最良 (N_L₁ = 1) √(N(N−1))"""
    n = n_postselected
    if n < 2:
        raise DomainError(f"bounds need N_L2 >= 2, got {n!r}")
    return math.sqrt(n / (n - 1)), math.sqrt(n * (n - 1))


def binomial_band(n: int, p: float, n_sigma: float = config.BINOMIAL_BAND_SIGMA) -> tuple[float, float]:
    """二項分布のカウント許容帯 np ± n_sigma·√(np(1−p))（下端は 0 で打ち切る）"""
    mean = n * p
    sigma = math.sqrt(n * p * (1.0 - p))
    return max(0.0, mean - n_sigma * sigma), mean + n_sigma * sigma


def shard_seed(seed: int, shard_index: int) -> int:
    """シャードの部分シード = seed XOR shard_index（64ビット）"""
    return (int(seed) ^ int(shard_index)) & 0xFFFF_FFFF_FFFF_FFFF


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 (128ビット状態) の生成器"""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFF_FFFF_FFFF_FFFF))


def _run_shard(probabilities: np.ndarray, n_pairs: int, seed: int, policy: RecyclePolicy) -> RunCounts:
    """1シャード分の注入・事後選択・再注入"""
    rng = make_rng(seed)
    remaining = n_pairs
    n_R1 = n_L1 = lost = injections = 0
    passes = 0
    while remaining > 0 and passes < policy.max_passes:
        passes += 1
        injections += remaining
        rr, rl, lr, ll = rng.multinomial(remaining, probabilities)
        n_R1 += int(rl)
        n_L1 += int(ll)
        failed = int(rr + lr)
        if passes >= policy.max_passes:
            break
        # 再注入までの損失（パスごとのベルヌーイ）
        if policy.per_pass_loss > 0.0 and failed > 0:
            survivors = int(rng.binomial(failed, 1.0 - policy.per_pass_loss))
        else:
            survivors = failed
        lost += failed - survivors
        remaining = survivors
    return RunCounts(
        n_pairs_injected=n_pairs,
        n_postselected=n_R1 + n_L1,
        n_R1=n_R1,
        n_L1=n_L1,
        n_recycle_passes=max(0, passes - 1),
        n_total_injections=injections,
        n_lost=lost,
    )


def _split(n_pairs: int, shards: int) -> list[int]:
    base, extra = divmod(n_pairs, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def simulate_runs(
    cfg: PhaseConfig,
    n_pairs: int,
    seed: int,
    recycle: RecyclePolicy = NO_RECYCLING,
    shards: int = 1,
    workers: int = 1,
) -> RunCounts:
    """
    粒子対を注入し、同時確率 (|α|², |β|², |γ|², |δ|²) から出力ポート対をサンプリングする

    相関こそがエンタングルメントの信号なので、周辺分布ではなく4結果の同時分布を使う。
    L₂ に失敗した対は方針の上限パス数まで再注入する。seed が同じなら結果は同一。
    """
    if n_pairs < 1:
        raise DomainError(f"n_pairs must be >= 1, got {n_pairs!r}")
    if shards < 1:
        raise DomainError(f"shards must be >= 1, got {shards!r}")
    probabilities = joint_probabilities(evolve_matrix(cfg))
    probabilities = probabilities / probabilities.sum()

    sizes = _split(n_pairs, shards)
    seeds = [shard_seed(seed, i) for i in range(shards)]
    logger.debug("simulate %d pairs in %d shards (seeds %s)", n_pairs, shards, seeds)
    jobs = [(probabilities, size, s, recycle) for size, s in zip(sizes, seeds) if size > 0]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _run_shard(*job), jobs))
    else:
        results = [_run_shard(*job) for job in jobs]

    return RunCounts(
        n_pairs_injected=n_pairs,
        n_postselected=sum(r.n_postselected for r in results),
        n_R1=sum(r.n_R1 for r in results),
        n_L1=sum(r.n_L1 for r in results),
        n_recycle_passes=max(r.n_recycle_passes for r in results),
        n_total_injections=sum(r.n_total_injections for r in results),
        n_lost=sum(r.n_lost for r in results),
    )


def snr_study(n_postselected: int, p_R1_cond: float, repetitions: int, seed: int) -> SnrStudy:
    """
    N_L₂ 回の事後選択を repetitions 回繰り返し、N_R₁ ~ Binomial(N_L₂, P̃_R₁) から観測 SNR を集計する

    N_L₁ = 0 の試行には N_L₁ = 1 の慣例を適用し、その回数を数える。
    """
    expected = expected_snr(n_postselected, p_R1_cond)
    rng = make_rng(seed)
    n_R1 = rng.binomial(n_postselected, p_R1_cond, size=repetitions)
    observed = []
    regularized = 0
    for k in n_R1:
        counts = RunCounts(n_postselected, n_postselected, int(k), n_postselected - int(k), 0)
        try:
            observed.append(observed_snr(counts).observed_snr)
        except NoFailures:
            regularized += 1
            observed.append(math.sqrt(n_postselected * (n_postselected - 1)))
    observed = np.array(observed)
    return SnrStudy(
        repetitions=repetitions,
        expected_snr=expected,
        mean_observed_snr=float(observed.mean()),
        std_observed_snr=float(observed.std()),
        n_regularized=regularized,
    )
