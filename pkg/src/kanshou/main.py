"""kanshou コマンドラインエントリーポイント"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from kanshou import __version__, config
from kanshou.config import ExitCode
from kanshou.errors import ConfigError, DomainError, ImpossibleOutcome, KanshouError
from kanshou.experiment import feasibility, statistics
from kanshou.io.csv_report import emit, format_value, key_value_report, sweep_csv
from kanshou.io.run_config import RunConfig, load_config
from kanshou.quantum import analysis, fringe, postselection
from kanshou.quantum.evolution import PhaseConfig, evolve_matrix
from kanshou.quantum.state import BASIS_LABELS
from kanshou import selfcheck

logger = logging.getLogger("kanshou")


def resolve_phase_config(cfg: RunConfig) -> PhaseConfig:
    """phases → physics → 弱結合の既定 (φ = 1e-4) の順に位相設定を決め、purify を適用する"""
    if cfg.phases is not None:
        phases = cfg.phases
    elif cfg.physics is not None:
        phases = feasibility.phase_config_from_physics(cfg.physics, constants=cfg.constants)
    else:
        phases = analysis.weak_regime_config(config.DEFAULT_PHI)
    return analysis.purified_settings(phases) if cfg.purify else phases


def _fine_grid(cfg: RunConfig, preset: bool) -> bool:
    return preset if cfg.sweep.fine_grid is None else cfg.sweep.fine_grid


def _grid(cfg: RunConfig, phi: float, fine: bool):
    return fringe.sweep_grid(
        cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points,
        fine_span=phi if fine else None, fine_points=config.FINE_GRID_POINTS,
    )


# ── サブコマンド ──

def cmd_evolve(cfg: RunConfig) -> str:
    """振幅、周辺確率、パターン記述子、共起度、エントロピー"""
    phases = resolve_phase_config(cfg)
    s = evolve_matrix(phases)
    pp = analysis.pattern_params(phases)
    marg = analysis.marginals_from_state(s)
    items: list[tuple[str, object]] = [
        (name, getattr(phases, name))
        for name in ("phi_RR", "phi_RL", "phi_LR", "phi_LL", "theta1", "theta2")
    ]
    for label, amp in zip(BASIS_LABELS, s.amplitudes):
        items += [(f"amp_{label}_re", float(amp.real)), (f"amp_{label}_im", float(amp.imag)),
                  (f"abs_{label}", float(abs(amp)))]
    items += [
        ("p_R1", marg.p_R1), ("p_L1", marg.p_L1), ("p_R2", marg.p_R2), ("p_L2", marg.p_L2),
        ("xi", pp.xi), ("visibility", pp.visibility), ("delta1", pp.delta1), ("delta2", pp.delta2),
        ("concurrence", analysis.concurrence(s)),
        ("entropy_bits", analysis.entanglement_entropy(s)),
    ]
    return key_value_report(items)


def cmd_fig2(cfg: RunConfig) -> str:
    """ϑ₁ 掃引: 事後選択なしの P_R₁ と各 ϑ₂ の P̃_R₁"""
    phi = cfg.fig2.phi
    theta2_values = cfg.fig2.resolved_theta2_values()
    grid = _grid(cfg, phi, _fine_grid(cfg, preset=False))
    curves = postselection.fig2_curves(phi, grid, theta2_values)

    header = ["theta1", "p_R1_uncond"] + [f"p_R1_cond_theta2={format_value(float(t))}" for t in theta2_values]
    columns = [grid, curves['p_R1_uncond']] + [curves['p_R1_cond'][float(t)] for t in theta2_values]
    metadata: list[tuple[str, object]] = [("phi", phi)]
    # 位相差は一周期の等間隔グリッドでのみ意味を持つ
    try:
        reference = fringe.fit_fringe(grid, curves['p_R1_uncond'])
    except KanshouError:
        reference = None
        logger.info("grid is not one uniform period; phase shifts omitted")
    for t in theta2_values:
        v_tilde = postselection.conditional_visibility(float(t), phi).v_tilde
        metadata.append((f"v_tilde_theta2={format_value(float(t))}", v_tilde))
        if reference is not None and abs(v_tilde) > 0.0:
            shift = fringe.phase_difference(fringe.fit_fringe(grid, curves['p_R1_cond'][float(t)]), reference)
            metadata.append((f"phase_shift_theta2={format_value(float(t))}", shift))
    return sweep_csv(header, columns, metadata)


def cmd_fig3(cfg: RunConfig) -> str:
    """ϑ₂ 掃引の P̃_R₁ と縞の可視度（末尾のメタデータ行）"""
    phi = cfg.fig3.phi
    theta1 = cfg.fig3.resolved_theta1()
    grid = _grid(cfg, phi, _fine_grid(cfg, preset=config.FIG3_PRESET['fine_grid']))
    sweep = postselection.fig3_curve(phi, theta1, grid)
    metadata = [
        ("phi", phi),
        ("theta1", theta1),
        ("visibility", sweep.visibility),
        ("visibility_law", abs(math.cos(theta1 - phi / 2.0))),
        ("skipped_points", len(sweep.skipped)),
    ]
    return sweep_csv(["theta2", "p_R1_cond"], [sweep.theta2, sweep.p_R1_cond], metadata)


def cmd_snr(cfg: RunConfig) -> str:
    """モンテカルロ実行のカウントと SNR"""
    phases = resolve_phase_config(cfg)
    counts = statistics.simulate_runs(
        phases, cfg.snr.n_pairs, cfg.seed, cfg.recycle, shards=cfg.snr.shards, workers=cfg.snr.workers,
    )
    p_L2 = analysis.marginals_closed_form(phases).p_L2
    low, high = statistics.binomial_band(counts.n_pairs_injected, p_L2)
    items: list[tuple[str, object]] = [
        ("rng", config.RNG_NAME),
        ("seed", cfg.seed),
        ("n_pairs_injected", counts.n_pairs_injected),
        ("n_total_injections", counts.n_total_injections),
        ("n_recycle_passes", counts.n_recycle_passes),
        ("n_lost", counts.n_lost),
        ("effective_rate", cfg.recycle.effective_rate),
        ("n_postselected", counts.n_postselected),
        ("n_R1", counts.n_R1),
        ("n_L1", counts.n_L1),
        ("p_hat_L2", counts.p_hat_L2),
        ("p_L2", p_L2),
        ("n_postselected_band_low", low),
        ("n_postselected_band_high", high),
    ]
    if counts.n_postselected == 0:
        items.append(("snr", "undefined (no postselections)"))
        return key_value_report(items)

    try:
        p_R1_cond = postselection.postselect(evolve_matrix(phases)).p_R1_cond
        expected = statistics.expected_snr(counts.n_postselected, p_R1_cond)
    except (ImpossibleOutcome, DomainError) as e:
        logger.info("expected SNR undefined: %s", e)
        p_R1_cond, expected = float("nan"), float("nan")
    report = statistics.observed_snr_regularized(counts, expected)
    items += [
        ("p_R1_cond", p_R1_cond),
        ("expected_snr", expected),
        ("observed_snr", report.observed_snr),
        ("observed_snr_bound", float(counts.n_postselected)),
        ("p_hat_R1", report.p_hat_R1),
        ("p_hat_L1", report.p_hat_L1),
        ("n_L1_regularized", report.regularized),
    ]
    return key_value_report(items)


def cmd_feasibility(cfg: RunConfig) -> str:
    """φ_ij, P_L₂, 期待 N_L₂, κ, 閾値, margin, 判定"""
    if cfg.physics is None:
        raise ConfigError("feasibility needs a 'physics' section")
    report = feasibility.assess(cfg.physics, required_margin=cfg.margin, constants=cfg.constants)
    ph = report.phase_config
    items: list[tuple[str, object]] = [
        ("phi_RR", ph.phi_RR), ("phi_RL", ph.phi_RL), ("phi_LR", ph.phi_LR), ("phi_LL", ph.phi_LL),
        ("xi", report.xi),
        ("p_L2", report.p_L2),
        ("expected_n_L2_exact", report.postselections.exact),
        ("expected_n_L2_small_angle", report.postselections.small_angle),
        ("weak_regime", report.postselections.weak_regime),
        ("kappa", report.kappa.kappa_value),
        ("threshold", report.kappa.threshold),
        ("margin", report.kappa.margin),
        ("required_margin", report.kappa.required_margin),
        ("pass", report.kappa.passed),
        ("required_run_time", feasibility.required_run_time(cfg.physics, cfg.margin, cfg.constants)),
    ]
    return key_value_report(items)


def cmd_check() -> tuple[str, ExitCode]:
    """性質スイートを実行し、JSON 行と終了コードを返す"""
    results = selfcheck.run_suites()
    failed = selfcheck.first_failure(results)
    if failed is not None:
        logger.error("property suite failed: %s", failed)
        return selfcheck.to_json_lines(results), ExitCode.CHECK_FAILED
    return selfcheck.to_json_lines(results), ExitCode.OK


_COMMANDS = {
    "evolve": cmd_evolve,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "snr": cmd_snr,
    "feasibility": cmd_feasibility,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration (schema 1)")
    common.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
    common.add_argument("--out", metavar="PATH", default=None, help="write the report here instead of stdout")
    common.add_argument("--fine-grid", action="store_true", default=None,
                        help=f"add {config.FINE_GRID_POINTS} points across [0, phi] to theta sweeps")
    common.add_argument("--margin", type=float, default=None, help="required kappa margin")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG")

    parser = argparse.ArgumentParser(
        prog="kanshou",
        description="Exact simulator of two gravitationally coupled Mach-Zehnder interferometers",
    )
    parser.add_argument("--version", action="version", version=f"kanshou {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="amplitudes, marginals and entanglement of one configuration")
    sub.add_parser("fig2", parents=[common], help="theta1 sweep with and without postselection (CSV)")
    sub.add_parser("fig3", parents=[common], help="theta2 sweep of the postselected probability (CSV)")
    sub.add_parser("snr", parents=[common], help="Monte Carlo counts and signal-to-noise ratio")
    sub.add_parser("feasibility", parents=[common], help="gravitational phases, expected counts and kappa")
    sub.add_parser("check", parents=[common], help="run the property suites (JSON lines)")
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    if args.command == "check":
        text, code = cmd_check()
        emit(text, args.out)
        return int(code)

    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = cfg.with_overrides(seed=args.seed, out=args.out, fine_grid=args.fine_grid, margin=args.margin)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return int(ExitCode.CONFIG_ERROR)

    try:
        text = _COMMANDS[args.command](cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return int(ExitCode.CONFIG_ERROR)
    except (KanshouError, ArithmeticError) as e:
        print(f"computation error: {type(e).__name__}: {e}", file=sys.stderr)
        return int(ExitCode.COMPUTATION_ERROR)
    emit(text, cfg.out)
    return int(ExitCode.OK)


if __name__ == "__main__":
    sys.exit(main())
