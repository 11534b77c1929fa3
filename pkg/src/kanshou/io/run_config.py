"""
実行設定ファイル (JSON, schema 1)

すべての値は計算前に型と各モジュールの不変条件で検査する。未知のキーは拒否する。
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from kanshou import config
from kanshou.errors import ConfigError, KanshouError
from kanshou.experiment.feasibility import PhysicalConstants, PhysicalParams
from kanshou.experiment.statistics import NO_RECYCLING, RecyclePolicy
from kanshou.quantum.evolution import PhaseConfig

_TOP_KEYS = {
    "schema", "phases", "physics", "constants", "recycle", "sweep",
    "fig2", "fig3", "snr", "seed", "out", "margin",
}
_PHASE_KEYS = {"phi_RR", "phi_RL", "phi_LR", "phi_LL", "theta1", "theta2", "purify"}
_PHYSICS_KEYS = {
    "m1", "m2", "tau", "d_RR", "d_RL", "d_LR", "d_LL",
    "gamma_rate", "t_run", "separation", "ratio",
}
_DISTANCE_KEYS = ("d_RR", "d_RL", "d_LR", "d_LL")
_CONSTANT_KEYS = {"G", "hbar"}
_RECYCLE_KEYS = {"max_passes", "per_pass_loss", "injection_spacing", "packet_width"}
_SWEEP_KEYS = {"start", "stop", "points", "fine_grid"}
_FIG2_KEYS = {"phi", "theta2_values"}
_FIG3_KEYS = {"phi", "theta1"}
_SNR_KEYS = {"n_pairs", "shards", "workers"}


@dataclass(frozen=True)
class SweepSpec:
    """ϑ 掃引グリッド"""

    start: float = config.SWEEP_START
    stop: float = config.SWEEP_STOP
    points: int = config.SWEEP_POINTS
    fine_grid: bool | None = None   # None → 図ごとのプリセット


@dataclass(frozen=True)
class Fig2Spec:
    phi: float = config.FIG2_PRESET['phi']
    theta2_values: tuple[float, ...] | None = None   # None → プリセット

    def resolved_theta2_values(self) -> tuple[float, ...]:
        if self.theta2_values is not None:
            return self.theta2_values
        preset = config.FIG2_PRESET
        return tuple(f * self.phi for f in preset['theta2_fractions']) + tuple(preset['theta2_absolute'])


@dataclass(frozen=True)
class Fig3Spec:
    phi: float = config.FIG3_PRESET['phi']
    theta1: float | None = None   # None → φ/2

    def resolved_theta1(self) -> float:
        return self.phi / 2.0 if self.theta1 is None else self.theta1


@dataclass(frozen=True)
class SnrSpec:
    n_pairs: int = config.DEFAULT_N_PAIRS
    shards: int = 1
    workers: int = 1


@dataclass(frozen=True)
class RunConfig:
    """検査済みの実行設定"""

    phases: PhaseConfig | None = None
    purify: bool = False
    physics: PhysicalParams | None = None
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    recycle: RecyclePolicy = NO_RECYCLING
    sweep: SweepSpec = field(default_factory=SweepSpec)
    fig2: Fig2Spec = field(default_factory=Fig2Spec)
    fig3: Fig3Spec = field(default_factory=Fig3Spec)
    snr: SnrSpec = field(default_factory=SnrSpec)
    seed: int = config.DEFAULT_SEED
    out: str | None = None
    margin: float = config.DEFAULT_REQUIRED_MARGIN

    def with_overrides(self, **overrides) -> "RunConfig":
        """CLI フラグの上書き（None は上書きしない）"""
        changes = {k: v for k, v in overrides.items() if v is not None}
        if "fine_grid" in changes:
            changes["sweep"] = replace(self.sweep, fine_grid=changes.pop("fine_grid"))
        if "seed" in changes:
            changes["seed"] = _integer(changes["seed"], "seed", minimum=0)
        if "margin" in changes:
            changes["margin"] = _positive(changes["margin"], "margin")
        return replace(self, **changes)


# ── 値の検査 ──

def _check_keys(section: Any, allowed: set[str], where: str) -> dict:
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected an object, got {type(section).__name__}")
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    return section


def _number(value: Any, where: str) -> float:
    # bool は int のサブクラスなので明示的に除外
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite, got {value!r}")
    return value


def _positive(value: Any, where: str) -> float:
    value = _number(value, where)
    if value <= 0.0:
        raise ConfigError(f"{where}: must be strictly positive, got {value!r}")
    return value


def _integer(value: Any, where: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{where}: must be >= {minimum}, got {value!r}")
    return value


def _boolean(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{where}: expected true/false, got {value!r}")
    return value


def _build(factory, where: str, **kwargs):
    """下位モジュールの検査エラーを ConfigError に変換する"""
    try:
        return factory(**kwargs)
    except KanshouError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"{where}: {e}") from e


# ── セクション ──

def _parse_phases(raw: dict) -> tuple[PhaseConfig, bool]:
    section = _check_keys(raw, _PHASE_KEYS, "phases")
    purify = _boolean(section.get("purify", False), "phases.purify")
    values = {k: _number(v, f"phases.{k}") for k, v in section.items() if k != "purify"}
    return _build(PhaseConfig, "phases", **values), purify


def _parse_physics(raw: dict) -> PhysicalParams:
    section = _check_keys(raw, _PHYSICS_KEYS, "physics")
    values = {k: _positive(v, f"physics.{k}") for k, v in section.items()}
    explicit = [k for k in _DISTANCE_KEYS if k in values]
    convenience = [k for k in ("separation", "ratio") if k in values]
    if explicit and convenience:
        raise ConfigError("physics: give either d_RR..d_LL or (separation, ratio), not both")
    common = ("m1", "m2", "tau", "gamma_rate", "t_run")
    missing = [k for k in common if k not in values]
    if convenience:
        missing += [k for k in ("separation", "ratio") if k not in values]
    else:
        missing += [k for k in _DISTANCE_KEYS if k not in values]
    if missing:
        raise ConfigError(f"physics: missing key(s) {', '.join(missing)}")
    if convenience:
        return _build(
            PhysicalParams.from_separation, "physics",
            m1=values["m1"], m2=values["m2"], tau=values["tau"],
            d=values["separation"], ratio=values["ratio"],
            gamma_rate=values["gamma_rate"], t_run=values["t_run"],
        )
    return _build(PhysicalParams, "physics", **values)


def _parse_constants(raw: dict) -> PhysicalConstants:
    section = _check_keys(raw, _CONSTANT_KEYS, "constants")
    values = {k: _positive(v, f"constants.{k}") for k, v in section.items()}
    return _build(PhysicalConstants, "constants", **values)


def _parse_recycle(raw: dict) -> RecyclePolicy:
    section = _check_keys(raw, _RECYCLE_KEYS, "recycle")
    values = {}
    for key, value in section.items():
        if key == "max_passes":
            values[key] = _integer(value, "recycle.max_passes")
        else:
            values[key] = _number(value, f"recycle.{key}")
    return _build(RecyclePolicy, "recycle", **values)


def _parse_sweep(raw: dict) -> SweepSpec:
    section = _check_keys(raw, _SWEEP_KEYS, "sweep")
    spec = SweepSpec(
        start=_number(section.get("start", config.SWEEP_START), "sweep.start"),
        stop=_number(section.get("stop", config.SWEEP_STOP), "sweep.stop"),
        points=_integer(section.get("points", config.SWEEP_POINTS), "sweep.points", minimum=2),
        fine_grid=None if section.get("fine_grid") is None else _boolean(section["fine_grid"], "sweep.fine_grid"),
    )
    if not spec.stop > spec.start:
        raise ConfigError(f"sweep: stop must exceed start, got [{spec.start!r}, {spec.stop!r}]")
    return spec


def _parse_fig2(raw: dict) -> Fig2Spec:
    section = _check_keys(raw, _FIG2_KEYS, "fig2")
    phi = _number(section.get("phi", config.FIG2_PRESET['phi']), "fig2.phi")
    values = section.get("theta2_values")
    if values is not None:
        if not isinstance(values, list) or not values:
            raise ConfigError("fig2.theta2_values: expected a non-empty list of numbers")
        values = tuple(_number(v, "fig2.theta2_values[]") for v in values)
    return Fig2Spec(phi=phi, theta2_values=values)


def _parse_fig3(raw: dict) -> Fig3Spec:
    section = _check_keys(raw, _FIG3_KEYS, "fig3")
    phi = _number(section.get("phi", config.FIG3_PRESET['phi']), "fig3.phi")
    theta1 = section.get("theta1")
    return Fig3Spec(phi=phi, theta1=None if theta1 is None else _number(theta1, "fig3.theta1"))


def _parse_snr(raw: dict) -> SnrSpec:
    section = _check_keys(raw, _SNR_KEYS, "snr")
    return SnrSpec(
        n_pairs=_integer(section.get("n_pairs", config.DEFAULT_N_PAIRS), "snr.n_pairs"),
        shards=_integer(section.get("shards", 1), "snr.shards"),
        workers=_integer(section.get("workers", 1), "snr.workers"),
    )


_SECTION_PARSERS = {
    "physics": _parse_physics,
    "constants": _parse_constants,
    "recycle": _parse_recycle,
    "sweep": _parse_sweep,
    "fig2": _parse_fig2,
    "fig3": _parse_fig3,
    "snr": _parse_snr,
}


def parse_config(document: Any) -> RunConfig:
    """
    読み込んだ JSON 文書を検査して RunConfig にする

    Raises:
        ConfigError: スキーマ不一致、未知のキー、型や不変条件の違反
    """
    document = _check_keys(document, _TOP_KEYS, "config")
    schema = document.get("schema")
    if schema != config.CONFIG_SCHEMA_VERSION or isinstance(schema, bool):
        raise ConfigError(f"config: schema must be {config.CONFIG_SCHEMA_VERSION}, got {schema!r}")

    kwargs: dict[str, Any] = {}
    if "phases" in document:
        kwargs["phases"], kwargs["purify"] = _parse_phases(document["phases"])
    for name, parser in _SECTION_PARSERS.items():
        if name in document:
            kwargs[name] = parser(document[name])
    if "seed" in document:
        kwargs["seed"] = _integer(document["seed"], "seed", minimum=0)
    if "out" in document:
        if not isinstance(document["out"], str) or not document["out"]:
            raise ConfigError("out: expected a non-empty path string")
        kwargs["out"] = document["out"]
    if "margin" in document:
        kwargs["margin"] = _positive(document["margin"], "margin")
    return RunConfig(**kwargs)


def load_config(path: str | Path) -> RunConfig:
    """JSON 設定ファイルを読み込む"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from e
    return parse_config(document)
