"""Scenario files: radar parameters, channel model and run settings.

Scenarios are TOML documents::

    label = "fig5"
    trials = 1000
    threshold = 0.1

    [radar]
    sample_rate = 10e6        # samples/s
    wave_speed = 3e8          # m/s
    n_bins = 128              # 128 * samples_per_symbol
    samples_per_symbol = 1

    [channel]
    direct_amplitude = 1.0
    delay = "uniform"         # or a fixed integer bin, e.g. 42
    noise_sigma = 0.0         # per real/imag component
    smoothing_window = 1      # 1 = off
    seed = 2013

    [[channel.targets]]
    range_m = 240.0
    amplitude = 0.6

Every key is optional except ``label``; omitted keys take the defaults shown
by :class:`~echoalign.channel.RadarParams` and
:class:`~echoalign.channel.ChannelConfig`. Unknown keys are rejected.
"""

from __future__ import annotations

import sys
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import (
    ChannelConfig,
    FixedDelay,
    RadarParams,
    Target,
    UniformDelay,
    quantize_range,
)
from .codes import PNC_LENGTH

SCENARIO_SUFFIX = ".scenario"
RESIDUAL_WARN_BINS = 0.25

_TOP_KEYS = {"label", "trials", "threshold", "radar", "channel"}
_RADAR_KEYS = {"sample_rate", "wave_speed", "n_bins", "samples_per_symbol"}
_CHANNEL_KEYS = {"direct_amplitude", "delay", "noise_sigma", "smoothing_window", "seed", "targets"}
_TARGET_KEYS = {"range_m", "amplitude"}


class ScenarioError(ValueError):
    pass


class ScenarioParseError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    pass


class RangeQuantizationWarning(UserWarning):
    """A target range sits far from the centre of its range bin."""


@dataclass(frozen=True)
class Scenario:
    params: RadarParams
    channel: ChannelConfig
    trials: int = 1
    threshold: float = 0.1
    label: str = ""

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ScenarioValidationError(f"trials: must be an integer >= 1, got {self.trials!r}")
        if not 0 < self.threshold <= 1:
            raise ScenarioValidationError(f"threshold: must be in (0, 1], got {self.threshold!r}")
        expected = PNC_LENGTH * self.params.samples_per_symbol
        if self.params.n_bins != expected:
            raise ScenarioValidationError(
                f"radar.n_bins: must equal {PNC_LENGTH} * samples_per_symbol = {expected}, "
                f"got {self.params.n_bins}"
            )
        try:
            self.channel.validate_for(self.params)
        except ValueError as exc:
            raise ScenarioValidationError(f"channel: {exc}") from None

    @property
    def expected_bins(self) -> tuple[int, ...]:
        return tuple(quantize_range(t.range_m, self.params)[0] for t in self.channel.targets)


def _check_keys(table: dict, allowed: set, where: str):
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ScenarioValidationError(
            f"{where}: unknown field(s) {', '.join(unknown)}; allowed: {', '.join(sorted(allowed))}"
        )


def _table(doc: dict, key: str) -> dict:
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise ScenarioValidationError(f"{key}: expected a table, got {type(value).__name__}")
    return value


def _build(field: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ScenarioValidationError(f"{field}: {exc}") from None


def _parse_delay(value: Any):
    if value == "uniform":
        return UniformDelay()
    if isinstance(value, int) and not isinstance(value, bool):
        return _build("channel.delay", FixedDelay, bins=value)
    raise ScenarioValidationError(
        f"channel.delay: expected \"uniform\" or a non-negative integer bin, got {value!r}"
    )


def scenario_from_dict(doc: dict) -> Scenario:
    """Validate a parsed scenario document."""
    _check_keys(doc, _TOP_KEYS, "scenario")
    radar = _table(doc, "radar")
    channel = _table(doc, "channel")
    _check_keys(radar, _RADAR_KEYS, "radar")
    _check_keys(channel, _CHANNEL_KEYS, "channel")

    params = _build("radar", RadarParams, **radar)

    raw_targets = channel.get("targets", [])
    if not isinstance(raw_targets, list):
        raise ScenarioValidationError("channel.targets: expected an array of tables")
    targets = []
    for i, t in enumerate(raw_targets):
        where = f"channel.targets[{i}]"
        if not isinstance(t, dict):
            raise ScenarioValidationError(f"{where}: expected a table")
        _check_keys(t, _TARGET_KEYS, where)
        missing = _TARGET_KEYS - set(t)
        if missing:
            raise ScenarioValidationError(f"{where}: missing field(s) {', '.join(sorted(missing))}")
        target = _build(where, Target, **t)
        try:
            b, residual = quantize_range(target.range_m, params)
        except ValueError as exc:
            raise ScenarioValidationError(f"{where}.range_m: {exc}") from None
        if abs(residual) > RESIDUAL_WARN_BINS:
            warnings.warn(
                f"{where}: range {target.range_m:g} m is {residual:+.2f} bins off bin {b}",
                RangeQuantizationWarning,
                stacklevel=3,
            )
        targets.append(target)

    kwargs = {k: v for k, v in channel.items() if k not in ("targets", "delay")}
    if "delay" in channel:
        kwargs["delay_model"] = _parse_delay(channel["delay"])
    config = _build("channel", ChannelConfig, targets=tuple(targets), **kwargs)

    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ScenarioValidationError(f"label: expected text, got {label!r}")
    return Scenario(
        params=params,
        channel=config,
        trials=doc.get("trials", 1),
        threshold=doc.get("threshold", 0.1),
        label=label,
    )


def bundled_scenarios() -> list[str]:
    root = resources.files("echoalign") / "scenarios"
    return sorted(p.name[: -len(SCENARIO_SUFFIX)] for p in root.iterdir()
                  if p.name.endswith(SCENARIO_SUFFIX))


def read_scenario_text(path_or_name) -> str:
    """Text of a scenario file, or of a bundled scenario given by bare name."""
    path = Path(path_or_name)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    name = str(path_or_name)
    if name.endswith(SCENARIO_SUFFIX):
        name = name[: -len(SCENARIO_SUFFIX)]
    bundled = resources.files("echoalign") / "scenarios" / f"{name}{SCENARIO_SUFFIX}"
    if "/" not in name and bundled.is_file():
        return bundled.read_text(encoding="utf-8")
    raise FileNotFoundError(
        f"no scenario file {str(path_or_name)!r}; bundled scenarios: {', '.join(bundled_scenarios())}"
    )


def parse_scenario(text: str) -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioParseError(f"scenario is not valid TOML: {exc}") from None
    return scenario_from_dict(doc)


def load_scenario(path) -> Scenario:
    """Load and fully validate a scenario file (or bundled scenario name)."""
    return parse_scenario(read_scenario_text(path))
