"""Baseband model of the uncertain-delay radar channel.

Each trial draws one transport delay (constant over the correlation window)
and builds the received window as a circular superposition of

* the direct antenna-to-antenna path at ``delay``,
* one attenuated copy per target at ``delay + target_bin``,
* optional circular moving-average smoothing (receiver band limit),
* complex white Gaussian noise, added after smoothing.

Random streams are derived per trial from ``(seed, trial_index)`` through
:class:`numpy.random.SeedSequence`, so trials can run in any order or in
parallel without changing their draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .codes import PaddedCode
from .correlator import is_power_of_two

DEFAULT_SAMPLE_RATE = 10e6
DEFAULT_WAVE_SPEED = 3e8
DEFAULT_TARGET_AMPLITUDES = (0.6, 0.4)


@dataclass(frozen=True)
class RadarParams:
    sample_rate: float = DEFAULT_SAMPLE_RATE
    wave_speed: float = DEFAULT_WAVE_SPEED
    n_bins: int = 128
    samples_per_symbol: int = 1

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be > 0, got {self.sample_rate}")
        if not self.wave_speed > 0:
            raise ValueError(f"wave_speed must be > 0, got {self.wave_speed}")
        if int(self.n_bins) != self.n_bins or not is_power_of_two(int(self.n_bins)):
            raise ValueError(f"n_bins must be a power of two, got {self.n_bins}")
        if int(self.samples_per_symbol) != self.samples_per_symbol or self.samples_per_symbol < 1:
            raise ValueError(f"samples_per_symbol must be an integer >= 1, got {self.samples_per_symbol}")

    @property
    def bin_resolution_m(self) -> float:
        """Round-trip range covered by one sample."""
        return self.wave_speed / (2.0 * self.sample_rate)

    @property
    def max_unambiguous_range_m(self) -> float:
        return self.n_bins * self.bin_resolution_m


@dataclass(frozen=True)
class Target:
    range_m: float
    amplitude: float

    def __post_init__(self):
        if not self.range_m >= 0:
            raise ValueError(f"target range must be >= 0 m, got {self.range_m}")
        if not 0 < self.amplitude <= 1:
            raise ValueError(f"target amplitude must be in (0, 1], got {self.amplitude}")


@dataclass(frozen=True)
class FixedDelay:
    bins: int

    def __post_init__(self):
        if int(self.bins) != self.bins or self.bins < 0:
            raise ValueError(f"fixed delay must be a non-negative integer, got {self.bins}")


@dataclass(frozen=True)
class UniformDelay:
    """Delay uniform over every bin of the window."""


DelayModel = Union[FixedDelay, UniformDelay]


@dataclass(frozen=True)
class ChannelConfig:
    direct_amplitude: float = 1.0
    targets: tuple[Target, ...] = ()
    delay_model: DelayModel = field(default_factory=UniformDelay)
    noise_sigma: float = 0.0
    smoothing_window: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.direct_amplitude > 0:
            raise ValueError(f"direct_amplitude must be > 0, got {self.direct_amplitude}")
        if self.targets:
            strongest = max(t.amplitude for t in self.targets)
            if strongest >= self.direct_amplitude:
                raise ValueError(
                    f"direct_amplitude ({self.direct_amplitude}) must exceed every target "
                    f"amplitude (max {strongest}); the direct path is the alignment reference"
                )
        if not self.noise_sigma >= 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if int(self.smoothing_window) != self.smoothing_window or self.smoothing_window < 1:
            raise ValueError(f"smoothing_window must be an integer >= 1, got {self.smoothing_window}")
        if not 0 <= int(self.seed) < 2**64 or int(self.seed) != self.seed:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def validate_for(self, params: RadarParams) -> None:
        """Check the parts of the config that depend on the radar geometry."""
        if isinstance(self.delay_model, FixedDelay) and self.delay_model.bins >= params.n_bins:
            raise ValueError(
                f"fixed delay {self.delay_model.bins} outside [0, {params.n_bins})"
            )
        if self.smoothing_window > params.n_bins:
            raise ValueError(f"smoothing_window {self.smoothing_window} exceeds n_bins {params.n_bins}")
        for t in self.targets:
            range_to_bin(t.range_m, params)


def default_targets() -> tuple[Target, ...]:
    """Two targets at 240 m and 480 m with the default amplitudes."""
    return (
        Target(240.0, DEFAULT_TARGET_AMPLITUDES[0]),
        Target(480.0, DEFAULT_TARGET_AMPLITUDES[1]),
    )


def quantize_range(range_m: float, params: RadarParams) -> tuple[int, float]:
    """Nearest range bin and the residual ``exact - bin`` in bins.

    Raises:
        ValueError: for negative ranges or ranges that land at or past the
            maximum unambiguous range.
    """
    if not range_m >= 0:
        raise ValueError(f"range must be >= 0 m, got {range_m}")
    exact = 2.0 * range_m * params.sample_rate / params.wave_speed
    b = int(np.round(exact))
    if b >= params.n_bins:
        raise ValueError(
            f"range {range_m:g} m maps to bin {b}, beyond the maximum unambiguous range of "
            f"{params.max_unambiguous_range_m:,.0f} m (bins 0..{params.n_bins - 1})"
        )
    return b, exact - b


def range_to_bin(range_m: float, params: RadarParams) -> int:
    return quantize_range(range_m, params)[0]


def bin_to_range(bin: int, params: RadarParams) -> float:
    if int(bin) != bin or not 0 <= bin < params.n_bins:
        raise ValueError(f"bin {bin} outside [0, {params.n_bins})")
    return int(bin) * params.wave_speed / (2.0 * params.sample_rate)


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Independent generator for one trial, derived from ``(seed, trial_index)``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial_index),))
    return np.random.Generator(np.random.PCG64(ss))


def draw_delay(config: ChannelConfig, params: RadarParams, rng: np.random.Generator) -> int:
    if isinstance(config.delay_model, FixedDelay):
        d = config.delay_model.bins
        if d >= params.n_bins:
            raise ValueError(f"fixed delay {d} outside [0, {params.n_bins})")
        return int(d)
    return int(rng.integers(0, params.n_bins))


def complex_noise(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Circular complex Gaussian noise, std-dev ``sigma`` per component."""
    re = rng.standard_normal(n)
    im = rng.standard_normal(n)
    return sigma * (re + 1j * im)


def circular_moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centred circular boxcar. Even widths take one extra later sample."""
    if window <= 1:
        return np.asarray(x, dtype=np.complex128).copy()
    x = np.asarray(x, dtype=np.complex128)
    offsets = np.arange(window) - window // 2
    return sum(np.roll(x, int(o)) for o in offsets) / window


def simulate_received(code: PaddedCode, delay: int, config: ChannelConfig,
                      params: RadarParams, rng: np.random.Generator) -> np.ndarray:
    """One received correlation window of ``params.n_bins`` complex samples.

    ``y[n] = a0 c[n - delay] + sum_i a_i c[n - delay - bin_i] + w[n]`` with all
    indices taken mod N. Noise is only drawn when ``noise_sigma > 0``.
    """
    n = params.n_bins
    if code.length != n:
        raise ValueError(f"code length {code.length} does not match n_bins {n}")
    if int(delay) != delay or not 0 <= delay < n:
        raise ValueError(f"delay {delay} outside [0, {n})")
    c = code.as_complex()
    y = config.direct_amplitude * np.roll(c, int(delay))
    for t in config.targets:
        b = range_to_bin(t.range_m, params)
        y = y + t.amplitude * np.roll(c, int(delay) + b)
    if config.smoothing_window > 1:
        y = circular_moving_average(y, config.smoothing_window)
    if config.noise_sigma > 0:
        y = y + complex_noise(n, config.noise_sigma, rng)
    return y
