"""Monte Carlo driver and the per-window processing chain.

One window goes through: correlate against the code -> find the direct-path
peak -> rotate it to bin 0 -> list the peaks as ranges.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from .alignment import RangeReport, detect_reference, realign, report_ranges
from .channel import RadarParams, draw_delay, simulate_received, trial_rng
from .codes import PaddedCode, build_pnc128, repeat_symbols
from .correlator import AScan, correlate, to_ascan
from .scenario import Scenario


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    delay_drawn: int
    reference_detected: int
    aligned_peak_bins: tuple[int, ...]
    success: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["aligned_peak_bins"] = list(self.aligned_peak_bins)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrialRecord":
        return cls(
            trial_index=int(d["trial_index"]),
            delay_drawn=int(d["delay_drawn"]),
            reference_detected=int(d["reference_detected"]),
            aligned_peak_bins=tuple(int(b) for b in d["aligned_peak_bins"]),
            success=bool(d["success"]),
        )


@dataclass(frozen=True)
class RunSummary:
    label: str
    seed: int
    trials: int
    successes: int
    success_rate: float
    expected_bins: tuple[int, ...]
    delay_histogram: tuple[int, ...]
    peak_histogram: tuple[int, ...]
    reproducibility_hash: str

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("expected_bins", "delay_histogram", "peak_histogram"):
            d[key] = list(d[key])
        return d


@dataclass(frozen=True)
class MonteCarloResult:
    records: list[TrialRecord]
    summary: RunSummary
    aligned_magnitudes: np.ndarray  # shape (trials, n_bins)


@dataclass(frozen=True)
class WindowResult:
    scan: AScan          # unaligned
    aligned: AScan
    report: RangeReport


def radar_code(params: RadarParams) -> PaddedCode:
    """The 128-chip code expanded to ``params.samples_per_symbol``."""
    return repeat_symbols(build_pnc128(), params.samples_per_symbol)


def process_window(samples, code: PaddedCode, params: RadarParams,
                   threshold: float, method: str = "fft") -> WindowResult:
    scan = to_ascan(correlate(samples, code.as_complex(), method))
    ref = detect_reference(scan)
    aligned = realign(scan, ref)
    return WindowResult(scan, aligned, report_ranges(aligned, threshold, params))


def run_trial(scenario: Scenario, trial_index: int, code: Optional[PaddedCode] = None,
              method: str = "fft") -> tuple[TrialRecord, np.ndarray]:
    params, channel = scenario.params, scenario.channel
    if code is None:
        code = radar_code(params)
    rng = trial_rng(channel.seed, trial_index)
    delay = draw_delay(channel, params, rng)
    y = simulate_received(code, delay, channel, params, rng)
    result = process_window(y, code, params, scenario.threshold, method)
    bins = tuple(result.report.bins)
    record = TrialRecord(
        trial_index=trial_index,
        delay_drawn=delay,
        reference_detected=int(result.aligned.reference_bin),
        aligned_peak_bins=bins,
        success=set(scenario.expected_bins) <= set(bins),
    )
    return record, result.aligned.magnitudes


def reproducibility_hash(records: list[TrialRecord], magnitudes: np.ndarray) -> str:
    h = hashlib.sha256()
    payload = json.dumps([r.to_dict() for r in records], sort_keys=True, separators=(",", ":"))
    h.update(payload.encode("utf-8"))
    h.update(np.ascontiguousarray(magnitudes, dtype="<f8").tobytes())
    return h.hexdigest()


def run_monte_carlo(scenario: Scenario, workers: int = 1, method: str = "fft") -> MonteCarloResult:
    """Run ``scenario.trials`` independent trials.

    Each trial owns a random stream derived from ``(seed, trial_index)``, and
    results are ordered by trial index, so ``workers`` never changes output.
    """
    params = scenario.params
    code = radar_code(params)
    indices = range(scenario.trials)

    def one(i):
        return run_trial(scenario, i, code, method)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, indices))
    else:
        results = [one(i) for i in indices]
    results.sort(key=lambda rm: rm[0].trial_index)

    records = [r for r, _ in results]
    mags = np.vstack([m for _, m in results]) if results else np.zeros((0, params.n_bins))

    delay_hist = np.bincount([r.delay_drawn for r in records], minlength=params.n_bins)
    peak_hist = np.zeros(params.n_bins, dtype=np.int64)
    for r in records:
        peak_hist[list(r.aligned_peak_bins)] += 1
    successes = sum(r.success for r in records)

    summary = RunSummary(
        label=scenario.label,
        seed=int(scenario.channel.seed),
        trials=len(records),
        successes=int(successes),
        success_rate=successes / len(records),
        expected_bins=scenario.expected_bins,
        delay_histogram=tuple(int(c) for c in delay_hist),
        peak_histogram=tuple(int(c) for c in peak_hist),
        reproducibility_hash=reproducibility_hash(records, mags),
    )
    return MonteCarloResult(records, summary, mags)


def with_overrides(scenario: Scenario, trials: Optional[int] = None,
                   seed: Optional[int] = None) -> Scenario:
    if seed is not None:
        scenario = replace(scenario, channel=replace(scenario.channel, seed=seed))
    if trials is not None:
        scenario = replace(scenario, trials=trials)
    return scenario
