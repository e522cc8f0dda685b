"""Direct-path referencing of A-scans.

The strongest correlation peak is the direct antenna-to-antenna path. Its
position absorbs the unknown transport delay, so rotating the scan until
that peak sits in bin 0 puts every target echo at its true range bin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import RadarParams, bin_to_range
from .correlator import AScan, find_peaks


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class RangeEntry:
    bin: int
    range_m: float
    magnitude: float


@dataclass(frozen=True)
class RangeReport:
    entries: tuple[RangeEntry, ...]
    reference_bin_pre_alignment: int
    params: RadarParams

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        bins = [e.bin for e in entries]
        if bins != sorted(set(bins)):
            raise ValueError("report entries must have unique bins in ascending order")
        if not bins or bins[0] != 0:
            raise ValueError("report must contain the bin-0 reference entry")
        if any(e.magnitude > entries[0].magnitude for e in entries):
            raise ValueError("bin-0 reference must be the strongest entry")

    @property
    def bins(self) -> list[int]:
        return [e.bin for e in self.entries]

    @property
    def ranges_m(self) -> list[float]:
        return [e.range_m for e in self.entries]

    @property
    def target_entries(self) -> tuple[RangeEntry, ...]:
        return self.entries[1:]


def detect_reference(scan: AScan) -> int:
    """Bin of the strongest magnitude; the lowest bin wins ties."""
    if scan.n_bins < 1 or not np.any(scan.magnitudes > 0):
        raise AlignmentError("no reference detectable: scan magnitudes are all zero")
    # np.argmax returns the first occurrence of the maximum.
    return int(np.argmax(scan.magnitudes))


def realign(scan: AScan, reference_bin: int) -> AScan:
    """Rotate the scan so ``reference_bin`` lands at bin 0.

    ``out[k] = in[(k + reference_bin) mod N]``; a pure permutation of both the
    complex and magnitude arrays.
    """
    if scan.aligned:
        raise AlignmentError(
            f"scan is already aligned (reference bin {scan.reference_bin}); refusing to realign twice"
        )
    if int(reference_bin) != reference_bin or not 0 <= reference_bin < scan.n_bins:
        raise AlignmentError(f"reference_bin {reference_bin} outside [0, {scan.n_bins})")
    shift = -int(reference_bin)
    return AScan(
        np.roll(scan.correlation, shift),
        np.roll(scan.magnitudes, shift),
        aligned=True,
        reference_bin=int(reference_bin),
    )


def report_ranges(scan: AScan, relative_threshold: float, params: RadarParams) -> RangeReport:
    if not scan.aligned:
        raise AlignmentError("report_ranges needs an aligned scan; call realign first")
    if scan.n_bins != params.n_bins:
        raise ValueError(f"scan has {scan.n_bins} bins but params expect {params.n_bins}")
    peaks = dict(find_peaks(scan, relative_threshold))
    peaks.setdefault(0, float(scan.magnitudes[0]))
    entries = tuple(
        RangeEntry(b, bin_to_range(b, params), peaks[b]) for b in sorted(peaks)
    )
    return RangeReport(entries, int(scan.reference_bin), params)
