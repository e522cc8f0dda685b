"""Circular cross-correlation of one received window against the reference code.

``circular_xcorr_fft`` is the production path: forward FFT of both vectors,
conjugate the reference spectrum, multiply, inverse FFT. ``circular_xcorr_direct``
evaluates the same sum term by term and serves as its oracle.

Both compute::

    r[k] = sum_n received[n] * conj(reference[(n - k) mod N])

so a received copy of the reference delayed by ``d`` samples peaks at ``k = d``.
No FFT plans are cached; every call is self-contained and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


def _as_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf samples")
    return arr


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _check_pair(received, reference, require_pow2: bool):
    x = _as_vector(received, "received")
    ref = _as_vector(reference, "reference")
    if x.size != ref.size:
        raise ValueError(f"length mismatch: received has {x.size} samples, reference {ref.size}")
    if require_pow2 and not is_power_of_two(x.size):
        raise ValueError(f"FFT correlation needs a power-of-two length, got {x.size}")
    return x, ref


def circular_xcorr_fft(received, reference) -> np.ndarray:
    """Transform-domain circular cross-correlation.

    The forward transform is unscaled and the inverse carries the 1/N factor,
    so the zero-lag autocorrelation equals the signal energy.

    Raises:
        ValueError: on length mismatch or a non-power-of-two length.
    """
    x, ref = _check_pair(received, reference, require_pow2=True)
    return np.fft.ifft(np.fft.fft(x) * np.conj(np.fft.fft(ref)))


def circular_xcorr_direct(received, reference) -> np.ndarray:
    """O(N^2) evaluation of the circular cross-correlation.

    Terms are accumulated in reference-index order for every lag, so the
    result commutes bit-exactly with circular shifts of ``received``.
    """
    x, ref = _check_pair(received, reference, require_pow2=False)
    ref_conj = np.conj(ref)
    out = np.zeros(x.size, dtype=np.complex128)
    for m in range(x.size):
        # r[k] += x[(m + k) mod N] * conj(ref[m])
        out += np.roll(x, -m) * ref_conj[m]
    return out


CORRELATORS = {
    "fft": circular_xcorr_fft,
    "direct": circular_xcorr_direct,
}


def correlate(received, reference, method: str = "fft") -> np.ndarray:
    try:
        fn = CORRELATORS[method]
    except KeyError:
        raise ValueError(f"unknown correlator {method!r}; choose from {sorted(CORRELATORS)}") from None
    return fn(received, reference)


def oracle_tolerance(received, reference) -> float:
    """Max-abs agreement bound between the FFT and direct paths."""
    x = np.asarray(received)
    ref = np.asarray(reference)
    return 1e-9 * x.size * float(np.max(np.abs(x))) * float(np.max(np.abs(ref)))


@dataclass(frozen=True, eq=False)
class AScan:
    """One correlation window: complex trace, its magnitudes and alignment state."""

    correlation: np.ndarray
    magnitudes: np.ndarray
    aligned: bool = False
    reference_bin: Optional[int] = None

    def __post_init__(self):
        corr = np.array(self.correlation, dtype=np.complex128).reshape(-1)
        mags = np.array(self.magnitudes, dtype=np.float64).reshape(-1)
        if corr.shape != mags.shape:
            raise ValueError("correlation and magnitudes must have the same length")
        if self.aligned and self.reference_bin is None:
            raise ValueError("an aligned scan must record its reference bin")
        if self.reference_bin is not None and not 0 <= self.reference_bin < corr.size:
            raise ValueError(f"reference_bin {self.reference_bin} outside [0, {corr.size})")
        corr.flags.writeable = False
        mags.flags.writeable = False
        object.__setattr__(self, "correlation", corr)
        object.__setattr__(self, "magnitudes", mags)

    @property
    def n_bins(self) -> int:
        return int(self.correlation.size)


def to_ascan(correlation) -> AScan:
    corr = np.asarray(correlation, dtype=np.complex128)
    return AScan(corr, np.abs(corr))


def find_peaks(scan: AScan, relative_threshold: float) -> list[tuple[int, float]]:
    """Circular local maxima at or above ``relative_threshold * max``.

    A bin qualifies when its magnitude is >= both circular neighbours, so
    every bin of a flat plateau is reported. An all-zero scan has no peaks.
    """
    if not 0 < relative_threshold <= 1:
        raise ValueError(f"relative_threshold must be in (0, 1], got {relative_threshold}")
    m = scan.magnitudes
    peak = float(m.max()) if m.size else 0.0
    if peak == 0.0:
        return []
    is_local_max = (m >= np.roll(m, 1)) & (m >= np.roll(m, -1))
    keep = is_local_max & (m >= relative_threshold * peak)
    return [(int(k), float(m[k])) for k in np.flatnonzero(keep)]
