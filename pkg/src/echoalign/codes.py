"""Barker codes, Kronecker-composite codes and the zero-padded 128-chip PN code.

The radar reference waveform is the 121-chip composite ``B11 (x) B11`` with
three zeros in front and four behind, so that the FFT correlator sees a
power-of-two length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Standard published Barker set. Entries are checked by the sidelobe test
# suite, not trusted as data.
BARKER_TABLE: dict[int, tuple[int, ...]] = {
    2: (1, -1),
    3: (1, 1, -1),
    4: (1, 1, -1, 1),
    5: (1, 1, 1, -1, 1),
    7: (1, 1, 1, -1, -1, 1, -1),
    11: (1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1),
    13: (1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1),
}

PNC_LENGTH = 128
PNC_PAD_FRONT = 3
PNC_PAD_BACK = 4


def _frozen(values, dtype=np.int8) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BipolarSequence:
    """A non-empty code whose every chip is exactly -1 or +1."""

    symbols: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.symbols)
        if arr.size < 1:
            raise ValueError("bipolar sequence must have at least one symbol")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("bipolar sequence symbols must all be -1 or +1")
        object.__setattr__(self, "symbols", arr)

    @property
    def length(self) -> int:
        return int(self.symbols.size)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipolarSequence):
            return NotImplemented
        return np.array_equal(self.symbols, other.symbols)

    def tolist(self) -> list[int]:
        return [int(s) for s in self.symbols]


@dataclass(frozen=True, eq=False)
class PaddedCode:
    """A {-1, 0, +1} code made of a bipolar core with zero padding on both ends.

    ``pad_front`` and ``pad_back`` count the leading and trailing zeros. With
    ``samples_per_symbol > 1`` the pads are counted in samples, so a code
    expanded by four carries ``pad_front == 12``.
    """

    symbols: np.ndarray
    pad_front: int
    pad_back: int

    def __post_init__(self):
        arr = _frozen(self.symbols)
        n = arr.size
        if n < 1:
            raise ValueError("padded code must have at least one symbol")
        if not np.all(np.isin(arr, (-1, 0, 1))):
            raise ValueError("padded code symbols must be -1, 0 or +1")
        if self.pad_front < 0 or self.pad_back < 0 or self.pad_front + self.pad_back >= n:
            raise ValueError(
                f"pads ({self.pad_front}, {self.pad_back}) do not fit a code of length {n}"
            )
        core = arr[self.pad_front:n - self.pad_back]
        if np.any(arr[:self.pad_front]) or np.any(arr[n - self.pad_back:]):
            raise ValueError("pad regions must be all zeros")
        if np.any(core == 0):
            raise ValueError("zeros must be confined to the pads")
        object.__setattr__(self, "symbols", arr)

    @property
    def length(self) -> int:
        return int(self.symbols.size)

    @property
    def core(self) -> np.ndarray:
        return self.symbols[self.pad_front:self.length - self.pad_back]

    @property
    def core_length(self) -> int:
        return self.length - self.pad_front - self.pad_back

    @property
    def energy(self) -> int:
        """Sum of squared symbols."""
        return int(np.sum(self.symbols.astype(np.int64) ** 2))

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, PaddedCode):
            return NotImplemented
        return (
            self.pad_front == other.pad_front
            and self.pad_back == other.pad_back
            and np.array_equal(self.symbols, other.symbols)
        )

    def as_complex(self) -> np.ndarray:
        return self.symbols.astype(np.complex128)

    def tolist(self) -> list[int]:
        return [int(s) for s in self.symbols]


def barker(n: int) -> BipolarSequence:
    """Return the standard Barker sequence of length ``n``.

    Raises:
        ValueError: if ``n`` is not one of the known Barker lengths.
    """
    try:
        return BipolarSequence(BARKER_TABLE[n])
    except (KeyError, TypeError):
        valid = ", ".join(str(k) for k in sorted(BARKER_TABLE))
        raise ValueError(f"no Barker code of length {n!r}; valid lengths are {{{valid}}}") from None


def kronecker_product(outer: BipolarSequence, inner: BipolarSequence) -> BipolarSequence:
    """Composite code: block ``j`` is ``outer[j] * inner``."""
    return BipolarSequence(np.kron(outer.symbols, inner.symbols))


def build_pnc128() -> PaddedCode:
    """``[0, 0, 0, B11 (x) B11, 0, 0, 0, 0]``, the 128-chip radar code."""
    b11 = barker(11)
    core = kronecker_product(b11, b11).symbols
    symbols = np.concatenate([
        np.zeros(PNC_PAD_FRONT, dtype=np.int8),
        core,
        np.zeros(PNC_PAD_BACK, dtype=np.int8),
    ])
    return PaddedCode(symbols, PNC_PAD_FRONT, PNC_PAD_BACK)


def repeat_symbols(code: PaddedCode, factor: int) -> PaddedCode:
    """Hold every symbol for ``factor`` consecutive samples."""
    if int(factor) != factor or factor < 1:
        raise ValueError(f"repeat factor must be an integer >= 1, got {factor!r}")
    factor = int(factor)
    return PaddedCode(
        np.repeat(code.symbols, factor),
        code.pad_front * factor,
        code.pad_back * factor,
    )


def aperiodic_autocorrelation(seq) -> np.ndarray:
    """Aperiodic autocorrelation at lags ``0 .. n-1`` by direct summation."""
    s = np.asarray(getattr(seq, "symbols", seq), dtype=np.int64)
    n = s.size
    return np.array([int(np.dot(s[:n - k], s[k:])) for k in range(n)], dtype=np.int64)
