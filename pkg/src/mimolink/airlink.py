"""Gray-mapped constellations, frame layout, and the Rayleigh/AWGN channel.

Bit conventions used throughout the package: logical 0 maps to bipolar -1,
logical 1 to +1, and an LLR is positive when the bit is more likely +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Per-axis Gray map for 16-QAM bit pairs, before 1/sqrt(10) scaling.
_PAM4_GRAY = {(0, 0): -3.0, (0, 1): -1.0, (1, 1): 1.0, (1, 0): 3.0}


@dataclass(frozen=True)
class Constellation:
    """Symbol alphabet with per-point bit labels.

    ``points`` has unit average energy; ``labels`` holds one row of
    {0,1} bits per point and is a bijection onto {0,1}^bits_per_symbol.
    """

    name: str
    points: np.ndarray
    labels: np.ndarray
    _index_by_label: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.points) != len(self.labels):
            raise ValueError("points and labels must have equal length")
        lut = {tuple(int(b) for b in row): i for i, row in enumerate(self.labels)}
        if len(lut) != len(self.points):
            raise ValueError("labels must be distinct")
        object.__setattr__(self, "_index_by_label", lut)

    @property
    def bits_per_symbol(self) -> int:
        return self.labels.shape[1]

    @property
    def labels_bipolar(self) -> np.ndarray:
        return (2 * self.labels.astype(np.int8)) - 1

    def index_of_bits(self, bits) -> int:
        key = tuple(int(b) for b in bits)
        if key not in self._index_by_label:
            raise ValueError(f"no point labeled {key} in {self.name}")
        return self._index_by_label[key]

    def nearest_index(self, symbol: complex) -> int:
        return int(np.argmin(np.abs(self.points - symbol)))

    def map_bit_matrix(self, bits: np.ndarray) -> np.ndarray:
        """Map rows of a (n, bits_per_symbol) bit matrix to symbols."""
        bits = np.asarray(bits)
        if bits.ndim != 2 or bits.shape[1] != self.bits_per_symbol:
            raise ValueError("bit matrix shape does not match constellation")
        idx = [self.index_of_bits(row) for row in bits]
        return self.points[idx]


def make_constellation(name: str) -> Constellation:
    """Build a named unit-energy Gray constellation (qpsk, qam16, or bpsk)."""
    name = name.lower()
    if name == "bpsk":
        points = np.array([-1.0 + 0j, 1.0 + 0j])
        labels = np.array([[0], [1]], dtype=np.uint8)
    elif name == "qpsk":
        labels = np.array([[i >> 1 & 1, i & 1] for i in range(4)], dtype=np.uint8)
        points = np.array(
            [((2.0 * b0 - 1) + 1j * (2.0 * b1 - 1)) / np.sqrt(2) for b0, b1 in labels]
        )
    elif name == "qam16":
        labels = np.array(
            [[i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1] for i in range(16)],
            dtype=np.uint8,
        )
        points = np.array(
            [
                (_PAM4_GRAY[(b0, b1)] + 1j * _PAM4_GRAY[(b2, b3)]) / np.sqrt(10)
                for b0, b1, b2, b3 in labels
            ]
        )
    else:
        raise ValueError(f"unknown constellation {name!r}")
    return Constellation(name=name, points=points, labels=labels)


def map_block(bits, constellation: Constellation) -> complex:
    """Map one label-sized bit pattern onto its constellation point."""
    bits = np.asarray(bits)
    if bits.shape != (constellation.bits_per_symbol,):
        raise ValueError(
            f"expected {constellation.bits_per_symbol} bits, got shape {bits.shape}"
        )
    return complex(constellation.points[constellation.index_of_bits(bits)])


@dataclass(frozen=True)
class FrameLayout:
    """Bijection between interleaved coded-bit index and (use, antenna, bit)."""

    m_t: int
    m_r: int
    bits_per_symbol: int
    uses: int

    def __post_init__(self):
        if min(self.m_t, self.m_r, self.bits_per_symbol, self.uses) < 1:
            raise ValueError("layout dimensions must be positive")

    @property
    def coded_len(self) -> int:
        return self.uses * self.m_t * self.bits_per_symbol


def layout_for(m_t: int, m_r: int, bits_per_symbol: int, coded_len: int) -> FrameLayout:
    """Layout from a coded length, enforcing the frame-fit divisibility."""
    per_use = m_t * bits_per_symbol
    if coded_len % per_use != 0:
        raise ValueError(
            f"coded length {coded_len} not divisible by m_t*bits_per_symbol = {per_use}"
        )
    return FrameLayout(m_t=m_t, m_r=m_r, bits_per_symbol=bits_per_symbol,
                       uses=coded_len // per_use)


def layout_index(u: int, t: int, b: int, layout: FrameLayout) -> int:
    """Interleaved-bit index of bit position b on antenna t at channel use u."""
    if not (0 <= u < layout.uses and 0 <= t < layout.m_t
            and 0 <= b < layout.bits_per_symbol):
        raise ValueError(f"layout indices out of range: {(u, t, b)}")
    return (u * layout.m_t + t) * layout.bits_per_symbol + b


def layout_unindex(k: int, layout: FrameLayout) -> tuple[int, int, int]:
    """Inverse of :func:`layout_index`."""
    if not 0 <= k < layout.coded_len:
        raise ValueError(f"coded-bit index {k} out of range")
    k, b = divmod(k, layout.bits_per_symbol)
    u, t = divmod(k, layout.m_t)
    return u, t, b


@dataclass(frozen=True)
class ChannelUse:
    """One flat-fading channel realization: y = h s + n."""

    h: np.ndarray
    y: np.ndarray
    sigma2: float

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError("noise variance must be positive")
        if self.h.ndim != 2 or self.y.shape != (self.h.shape[0],):
            raise ValueError("inconsistent channel dimensions")


def snr_to_sigma2(snr_db: float, m_t: int) -> float:
    """Per-entry complex noise variance for a given SNR in dB.

    SNR is average received symbol energy per receive antenna over noise
    energy, for unit-energy symbols over unit-variance i.i.d. fading.
    """
    if m_t < 1:
        raise ValueError("m_t must be >= 1")
    return m_t * 10.0 ** (-snr_db / 10.0)


def sample_channel_use(
    s: np.ndarray,
    sigma2: float,
    rng: np.random.Generator,
    m_r: int | None = None,
) -> ChannelUse:
    """Draw a fresh i.i.d. Rayleigh channel and AWGN, and emit y = h s + n.

    Channel entries are circular complex Gaussian with unit variance per
    entry; noise entries have variance ``sigma2`` per entry.  The draw
    order (h first, then n) is part of the determinism contract.
    """
    s = np.asarray(s, dtype=np.complex128)
    m_t = s.shape[0]
    if m_r is None:
        m_r = m_t
    h = (rng.standard_normal((m_r, m_t)) + 1j * rng.standard_normal((m_r, m_t)))
    h *= np.sqrt(0.5)
    n = (rng.standard_normal(m_r) + 1j * rng.standard_normal(m_r))
    n *= np.sqrt(sigma2 / 2.0)
    return ChannelUse(h=h, y=h @ s + n, sigma2=float(sigma2))
