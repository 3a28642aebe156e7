"""Shared test utilities: random detection instances and reference encoders."""

import numpy as np

from mimolink import (
    Constellation,
    make_constellation,
    preprocess,
    sample_channel_use,
    snr_to_sigma2,
)


def random_instance(seed: int, m_t: int, constellation: Constellation,
                    snr_range=(0.0, 20.0), m_r: int | None = None):
    """One random detection problem: (factors with y_rot, sigma2)."""
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(m_t, constellation.bits_per_symbol))
    s = constellation.map_bit_matrix(bits)
    sigma2 = snr_to_sigma2(rng.uniform(*snr_range), m_t)
    cu = sample_channel_use(s, sigma2, rng, m_r=m_r)
    return preprocess(cu), sigma2


def qpsk_instance(seed: int):
    return random_instance(seed, 2, make_constellation("qpsk"))


def qam16_instance(seed: int):
    return random_instance(seed, 4, make_constellation("qam16"))


def reference_encode(info_bits):
    """Parity via polynomial long division: p(D) = u(D) (1+D^2) / (1+D+D^2).

    Deliberately different formulation from the package encoder (which
    walks the shift-register recursion) so the two can cross-check.
    """
    info_bits = list(int(b) for b in info_bits)
    k = len(info_bits)
    # a(D) = u(D) / (1+D+D^2) via long division over GF(2)
    a = []
    for t in range(k):
        acc = info_bits[t]
        if t >= 1:
            acc ^= a[t - 1]
        if t >= 2:
            acc ^= a[t - 2]
        a.append(acc)
    out = []
    for t in range(k):
        p = a[t] ^ (a[t - 2] if t >= 2 else 0)
        out.extend([info_bits[t], p])
    return out
