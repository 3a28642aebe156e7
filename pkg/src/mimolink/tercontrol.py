"""Bridging LLR magnitudes to target-error-rate (TER) thresholds.

A hard decision on a bit with posterior LLR L errs with probability
1/(1 + e^{|L|}); inverting that at a target rate gives the reliability
threshold used both as the detector clipping value and as the selective
decoding gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def bit_error_prob(l) -> float | np.ndarray:
    """Hard-decision error probability of a bit with LLR magnitude |l|."""
    a = np.exp(-np.abs(l))
    out = a / (1.0 + a)
    return float(out) if np.isscalar(l) else out


def estimate_block_ber(ld_info) -> float:
    """Mean predicted bit error probability over a block of LLRs."""
    ld_info = np.asarray(ld_info, dtype=float)
    if ld_info.size == 0:
        raise ValueError("cannot estimate BER from an empty LLR block")
    return float(np.mean(bit_error_prob(ld_info)))


def ter_to_clip(ter: float) -> float:
    """Reliability threshold ln(1/ter - 1) for a target error rate."""
    if not 0.0 < ter < 0.5:
        raise ValueError(f"target error rate must lie in (0, 0.5), got {ter}")
    return math.log(1.0 / ter - 1.0)


@dataclass(frozen=True)
class TerPolicy:
    """A target error rate and its derived LLR threshold."""

    ter: float
    l_ter: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "l_ter", ter_to_clip(self.ter))
