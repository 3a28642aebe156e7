"""Rate-1/2 systematic recursive convolutional code (5/7 octal) and interleaving.

The encoder recursion, with shift register state (a_prev, a_prev2):

    a = u ^ a_prev ^ a_prev2      (feedback taps 7 octal)
    p = a ^ a_prev2               (feedforward taps 5 octal)

Coded output per step is (systematic u, parity p).  Blocks are left
unterminated; the decoder starts its backward recursion uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NUM_STATES = 4


@dataclass(frozen=True)
class Trellis:
    """Edge tables of the 4-state encoder.

    All tables are indexed [state, input_bit].  Outputs are bipolar
    (+1/-1); ``out_sys`` always equals the bipolar input bit.
    ``in_state``/``in_input`` list, per destination state, the two
    incoming (source state, input bit) pairs.
    """

    next_state: np.ndarray
    out_sys: np.ndarray
    out_par: np.ndarray
    in_state: np.ndarray
    in_input: np.ndarray

    @property
    def num_states(self) -> int:
        return NUM_STATES


def _step(state: int, u: int) -> tuple[int, int]:
    """One encoder transition: returns (next_state, parity bit)."""
    a_prev, a_prev2 = state >> 1, state & 1
    a = u ^ a_prev ^ a_prev2
    p = a ^ a_prev2
    return (a << 1) | a_prev, p


def build_trellis() -> Trellis:
    next_state = np.zeros((NUM_STATES, 2), dtype=np.intp)
    out_sys = np.zeros((NUM_STATES, 2), dtype=np.int8)
    out_par = np.zeros((NUM_STATES, 2), dtype=np.int8)
    for s in range(NUM_STATES):
        for u in (0, 1):
            nxt, p = _step(s, u)
            next_state[s, u] = nxt
            out_sys[s, u] = 2 * u - 1
            out_par[s, u] = 2 * p - 1
    in_state = np.zeros((NUM_STATES, 2), dtype=np.intp)
    in_input = np.zeros((NUM_STATES, 2), dtype=np.intp)
    for w in range(NUM_STATES):
        incoming = [(s, u) for s in range(NUM_STATES) for u in (0, 1)
                    if next_state[s, u] == w]
        assert len(incoming) == 2
        in_state[w] = [s for s, _ in incoming]
        in_input[w] = [u for _, u in incoming]
    return Trellis(next_state=next_state, out_sys=out_sys, out_par=out_par,
                   in_state=in_state, in_input=in_input)


def encode(info_bits) -> np.ndarray:
    """Encode K logical bits into 2K coded bits (sys, par alternating).

    Starts from the all-zero state; the block is not terminated.
    """
    info_bits = np.asarray(info_bits)
    if info_bits.ndim != 1 or info_bits.size < 1:
        raise ValueError("need a non-empty 1-D bit sequence")
    out = np.empty(2 * info_bits.size, dtype=np.uint8)
    state = 0
    for t, u in enumerate(info_bits):
        u = int(u)
        state, p = _step(state, u)
        out[2 * t] = u
        out[2 * t + 1] = p
    return out


@dataclass(frozen=True)
class Interleaver:
    """A fixed bijection over coded-bit positions."""

    permutation: np.ndarray
    seed: int | None = None
    _inverse: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        perm = np.asarray(self.permutation, dtype=np.intp)
        n = perm.size
        if not np.array_equal(np.sort(perm), np.arange(n)):
            raise ValueError("permutation must be a bijection over [0, n)")
        inverse = np.empty(n, dtype=np.intp)
        inverse[perm] = np.arange(n)
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "_inverse", inverse)

    def __len__(self) -> int:
        return self.permutation.size


def make_interleaver(length: int, seed: int) -> Interleaver:
    """Seeded pseudo-random permutation interleaver (Fisher-Yates shuffle)."""
    perm = np.random.default_rng(seed).permutation(length)
    return Interleaver(permutation=perm, seed=seed)


def permute(x: np.ndarray, iv: Interleaver, direction: str = "forward") -> np.ndarray:
    """Apply the interleaver (or its inverse) to a sequence.

    forward: out[i] = x[perm[i]]; inverse undoes it exactly.
    """
    x = np.asarray(x)
    if x.shape[0] != len(iv):
        raise ValueError(f"sequence length {x.shape[0]} != interleaver length {len(iv)}")
    if direction == "forward":
        return x[iv.permutation]
    if direction == "inverse":
        return x[iv._inverse]
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
