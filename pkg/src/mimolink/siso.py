"""Log-MAP BCJR SISO decoding with selective per-bit decoding.

A-priori and a-posteriori soft values travel as 1-D float arrays of length
2K in deinterleaved coded order (systematic, parity alternating).  The
forward recursion starts in the all-zero state; the backward recursion is
initialized uniformly because code blocks are unterminated.

The branch metric uses (1/2) * bit * LLR per coded bit.  The constant
-ln(2 cosh(L/2)) completing the exact bit log-probability is the same for
both bit values, so it cancels in every output difference; the exhaustive
posterior oracle here validates that this form reproduces the exact APP.

Full decoding and selective decoding share the same per-step scalar
routines, so selective outputs equal full-decode outputs bit for bit at
the decoded positions; only the number of retained backward state-metric
vectors differs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .convcode import Trellis, encode

NEG_INF = -1.0e30


def max_star(a: float, b: float) -> float:
    """Jacobian logarithm ln(e^a + e^b), computed exactly."""
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def ln_p_approx(c: int, l: float) -> float:
    """Large-|l| approximation of the bit log-probability ln P(c | l).

    Zero for a strong agreeing bit, -|l| for a strong opposing one.
    Diagnostic helper; the decode path uses exact arithmetic.
    """
    return 0.5 * (c * l - abs(l))


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of (selective) SISO decoding of one block."""

    ld_info: np.ndarray
    decisions: np.ndarray
    beta_stores: int
    decoded_mask: np.ndarray


def _check_frame(la) -> np.ndarray:
    la = np.asarray(la, dtype=float)
    if la.ndim != 1 or la.size == 0 or la.size % 2 != 0:
        raise ValueError(f"a-priori frame must be 1-D of even length, got {la.shape}")
    return la


def _branch_table(la: np.ndarray, trellis: Trellis) -> list:
    """Per-step branch metrics g[t][s][u] = (sys*la0 + par*la1)/2."""
    la0 = la[0::2]
    la1 = la[1::2]
    g = 0.5 * (
        trellis.out_sys[np.newaxis, :, :] * la0[:, np.newaxis, np.newaxis]
        + trellis.out_par[np.newaxis, :, :] * la1[:, np.newaxis, np.newaxis]
    )
    return g.tolist()


def _edge_lists(trellis: Trellis):
    nxt = [[int(trellis.next_state[s, u]) for u in (0, 1)] for s in range(4)]
    inc = [
        [
            (int(trellis.in_state[w, e]), int(trellis.in_input[w, e]))
            for e in (0, 1)
        ]
        for w in range(4)
    ]
    par_pos = [(s, u) for s in range(4) for u in (0, 1) if trellis.out_par[s, u] == 1]
    par_neg = [(s, u) for s in range(4) for u in (0, 1) if trellis.out_par[s, u] == -1]
    return nxt, inc, par_pos, par_neg


def _forward_step(a: list, g_t: list, inc: list) -> list:
    out = []
    for w in range(4):
        (s1, u1), (s2, u2) = inc[w]
        out.append(max_star(a[s1] + g_t[s1][u1], a[s2] + g_t[s2][u2]))
    m = max(out)
    return [max(v - m, NEG_INF) for v in out]


def _backward_step(b: list, g_t: list, nxt: list) -> list:
    out = []
    for s in range(4):
        gs = g_t[s]
        out.append(max_star(b[nxt[s][0]] + gs[0], b[nxt[s][1]] + gs[1]))
    m = max(out)
    return [max(v - m, NEG_INF) for v in out]


def _reduce4(a: float, b: float, c: float, d: float) -> float:
    return max_star(max_star(a, b), max_star(c, d))


def _emit_step(a: list, g_t: list, b_next: list, nxt: list, par_pos, par_neg):
    """A-posteriori LLRs of the two coded bits of one trellis step."""
    d = [
        [a[s] + g_t[s][0] + b_next[nxt[s][0]],
         a[s] + g_t[s][1] + b_next[nxt[s][1]]]
        for s in range(4)
    ]
    l_sys = _reduce4(d[0][1], d[1][1], d[2][1], d[3][1]) - _reduce4(
        d[0][0], d[1][0], d[2][0], d[3][0]
    )
    pp = par_pos
    pn = par_neg
    l_par = _reduce4(
        d[pp[0][0]][pp[0][1]], d[pp[1][0]][pp[1][1]],
        d[pp[2][0]][pp[2][1]], d[pp[3][0]][pp[3][1]],
    ) - _reduce4(
        d[pn[0][0]][pn[0][1]], d[pn[1][0]][pn[1][1]],
        d[pn[2][0]][pn[2][1]], d[pn[3][0]][pn[3][1]],
    )
    return l_sys, l_par


_ALPHA0 = [0.0, NEG_INF, NEG_INF, NEG_INF]


def bcjr_decode(la, trellis: Trellis) -> np.ndarray:
    """Exact log-MAP a-posteriori LLRs for every coded bit position.

    Returns 2K values in the same (systematic, parity alternating) order
    as the a-priori input.
    """
    la = _check_frame(la)
    k = la.size // 2
    g = _branch_table(la, trellis)
    nxt, inc, par_pos, par_neg = _edge_lists(trellis)

    betas = [None] * (k + 1)
    b = [0.0, 0.0, 0.0, 0.0]
    betas[k] = b
    for t in range(k - 1, 0, -1):
        b = _backward_step(b, g[t], nxt)
        betas[t] = b

    out = np.empty(2 * k)
    a = _ALPHA0
    for t in range(k):
        l_sys, l_par = _emit_step(a, g[t], betas[t + 1], nxt, par_pos, par_neg)
        out[2 * t] = l_sys
        out[2 * t + 1] = l_par
        a = _forward_step(a, g[t], inc)
    return out


def exhaustive_app(la) -> np.ndarray:
    """Brute-force a-posteriori LLRs by summing over all 2^K info words.

    Exact log-domain evaluation; oracle for :func:`bcjr_decode`.  Only
    viable for K <= 12.
    """
    la = _check_frame(la)
    k = la.size // 2
    if k > 12:
        raise ValueError(f"exhaustive enumeration limited to K <= 12, got K = {k}")
    n = 1 << k
    codewords = np.empty((n, 2 * k), dtype=np.int8)
    for i in range(n):
        info = [(i >> (k - 1 - t)) & 1 for t in range(k)]
        codewords[i] = 2 * encode(info).astype(np.int8) - 1
    # ln P(codeword | la) with exact per-bit ln P = -ln(1 + e^{-c*l})
    lnp = -np.logaddexp(0.0, -codewords * la[np.newaxis, :]).sum(axis=1)
    out = np.empty(2 * k)
    for pos in range(2 * k):
        plus = codewords[:, pos] == 1
        out[pos] = logsumexp(lnp[plus]) - logsumexp(lnp[~plus])
    return out


def selective_decode(la, trellis: Trellis, l_ter: float) -> DecodeResult:
    """Decode only the info bits whose systematic a-priori is weak.

    A bit is put through the full forward/backward computation iff its
    systematic |a-priori| is below ``l_ter``; the rest keep their a-priori
    value and are hard-decided from its sign.  One backward state-metric
    vector is retained per decoded bit; everything else is overwritten in
    place during the sweep.
    """
    if l_ter < 0:
        raise ValueError("reliability threshold must be non-negative")
    la = _check_frame(la)
    k = la.size // 2
    sys_la = la[0::2].copy()
    mask = np.abs(sys_la) < l_ter

    ld_info = sys_la.copy()
    if mask.any():
        g = _branch_table(la, trellis)
        nxt, inc, par_pos, par_neg = _edge_lists(trellis)
        stored = {}
        b = [0.0, 0.0, 0.0, 0.0]
        for t in range(k - 1, -1, -1):
            if mask[t]:
                stored[t] = b
            if t > 0:
                b = _backward_step(b, g[t], nxt)
        a = _ALPHA0
        for t in range(k):
            if mask[t]:
                ld_info[t] = _emit_step(a, g[t], stored[t], nxt, par_pos, par_neg)[0]
            a = _forward_step(a, g[t], inc)

    decisions = np.where(ld_info >= 0, 1, -1).astype(np.int8)
    return DecodeResult(
        ld_info=ld_info,
        decisions=decisions,
        beta_stores=int(mask.sum()),
        decoded_mask=mask,
    )
