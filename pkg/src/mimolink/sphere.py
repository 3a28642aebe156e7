"""Soft-output MIMO detection by single-tree-search sphere decoding.

One depth-first traversal of the symbol tree induced by the triangular
factor simultaneously tracks the best (MAP) metric and, for every bit of
the symbol vector, the best metric among candidates whose bit is flipped
relative to the MAP path.  Schnorr-Euchner ordering visits children by
ascending metric increment; radius reduction starts from an infinite
radius.  Reliability clipping caps the counterhypothesis metrics at
lambda_map + sigma2 * clip after every MAP improvement, which both bounds
the output LLR magnitudes and tightens pruning.

Detection metrics stay unnormalized inside the search; the single
division by sigma2 (= the per-entry complex noise variance) happens at
output time.  The search itself is a numba kernel: the traversal is
inherently sequential and branchy, far from numpy's comfort zone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .airlink import ChannelUse, Constellation
from .linalg import QrFactors, qr_decompose, rotate_receive

_ORACLE_LIMIT = 65536


@dataclass(frozen=True)
class DetectorConfig:
    """Detector knobs: LLR clipping magnitude and node counting."""

    clip: float = math.inf
    count_nodes: bool = True

    def __post_init__(self):
        if not self.clip > 0:
            raise ValueError("clip must be positive (math.inf disables clipping)")


@dataclass(frozen=True)
class DetectedLlrs:
    """Per-bit a-posteriori LLRs of one channel use, llr[antenna][bit]."""

    llr: np.ndarray
    visited_nodes: int


def preprocess(cu: ChannelUse) -> QrFactors:
    """QR-decompose the channel and rotate the receive vector."""
    factors = qr_decompose(cu.h)
    return QrFactors(q=factors.q, r=factors.r, y_rot=rotate_receive(factors, cu.y))


def exhaustive_max_log(
    factors: QrFactors, constellation: Constellation, sigma2: float
) -> DetectedLlrs:
    """Max-log LLRs by enumerating every candidate symbol vector.

    Oracle-grade reference for :func:`sts_detect`; refuses alphabets with
    more than 65536 candidate vectors.
    """
    r, y = _checked_problem(factors, sigma2)
    m_t = r.shape[1]
    n_pts = len(constellation.points)
    n_cand = n_pts**m_t
    if n_cand > _ORACLE_LIMIT:
        raise ValueError(f"{n_cand} candidates exceed the enumeration limit")

    grids = np.meshgrid(*([np.arange(n_pts)] * m_t), indexing="ij")
    idx = np.stack(grids, axis=-1).reshape(-1, m_t)
    svecs = constellation.points[idx]
    resid = y[np.newaxis, :] - svecs @ r.T
    metrics = np.einsum("ij,ij->i", resid.real, resid.real) + np.einsum(
        "ij,ij->i", resid.imag, resid.imag
    )
    bits = constellation.labels_bipolar[idx]  # (n_cand, m_t, nb)

    nb = constellation.bits_per_symbol
    llr = np.empty((m_t, nb))
    for t in range(m_t):
        for b in range(nb):
            plus = bits[:, t, b] == 1
            llr[t, b] = (metrics[~plus].min() - metrics[plus].min()) / sigma2
    return DetectedLlrs(llr=llr, visited_nodes=n_cand)


def sts_detect(
    factors: QrFactors,
    constellation: Constellation,
    sigma2: float,
    cfg: DetectorConfig = DetectorConfig(),
) -> DetectedLlrs:
    """Single-tree-search soft detection with reliability clipping.

    With an infinite clip the output equals :func:`exhaustive_max_log`;
    with a finite clip it equals the exhaustive output clamped entrywise
    to [-clip, +clip].  ``visited_nodes`` counts every child whose metric
    increment was computed (the root is not counted; leaves are).
    """
    r, y = _checked_problem(factors, sigma2)
    cap = sigma2 * cfg.clip if math.isfinite(cfg.clip) else math.inf
    lam_map, lam_bar, map_bits, nodes = _sts_search(
        np.ascontiguousarray(r),
        np.ascontiguousarray(y),
        np.ascontiguousarray(constellation.points),
        np.ascontiguousarray(constellation.labels_bipolar),
        cap,
    )
    if __debug__:
        assert lam_map <= lam_bar.min() + 1e-9
    llr = map_bits * (lam_bar - lam_map) / sigma2
    return DetectedLlrs(llr=llr, visited_nodes=int(nodes) if cfg.count_nodes else 0)


@numba.njit(cache=True)
def _sts_search(r, y, pts, labels_pm, cap):  # pragma: no cover - jitted
    m_t = r.shape[0]
    n_pts = pts.shape[0]
    nb = labels_pm.shape[1]
    inf = np.inf

    diag_pts = np.empty((m_t, n_pts), np.complex128)
    for l in range(m_t):
        for i in range(n_pts):
            diag_pts[l, i] = r[l, l] * pts[i]

    lam_map = inf
    have_map = False
    map_bits = np.zeros((m_t, nb), np.int8)
    lam_bar = np.full((m_t, nb), inf)
    row_max = np.full(m_t, inf)
    bars_max = inf
    nodes = 0

    # Expansion state per tree level; level l fixes symbol l, the root
    # expansion happens at the highest level (last row of r).
    order = np.empty((m_t, n_pts), np.int64)
    incs = np.empty((m_t, n_pts))
    pos = np.zeros(m_t, np.int64)
    dpar = np.zeros(m_t)
    sval = np.zeros(m_t, np.complex128)
    pbits = np.zeros((m_t, nb), np.int8)

    # Root expansion.
    level = m_t - 1
    b = y[level]
    for j in range(level + 1, m_t):
        b -= r[level, j] * sval[j]
    for i in range(n_pts):
        diff = b - diag_pts[level, i]
        incs[level, i] = diff.real * diff.real + diff.imag * diff.imag
        order[level, i] = i
    _sort_children(order, incs, level, n_pts)
    nodes += n_pts

    while True:
        p = pos[level]
        if p == n_pts:
            level += 1
            if level == m_t:
                break
            continue
        pos[level] = p + 1
        i = order[level, p]
        d = dpar[level] + incs[level, i]
        gmax = lam_map if lam_map > bars_max else bars_max
        if d >= gmax:
            # Children come in ascending increment order and every
            # remaining radius is <= gmax: nothing below can improve.
            pos[level] = n_pts
            continue
        for bb in range(nb):
            pbits[level, bb] = labels_pm[i, bb]
        if level == 0:
            if d < lam_map:
                old = lam_map
                if have_map:
                    for t in range(m_t):
                        for bb in range(nb):
                            if pbits[t, bb] != map_bits[t, bb]:
                                lam_bar[t, bb] = old
                lam_map = d
                have_map = True
                for t in range(m_t):
                    for bb in range(nb):
                        map_bits[t, bb] = pbits[t, bb]
                if cap < inf:
                    capped = d + cap
                    for t in range(m_t):
                        for bb in range(nb):
                            if lam_bar[t, bb] > capped:
                                lam_bar[t, bb] = capped
            else:
                for t in range(m_t):
                    for bb in range(nb):
                        if pbits[t, bb] != map_bits[t, bb] and d < lam_bar[t, bb]:
                            lam_bar[t, bb] = d
            bars_max = -inf
            for t in range(m_t):
                rm = lam_bar[t, 0]
                for bb in range(1, nb):
                    if lam_bar[t, bb] > rm:
                        rm = lam_bar[t, bb]
                row_max[t] = rm
                if rm > bars_max:
                    bars_max = rm
            continue
        # Internal node: prune against every radius its subtree could
        # still improve (counterhypotheses of already-fixed differing
        # bits, all bits of unfixed levels, and the MAP radius).
        if have_map:
            target = lam_map
            for j in range(level, m_t):
                for bb in range(nb):
                    if pbits[j, bb] != map_bits[j, bb] and lam_bar[j, bb] > target:
                        target = lam_bar[j, bb]
            for j in range(level):
                if row_max[j] > target:
                    target = row_max[j]
            if d >= target:
                continue
        sval[level] = pts[i]
        level -= 1
        b = y[level]
        for j in range(level + 1, m_t):
            b -= r[level, j] * sval[j]
        for i2 in range(n_pts):
            diff = b - diag_pts[level, i2]
            incs[level, i2] = diff.real * diff.real + diff.imag * diff.imag
            order[level, i2] = i2
        _sort_children(order, incs, level, n_pts)
        dpar[level] = d
        pos[level] = 0
        nodes += n_pts

    return lam_map, lam_bar, map_bits.astype(np.float64), nodes


@numba.njit(cache=True, inline="always")
def _sort_children(order, incs, level, n_pts):  # pragma: no cover - jitted
    # Stable insertion sort by ascending increment; ties keep symbol order.
    for i in range(1, n_pts):
        key = order[level, i]
        kv = incs[level, key]
        j = i - 1
        while j >= 0 and incs[level, order[level, j]] > kv:
            order[level, j + 1] = order[level, j]
            j -= 1
        order[level, j + 1] = key


def _checked_problem(factors: QrFactors, sigma2: float):
    if factors.y_rot is None:
        raise ValueError("factors must carry y_rot; run preprocess() first")
    if sigma2 <= 0:
        raise ValueError("noise variance must be positive")
    r = np.asarray(factors.r)
    y = np.asarray(factors.y_rot)
    if r.shape[0] != r.shape[1] or y.shape != (r.shape[0],):
        raise ValueError("inconsistent triangular system dimensions")
    return r, y
