"""Acceptance gate: one test per shipping criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.  The sweep-backed criteria share one session-scoped
200-block sweep over SNR {10, 12, 14, 16} dB and TER {1e-4, 1e-3, 1e-2}.
"""

import math
import time

import numpy as np
import pytest

from helpers import qam16_instance, qpsk_instance
from mimolink import (
    DetectorConfig,
    SimConfig,
    bcjr_decode,
    build_trellis,
    exhaustive_app,
    exhaustive_max_log,
    make_constellation,
    run_block,
    run_block_detailed,
    selective_decode,
    sts_detect,
)
from mimolink.montecarlo import _link_parts

GRID_SNR = (10.0, 12.0, 14.0, 16.0)
GRID_TER = (1e-4, 1e-3, 1e-2)
BLOCKS = 200
INFO_BITS = 1152
TIE = 1e-9


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {num:>2}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


# ---------------------------------------------------------------- detector


def _oracle_instances():
    qpsk = make_constellation("qpsk")
    qam16 = make_constellation("qam16")
    for seed in range(1000):
        factors, sigma2 = qpsk_instance(seed)
        yield factors, sigma2, qpsk
    for seed in range(100):
        factors, sigma2 = qam16_instance(seed)
        yield factors, sigma2, qam16


def test_criterion_1_detector_matches_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    n = 0
    for factors, sigma2, const in _oracle_instances():
        oracle = exhaustive_max_log(factors, const, sigma2).llr
        det = sts_detect(factors, const, sigma2).llr
        keep = np.abs(oracle) >= TIE
        np.testing.assert_allclose(det[keep], oracle[keep], rtol=1e-9, atol=1e-12)
        with np.errstate(invalid="ignore"):
            rel = np.abs(det[keep] - oracle[keep]) / np.abs(oracle[keep])
        worst = max(worst, float(rel.max()))
        n += 1
    elapsed = time.perf_counter() - t0
    _report(
        1,
        elapsed < 120.0,
        f"sts == oracle on {n} instances (worst rel err {worst:.2e}), "
        f"{elapsed:.1f} s < 120 s",
    )


@pytest.mark.parametrize("clip", [math.log(99), math.log(999)],
                         ids=["ln99", "ln999"])
def test_criterion_2_clip_is_entrywise_clamp(clip):
    worst = 0.0
    n = 0
    for factors, sigma2, const in _oracle_instances():
        oracle = exhaustive_max_log(factors, const, sigma2).llr
        det = sts_detect(factors, const, sigma2, DetectorConfig(clip=clip)).llr
        ref = np.clip(oracle, -clip, clip)
        keep = np.abs(oracle) >= TIE
        np.testing.assert_allclose(det[keep], ref[keep], rtol=1e-9, atol=1e-12)
        worst = max(worst, float(np.abs(det[keep] - ref[keep]).max()))
        n += 1
    _report(
        2,
        True,
        f"clip={clip:.4f}: sts == clamp(oracle) on {n} instances "
        f"(worst abs dev {worst:.2e})",
    )


# ----------------------------------------------------------------- decoder


def test_criterion_3_bcjr_matches_exhaustive_app():
    trellis = build_trellis()
    worst = 0.0
    for seed in range(100):
        la = np.random.default_rng(seed).uniform(-3.0, 3.0, 16)
        gap = np.abs(bcjr_decode(la, trellis) - exhaustive_app(la)).max()
        worst = max(worst, float(gap))
    _report(3, worst <= 1e-8,
            f"bcjr vs brute force on 100 K=8 frames, worst abs gap {worst:.2e} <= 1e-8")


def test_criterion_4_selective_decoding_consistency():
    trellis = build_trellis()
    l_ter = math.log(99)
    for seed in range(100):
        la = np.random.default_rng(1000 + seed).uniform(-8.0, 8.0, 192)
        res = selective_decode(la, trellis, l_ter)
        full = bcjr_decode(la, trellis)[0::2]
        assert np.array_equal(res.ld_info[res.decoded_mask], full[res.decoded_mask])
        assert res.beta_stores == int((np.abs(la[0::2]) < l_ter).sum())
    _report(4, True,
            "selective == full at decoded positions on 100 frames, "
            "beta stores == weak-prior count")


# ------------------------------------------------------------- calibration


def test_criterion_5_llr_error_probability_calibration():
    # Mid-waterfall point of the 4x4/16-QAM reference link; wider bins
    # than the TER thresholds themselves so every bin is well populated.
    snr_db = 12.0
    n_blocks = 400
    cfg = SimConfig(blocks=n_blocks, snr_db=(snr_db,))
    parts = _link_parts(cfg)
    edges = np.arange(0.0, 7.0, 1.0)
    tots = np.zeros(edges.size - 1, dtype=int)
    errs = np.zeros(edges.size - 1, dtype=int)
    for b in range(n_blocks):
        _, ld, info = run_block_detailed(cfg, snr_db, 1e-3, "baseline", b, parts)
        wrong = (ld >= 0).astype(np.uint8) != info
        mag = np.abs(ld)
        for i in range(edges.size - 1):
            sel = (mag >= edges[i]) & (mag < edges[i + 1])
            tots[i] += int(sel.sum())
            errs[i] += int(wrong[sel].sum())
    ratios = []
    for i in range(edges.size - 1):
        assert tots[i] >= 2000, f"bin [{edges[i]},{edges[i+1]}) underpopulated"
        pred = 1.0 / (1.0 + math.exp((edges[i] + edges[i + 1]) / 2.0))
        ratios.append(errs[i] / tots[i] / pred)
    ok = all(0.5 <= r <= 2.0 for r in ratios)
    _report(5, ok,
            f"hard-decision error rate vs prediction at {snr_db:g} dB, "
            f"ratio range [{min(ratios):.2f}, {max(ratios):.2f}] within [0.5, 2]")


# ------------------------------------------------------------- sweep-backed


@pytest.fixture(scope="session")
def sweep():
    cfg = SimConfig(blocks=BLOCKS, snr_db=GRID_SNR, ter=GRID_TER)
    parts = _link_parts(cfg)
    t0 = time.perf_counter()
    cells = {}

    def _cell(snr, ter, mode):
        recs = [run_block(cfg, snr, ter, mode, b, parts) for b in range(BLOCKS)]
        return {
            "errors": np.array([r.errors for r in recs]),
            "nodes": np.array([r.visited_nodes for r in recs], dtype=float),
            "beta": np.array([r.beta_stores for r in recs], dtype=float),
            "uses": recs[0].uses,
        }

    for snr in GRID_SNR:
        cells[("baseline", None, snr)] = _cell(snr, GRID_TER[0], "baseline")
        for ter in GRID_TER:
            for mode in ("adapt-detect", "adapt-full"):
                cells[(mode, ter, snr)] = _cell(snr, ter, mode)
    return {"cells": cells, "elapsed": time.perf_counter() - t0}


def _ber(cell):
    return cell["errors"].sum() / (BLOCKS * INFO_BITS)


def _ber_se(cell):
    return (cell["errors"] / INFO_BITS).std(ddof=1) / math.sqrt(BLOCKS)


def _nodes_per_use(cell):
    return cell["nodes"].sum() / (BLOCKS * cell["uses"])


def test_criterion_6_node_reduction_at_reference_point(sweep):
    base = _nodes_per_use(sweep["cells"][("baseline", None, 14.0)])
    adapt = _nodes_per_use(sweep["cells"][("adapt-detect", 1e-4, 14.0)])
    reduction = 1.0 - adapt / base
    elapsed = sweep["elapsed"]
    ok = reduction >= 0.70 and elapsed <= 600.0
    _report(6, ok,
            f"14 dB / TER 1e-4: {base:.0f} -> {adapt:.0f} nodes/use, "
            f"reduction {reduction:.1%} >= 70% (sweep {elapsed:.0f} s <= 600 s)")


def test_criterion_7_node_counts_fall_per_ter_decade(sweep):
    details = []
    ok = True
    for snr in (10.0, 12.0, 14.0):
        n = [_nodes_per_use(sweep["cells"][("adapt-detect", t, snr)]) for t in GRID_TER]
        r1 = 1.0 - n[1] / n[0]
        r2 = 1.0 - n[2] / n[1]
        ok = ok and r1 >= 0.10 and r2 >= 0.10
        details.append(f"{snr:g} dB: {r1:.1%}, {r2:.1%}")
    _report(7, ok, "per-decade node reductions >= 10%: " + "; ".join(details))


def test_criterion_8_beta_store_reduction(sweep):
    beta = sweep["cells"][("adapt-full", 1e-4, 14.0)]["beta"].mean()
    reduction = 1.0 - beta / INFO_BITS
    _report(8, reduction >= 0.20,
            f"14 dB / TER 1e-4: {beta:.0f} of {INFO_BITS} beta stores, "
            f"reduction {reduction:.1%} >= 20%")


def test_criterion_9_clipped_detection_preserves_ber(sweep):
    qualifying = []
    ok = True
    for snr in GRID_SNR:
        base = sweep["cells"][("baseline", None, snr)]
        adapt = sweep["cells"][("adapt-detect", 1e-3, snr)]
        if _ber(base) < 1e-3:
            continue
        diff = abs(_ber(adapt) - _ber(base))
        bound = 2.0 * math.hypot(_ber_se(base), _ber_se(adapt))
        ok = ok and diff <= bound
        qualifying.append(f"{snr:g} dB: |dBER|={diff:.1e} <= {bound:.1e}")
    assert qualifying, "no grid SNR has baseline BER >= 1e-3"
    _report(9, ok, "adapt-detect TER 1e-3 vs baseline: " + "; ".join(qualifying))


def test_criterion_10_selective_floor_bounded(sweep):
    qualifying = []
    never_beats = True
    floor_ok = True
    for snr in GRID_SNR:
        base = sweep["cells"][("baseline", None, snr)]
        full = sweep["cells"][("adapt-full", 1e-2, snr)]
        paired = (full["errors"] - base["errors"]) / INFO_BITS
        se = paired.std(ddof=1) / math.sqrt(BLOCKS)
        never_beats = never_beats and _ber(full) >= _ber(base) - 2.0 * se
        if _ber(base) <= 1e-3:
            floor_ok = floor_ok and _ber(full) <= 2e-2
            qualifying.append(f"{snr:g} dB: floor {_ber(full):.1e} <= 2e-2")
    assert qualifying, "no grid SNR has baseline BER <= 1e-3"
    _report(10, floor_ok and never_beats,
            "adapt-full TER 1e-2: " + "; ".join(qualifying)
            + ("; never significantly better than baseline" if never_beats else
               "; BEATS baseline"))
