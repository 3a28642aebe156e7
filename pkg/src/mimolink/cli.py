"""Command-line front end: parse a sweep, run it, emit CSV.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys

from .montecarlo import MODES, SimConfig, SweepCell, run_sweep

_CSV_FIELDS = (
    "snr_db", "ter", "mode", "blocks", "bits", "errors", "ber",
    "avg_visited_nodes", "avg_beta_stores", "seed",
)

_MOD_NAMES = {"qpsk": "qpsk", "16qam": "qam16"}


class UsageError(Exception):
    """Bad command line: unknown flag, unparsable number, or invalid config."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_snr(text: str) -> tuple:
    """Either a comma list ('10,12,14') or an inclusive range ('8:1:16')."""
    try:
        if ":" in text:
            start, step, stop = (float(v) for v in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            out = []
            v = start
            while v <= stop + 1e-9:
                out.append(round(v, 12))
                v += step
            if not out:
                raise ValueError("empty range")
            return tuple(out)
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --snr spec {text!r}: {exc}") from exc


def _parse_floats(text: str, flag: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad {flag} list {text!r}") from exc


def _build_parser() -> _Parser:
    p = _Parser(prog="mimolink", description=__doc__.splitlines()[0])
    p.add_argument("--mt", type=int, default=4, help="transmit antennas")
    p.add_argument("--mr", type=int, default=4, help="receive antennas")
    p.add_argument("--mod", choices=sorted(_MOD_NAMES), default="16qam",
                   help="constellation")
    p.add_argument("--info-bits", type=int, default=1152,
                   help="information bits per code block")
    p.add_argument("--snr", default="10:1:16",
                   help="SNR grid in dB: comma list or start:step:stop")
    p.add_argument("--ter", default="1e-4,1e-3,1e-2",
                   help="comma list of target error rates")
    p.add_argument("--mode", default=",".join(MODES),
                   help=f"comma list from {{{','.join(MODES)}}}")
    p.add_argument("--blocks", type=int, default=10, help="blocks per sweep cell")
    p.add_argument("--seed", type=int, default=1, help="master seed")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    return p


def parse_args(argv) -> tuple[SimConfig, str | None]:
    """Translate argv into a validated SimConfig plus the output path."""
    ns = _build_parser().parse_args(argv)
    modes = tuple(m.strip() for m in ns.mode.split(","))
    try:
        cfg = SimConfig(
            m_t=ns.mt,
            m_r=ns.mr,
            constellation=_MOD_NAMES[ns.mod],
            info_bits=ns.info_bits,
            snr_db=_parse_snr(ns.snr),
            ter=_parse_floats(ns.ter, "--ter"),
            modes=modes,
            blocks=ns.blocks,
            seed=ns.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return cfg, ns.out


def _render_row(cell: SweepCell) -> str:
    return ",".join(repr(getattr(cell, f)) if isinstance(getattr(cell, f), float)
                    else str(getattr(cell, f)) for f in _CSV_FIELDS)


def emit_csv(cells: list[SweepCell], path: str | None) -> None:
    """Write one header line plus one row per cell, sorted by (mode, ter, snr).

    Floats are rendered with repr(), which round-trips exactly.
    """
    if not cells:
        raise ValueError("nothing to emit: empty metrics table")
    ordered = sorted(cells, key=lambda c: (c.mode, c.ter, c.snr_db))
    lines = [",".join(_CSV_FIELDS)]
    lines.extend(_render_row(c) for c in ordered)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def main_run(argv) -> int:
    """Parse, sweep, emit; returns the process exit code."""
    try:
        cfg, out_path = parse_args(argv)
    except UsageError as exc:
        print(f"mimolink: error: {exc}", file=sys.stderr)
        return 1
    try:
        def _progress(cell):
            print(
                f"mode={cell.mode} ter={cell.ter:g} snr={cell.snr_db:g} dB "
                f"ber={cell.ber:.3e} nodes/use={cell.avg_visited_nodes:.1f} "
                f"beta/block={cell.avg_beta_stores:.1f}"
            )

        cells = run_sweep(cfg, progress=_progress)
        emit_csv(cells, out_path)
    except Exception as exc:  # noqa: BLE001  (CLI boundary)
        print(f"mimolink: runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> None:
    sys.exit(main_run(sys.argv[1:] if argv is None else argv))
