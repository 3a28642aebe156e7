"""Coded-MIMO link simulator with complexity-adaptive APP receiver processing.

A max-log soft-output sphere detector (single tree search, Schnorr-Euchner
enumeration, reliability clipping) feeds a log-MAP SISO convolutional
decoder that can skip already-reliable bits.  Monte-Carlo tooling measures
BER, detector tree-node counts, and decoder state-metric storage across
SNR / target-error-rate sweeps.
"""

from .airlink import (
    ChannelUse,
    Constellation,
    FrameLayout,
    layout_for,
    layout_index,
    layout_unindex,
    make_constellation,
    map_block,
    sample_channel_use,
    snr_to_sigma2,
)
from .convcode import Interleaver, Trellis, build_trellis, encode, make_interleaver, permute
from .linalg import QrFactors, SingularMatrixError, qr_decompose, rotate_receive
from .montecarlo import (
    MODES,
    BlockRecord,
    SimConfig,
    SweepCell,
    run_block,
    run_block_detailed,
    run_sweep,
)
from .siso import (
    DecodeResult,
    bcjr_decode,
    exhaustive_app,
    ln_p_approx,
    max_star,
    selective_decode,
)
from .sphere import DetectedLlrs, DetectorConfig, exhaustive_max_log, preprocess, sts_detect
from .tercontrol import TerPolicy, bit_error_prob, estimate_block_ber, ter_to_clip

__all__ = [
    "BlockRecord",
    "ChannelUse",
    "Constellation",
    "DecodeResult",
    "DetectedLlrs",
    "DetectorConfig",
    "FrameLayout",
    "Interleaver",
    "MODES",
    "QrFactors",
    "SimConfig",
    "SingularMatrixError",
    "SweepCell",
    "TerPolicy",
    "Trellis",
    "bcjr_decode",
    "bit_error_prob",
    "build_trellis",
    "encode",
    "estimate_block_ber",
    "exhaustive_app",
    "exhaustive_max_log",
    "layout_for",
    "layout_index",
    "layout_unindex",
    "ln_p_approx",
    "make_constellation",
    "make_interleaver",
    "map_block",
    "max_star",
    "permute",
    "preprocess",
    "qr_decompose",
    "rotate_receive",
    "run_block",
    "run_block_detailed",
    "run_sweep",
    "sample_channel_use",
    "selective_decode",
    "snr_to_sigma2",
    "sts_detect",
    "ter_to_clip",
]

__version__ = "0.1.0"
