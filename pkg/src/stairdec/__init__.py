"""Staircase FEC codes with BCH component codes, soft-aided window decoders,
and a Monte Carlo BER simulation harness."""

from .bch import BchCode, BddOutcome, bdd_decode, build_code, encode, syndromes
from .channel import (
    ChannelParams,
    Constellation,
    compute_llr,
    hard_demap,
    make_pam,
    modulate,
    snr_db_to_rho,
    transmit,
)
from .decoder import (
    DecoderConfig,
    SccWindow,
    SoftDecodeOutcome,
    SoftDecodeResult,
    bit_flip_retry,
    decode_stream,
    iterate_window,
    miscorrection_check,
    slide,
    soft_decode_word,
)
from .gf import GaloisField
from .harness import (
    BerRecord,
    ComplexityCounters,
    SimConfig,
    emit_results,
    eta1,
    eta2,
    run_ber_sweep,
)
from .marking import (
    MarkClass,
    Quantizer,
    Thresholds,
    mark_bit,
    mark_quantized,
    quantize,
    quantizer_from_threshold,
    sabm_hub_select,
)
from .staircase import (
    ComponentWordRef,
    SccBlock,
    SccParams,
    deinterleave,
    interleave,
    scc_encode,
)

__all__ = [
    "GaloisField",
    "BchCode", "BddOutcome", "build_code", "encode", "syndromes", "bdd_decode",
    "SccParams", "SccBlock", "ComponentWordRef", "scc_encode", "interleave",
    "deinterleave",
    "Constellation", "ChannelParams", "make_pam", "modulate", "transmit",
    "compute_llr", "hard_demap", "snr_db_to_rho",
    "MarkClass", "Thresholds", "Quantizer", "mark_bit", "quantize",
    "quantizer_from_threshold", "mark_quantized", "sabm_hub_select",
    "DecoderConfig", "SccWindow", "SoftDecodeOutcome", "SoftDecodeResult",
    "decode_stream", "iterate_window", "soft_decode_word",
    "miscorrection_check", "bit_flip_retry", "slide",
    "SimConfig", "BerRecord", "ComplexityCounters", "run_ber_sweep",
    "eta1", "eta2", "emit_results",
]
