"""Monte Carlo BER sweep engine: frame generation, stop rules, BDD-call
instrumentation, and CSV/JSON result emission.

A frame is one independent staircase stream of window_size + 40 blocks.
Post-FEC statistics are counted on information positions of blocks that were
emitted through the full decoding pipeline, excluding the first window_size
of them as warm-up (the stream starts from a known all-zero block, which
would otherwise bias the error rate down).  Frames are simulated on
independent counter-based RNG substreams keyed by (master seed, SNR index,
frame index), so results are identical for any worker count.
"""

import functools
import json
import multiprocessing
from dataclasses import asdict, dataclass, field

import numpy as np

from .bch import build_code
from .channel import (
    DEFAULT_LLR_NOISE_VAR,
    ChannelParams,
    compute_llr,
    hard_demap,
    make_pam,
    modulate,
    snr_db_to_rho,
    transmit,
)
from .decoder import DecoderConfig, decode_stream
from .staircase import SccParams, deinterleave_array, interleave, scc_encode

DEFAULT_CODE = (255, 239, 2, True, 0)
FRAME_EXTRA_BLOCKS = 40

_STREAM_INFO, _STREAM_NOISE, _STREAM_DECODER, _STREAM_INTERLEAVER = range(4)


@dataclass
class ComplexityCounters:
    """Per-(iteration, pair) syndrome-computation (D) and error-pattern-
    estimation (P) counts plus the total BDD invocation tally, summed over
    observed window positions."""

    w: int
    window_size: int
    iterations: int
    n_total: int = 0
    windows_observed: int = 0
    d_sum: np.ndarray = field(default=None, repr=False)
    p_sum: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        shape = (max(self.iterations, 1), self.window_size - 1)
        if self.d_sum is None:
            self.d_sum = np.zeros(shape, dtype=np.int64)
        if self.p_sum is None:
            self.p_sum = np.zeros(shape, dtype=np.int64)

    def add_window(self, n, d, p):
        self.n_total += int(n)
        self.d_sum += d
        self.p_sum += p
        self.windows_observed += 1

    def merge(self, other):
        self.n_total += other.n_total
        self.windows_observed += other.windows_observed
        self.d_sum += other.d_sum
        self.p_sum += other.p_sum

    @property
    def n_bar(self):
        if self.windows_observed == 0:
            return 0.0
        return self.n_total / self.windows_observed

    def d_bar(self):
        return self.d_sum / max(self.windows_observed, 1)

    def p_bar(self):
        return self.p_sum / max(self.windows_observed, 1)


def eta1(counters, w, window_size, iterations):
    """Relative BDD-count increase over the standard decoder's
    w * (window_size - 1) * iterations calls per window."""
    n_sd = w * (window_size - 1) * iterations
    if n_sd <= 0:
        raise ValueError("w * (window_size - 1) * iterations must be positive")
    return (counters.n_bar - n_sd) / n_sd


def eta2(soft_counters, std_counters, v_sc, v_ep):
    """Time-weighted relative complexity increase of the soft decoder.

    ``v_sc`` and ``v_ep`` are the user-supplied times for one syndrome
    computation and one error-pattern estimation; both counter sets must
    come from identical channel realizations.
    """
    if v_sc < 0 or v_ep < 0 or (v_sc == 0 and v_ep == 0):
        raise ValueError("need non-negative v_sc, v_ep, not both zero")
    num = float((soft_counters.d_bar() * v_sc + soft_counters.p_bar() * v_ep).sum())
    den = float((std_counters.d_bar() * v_sc + std_counters.p_bar() * v_ep).sum())
    if den == 0:
        raise ValueError("standard-decoder counters are empty")
    return num / den - 1.0


@dataclass(frozen=True)
class SimConfig:
    """One BER sweep: code, modulation, SNR grid, decoder, and stop rule."""

    code_params: tuple = DEFAULT_CODE  # (n_inner, k, t, extended, shortened_bits)
    modulation_order: int = 2
    snr_db_grid: tuple = (6.0,)
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    interleave: bool = False
    interleaver_seed: int = 0
    noise_var: float = 0.5
    llr_noise_var: float = DEFAULT_LLR_NOISE_VAR
    min_block_errors: int = 100
    min_bits: int = 0
    max_bits: int = 10 ** 9
    workers: int = 1
    master_seed: int = 1

    def __post_init__(self):
        if not self.snr_db_grid:
            raise ValueError("SNR grid must be nonempty")
        if self.min_block_errors <= 0 or self.max_bits <= 0:
            raise ValueError("stop-rule bounds must be positive")
        if self.modulation_order < 2 or self.modulation_order & (self.modulation_order - 1):
            raise ValueError("modulation order must be a power of two")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class BerRecord:
    """Per-SNR-point error statistics."""

    snr_db: float
    bits_simulated: int
    bit_errors: int
    post_fec_ber: float
    pre_fec_ber: float
    blocks_emitted: int
    block_errors: int
    censored: bool


@dataclass
class _FrameTally:
    bits: int = 0
    bit_errors: int = 0
    blocks: int = 0
    block_errors: int = 0
    prefec_bits: int = 0
    prefec_errors: int = 0


@functools.lru_cache(maxsize=8)
def _cached_code(code_params):
    n_inner, k, t, extended, shortened = code_params
    return build_code(n_inner, k, t, extended=extended, shortened_bits=shortened)


def _stream_seed(cfg, snr_index, frame_index, purpose):
    ss = np.random.SeedSequence(
        entropy=[cfg.master_seed, snr_index, frame_index, purpose])
    return ss


def _run_frame(args):
    """Simulate one frame; returns (_FrameTally, ComplexityCounters)."""
    cfg, snr_index, frame_index = args
    code = _cached_code(cfg.code_params)
    dec = cfg.decoder
    L = dec.window_size
    const = make_pam(cfg.modulation_order)
    rho = snr_db_to_rho(cfg.snr_db_grid[snr_index])
    ch = ChannelParams(rho=rho, noise_var=cfg.noise_var,
                       llr_noise_var=cfg.llr_noise_var)

    il_seed = int(_stream_seed(cfg, snr_index, frame_index,
                               _STREAM_INTERLEAVER).generate_state(1)[0])
    params = SccParams(code=code, interleave=cfg.interleave,
                       interleaver_seed=il_seed ^ cfg.interleaver_seed)
    w = params.w
    n_blocks = L + FRAME_EXTRA_BLOCKS

    info_rng = np.random.Generator(np.random.Philox(
        _stream_seed(cfg, snr_index, frame_index, _STREAM_INFO)))
    noise_rng = np.random.Generator(np.random.Philox(
        _stream_seed(cfg, snr_index, frame_index, _STREAM_NOISE)))
    dec_seed = int(_stream_seed(cfg, snr_index, frame_index,
                                _STREAM_DECODER).generate_state(1)[0])
    dec = DecoderConfig(
        variant=dec.variant, window_size=dec.window_size,
        iterations=dec.iterations, bdd_only_pairs=dec.bdd_only_pairs,
        thresholds=dec.thresholds, quant_bits=dec.quant_bits,
        rng_seed=dec_seed ^ dec.rng_seed)

    info_chunks = [info_rng.integers(0, 2, (w, params.info_cols), dtype=np.uint8)
                   for _ in range(n_blocks)]
    tx_blocks = list(scc_encode(params, info_chunks))

    # transmit the interleaved stream
    m = const.bits_per_symbol
    flat = np.concatenate([interleave(params, b).bits.ravel() for b in tx_blocks])
    pad = (-flat.size) % m
    flat_tx = np.concatenate([flat, np.zeros(pad, dtype=np.uint8)]) if pad else flat
    y = transmit(ch, modulate(const, flat_tx), noise_rng)
    hd = hard_demap(const, ch, y).ravel()[:flat.size]
    rel = np.abs(compute_llr(const, ch, y)).ravel()[:flat.size]

    tally = _FrameTally()
    tally.prefec_bits = int(flat.size)
    tally.prefec_errors = int(np.count_nonzero(hd != flat))

    need_rel = dec.variant != "standard"
    per_block = w * w

    def received():
        for i in range(n_blocks):
            sl = slice(i * per_block, (i + 1) * per_block)
            bits = deinterleave_array(params, hd[sl].reshape(w, w), i + 1)
            rels = (deinterleave_array(params, rel[sl].reshape(w, w), i + 1)
                    if need_rel else None)
            yield bits, rels

    counters = ComplexityCounters(w, L, dec.iterations)
    info_cols = params.info_cols
    first_counted = L + 1
    last_counted = n_blocks - (L - 1)
    for idx, decoded in enumerate(decode_stream(code, dec, received(), counters), start=1):
        if first_counted <= idx <= last_counted:
            errs = int(np.count_nonzero(
                decoded[:, :info_cols] != info_chunks[idx - 1]))
            tally.bits += w * info_cols
            tally.bit_errors += errs
            tally.blocks += 1
            tally.block_errors += int(errs > 0)
    return tally, counters


def _frame_args(cfg, snr_index):
    frame = 0
    while True:
        yield cfg, snr_index, frame
        frame += 1


def run_ber_sweep(cfg):
    """Run the configured sweep; returns ([BerRecord], [ComplexityCounters]).

    Per SNR point, frames stream until the counted block errors reach
    ``min_block_errors`` (and at least ``min_bits`` bits were counted) or the
    bit budget ``max_bits`` is exhausted; a point that never reaches the
    block-error target is flagged censored.  Frames are accumulated strictly
    in frame order, so the result is independent of the worker count.
    """
    records = []
    counters_list = []
    pool = multiprocessing.Pool(cfg.workers) if cfg.workers > 1 else None
    try:
        for si, snr in enumerate(cfg.snr_db_grid):
            agg = _FrameTally()
            counters = ComplexityCounters(
                _cached_code(cfg.code_params).n_c // 2,
                cfg.decoder.window_size, cfg.decoder.iterations)
            args = _frame_args(cfg, si)
            done = False
            while not done:
                if pool is None:
                    results = [_run_frame(next(args))]
                else:
                    batch = [next(args) for _ in range(cfg.workers * 2)]
                    results = pool.map(_run_frame, batch)
                for tally, frame_counters in results:
                    agg.bits += tally.bits
                    agg.bit_errors += tally.bit_errors
                    agg.blocks += tally.blocks
                    agg.block_errors += tally.block_errors
                    agg.prefec_bits += tally.prefec_bits
                    agg.prefec_errors += tally.prefec_errors
                    counters.merge(frame_counters)
                    if ((agg.block_errors >= cfg.min_block_errors
                         and agg.bits >= cfg.min_bits)
                            or agg.bits >= cfg.max_bits):
                        done = True
                        break
            records.append(BerRecord(
                snr_db=float(snr),
                bits_simulated=agg.bits,
                bit_errors=agg.bit_errors,
                post_fec_ber=agg.bit_errors / agg.bits if agg.bits else 0.0,
                pre_fec_ber=agg.prefec_errors / agg.prefec_bits if agg.prefec_bits else 0.0,
                blocks_emitted=agg.blocks,
                block_errors=agg.block_errors,
                censored=agg.block_errors < cfg.min_block_errors,
            ))
            counters_list.append(counters)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return records, counters_list


CSV_HEADER = "snr_db,pre_fec_ber,post_fec_ber,bits,bit_errors,blocks,block_errors,n_bar,eta1"


def emit_results(records, counters_list, csv_path, json_path=None, config=None):
    """Write the sweep results as CSV (fixed header) plus a JSON sidecar with
    the full config echo and per-(iteration, pair) counter matrices."""
    lines = [CSV_HEADER]
    rows = []
    for rec, ctr in zip(records, counters_list):
        e1 = eta1(ctr, ctr.w, ctr.window_size, ctr.iterations) \
            if ctr.windows_observed else 0.0
        lines.append(
            f"{rec.snr_db:.6g},{rec.pre_fec_ber:.8e},{rec.post_fec_ber:.8e},"
            f"{rec.bits_simulated},{rec.bit_errors},{rec.blocks_emitted},"
            f"{rec.block_errors},{ctr.n_bar:.6f},{e1:.8f}")
        rows.append({
            "snr_db": rec.snr_db,
            "pre_fec_ber": rec.pre_fec_ber,
            "post_fec_ber": rec.post_fec_ber,
            "bits": rec.bits_simulated,
            "bit_errors": rec.bit_errors,
            "blocks": rec.blocks_emitted,
            "block_errors": rec.block_errors,
            "censored": rec.censored,
            "n_total": ctr.n_total,
            "windows_observed": ctr.windows_observed,
            "n_bar": ctr.n_bar,
            "eta1": e1,
            "syndrome_counts": ctr.d_sum.tolist(),
            "pattern_estimation_counts": ctr.p_sum.tolist(),
        })
    with open(csv_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    if json_path is not None:
        payload = {"records": rows}
        if config is not None:
            payload["config"] = asdict(config)
            payload["seed"] = config.master_seed
        with open(json_path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
