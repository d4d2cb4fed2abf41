"""Sweep engine tests: stop rules, counters, eta metrics, CSV/JSON output,
and worker-count invariance."""

import json
import math

import numpy as np
import pytest

from stairdec.decoder import DecoderConfig
from stairdec.harness import (
    CSV_HEADER,
    BerRecord,
    ComplexityCounters,
    SimConfig,
    _run_frame,
    emit_results,
    eta1,
    eta2,
    run_ber_sweep,
)

# small, fast setups: toy code keeps frames light
TOY_CODE = (15, 11, 1, True, 0)


def toy_config(**kw):
    dec = kw.pop("decoder", DecoderConfig(variant="standard", window_size=4,
                                          iterations=2, bdd_only_pairs=0))
    base = dict(code_params=TOY_CODE, snr_db_grid=(9.0,), decoder=dec,
                min_block_errors=5, max_bits=40_000, workers=1, master_seed=3)
    base.update(kw)
    return SimConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        toy_config(snr_db_grid=())
    with pytest.raises(ValueError):
        toy_config(min_block_errors=0)
    with pytest.raises(ValueError):
        toy_config(modulation_order=3)
    with pytest.raises(ValueError):
        toy_config(workers=0)


def test_noiseless_channel_zero_ber():
    cfg = toy_config(snr_db_grid=(30.0,), max_bits=5_000)
    records, counters = run_ber_sweep(cfg)
    rec = records[0]
    assert rec.post_fec_ber == 0.0
    assert rec.pre_fec_ber == 0.0
    assert rec.block_errors == 0
    assert rec.censored  # never reached the block-error target
    assert rec.bits_simulated >= 5_000


def test_prefec_matches_gaussian_tail():
    """Pre-FEC column against Q(sqrt(rho)/sigma) for 2-PAM, 3-sigma band."""
    cfg = toy_config(snr_db_grid=(4.0,), max_bits=200_000, min_block_errors=10 ** 9)
    records, _ = run_ber_sweep(cfg)
    rec = records[0]
    rho = 10 ** 0.4
    p = 0.5 * math.erfc(math.sqrt(rho / 0.5) / math.sqrt(2))
    n = rec.bits_simulated / 0.375  # info fraction of the toy staircase
    sigma = math.sqrt(p * (1 - p) / n)
    assert abs(rec.pre_fec_ber - p) < 4 * sigma


def test_post_fec_ber_definition():
    cfg = toy_config(snr_db_grid=(4.0,), max_bits=50_000)
    records, _ = run_ber_sweep(cfg)
    rec = records[0]
    assert rec.post_fec_ber == rec.bit_errors / rec.bits_simulated
    assert rec.block_errors <= rec.blocks_emitted


def test_stop_rule_block_errors():
    cfg = toy_config(snr_db_grid=(2.0,), min_block_errors=7, max_bits=10 ** 9)
    records, _ = run_ber_sweep(cfg)
    rec = records[0]
    assert rec.block_errors >= 7
    assert not rec.censored


def test_frame_warmup_exclusion():
    """Counted blocks per frame = total - warmup - flushed tail."""
    cfg = toy_config()
    tally, counters = _run_frame((cfg, 0, 0))
    L = cfg.decoder.window_size
    n_blocks = L + 40
    expect_blocks = n_blocks - (L - 1) - L
    assert tally.blocks == expect_blocks
    w = 8
    info_cols = 11 - 8  # k_c - w for the toy code
    assert tally.bits == expect_blocks * w * info_cols
    assert counters.windows_observed == n_blocks - L + 2


def test_interleaver_path_roundtrip():
    """With interleaving on, a clean channel still round-trips exactly."""
    cfg = toy_config(snr_db_grid=(30.0,), interleave=True, max_bits=5_000)
    records, _ = run_ber_sweep(cfg)
    assert records[0].post_fec_ber == 0.0


def test_determinism_same_seed():
    cfg = toy_config(snr_db_grid=(4.0,), max_bits=40_000)
    a, _ = run_ber_sweep(cfg)
    b, _ = run_ber_sweep(cfg)
    assert a == b


def test_worker_count_invariance(tmp_path):
    """Identical CSV bytes for 1 vs 2 workers under the same master seed."""
    paths = []
    for workers in (1, 2):
        cfg = toy_config(snr_db_grid=(4.0, 5.0), max_bits=30_000, workers=workers)
        records, counters = run_ber_sweep(cfg)
        path = tmp_path / f"w{workers}.csv"
        emit_results(records, counters, path, tmp_path / f"w{workers}.json", config=cfg)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_csv_format(tmp_path):
    cfg = toy_config(snr_db_grid=(4.0, 6.0), max_bits=20_000)
    records, counters = run_ber_sweep(cfg)
    csv_path = tmp_path / "out.csv"
    json_path = tmp_path / "out.json"
    emit_results(records, counters, csv_path, json_path, config=cfg)
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[0] == ("snr_db,pre_fec_ber,post_fec_ber,bits,bit_errors,"
                        "blocks,block_errors,n_bar,eta1")
    assert len(lines) == 1 + len(cfg.snr_db_grid)
    sidecar = json.loads(json_path.read_text())
    assert sidecar["seed"] == cfg.master_seed
    assert sidecar["config"]["modulation_order"] == 2
    recs = sidecar["records"]
    assert len(recs) == 2
    for r in recs:
        assert "censored" in r
        d = np.array(r["syndrome_counts"])
        p = np.array(r["pattern_estimation_counts"])
        assert d.shape == (cfg.decoder.iterations, cfg.decoder.window_size - 1)
        assert (p <= d).all()


def test_emit_results_empty(tmp_path):
    path = tmp_path / "empty.csv"
    emit_results([], [], path)
    assert path.read_text() == CSV_HEADER + "\n"


def test_counter_invariants_standard():
    cfg = toy_config(snr_db_grid=(4.0,), max_bits=20_000)
    _, counters = run_ber_sweep(cfg)
    ctr = counters[0]
    w, L, ell = 8, 4, 2
    # standard decoding: D is exactly w per (iteration, pair); P <= D
    assert (ctr.d_sum == w * ctr.windows_observed).all()
    assert (ctr.p_sum <= ctr.d_sum).all()
    assert ctr.n_total == ctr.windows_observed * w * (L - 1) * ell
    assert eta1(ctr, w, L, ell) == 0.0


def test_counter_invariants_soft():
    dec = DecoderConfig(variant="isabm", window_size=4, iterations=2,
                        bdd_only_pairs=1)
    cfg = toy_config(snr_db_grid=(3.0,), decoder=dec, max_bits=20_000)
    _, counters = run_ber_sweep(cfg)
    ctr = counters[0]
    w = 8
    d_bar = ctr.d_bar()
    # plain pairs at most w, soft pairs at most 2w
    assert (d_bar[:, 0] <= w + 1e-9).all()
    assert (d_bar[:, 1:] <= 2 * w + 1e-9).all()
    assert (ctr.p_sum <= ctr.d_sum).all()
    assert eta1(ctr, w, 4, 2) >= 0.0


def test_eta1_reference_values():
    ctr = ComplexityCounters(w=128, window_size=9, iterations=7)
    ctr.add_window(7168, np.zeros((7, 8), dtype=np.int64),
                   np.zeros((7, 8), dtype=np.int64))
    assert eta1(ctr, 128, 9, 7) == 0.0
    ctr2 = ComplexityCounters(w=128, window_size=9, iterations=7)
    ctr2.add_window(7168 + 1602, np.zeros((7, 8), dtype=np.int64),
                    np.zeros((7, 8), dtype=np.int64))
    assert abs(eta1(ctr2, 128, 9, 7) - 1602 / 7168) < 1e-12


def _counters_with(d, p):
    ctr = ComplexityCounters(w=8, window_size=4, iterations=2)
    ctr.add_window(int(d.sum() + p.sum()), d.astype(np.int64), p.astype(np.int64))
    return ctr


def test_eta2_identical_counters_zero():
    d = np.full((2, 3), 8)
    p = np.full((2, 3), 2)
    assert eta2(_counters_with(d, p), _counters_with(d, p), 1.0, 1.0) == 0.0


def test_eta2_syndrome_ratio_degenerate():
    """v_ep = 0 and equal D counts: eta2 reduces to the D ratio minus 1."""
    d1 = np.full((2, 3), 16)
    d0 = np.full((2, 3), 8)
    p = np.full((2, 3), 3)
    got = eta2(_counters_with(d1, p), _counters_with(d0, p), 1.0, 0.0)
    assert abs(got - (16 / 8 - 1)) < 1e-12


def test_eta2_consistent_with_eta1_when_equal_weights():
    """v_sc = v_ep: eta2 equals the (D+P)-total ratio minus 1."""
    rng = np.random.default_rng(0)
    d_soft = rng.integers(8, 16, (2, 3))
    p_soft = rng.integers(0, 8, (2, 3))
    d_std = np.full((2, 3), 8)
    p_std = rng.integers(0, 8, (2, 3))
    soft = _counters_with(d_soft, p_soft)
    std = _counters_with(d_std, p_std)
    got = eta2(soft, std, 2.0, 2.0)
    expect = (d_soft.sum() + p_soft.sum()) / (d_std.sum() + p_std.sum()) - 1
    assert abs(got - expect) < 1e-12


def test_eta2_validation():
    d = np.full((2, 3), 8)
    p = np.full((2, 3), 2)
    with pytest.raises(ValueError):
        eta2(_counters_with(d, p), _counters_with(d, p), 0.0, 0.0)
    with pytest.raises(ValueError):
        eta2(_counters_with(d, p), _counters_with(d, p), -1.0, 1.0)


def test_eta1_decreases_with_snr():
    """Soft-decoder retry overhead shrinks as the channel improves."""
    dec = DecoderConfig(variant="isabm", window_size=4, iterations=2,
                        bdd_only_pairs=1)
    etas = []
    for snr in (3.0, 6.0):
        cfg = toy_config(snr_db_grid=(snr,), decoder=dec, max_bits=60_000,
                         min_block_errors=10 ** 9)
        _, counters = run_ber_sweep(cfg)
        etas.append(eta1(counters[0], 8, 4, 2))
    assert etas[1] < etas[0]
