"""CLI parsing, precedence, and end-to-end run."""

import json

import pytest

from stairdec.cli import (
    main,
    parse_code,
    parse_snr_grid,
    resolve_settings,
    sim_config_from_settings,
)


def test_parse_code_forms():
    assert parse_code("255,239,2,ext,0") == (255, 239, 2, True, 0)
    assert parse_code("255,231,3") == (255, 231, 3, False, 0)
    assert parse_code("255,231,3,plain,1") == (255, 231, 3, False, 1)
    assert parse_code("15,7,2,ext") == (15, 7, 2, True, 0)
    with pytest.raises(ValueError):
        parse_code("255,239")
    with pytest.raises(ValueError):
        parse_code("255,239,2,maybe")


def test_parse_snr_grid():
    assert parse_snr_grid("6.5") == (6.5,)
    assert parse_snr_grid("6.0:0.25:6.5") == (6.0, 6.25, 6.5)
    assert parse_snr_grid("4:1:4") == (4.0,)
    with pytest.raises(ValueError):
        parse_snr_grid("6.0:0:6.5")


def test_defaults_mirror_reference_setup():
    s = resolve_settings([], environ={})
    cfg = sim_config_from_settings(s)
    assert cfg.code_params == (255, 239, 2, True, 0)
    assert cfg.modulation_order == 2
    assert cfg.decoder.variant == "isabm"
    assert cfg.decoder.window_size == 9
    assert cfg.decoder.iterations == 7
    assert cfg.decoder.bdd_only_pairs == 2
    assert cfg.decoder.thresholds.delta1 == 10.0
    assert cfg.decoder.thresholds.delta2 == 2.5
    assert cfg.decoder.quant_bits == 0
    assert not cfg.interleave


def test_precedence_cli_config_env(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"window": 5, "iters": 3}))
    # config file beats the flag
    s = resolve_settings(["--window", "7", "--config", str(conf)], environ={})
    assert s["window"] == 5
    # env beats the config file
    s = resolve_settings(["--config", str(conf)],
                         environ={"STAIRDEC_WINDOW": "6"})
    assert s["window"] == 6
    assert s["iters"] == 3


def test_unknown_config_key_rejected(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError):
        resolve_settings(["--config", str(conf)], environ={})


def test_main_end_to_end(tmp_path, capsys):
    out = tmp_path / "r.csv"
    side = tmp_path / "r.json"
    rc = main([
        "--code", "15,11,1,ext,0", "--snr-db", "8.0", "--decoder", "standard",
        "--window", "4", "--iters", "2", "--k", "0",
        "--min-block-errors", "3", "--max-bits", "30000",
        "--seed", "5", "--out", str(out), "--json", str(side),
    ])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 2
    assert lines[0].startswith("snr_db,")
    sidecar = json.loads(side.read_text())
    assert sidecar["config"]["code_params"] == [15, 11, 1, True, 0]
    captured = capsys.readouterr()
    assert "wrote" in captured.out


def test_main_rerun_identical(tmp_path):
    args = ["--code", "15,11,1,ext,0", "--snr-db", "6.0", "--decoder", "isabm",
            "--window", "4", "--iters", "2", "--k", "1",
            "--min-block-errors", "3", "--max-bits", "20000", "--seed", "9"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    main(args + ["--out", str(out1)])
    main(args + ["--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
