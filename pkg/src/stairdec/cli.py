"""Command-line front end for BER sweeps.

Precedence for every setting: built-in default < command-line flag <
--config JSON file < STAIRDEC_* environment variable.
"""

import argparse
import json
import os
import sys

from .channel import DEFAULT_LLR_NOISE_VAR
from .decoder import DecoderConfig
from .harness import SimConfig, emit_results, run_ber_sweep
from .marking import Thresholds

_ENV_PREFIX = "STAIRDEC_"

_KEYS = {
    # name: (type, default, help)
    "code": (str, "255,239,2,ext,0",
             "component code as n_inner,k,t[,ext|plain[,shortened_bits]]"),
    "mod": (int, 2, "PAM order (2, 4, 8, 16)"),
    "snr_db": (str, "5.2", "SNR grid in dB: single value or start:step:stop"),
    "decoder": (str, "isabm", "decoder variant: standard | sabm | isabm"),
    "window": (int, 9, "decoding window size in blocks"),
    "iters": (int, 7, "iterations per window position"),
    "k": (int, 2, "oldest pairs decoded with plain BDD"),
    "delta1": (float, 10.0, "reliable-bit threshold"),
    "delta2": (float, 2.5, "unreliable-bit threshold"),
    "quant_bits": (int, 0, "reliability quantizer bits (0 = floating point)"),
    "interleave": (bool, False, "enable the per-block random interleaver"),
    "llr_noise_var": (float, DEFAULT_LLR_NOISE_VAR,
                      "noise variance used inside the LLR computation"),
    "seed": (int, 1, "master seed"),
    "min_block_errors": (int, 100, "stop rule: block errors per point"),
    "max_bits": (float, 1e9, "stop rule: bit budget per point"),
    "workers": (int, 1, "parallel worker processes"),
    "out": (str, "ber.csv", "CSV output path"),
    "json": (str, None, "JSON sidecar path"),
}


def parse_code(text):
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) < 3:
        raise ValueError(f"bad code spec {text!r}")
    n_inner, k, t = (int(parts[0]), int(parts[1]), int(parts[2]))
    extended = False
    shortened = 0
    if len(parts) >= 4 and parts[3]:
        if parts[3] in ("ext", "extended", "1", "true"):
            extended = True
        elif parts[3] in ("plain", "noext", "0", "false"):
            extended = False
        else:
            raise ValueError(f"bad extension flag {parts[3]!r}")
    if len(parts) >= 5 and parts[4]:
        shortened = int(parts[4])
    return n_inner, k, t, extended, shortened


def parse_snr_grid(text):
    text = str(text)
    if ":" not in text:
        return (float(text),)
    start, step, stop = (float(v) for v in text.split(":"))
    if step <= 0:
        raise ValueError("SNR step must be positive")
    count = int(round((stop - start) / step)) + 1
    grid = tuple(round(start + i * step, 10) for i in range(count))
    if not grid or grid[-1] > stop + 1e-9:
        raise ValueError(f"bad SNR range {text!r}")
    return grid


def _coerce(key, value):
    typ = _KEYS[key][0]
    if typ is bool and isinstance(value, str):
        return value.lower() in ("1", "true", "yes", "on")
    if value is None:
        return None
    return typ(value)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="stairdec",
        description="Monte Carlo BER sweeps for staircase codes with "
                    "standard, sabm, and isabm window decoders.")
    for key, (typ, default, help_) in _KEYS.items():
        flag = "--" + key.replace("_", "-")
        if typ is bool:
            ap.add_argument(flag, action="store_true", default=default, help=help_)
        else:
            ap.add_argument(flag, type=typ, default=default, help=help_)
    ap.add_argument("--config", type=str, default=None,
                    help="JSON file whose settings override the flags")
    return ap


def resolve_settings(argv=None, environ=None):
    environ = os.environ if environ is None else environ
    args = vars(build_parser().parse_args(argv))
    config_path = args.pop("config")
    if config_path:
        with open(config_path) as fh:
            overrides = json.load(fh)
        for key, value in overrides.items():
            if key not in _KEYS:
                raise ValueError(f"unknown config key {key!r}")
            args[key] = _coerce(key, value)
    for key in _KEYS:
        env = environ.get(_ENV_PREFIX + key.upper())
        if env is not None:
            args[key] = _coerce(key, env)
    return args


def sim_config_from_settings(s):
    decoder = DecoderConfig(
        variant=s["decoder"],
        window_size=s["window"],
        iterations=s["iters"],
        bdd_only_pairs=s["k"],
        thresholds=Thresholds(delta1=s["delta1"], delta2=s["delta2"]),
        quant_bits=s["quant_bits"],
        rng_seed=0,
    )
    return SimConfig(
        code_params=parse_code(s["code"]),
        modulation_order=s["mod"],
        snr_db_grid=parse_snr_grid(s["snr_db"]),
        decoder=decoder,
        interleave=s["interleave"],
        llr_noise_var=s["llr_noise_var"],
        min_block_errors=s["min_block_errors"],
        max_bits=int(s["max_bits"]),
        workers=s["workers"],
        master_seed=s["seed"],
    )


def main(argv=None):
    settings = resolve_settings(argv)
    cfg = sim_config_from_settings(settings)
    records, counters = run_ber_sweep(cfg)
    emit_results(records, counters, settings["out"], settings["json"], config=cfg)
    for rec in records:
        flag = " censored" if rec.censored else ""
        print(f"snr {rec.snr_db:6.2f} dB  pre {rec.pre_fec_ber:.3e}  "
              f"post {rec.post_fec_ber:.3e}  blocks {rec.blocks_emitted}  "
              f"block_errs {rec.block_errors}{flag}")
    print(f"wrote {settings['out']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
