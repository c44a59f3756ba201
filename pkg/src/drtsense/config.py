"""TOML configuration for the command-line tools.

The zero-config defaults reproduce the reference experiment: 52 log-spaced
tones of 0.1 V between 1 kHz and 1 MHz, 8 acquired periods, a 100 ohm
transimpedance resistor, and four colloid samples whose relaxation times
land at 1.60, 2.00, 2.85 and 3.33 us for concentrations of 0.1, 0.5, 1.0
and 1.5 wt.%.
"""

from __future__ import annotations

import copy
import math

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .circuits import CircuitParams, RcLadder
from .errors import ConfigError
from .estimator import ChannelConfig, output_noise_std
from .multisine import design_multisine

__all__ = [
    "DEFAULTS",
    "load_config",
    "excitation_from_config",
    "channel_from_config",
    "model_from_config",
    "drt_options_from_config",
    "calibration_options_from_config",
    "samples_from_config",
]


def _colloid_sample(label, kappa, tau_s):
    # c_p sets the sample relaxation time through tau = c_p*(r_m + r_p)
    return {
        "label": label,
        "kappa_wtpct": kappa,
        "model": {
            "kind": "colloid",
            "c_e_f": 1e-6,
            "r_m_ohm": 100.0,
            "r_p_ohm": 100.0,
            "c_p_f": tau_s / 200.0,
        },
    }


DEFAULTS = {
    "seed": 0,
    "excitation": {
        "f_min_hz": 1e3,
        "f_max_hz": 1e6,
        "n_tones": 52,
        "amplitude_v": 0.1,
        "sample_rate_hz": 16e6,
        "samples_per_period": 16384,
    },
    "channel": {
        "r_f_ohm": 100.0,
        "noise_std_vi_v": 0.0,
        "noise_std_vo_v": 0.0,
        "snr_db": None,
        "periods": 8,
    },
    "model": {
        "kind": "colloid",
        "c_e_f": 1e-6,
        "r_m_ohm": 100.0,
        "r_p_ohm": 100.0,
        "c_p_f": 1e-8,
        "r_inf_ohm": 100.0,
        "stages": [],
    },
    "drt": {
        "points_per_decade": 20,
        "pad_decades": 1.0,
        "lambda_rel": 1e-3,
        "lambda_abs": None,
        "nonneg": True,
        "series_capacitance": True,
        "regularizer": "second-difference",
        "min_prominence_ohm": 1.0,
    },
    "calibration": {
        "tau_window_s": [1e-7, 1e-5],
    },
    "sample": [
        _colloid_sample("s1", 0.1, 1.60e-6),
        _colloid_sample("s2", 0.5, 2.00e-6),
        _colloid_sample("s3", 1.0, 2.85e-6),
        _colloid_sample("s4", 1.5, 3.33e-6),
    ],
}

_SAMPLE_KEYS = {"label", "kappa_wtpct", "model"}


def _merge_section(base: dict, user: dict, section: str) -> dict:
    merged = dict(base)
    for key, value in user.items():
        if key not in base:
            raise ConfigError(f"unknown key {section}.{key}")
        merged[key] = value
    return merged


def load_config(path=None) -> dict:
    """Defaults overlaid with a TOML file, rejecting unknown keys."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        return cfg
    try:
        with open(path, "rb") as fh:
            user = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    for key, value in user.items():
        if key == "seed":
            if not isinstance(value, int) or value < 0:
                raise ConfigError("seed must be a non-negative integer")
            cfg["seed"] = value
        elif key == "sample":
            if not isinstance(value, list):
                raise ConfigError("sample must be an array of tables")
            cfg["sample"] = [_check_sample(entry, i) for i, entry in enumerate(value)]
        elif key in ("excitation", "channel", "model", "drt", "calibration"):
            if not isinstance(value, dict):
                raise ConfigError(f"{key} must be a table")
            cfg[key] = _merge_section(DEFAULTS[key], value, key)
        else:
            raise ConfigError(f"unknown section {key!r}")
    return cfg


def _check_sample(entry, index: int) -> dict:
    if not isinstance(entry, dict):
        raise ConfigError(f"sample[{index}] must be a table")
    unknown = set(entry) - _SAMPLE_KEYS
    if unknown:
        raise ConfigError(f"unknown key sample[{index}].{sorted(unknown)[0]}")
    if "kappa_wtpct" not in entry or "model" not in entry:
        raise ConfigError(f"sample[{index}] needs kappa_wtpct and model")
    out = {
        "label": str(entry.get("label", f"s{index + 1}")),
        "kappa_wtpct": entry["kappa_wtpct"],
        "model": _merge_section(DEFAULTS["model"], entry["model"], f"sample[{index}].model"),
    }
    return out


def excitation_from_config(cfg: dict, seed):
    e = cfg["excitation"]
    try:
        return design_multisine(
            f_min=e["f_min_hz"],
            f_max=e["f_max_hz"],
            n_tones=e["n_tones"],
            amplitude=e["amplitude_v"],
            fs=e["sample_rate_hz"],
            n_samples=e["samples_per_period"],
            seed=seed,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"excitation: {exc}") from exc


def channel_from_config(cfg: dict, seed, excitation=None, model=None) -> ChannelConfig:
    c = cfg["channel"]
    std_vo = c["noise_std_vo_v"]
    if c["snr_db"] is not None:
        if excitation is None or model is None:
            raise ConfigError("channel.snr_db needs an excitation and a model")
        std_vo = output_noise_std(excitation, model, c["r_f_ohm"], c["snr_db"])
    try:
        return ChannelConfig(c["r_f_ohm"], c["noise_std_vi_v"], std_vo, seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"channel: {exc}") from exc


def model_from_config(section: dict):
    kind = section.get("kind")
    try:
        if kind == "colloid":
            return CircuitParams(
                c_e=section["c_e_f"],
                r_m=section["r_m_ohm"],
                r_p=section["r_p_ohm"],
                c_p=section["c_p_f"],
            )
        if kind == "ladder":
            stages = section["stages"]
            if not isinstance(stages, list):
                raise ConfigError("model.stages must be an array of [r_ohm, c_f] pairs")
            pairs = []
            for st in stages:
                if not (isinstance(st, (list, tuple)) and len(st) == 2):
                    raise ConfigError("model.stages entries must be [r_ohm, c_f] pairs")
                pairs.append((float(st[0]), float(st[1])))
            return RcLadder(float(section["r_inf_ohm"]), tuple(pairs))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"model: {exc}") from exc
    raise ConfigError(f"model.kind must be 'colloid' or 'ladder', got {kind!r}")


def drt_options_from_config(cfg: dict) -> dict:
    d = cfg["drt"]
    for key in ("points_per_decade",):
        if not isinstance(d[key], int) or d[key] < 1:
            raise ConfigError(f"drt.{key} must be a positive integer")
    if not (isinstance(d["pad_decades"], (int, float)) and d["pad_decades"] >= 0):
        raise ConfigError("drt.pad_decades must be >= 0")
    if d["lambda_abs"] is not None and not d["lambda_abs"] >= 0:
        raise ConfigError("drt.lambda_abs must be >= 0")
    if not d["lambda_rel"] >= 0:
        raise ConfigError("drt.lambda_rel must be >= 0")
    if d["regularizer"] not in ("second-difference", "identity"):
        raise ConfigError("drt.regularizer must be 'second-difference' or 'identity'")
    if not (isinstance(d["min_prominence_ohm"], (int, float)) and d["min_prominence_ohm"] >= 0):
        raise ConfigError("drt.min_prominence_ohm must be >= 0")
    return dict(d)


def calibration_options_from_config(cfg: dict) -> tuple:
    window = cfg["calibration"]["tau_window_s"]
    if not (
        isinstance(window, (list, tuple))
        and len(window) == 2
        and all(isinstance(v, (int, float)) and math.isfinite(v) for v in window)
        and 0 < window[0] < window[1]
    ):
        raise ConfigError("calibration.tau_window_s must be [lo, hi] with 0 < lo < hi")
    return float(window[0]), float(window[1])


def samples_from_config(cfg: dict) -> list:
    """(label, kappa, model) triples for the pipeline command."""
    out = []
    for i, entry in enumerate(cfg["sample"]):
        kappa = entry["kappa_wtpct"]
        if not (isinstance(kappa, (int, float)) and math.isfinite(kappa) and kappa >= 0):
            raise ConfigError(f"sample[{i}].kappa_wtpct must be a finite number >= 0")
        out.append((entry["label"], float(kappa), model_from_config(entry["model"])))
    return out
