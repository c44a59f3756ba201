"""File formats: spectrum CSV, result/calibration JSON, record CSV.

All writers are atomic (temp file in the target directory, then rename) and
locale-independent.  Floats in CSV are serialized with 17 significant
digits and JSON numbers use shortest round-trip form, so write-then-read
reproduces in-memory values exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile

import numpy as np

from .calibration import CalibrationModel, CalibrationPoint
from .circuits import ImpedanceSpectrum
from .drt import Peak
from .errors import DataError

__all__ = [
    "SPECTRUM_HEADER",
    "POINTS_HEADER",
    "RESULT_SCHEMA",
    "CALIBRATION_SCHEMA",
    "atomic_write_text",
    "sha256_of_file",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "write_records_csv",
    "write_result_json",
    "read_result_json",
    "peaks_from_payload",
    "write_calibration_json",
    "read_calibration_json",
    "read_points_csv",
    "write_points_csv",
]

SPECTRUM_HEADER = "freq_hz,z_re_ohm,z_im_ohm"
POINTS_HEADER = "tau_s,kappa_wtpct"
RESULT_SCHEMA = "relaxation-result/1"
CALIBRATION_SCHEMA = "calibration/1"


def atomic_write_text(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_of_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(token: str, line_no: int, column: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DataError(f"line {line_no}: {column} is not a number: {token!r}") from None
    if not math.isfinite(value):
        raise DataError(f"line {line_no}: {column} must be finite, got {token!r}")
    return value


def _read_csv_rows(path, expected_header, n_min_cols, n_max_cols):
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise DataError(f"{path}: empty file")
    header = lines[0].strip()
    header_cols = header.split(",")
    if header_cols[: len(expected_header.split(","))] != expected_header.split(","):
        raise DataError(f"{path}: expected header {expected_header!r}, got {header!r}")
    # columns beyond the expected ones are tolerated if the header declares them
    n_max_cols = max(n_max_cols, len(header_cols))
    rows = []
    for i, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = [p.strip() for p in raw.split(",")]
        if not n_min_cols <= len(parts) <= n_max_cols:
            raise DataError(f"line {i}: expected {n_min_cols} columns, got {len(parts)}")
        rows.append((i, parts))
    if not rows:
        raise DataError(f"{path}: no data rows")
    return rows


def write_spectrum_csv(path, spectrum: ImpedanceSpectrum) -> None:
    lines = [SPECTRUM_HEADER]
    for f, z in zip(spectrum.freq_hz, spectrum.z):
        lines.append(f"{_fmt(f)},{_fmt(z.real)},{_fmt(z.imag)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_spectrum_csv(path) -> ImpedanceSpectrum:
    """Parse a spectrum CSV, rejecting non-finite values and bad ordering."""
    rows = _read_csv_rows(path, SPECTRUM_HEADER, 3, 3)
    freq, re, im = [], [], []
    for line_no, parts in rows:
        freq.append(_parse_float(parts[0], line_no, "freq_hz"))
        re.append(_parse_float(parts[1], line_no, "z_re_ohm"))
        im.append(_parse_float(parts[2], line_no, "z_im_ohm"))
    try:
        return ImpedanceSpectrum(freq, np.array(re) + 1j * np.array(im))
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


def write_records_csv(path, record) -> None:
    """Time-domain acquisition record as t_s,v_i_volt,v_o_volt rows."""
    t = np.arange(record.v_i.samples.size) / record.v_i.sample_rate
    lines = ["t_s,v_i_volt,v_o_volt"]
    for ti, vi, vo in zip(t, record.v_i.samples, record.v_o.samples):
        lines.append(f"{_fmt(ti)},{_fmt(vi)},{_fmt(vo)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_result_json(path, result, peaks, provenance=None) -> None:
    payload = {
        "schema": RESULT_SCHEMA,
        "tau_grid": [float(t) for t in result.grid.taus],
        "points_per_decade": result.grid.points_per_decade,
        "gamma": [float(g) for g in result.gamma],
        "r_inf": result.r_inf,
        "c_series": result.c_series,
        "lambda": result.lam,
        "residual_rms": result.residual_rms,
        "peaks": [
            {
                "tau_s": p.tau,
                "height_ohm": p.height,
                "area_ohm": p.area,
                "prominence_ohm": p.prominence,
            }
            for p in peaks
        ],
        "provenance": provenance or {},
    }
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_result_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc
    if payload.get("schema") != RESULT_SCHEMA:
        raise DataError(f"{path}: expected schema {RESULT_SCHEMA!r}")
    if len(payload.get("tau_grid", [])) != len(payload.get("gamma", [])):
        raise DataError(f"{path}: tau_grid and gamma lengths differ")
    return payload


def peaks_from_payload(payload: dict) -> list:
    peaks = []
    for entry in payload.get("peaks", []):
        try:
            peaks.append(
                Peak(
                    tau=float(entry["tau_s"]),
                    height=float(entry["height_ohm"]),
                    area=float(entry["area_ohm"]),
                    prominence=float(entry["prominence_ohm"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed peak entry {entry!r}: {exc}") from exc
    return peaks


def write_calibration_json(path, model: CalibrationModel, points, provenance=None) -> None:
    payload = {
        "schema": CALIBRATION_SCHEMA,
        "points": [
            {"tau_s": p.tau, "kappa_wtpct": p.kappa, "label": p.label} for p in points
        ],
        "slope_wtpct_per_us": model.slope_a * 1e-6,
        "slope_wtpct_per_s": model.slope_a,
        "intercept_wtpct": model.intercept_b,
        "r_squared": model.r_squared,
        "n_points": model.n_points,
        "provenance": provenance or {},
    }
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_calibration_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc
    if payload.get("schema") != CALIBRATION_SCHEMA:
        raise DataError(f"{path}: expected schema {CALIBRATION_SCHEMA!r}")
    return payload


def read_points_csv(path) -> list:
    """Parse calibration points from tau_s,kappa_wtpct[,label] rows."""
    rows = _read_csv_rows(path, POINTS_HEADER, 2, 3)
    points = []
    for line_no, parts in rows:
        tau = _parse_float(parts[0], line_no, "tau_s")
        kappa = _parse_float(parts[1], line_no, "kappa_wtpct")
        label = parts[2] if len(parts) == 3 else ""
        try:
            points.append(CalibrationPoint(tau, kappa, label))
        except ValueError as exc:
            raise DataError(f"line {line_no}: {exc}") from exc
    return points


def write_points_csv(path, points) -> None:
    lines = [POINTS_HEADER + ",label"]
    for p in points:
        lines.append(f"{_fmt(p.tau)},{_fmt(p.kappa)},{p.label}")
    atomic_write_text(path, "\n".join(lines) + "\n")
