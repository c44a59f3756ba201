"""Command-line pipeline around the library.

Four subcommands cover the full sensing workflow: ``simulate`` produces an
estimated spectrum from a synthetic measurement, ``drt`` inverts a spectrum
CSV to a relaxation-time distribution, ``calibrate`` fits the linear
concentration model, and ``pipeline`` chains all stages over a set of
samples.  Exit codes: 0 success, 1 usage or configuration error, 2 data
error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .calibration import CalibrationPoint, characteristic_tau, fit_linear, sensitivity
from .config import (
    calibration_options_from_config,
    channel_from_config,
    drt_options_from_config,
    excitation_from_config,
    load_config,
    model_from_config,
    samples_from_config,
)
from .drt import build_tau_grid, find_peaks, fit_drt
from .errors import ConfigError, ConvergenceError, DataError, SingularChannelError
from .estimator import estimate_impedance, simulate_channel
from .io import (
    atomic_write_text,
    peaks_from_payload,
    read_points_csv,
    read_result_json,
    read_spectrum_csv,
    sha256_of_file,
    write_calibration_json,
    write_points_csv,
    write_records_csv,
    write_result_json,
    write_spectrum_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


def _provenance(seed, config_echo, inputs=None) -> dict:
    prov = {
        "tool": "drtsense",
        "tool_version": __version__,
        "seed": seed,
        "config": config_echo,
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if inputs:
        prov["inputs"] = inputs
    return prov


def _resolve_seed(args, cfg) -> int:
    return args.seed if args.seed is not None else cfg["seed"]


def _out_dir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _run_drt(spectrum, opts):
    """Grid + fit + peaks from a drt options mapping."""
    grid = build_tau_grid(
        float(spectrum.freq_hz[0]),
        float(spectrum.freq_hz[-1]),
        opts["points_per_decade"],
        opts["pad_decades"],
    )
    result = fit_drt(
        spectrum,
        grid=grid,
        lam=opts["lambda_abs"],
        lam_rel=opts["lambda_rel"],
        nonneg=opts["nonneg"],
        include_series_capacitance=opts["series_capacitance"],
        regularizer=opts["regularizer"],
    )
    peaks = find_peaks(result, opts["min_prominence_ohm"])
    return result, peaks


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    seed = _resolve_seed(args, cfg)
    excitation = excitation_from_config(cfg, seed)
    model = model_from_config(cfg["model"])
    channel = channel_from_config(cfg, seed, excitation, model)
    record = simulate_channel(excitation, model, cfg["channel"]["periods"], channel)
    spectrum = estimate_impedance(record)

    out = _out_dir(args)
    csv_path = os.path.join(out, "spectrum.csv")
    write_spectrum_csv(csv_path, spectrum)
    written = [csv_path]
    if args.records:
        rec_path = os.path.join(out, "records.csv")
        write_records_csv(rec_path, record)
        written.append(rec_path)
    if args.plot:
        from .plots import nyquist_svg

        svg_path = os.path.join(out, "spectrum.svg")
        nyquist_svg(svg_path, spectrum, labels=["estimated"])
        written.append(svg_path)
    print(f"estimated {len(spectrum)} tones over {record.periods} periods")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_drt(args) -> int:
    cfg = load_config(args.config)
    d = cfg["drt"]
    if args.points_per_decade is not None:
        d["points_per_decade"] = args.points_per_decade
    if args.pad_decades is not None:
        d["pad_decades"] = args.pad_decades
    if args.lam is not None:
        d["lambda_abs"] = args.lam
    if args.min_prominence is not None:
        d["min_prominence_ohm"] = args.min_prominence
    if args.series_capacitance is not None:
        d["series_capacitance"] = args.series_capacitance
    opts = drt_options_from_config(cfg)
    seed = _resolve_seed(args, cfg)

    spectrum = read_spectrum_csv(args.spectrum)
    result, peaks = _run_drt(spectrum, opts)

    out = _out_dir(args)
    result_path = os.path.join(out, "result.json")
    prov = _provenance(
        seed,
        {"drt": opts},
        inputs={os.path.basename(args.spectrum): sha256_of_file(args.spectrum)},
    )
    write_result_json(result_path, result, peaks, prov)
    written = [result_path]
    if args.plot:
        from .plots import drt_svg

        svg_path = os.path.join(out, "drt.svg")
        drt_svg(svg_path, result, peaks)
        written.append(svg_path)
    print(
        f"r_inf = {result.r_inf:.6g} ohm, residual_rms = {result.residual_rms:.3g} ohm, "
        f"{len(peaks)} peak(s)"
    )
    for p in peaks:
        print(f"  tau = {p.tau:.6g} s, height = {p.height:.4g} ohm, area = {p.area:.4g} ohm")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _points_from_result_files(args, window) -> list:
    points = []
    for arg in args:
        path, sep, kappa_text = arg.rpartition("=")
        if not sep or not path:
            raise ConfigError(f"expected RESULT_JSON=KAPPA, got {arg!r}")
        try:
            kappa = float(kappa_text)
        except ValueError:
            raise ConfigError(f"{arg!r}: concentration is not a number") from None
        payload = read_result_json(path)
        label = os.path.splitext(os.path.basename(path))[0]
        try:
            tau = characteristic_tau(peaks_from_payload(payload), window)
        except DataError as exc:
            raise DataError(f"{path}: {exc}") from exc
        points.append(CalibrationPoint(tau, kappa, label))
    return points


def cmd_calibrate(args) -> int:
    cfg = load_config(args.config)
    seed = _resolve_seed(args, cfg)
    window = calibration_options_from_config(cfg)
    if args.points is not None and args.samples:
        raise ConfigError("give either result files or --points, not both")
    if args.points is not None:
        points = read_points_csv(args.points)
        inputs = {os.path.basename(args.points): sha256_of_file(args.points)}
    elif args.samples:
        points = _points_from_result_files(args.samples, window)
        inputs = {
            os.path.basename(p): sha256_of_file(p)
            for p in (s.rpartition("=")[0] for s in args.samples)
        }
    else:
        raise ConfigError("calibrate needs RESULT_JSON=KAPPA arguments or --points CSV")

    points = sorted(points, key=lambda p: (p.tau, p.kappa, p.label))
    model = fit_linear(points)

    out = _out_dir(args)
    cal_path = os.path.join(out, "calibration.json")
    prov = _provenance(seed, {"calibration": {"tau_window_s": list(window)}}, inputs)
    write_calibration_json(cal_path, model, points, prov)
    written = [cal_path]
    if args.plot:
        from .plots import calibration_svg

        svg_path = os.path.join(out, "calibration.svg")
        calibration_svg(svg_path, points, model)
        written.append(svg_path)
    print(
        f"slope = {sensitivity(model):.4g} wt.%/us, intercept = {model.intercept_b:.4g} wt.%, "
        f"r^2 = {model.r_squared:.6g} ({model.n_points} points)"
    )
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _write_manifest(out, manifest) -> None:
    atomic_write_text(
        os.path.join(out, "manifest.json"),
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
    )


def cmd_pipeline(args) -> int:
    cfg = load_config(args.config)
    seed = _resolve_seed(args, cfg)
    opts = drt_options_from_config(cfg)
    window = calibration_options_from_config(cfg)
    samples = samples_from_config(cfg)
    if not samples:
        raise ConfigError("pipeline needs at least one [[sample]] entry")
    excitation = excitation_from_config(cfg, seed)
    out = _out_dir(args)

    manifest = {
        "schema": "pipeline-manifest/1",
        "samples": [],
        "calibration": {"status": "pending"},
    }
    points = []
    for index, (label, kappa, model) in enumerate(samples):
        entry = {"label": label, "kappa_wtpct": kappa, "status": "pending"}
        manifest["samples"].append(entry)
        try:
            channel = channel_from_config(cfg, (seed, index), excitation, model)
            record = simulate_channel(excitation, model, cfg["channel"]["periods"], channel)
            spectrum = estimate_impedance(record)
            csv_path = os.path.join(out, f"{label}_spectrum.csv")
            write_spectrum_csv(csv_path, spectrum)
            entry["spectrum_csv"] = os.path.basename(csv_path)

            result, peaks = _run_drt(spectrum, opts)
            result_path = os.path.join(out, f"{label}_result.json")
            prov = _provenance(
                seed,
                {"drt": opts, "sample": {"label": label, "kappa_wtpct": kappa}},
                inputs={os.path.basename(csv_path): sha256_of_file(csv_path)},
            )
            write_result_json(result_path, result, peaks, prov)
            entry["result_json"] = os.path.basename(result_path)
            if args.plot:
                from .plots import drt_svg

                drt_svg(os.path.join(out, f"{label}_drt.svg"), result, peaks)

            tau = characteristic_tau(peaks, window)
            entry["tau_s"] = tau
            entry["status"] = "ok"
            points.append(CalibrationPoint(tau, kappa, label))
        except ConvergenceError as exc:
            entry["status"] = f"failed: {exc}"
            _write_manifest(out, manifest)
            raise
        except (DataError, SingularChannelError) as exc:
            entry["status"] = f"failed: {exc}"
            _write_manifest(out, manifest)
            raise DataError(f"sample {label}: {exc}") from exc

    print("sample      kappa_wtpct      tau_us")
    for p in points:
        print(f"{p.label:<12}{p.kappa:>8.3g}{p.tau * 1e6:>12.4g}")

    if len(points) < 2:
        print("warning: single sample, calibration skipped", file=sys.stderr)
        manifest["calibration"] = {"status": "skipped"}
        _write_manifest(out, manifest)
        return EXIT_OK

    model = fit_linear(points)
    cal_path = os.path.join(out, "calibration.json")
    prov = _provenance(seed, {"calibration": {"tau_window_s": list(window)}})
    write_calibration_json(cal_path, model, points, prov)
    write_points_csv(os.path.join(out, "points.csv"), points)
    if args.plot:
        from .plots import calibration_svg

        calibration_svg(os.path.join(out, "calibration.svg"), points, model)
    manifest["calibration"] = {"status": "ok", "calibration_json": "calibration.json"}
    _write_manifest(out, manifest)
    print(
        f"calibration: slope = {sensitivity(model):.4g} wt.%/us, "
        f"intercept = {model.intercept_b:.4g} wt.%, r^2 = {model.r_squared:.6g}"
    )
    print(f"wrote {cal_path}")
    return EXIT_OK


def _add_common(parser) -> None:
    parser.add_argument("--config", metavar="PATH", help="TOML configuration file")
    parser.add_argument("--out", metavar="DIR", default=".", help="output directory")
    parser.add_argument(
        "--seed", type=int, metavar="N", help="random seed (overrides the config)"
    )
    parser.add_argument("--plot", action="store_true", help="also write SVG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drtsense",
        description="Multisine impedance spectra, relaxation-time analysis, "
        "and concentration calibration.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("simulate", help="synthesize a measurement and estimate its spectrum")
    _add_common(p)
    p.add_argument("--records", action="store_true", help="also write time-domain records")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("drt", help="invert a spectrum CSV to a relaxation-time distribution")
    _add_common(p)
    p.add_argument("spectrum", metavar="SPECTRUM_CSV", help="input spectrum file")
    p.add_argument("--points-per-decade", type=int, metavar="N")
    p.add_argument("--pad-decades", type=float, metavar="D")
    p.add_argument("--lam", type=float, metavar="W", help="absolute regularization weight")
    p.add_argument("--min-prominence", type=float, metavar="OHM")
    p.add_argument("--series-capacitance", action=argparse.BooleanOptionalAction)
    p.set_defaults(func=cmd_drt)

    p = sub.add_parser("calibrate", help="fit the linear concentration model")
    _add_common(p)
    p.add_argument(
        "samples",
        nargs="*",
        metavar="RESULT_JSON=KAPPA",
        help="result file with its known concentration in wt.%%",
    )
    p.add_argument("--points", metavar="CSV", help="tau_s,kappa_wtpct table instead")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("pipeline", help="simulate, invert and calibrate a sample set")
    _add_common(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, SingularChannelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
