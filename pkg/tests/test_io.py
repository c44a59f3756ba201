import json

import numpy as np
import pytest

from drtsense import (
    CalibrationPoint,
    DrtResult,
    ImpedanceSpectrum,
    Peak,
    build_tau_grid,
    fit_linear,
)
from drtsense.errors import DataError
from drtsense.io import (
    peaks_from_payload,
    read_calibration_json,
    read_points_csv,
    read_result_json,
    read_spectrum_csv,
    write_calibration_json,
    write_points_csv,
    write_records_csv,
    write_result_json,
    write_spectrum_csv,
)


@pytest.fixture
def awkward_spectrum():
    freqs = np.array([1953.125, 97656.25, 1e6 / 3.0])
    freqs.sort()
    z = np.array([100.1 - 50.3j, 1.0 / 3.0 + 0.0j, 7e-17 - 1e300j])
    return ImpedanceSpectrum(freqs, z)


class TestSpectrumCsv:
    def test_round_trip_is_exact(self, tmp_path, awkward_spectrum):
        path = tmp_path / "spectrum.csv"
        write_spectrum_csv(path, awkward_spectrum)
        back = read_spectrum_csv(path)
        assert np.array_equal(back.freq_hz, awkward_spectrum.freq_hz)
        assert np.array_equal(back.z, awkward_spectrum.z)

    def test_header_written(self, tmp_path, awkward_spectrum):
        path = tmp_path / "spectrum.csv"
        write_spectrum_csv(path, awkward_spectrum)
        first = path.read_text().splitlines()[0]
        assert first == "freq_hz,z_re_ohm,z_im_ohm"

    def test_extra_columns_tolerated(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("freq_hz,z_re_ohm,z_im_ohm,note\n1000,5,-1,hello\n2000,4,-2,x\n")
        spectrum = read_spectrum_csv(path)
        assert len(spectrum) == 2
        assert spectrum.z[0] == 5 - 1j

    @pytest.mark.parametrize(
        "body,fragment",
        [
            ("f,re,im\n1000,5,-1\n", "header"),
            ("freq_hz,z_re_ohm,z_im_ohm\n1000,nan,-1\n2000,4,-2\n", "line 2"),
            ("freq_hz,z_re_ohm,z_im_ohm\n1000,5,inf\n2000,4,-2\n", "line 2"),
            ("freq_hz,z_re_ohm,z_im_ohm\n1000,5,-1\n2000,abc,-2\n", "line 3"),
            ("freq_hz,z_re_ohm,z_im_ohm\n1000,5\n", "line 2"),
            ("freq_hz,z_re_ohm,z_im_ohm\n2000,5,-1\n1000,4,-2\n", "increasing"),
            ("freq_hz,z_re_ohm,z_im_ohm\n", "no data"),
            ("", "empty"),
        ],
    )
    def test_rejects_malformed(self, tmp_path, body, fragment):
        path = tmp_path / "bad.csv"
        path.write_text(body)
        with pytest.raises(DataError, match=fragment):
            read_spectrum_csv(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("freq_hz,z_re_ohm,z_im_ohm\n1000,5,-1\n\n2000,4,-2\n\n")
        assert len(read_spectrum_csv(path)) == 2


class TestResultJson:
    @pytest.fixture
    def result(self):
        grid = build_tau_grid(1e3, 1e6, 10, 1.0)
        rng = np.random.default_rng(0)
        gamma = rng.uniform(0.0, 5.0, len(grid))
        return DrtResult(grid, gamma, 49.807943, 0.0123, 1.7e-3, c_inv=1e6)

    def test_round_trip(self, tmp_path, result):
        peaks = [Peak(2.0000843e-6, 88.25, 100.3136, 88.25)]
        path = tmp_path / "result.json"
        write_result_json(path, result, peaks, provenance={"seed": 0})
        payload = read_result_json(path)
        assert payload["tau_grid"] == [float(t) for t in result.grid.taus]
        assert payload["points_per_decade"] == result.grid.points_per_decade
        assert payload["gamma"] == [float(g) for g in result.gamma]
        assert payload["r_inf"] == result.r_inf
        assert payload["lambda"] == result.lam
        assert payload["residual_rms"] == result.residual_rms
        assert payload["c_series"] == result.c_series
        assert peaks_from_payload(payload) == peaks
        assert payload["provenance"]["seed"] == 0

    def test_schema_enforced(self, tmp_path, result):
        path = tmp_path / "result.json"
        write_result_json(path, result, [], provenance={})
        payload = json.loads(path.read_text())
        assert payload["schema"] == "relaxation-result/1"
        payload["schema"] = "other/9"
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError, match="schema"):
            read_result_json(path)

    def test_length_mismatch_rejected(self, tmp_path, result):
        path = tmp_path / "result.json"
        write_result_json(path, result, [], provenance={})
        payload = json.loads(path.read_text())
        payload["gamma"] = payload["gamma"][:-1]
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError):
            read_result_json(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(DataError):
            read_result_json(path)

    def test_peaks_from_payload_rejects_malformed(self):
        payload = {
            "peaks": [{"tau_s": 2e-6, "height_ohm": 3.0, "area_ohm": 1.5, "prominence_ohm": 3.0}]
        }
        assert peaks_from_payload(payload) == [Peak(2e-6, 3.0, 1.5, 3.0)]
        with pytest.raises(DataError):
            peaks_from_payload({"peaks": [{"tau_s": 2e-6}]})

    def test_no_series_capacitance_serializes_null(self, tmp_path, result):
        bare = DrtResult(result.grid, result.gamma, result.r_inf, result.lam, result.residual_rms)
        path = tmp_path / "r.json"
        write_result_json(path, bare, [], provenance={})
        payload = read_result_json(path)
        assert payload["c_series"] is None


class TestCalibrationJson:
    def test_round_trip(self, tmp_path, reference_points):
        model = fit_linear(reference_points)
        path = tmp_path / "calibration.json"
        write_calibration_json(path, model, reference_points, provenance={"seed": 1})
        payload = read_calibration_json(path)
        assert payload["schema"] == "calibration/1"
        assert payload["slope_wtpct_per_s"] == model.slope_a
        assert payload["slope_wtpct_per_us"] == model.slope_a * 1e-6
        assert payload["intercept_wtpct"] == model.intercept_b
        assert payload["r_squared"] == model.r_squared
        assert payload["n_points"] == 4
        assert [row["tau_s"] for row in payload["points"]] == [
            p.tau for p in reference_points
        ]
        assert payload["provenance"]["seed"] == 1

    def test_schema_enforced(self, tmp_path, reference_points):
        model = fit_linear(reference_points)
        path = tmp_path / "calibration.json"
        write_calibration_json(path, model, reference_points, provenance={})
        payload = json.loads(path.read_text())
        payload["schema"] = "nope/0"
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError):
            read_calibration_json(path)


class TestPointsCsv:
    def test_round_trip_with_labels(self, tmp_path, reference_points):
        path = tmp_path / "points.csv"
        write_points_csv(path, reference_points)
        back = read_points_csv(path)
        assert back == list(reference_points)

    def test_labels_optional_on_read(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("tau_s,kappa_wtpct\n1.6e-06,0.1\n2e-06,0.5\n")
        points = read_points_csv(path)
        assert points == [CalibrationPoint(1.6e-6, 0.1), CalibrationPoint(2e-6, 0.5)]

    def test_rejects_bad_rows(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("tau_s,kappa_wtpct\n-1e-6,0.1\n")
        with pytest.raises(DataError):
            read_points_csv(path)
        path.write_text("tau_s,kappa_wtpct\n1e-6,nan\n")
        with pytest.raises(DataError, match="line 2"):
            read_points_csv(path)


class TestRecordsCsv:
    def test_columns_and_length(self, tmp_path, excitation):
        from drtsense import RcLadder, simulate_channel

        record = simulate_channel(excitation, RcLadder(100.0, ()), periods=2)
        path = tmp_path / "records.csv"
        write_records_csv(path, record)
        lines = path.read_text().splitlines()
        assert lines[0] == "t_s,v_i_volt,v_o_volt"
        assert len(lines) == 1 + record.v_i.samples.size
        t0, vi0, vo0 = (float(tok) for tok in lines[1].split(","))
        assert t0 == 0.0
        assert vi0 == record.v_i.samples[0]
        assert vo0 == record.v_o.samples[0]


class TestAtomicWrites:
    def test_no_temp_files_left(self, tmp_path, awkward_spectrum):
        write_spectrum_csv(tmp_path / "a.csv", awkward_spectrum)
        leftovers = [p for p in tmp_path.iterdir() if p.name != "a.csv"]
        assert leftovers == []

    def test_overwrite_is_clean(self, tmp_path, awkward_spectrum):
        path = tmp_path / "a.csv"
        write_spectrum_csv(path, awkward_spectrum)
        first = path.read_bytes()
        write_spectrum_csv(path, awkward_spectrum)
        assert path.read_bytes() == first
