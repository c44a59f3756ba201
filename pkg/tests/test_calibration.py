import numpy as np
import pytest

from drtsense import (
    CalibrationModel,
    CalibrationPoint,
    Peak,
    characteristic_tau,
    fit_linear,
    predict,
    resolution,
    sensitivity,
)
from drtsense.errors import DataError


class TestFitLinear:
    def test_reference_points(self, reference_points):
        model = fit_linear(reference_points)
        assert model.r_squared == pytest.approx(0.9868, abs=5e-4)
        assert sensitivity(model) == pytest.approx(0.7667, abs=1e-3)
        assert model.n_points == 4

    def test_matches_polyfit(self, reference_points):
        taus = np.array([p.tau for p in reference_points])
        kappas = np.array([p.kappa for p in reference_points])
        slope_ref, intercept_ref = np.polyfit(taus, kappas, 1)
        model = fit_linear(reference_points)
        assert model.slope_a == pytest.approx(slope_ref, rel=1e-10)
        assert model.intercept_b == pytest.approx(intercept_ref, rel=1e-10)

    def test_two_points_define_exact_line(self):
        points = [CalibrationPoint(1e-6, 0.0), CalibrationPoint(2e-6, 1.0)]
        model = fit_linear(points)
        assert sensitivity(model) == pytest.approx(1.0, rel=1e-12)
        assert model.intercept_b == pytest.approx(-1.0, rel=1e-12)
        assert model.r_squared == 1.0

    def test_normal_equations_satisfied(self, reference_points):
        model = fit_linear(reference_points)
        taus = np.array([p.tau for p in reference_points])
        kappas = np.array([p.kappa for p in reference_points])
        res = kappas - (model.slope_a * taus + model.intercept_b)
        scale = np.max(np.abs(kappas))
        assert abs(res.sum()) <= 1e-10 * scale * len(taus)
        # slope gradient uses centered times; raw dot amplifies float error
        assert abs(res @ (taus - taus.mean())) <= 1e-10 * scale * np.max(np.abs(taus))

    def test_scaling_response_doubles_sensitivity(self, reference_points):
        base = fit_linear(reference_points)
        doubled = fit_linear(
            [CalibrationPoint(p.tau, 2.0 * p.kappa, p.label) for p in reference_points]
        )
        assert doubled.slope_a == pytest.approx(2.0 * base.slope_a, rel=1e-12)
        assert doubled.r_squared == pytest.approx(base.r_squared, rel=1e-12)

    def test_r_squared_affine_invariance(self, reference_points):
        base = fit_linear(reference_points)
        mapped = fit_linear(
            [
                CalibrationPoint(2.0 * p.tau + 1e-6, 3.0 * p.kappa + 0.1, p.label)
                for p in reference_points
            ]
        )
        assert mapped.r_squared == pytest.approx(base.r_squared, abs=1e-12)

    def test_exact_line_round_trip(self):
        taus = np.geomspace(1e-6, 1e-5, 7)
        points = [CalibrationPoint(t, 4e5 * t + 0.2) for t in taus]
        model = fit_linear(points)
        assert model.slope_a == pytest.approx(4e5, rel=1e-10)
        assert model.intercept_b == pytest.approx(0.2, rel=1e-10)
        assert model.r_squared == 1.0
        for point in points:
            assert predict(model, point.tau) == pytest.approx(point.kappa, rel=1e-10)

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(DataError):
            fit_linear([CalibrationPoint(1e-6, 0.5)])
        with pytest.raises(DataError):
            fit_linear([CalibrationPoint(1e-6, 0.5), CalibrationPoint(1e-6, 0.7)])
        with pytest.raises(DataError):
            fit_linear([])


class TestDerivedQuantities:
    def test_sensitivity_unit_conversion_is_exact(self, reference_points):
        model = fit_linear(reference_points)
        assert sensitivity(model) == model.slope_a * 1e-6

    def test_predict_reference_midpoint(self, reference_points):
        model = fit_linear(reference_points)
        assert predict(model, 2.85e-6) == pytest.approx(1.0, abs=0.1)

    def test_predict_simple_line(self):
        model = CalibrationModel(slope_a=1e6, intercept_b=0.0, r_squared=1.0, n_points=2)
        assert predict(model, 2e-6) == pytest.approx(2.0, rel=1e-12)

    def test_predict_passes_through_centroid(self, reference_points):
        model = fit_linear(reference_points)
        tau_bar = np.mean([p.tau for p in reference_points])
        kappa_bar = np.mean([p.kappa for p in reference_points])
        assert predict(model, tau_bar) == pytest.approx(kappa_bar, rel=1e-12)

    def test_predict_rejects_bad_tau(self, reference_points):
        model = fit_linear(reference_points)
        with pytest.raises(ValueError):
            predict(model, 0.0)
        with pytest.raises(ValueError):
            predict(model, -1e-6)

    def test_resolution_at_grid_cell(self, reference_points):
        model = fit_linear(reference_points)
        # one cell of a 20 points-per-decade grid near 1.6 us
        delta_tau = 1.59e-7
        assert resolution(model, delta_tau) == pytest.approx(0.122, abs=1e-3)

    def test_resolution_scales_linearly(self, reference_points):
        model = fit_linear(reference_points)
        assert resolution(model, 2e-7) == pytest.approx(2.0 * resolution(model, 1e-7), rel=1e-12)
        with pytest.raises(ValueError):
            resolution(model, 0.0)


class TestCharacteristicTau:
    @staticmethod
    def _peak(tau):
        return Peak(tau=tau, height=10.0, area=5.0, prominence=10.0)

    def test_picks_smallest_in_window(self):
        peaks = [self._peak(3e-8), self._peak(2e-6), self._peak(4e-6)]
        assert characteristic_tau(peaks) == 2e-6

    def test_respects_custom_window(self):
        peaks = [self._peak(2e-6), self._peak(4e-5)]
        assert characteristic_tau(peaks, window=(1e-5, 1e-4)) == 4e-5

    def test_no_match_raises(self):
        with pytest.raises(DataError):
            characteristic_tau([self._peak(3e-8)])
        with pytest.raises(DataError):
            characteristic_tau([])

    def test_bad_window_rejected(self):
        with pytest.raises(ValueError):
            characteristic_tau([self._peak(2e-6)], window=(1e-5, 1e-7))


class TestValidation:
    def test_point_validation(self):
        with pytest.raises(ValueError):
            CalibrationPoint(0.0, 0.5)
        with pytest.raises(ValueError):
            CalibrationPoint(1e-6, -0.5)

    def test_model_validation(self):
        with pytest.raises(ValueError):
            CalibrationModel(1.0, 0.0, 1.5, 4)
        with pytest.raises(ValueError):
            CalibrationModel(1.0, 0.0, 0.9, 1)
