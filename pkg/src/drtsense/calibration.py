"""Linear concentration calibration against characteristic relaxation times.

The sensing model is a straight line kappa = a*tau + b fitted by ordinary
least squares to (relaxation time, known concentration) pairs.  Sensitivity
is the slope, resolution is the concentration step matching a given
relaxation-time step, and goodness of fit is the coefficient of
determination (squared Pearson correlation for a line with intercept).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError

__all__ = [
    "CalibrationPoint",
    "CalibrationModel",
    "fit_linear",
    "sensitivity",
    "predict",
    "resolution",
    "characteristic_tau",
]

# Concentration information lives in the fast relaxation region; slower
# processes come from electrode polarization, not the particles.
DEFAULT_TAU_WINDOW = (1e-7, 1e-5)


@dataclass(frozen=True)
class CalibrationPoint:
    """One calibration sample: relaxation time (s) and concentration (wt.%)."""

    tau: float
    kappa: float
    label: str = ""

    def __post_init__(self):
        if not (self.tau > 0.0 and math.isfinite(self.tau)):
            raise ValueError("tau must be finite and > 0")
        if not (self.kappa >= 0.0 and math.isfinite(self.kappa)):
            raise ValueError("kappa must be finite and >= 0")


@dataclass(frozen=True)
class CalibrationModel:
    """Fitted line kappa = slope_a * tau + intercept_b.

    ``slope_a`` is in wt.% per second, ``intercept_b`` in wt.%.
    """

    slope_a: float
    intercept_b: float
    r_squared: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError("a calibration needs at least 2 points")
        if not (math.isfinite(self.slope_a) and math.isfinite(self.intercept_b)):
            raise ValueError("slope and intercept must be finite")
        if not (0.0 <= self.r_squared <= 1.0):
            raise ValueError("r_squared must lie in [0, 1]")


def fit_linear(points) -> CalibrationModel:
    """Ordinary least squares of concentration on relaxation time.

    Raises
    ------
    DataError
        On fewer than 2 points or when all tau values coincide.
    """
    points = list(points)
    if len(points) < 2:
        raise DataError("calibration needs at least 2 points")
    tau = np.array([p.tau for p in points])
    kappa = np.array([p.kappa for p in points])
    if np.ptp(tau) == 0.0:
        raise DataError("all relaxation times coincide; the line is singular")
    t_c = tau - tau.mean()
    slope = float(np.dot(t_c, kappa) / np.dot(t_c, t_c))
    intercept = float(kappa.mean() - slope * tau.mean())
    residual = kappa - (slope * tau + intercept)
    sse = float(np.dot(residual, residual))
    k_c = kappa - kappa.mean()
    sst = float(np.dot(k_c, k_c))
    if sst == 0.0:
        r_squared = 1.0  # flat data fitted exactly by a flat line
    else:
        r_squared = min(max(1.0 - sse / sst, 0.0), 1.0)
    return CalibrationModel(slope, intercept, r_squared, len(points))


def sensitivity(model: CalibrationModel) -> float:
    """Slope in wt.% per microsecond."""
    return model.slope_a * 1e-6


def predict(model: CalibrationModel, tau: float) -> float:
    """Concentration in wt.% at relaxation time ``tau`` (s)."""
    if not tau > 0.0:
        raise ValueError("tau must be > 0")
    return model.slope_a * tau + model.intercept_b


def resolution(model: CalibrationModel, delta_tau: float) -> float:
    """Concentration step (wt.%) matching a relaxation-time step (s)."""
    if not delta_tau > 0.0:
        raise ValueError("delta_tau must be > 0")
    return abs(model.slope_a) * delta_tau


def characteristic_tau(peaks, window=DEFAULT_TAU_WINDOW) -> float:
    """Smallest peak relaxation time inside ``window`` (s).

    This is the sensing rule: among extracted peaks, the concentration
    carrier is the fastest relaxation inside the particle window.

    Raises
    ------
    DataError
        If no peak falls inside the window.
    """
    lo, hi = window
    if not (0.0 < lo < hi):
        raise ValueError("window must satisfy 0 < lo < hi")
    inside = sorted(p.tau for p in peaks if lo <= p.tau <= hi)
    if not inside:
        raise DataError(f"no relaxation peak inside [{lo:g}, {hi:g}] s")
    return inside[0]
