"""
Calibrating relaxation time against particle concentration
==========================================================

With the characteristic relaxation time extracted per sample, the sensor
reduces to a straight line: concentration = a * tau + b.  The slope is
the sensitivity and the product of slope and tau-grid resolution bounds
the smallest resolvable concentration step.
"""

import pathlib

from drtsense import (
    CalibrationPoint,
    fit_linear,
    predict,
    resolution,
    sensitivity,
)
from drtsense.plots import calibration_svg

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# four reference suspensions: extracted tau versus known concentration
points = [
    CalibrationPoint(1.60e-6, 0.1, "s1"),
    CalibrationPoint(2.00e-6, 0.5, "s2"),
    CalibrationPoint(2.85e-6, 1.0, "s3"),
    CalibrationPoint(3.33e-6, 1.5, "s4"),
]

model = fit_linear(points)
print(f"sensitivity : {sensitivity(model):.4f} wt.% per us")
print(f"intercept   : {model.intercept_b:.4f} wt.%")
print(f"r^2         : {model.r_squared:.4f}")

# predict the concentration of an unknown sample from its relaxation time
tau_unknown = 2.5e-6
print(f"\ntau = {tau_unknown * 1e6:.2f} us -> {predict(model, tau_unknown):.2f} wt.%")

# one grid cell of a 20 points-per-decade tau grid near 2 us
delta_tau = 2e-6 * (10 ** (1 / 20) - 1)
print(f"concentration resolution at 2 us: {resolution(model, delta_tau):.3f} wt.%")

calibration_svg(out / "calibration.svg", points, model)
print(f"wrote {out / 'calibration.svg'}")
