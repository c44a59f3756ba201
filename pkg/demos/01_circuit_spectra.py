"""
Equivalent-circuit impedance of a particle suspension
=====================================================

The measurement cell is modeled as an electrode capacitance in series
with the suspending medium resistance, which is itself shunted by the
particle branch (particle resistance plus particle capacitance).  Raising
the particle concentration raises the particle capacitance and with it
the characteristic relaxation time tau = c_p * (r_m + r_p).
"""

import pathlib

import numpy as np

from drtsense import CircuitParams, colloid_debye_form, synthesize_spectrum
from drtsense.plots import nyquist_svg

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# one circuit per suspension concentration: only c_p changes
concentrations = [0.1, 0.5, 1.0, 1.5]  # wt.%
taus = [1.60e-6, 2.00e-6, 2.85e-6, 3.33e-6]  # s
models = [CircuitParams(c_e=1e-6, r_m=100.0, r_p=100.0, c_p=tau / 200.0) for tau in taus]

# the resistive part of each circuit is a single Debye relaxation
print("kappa_wtpct   z0_ohm   z_inf_ohm   tau_us")
for kappa, model in zip(concentrations, models):
    z0, z_inf, tau = colloid_debye_form(model)
    print(f"{kappa:>11.1f} {z0:>8.1f} {z_inf:>11.1f} {tau * 1e6:>8.2f}")

# evaluate each circuit on a log frequency sweep and draw the Nyquist arcs
freqs = np.geomspace(1e3, 1e6, 200)
spectra = [synthesize_spectrum(model, freqs) for model in models]
labels = [f"{kappa} wt.%" for kappa in concentrations]
nyquist_svg(out / "circuit_spectra.svg", spectra, labels=labels)
print(f"wrote {out / 'circuit_spectra.svg'}")
