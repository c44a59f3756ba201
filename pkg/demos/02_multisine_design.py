"""
Designing a random-phase multisine excitation
=============================================

A multisine packs many test frequencies into one periodic record.  Each
tone sits on an exact DFT bin (coherent sampling, no leakage) and gets a
random phase so the tones do not pile up into a sharp spike.
"""

import numpy as np

from drtsense import crest_factor, design_multisine

# 52 log-spaced tones of 0.1 V between 1 kHz and 1 MHz,
# sampled at 16 MHz with 16384 samples per period
excitation = design_multisine(seed=0)
df = excitation.fs / excitation.n_samples
print(f"{excitation.n_tones} tones on bins {excitation.bins[0]}..{excitation.bins[-1]}")
print(f"bin width {df:.4f} Hz, band {excitation.freq_hz[0]:.4g}..{excitation.freq_hz[-1]:.4g} Hz")

# every tone frequency is an integer multiple of the bin width
assert np.all(excitation.freq_hz == excitation.bins * df)

# one rendered period: zero mean, RMS fixed by the tone budget
record = excitation.render(periods=1)
x = record.samples
print(f"rendered {x.size} samples, mean {x.mean():+.2e} V, rms {x.std():.4f} V")

# the random phases keep the peak-to-RMS ratio (crest factor) moderate;
# aligning all phases piles the tones into one spike
import dataclasses

print("\nseed   crest factor")
for seed in range(5):
    cf = crest_factor(design_multisine(seed=seed).render(1))
    print(f"{seed:>4}   {cf:.3f}")
aligned = dataclasses.replace(
    excitation, phases=np.full(excitation.n_tones, 2.0 * np.pi)
)
print(f"all phases aligned: {crest_factor(aligned.render(1)):.3f}")
