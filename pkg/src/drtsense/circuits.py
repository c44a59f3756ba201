"""Forward impedance models for colloidal suspensions.

Two model families are provided:

* :class:`CircuitParams` - electrode capacitance in series with the medium
  resistance shunted by a particle branch (series R-C).  This is the lumped
  circuit commonly used for dielectric particles suspended in a conductive
  matrix.
* :class:`RcLadder` - a high-frequency resistance in series with parallel
  RC stages, i.e. a discrete relaxation-time spectrum.  Used both to
  synthesize test spectra and as the ground truth for inversion oracles.

All evaluation functions are pure and accept scalar or array frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CircuitParams",
    "RcLadder",
    "ImpedanceSpectrum",
    "eval_colloid_circuit",
    "colloid_debye_form",
    "eval_rc_ladder",
    "evaluate_model",
    "synthesize_spectrum",
]


def _check_freq(freq):
    f = np.asarray(freq, dtype=float)
    if f.size == 0:
        raise ValueError("frequency input is empty")
    if not np.all(np.isfinite(f)) or np.any(f <= 0.0):
        raise ValueError("frequencies must be finite and > 0")
    return f


@dataclass(frozen=True)
class CircuitParams:
    """Lumped colloid circuit: C_e in series with R_m || (R_p + C_p).

    ``c_p = 0`` or ``r_p = inf`` encode an open particle branch.
    """

    c_e: float
    r_m: float
    r_p: float
    c_p: float

    def __post_init__(self):
        if not (self.c_e > 0.0 and math.isfinite(self.c_e)):
            raise ValueError("c_e must be finite and > 0")
        if not (self.r_m > 0.0 and math.isfinite(self.r_m)):
            raise ValueError("r_m must be finite and > 0")
        if not self.r_p >= 0.0:  # +inf allowed (open branch)
            raise ValueError("r_p must be >= 0")
        if not (self.c_p >= 0.0 and math.isfinite(self.c_p)):
            raise ValueError("c_p must be finite and >= 0")

    @property
    def open_branch(self) -> bool:
        return self.c_p == 0.0 or math.isinf(self.r_p)


@dataclass(frozen=True)
class RcLadder:
    """Series resistance plus parallel RC stages, stored ascending in tau."""

    r_inf: float
    stages: tuple = field(default=())

    def __post_init__(self):
        if not (self.r_inf >= 0.0 and math.isfinite(self.r_inf)):
            raise ValueError("r_inf must be finite and >= 0")
        stages = []
        for r, c in self.stages:
            r = float(r)
            c = float(c)
            if not (r > 0.0 and math.isfinite(r) and c > 0.0 and math.isfinite(c)):
                raise ValueError("stage resistances and capacitances must be finite and > 0")
            stages.append((r, c))
        stages.sort(key=lambda rc: rc[0] * rc[1])  # canonical order
        object.__setattr__(self, "stages", tuple(stages))

    @property
    def taus(self) -> np.ndarray:
        return np.array([r * c for r, c in self.stages])

    @property
    def stage_resistances(self) -> np.ndarray:
        return np.array([r for r, _ in self.stages])


class ImpedanceSpectrum:
    """Complex impedance sampled on a strictly increasing frequency grid."""

    def __init__(self, freq_hz, z, metadata=None):
        freq = np.asarray(freq_hz, dtype=float).copy()
        z = np.asarray(z, dtype=complex).copy()
        if freq.ndim != 1 or z.shape != freq.shape:
            raise ValueError("freq_hz and z must be 1-d arrays of equal length")
        if freq.size == 0:
            raise ValueError("spectrum must contain at least one point")
        if not np.all(np.isfinite(freq)) or np.any(freq <= 0.0):
            raise ValueError("frequencies must be finite and > 0")
        if np.any(np.diff(freq) <= 0.0):
            raise ValueError("frequencies must be strictly increasing")
        if not np.all(np.isfinite(z.real)) or not np.all(np.isfinite(z.imag)):
            raise ValueError("impedance values must be finite")
        freq.flags.writeable = False
        z.flags.writeable = False
        self.freq_hz = freq
        self.z = z
        self.metadata = dict(metadata) if metadata else {}

    def __len__(self):
        return self.freq_hz.size

    @property
    def z_re(self) -> np.ndarray:
        return self.z.real

    @property
    def z_im(self) -> np.ndarray:
        return self.z.imag

    def scaled(self, factor: float) -> "ImpedanceSpectrum":
        """Spectrum with every impedance multiplied by ``factor``."""
        return ImpedanceSpectrum(self.freq_hz, self.z * factor, self.metadata)

    def __repr__(self):
        return (
            f"ImpedanceSpectrum({len(self)} pts, "
            f"{self.freq_hz[0]:.6g}-{self.freq_hz[-1]:.6g} Hz)"
        )


def _particle_term(params: CircuitParams, omega):
    """Medium resistance in parallel with the particle branch R_p + 1/(jwC_p).

    Written as r_m / (1 + r_m/z_branch) so the open-branch limit never
    overflows, even for omega spanning [2*pi*1e-3, 2*pi*1e9].
    """
    if params.open_branch:
        return np.full_like(np.asarray(omega, dtype=float), params.r_m, dtype=complex)
    z_branch = params.r_p + 1.0 / (1j * omega * params.c_p)
    return params.r_m / (1.0 + params.r_m / z_branch)


def eval_colloid_circuit(params: CircuitParams, freq):
    """Impedance of the colloid circuit at frequency ``freq`` (Hz).

    Returns ``1/(jwC_e) + R_m(1 + jwR_pC_p) / (jwR_mC_p + 1 + jwR_pC_p)``
    evaluated in the overflow-safe parallel form.
    """
    f = _check_freq(freq)
    omega = 2.0 * np.pi * f
    z = np.asarray(1.0 / (1j * omega * params.c_e) + _particle_term(params, omega))
    return complex(z[()]) if np.isscalar(freq) else z


def colloid_debye_form(params: CircuitParams):
    """Rewrite the resistive part of the colloid circuit as a single Debye term.

    Returns ``(z0, z_inf, tau)`` such that the second term of the circuit
    impedance equals ``z_inf + (z0 - z_inf) / (1 + jw*tau)`` for all w:

    * ``z0   = r_m``                     (low-frequency limit)
    * ``z_inf = r_m*r_p / (r_m + r_p)``  (high-frequency limit)
    * ``tau  = c_p * (r_m + r_p)``
    """
    if params.open_branch:
        raise ValueError("open particle branch has no relaxation (c_p = 0 or r_p = inf)")
    z0 = params.r_m
    z_inf = params.r_m * params.r_p / (params.r_m + params.r_p)
    tau = params.c_p * (params.r_m + params.r_p)
    return z0, z_inf, tau


def eval_rc_ladder(ladder: RcLadder, freq):
    """Impedance ``r_inf + sum_i r_i / (1 + jw r_i c_i)`` at ``freq`` (Hz)."""
    f = _check_freq(freq)
    omega = 2.0 * np.pi * f
    z = np.full(f.shape, ladder.r_inf, dtype=complex)
    for r, c in ladder.stages:
        z = z + r / (1.0 + 1j * omega * (r * c))
    z = np.asarray(z)
    return complex(z[()]) if np.isscalar(freq) else z


def evaluate_model(model, freq):
    """Dispatch impedance evaluation over the supported model types."""
    if isinstance(model, CircuitParams):
        return eval_colloid_circuit(model, freq)
    if isinstance(model, RcLadder):
        return eval_rc_ladder(model, freq)
    raise TypeError(f"unsupported impedance model: {type(model).__name__}")


def _describe_model(model) -> str:
    if isinstance(model, CircuitParams):
        return (
            f"colloid(c_e={model.c_e:.6g}, r_m={model.r_m:.6g}, "
            f"r_p={model.r_p:.6g}, c_p={model.c_p:.6g})"
        )
    stages = ", ".join(f"({r:.6g}, {c:.6g})" for r, c in model.stages)
    return f"ladder(r_inf={model.r_inf:.6g}, stages=[{stages}])"


def synthesize_spectrum(model, freqs) -> ImpedanceSpectrum:
    """Evaluate ``model`` on a strictly increasing frequency grid."""
    f = np.asarray(freqs, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("freqs must be a non-empty 1-d sequence")
    if np.any(np.diff(f) <= 0.0):
        raise ValueError("freqs must be strictly increasing")
    z = evaluate_model(model, f)
    return ImpedanceSpectrum(f, z, metadata={"model": _describe_model(model)})
