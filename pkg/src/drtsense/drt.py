"""Relaxation-time spectrum inversion and peak analysis.

An impedance spectrum is modeled as a high-frequency resistance plus a
density gamma(ln tau) of Debye relaxations,

    Z(jw) = R_inf + integral gamma(ln tau) / (1 + jw*tau) d(ln tau),

optionally extended with a series blocking capacitance for the straight
low-frequency tail seen with electrode polarization.  The integral is
discretized by trapezoidal quadrature on a log-uniform tau grid and the
resulting ill-posed linear system is solved by Tikhonov-regularized least
squares with a non-negativity constraint.  Characteristic relaxation times
are then read off as local maxima of gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks as _local_maxima

from .circuits import ImpedanceSpectrum
from .errors import DataError
from .nnls import nnls

__all__ = [
    "TauGrid",
    "DrtResult",
    "Peak",
    "build_tau_grid",
    "build_kernel",
    "regularizer_matrix",
    "fit_drt",
    "reconstruct",
    "find_peaks",
]


class TauGrid:
    """Log-uniform grid of relaxation times.

    Attributes
    ----------
    taus : np.ndarray
        Strictly increasing time constants in seconds.
    points_per_decade : int
        Nominal grid density used at construction.
    """

    def __init__(self, taus, points_per_decade: int):
        taus = np.asarray(taus, dtype=float).copy()
        if taus.ndim != 1 or taus.size < 2:
            raise ValueError("grid needs at least 2 tau points")
        if np.any(taus <= 0.0) or not np.all(np.isfinite(taus)):
            raise ValueError("tau values must be finite and > 0")
        steps = np.diff(np.log(taus))
        if np.any(steps <= 0.0):
            raise ValueError("tau values must be strictly increasing")
        if np.max(steps) - np.min(steps) > 1e-12:
            raise ValueError("grid must be log-uniform")
        if points_per_decade < 1:
            raise ValueError("points_per_decade must be >= 1")
        taus.flags.writeable = False
        self.taus = taus
        self.points_per_decade = int(points_per_decade)

    def __len__(self):
        return self.taus.size

    @property
    def ln_taus(self) -> np.ndarray:
        return np.log(self.taus)

    @property
    def delta_ln(self) -> float:
        """Constant ln-tau spacing."""
        ln = np.log(self.taus)
        return float((ln[-1] - ln[0]) / (len(self) - 1))

    @property
    def quadrature_weights(self) -> np.ndarray:
        """Trapezoidal d(ln tau) weights: h/2 at the ends, h inside."""
        w = np.full(len(self), self.delta_ln)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def __repr__(self):
        return (
            f"TauGrid({len(self)} pts, {self.taus[0]:.6g}-{self.taus[-1]:.6g} s, "
            f"{self.points_per_decade}/decade)"
        )


def build_tau_grid(
    f_min: float,
    f_max: float,
    points_per_decade: int = 10,
    pad_decades: float = 1.0,
) -> TauGrid:
    """Tau grid matched to a measurement band.

    The band maps to relaxation times through tau = 1/(2*pi*f); the grid
    runs from ``1/(2*pi*f_max)`` to ``1/(2*pi*f_min)`` widened by
    ``pad_decades`` on each side, log-uniform at ``points_per_decade``.
    """
    if not (0.0 < f_min < f_max) or not math.isfinite(f_max):
        raise ValueError("need 0 < f_min < f_max, both finite")
    if points_per_decade < 1:
        raise ValueError("points_per_decade must be >= 1")
    if pad_decades < 0.0:
        raise ValueError("pad_decades must be >= 0")
    tau_lo = 10.0 ** (-pad_decades) / (2.0 * np.pi * f_max)
    tau_hi = 10.0 ** (pad_decades) / (2.0 * np.pi * f_min)
    decades = math.log10(tau_hi / tau_lo)
    n = int(round(decades * points_per_decade)) + 1
    if n < 2:
        raise ValueError("degenerate tau range; widen the band or the padding")
    return TauGrid(np.geomspace(tau_lo, tau_hi, n), points_per_decade)


class DrtResult:
    """Fitted relaxation-time spectrum.

    Attributes
    ----------
    grid : TauGrid
    gamma : np.ndarray
        Distribution samples in ohms, one per grid point.
    r_inf : float
        High-frequency series resistance in ohms.
    lam : float
        Regularization weight that produced the fit.
    residual_rms : float
        RMS over the stacked real and imaginary residual entries, in ohms.
    c_inv : float or None
        Inverse of the series blocking capacitance (1/F), when fitted.
    """

    def __init__(self, grid, gamma, r_inf, lam, residual_rms, c_inv=None):
        gamma = np.asarray(gamma, dtype=float).copy()
        if gamma.shape != (len(grid),):
            raise ValueError("gamma must hold one value per grid point")
        if not np.all(np.isfinite(gamma)):
            raise ValueError("gamma must be finite")
        if not (math.isfinite(r_inf) and math.isfinite(lam) and lam >= 0.0):
            raise ValueError("r_inf must be finite and lam finite and >= 0")
        if c_inv is not None and not math.isfinite(c_inv):
            raise ValueError("c_inv must be finite when present")
        gamma.flags.writeable = False
        self.grid = grid
        self.gamma = gamma
        self.r_inf = float(r_inf)
        self.lam = float(lam)
        self.residual_rms = float(residual_rms)
        self.c_inv = None if c_inv is None else float(c_inv)

    @property
    def c_series(self):
        """Series blocking capacitance in farads, or None if absent/unused."""
        if self.c_inv is None or self.c_inv == 0.0:
            return None
        return 1.0 / self.c_inv

    def __repr__(self):
        return (
            f"DrtResult({len(self.grid)} pts, r_inf={self.r_inf:.6g}, "
            f"lam={self.lam:.3g}, residual_rms={self.residual_rms:.3g})"
        )


@dataclass(frozen=True)
class Peak:
    """A local maximum of gamma(ln tau).

    ``tau`` is the interpolated location in seconds, ``height`` the
    interpolated apex value, ``area`` the trapezoidal integral of
    gamma d(ln tau) between the enclosing minima, and ``prominence`` the
    topographic prominence of the grid sample.
    """

    tau: float
    height: float
    area: float
    prominence: float

    def __post_init__(self):
        if not (self.tau > 0.0 and self.height > 0.0 and self.area > 0.0):
            raise ValueError("peak tau, height and area must be > 0")
        if self.prominence < 0.0:
            raise ValueError("prominence must be >= 0")


def build_kernel(freqs, grid: TauGrid, include_series_capacitance: bool = False):
    """Real design matrix for the discretized relaxation model.

    Rows stack the real parts of all frequencies, then the imaginary
    parts.  Columns are the quadrature-weighted Debye responses of each
    grid tau, one column for R_inf, and optionally one for the series
    capacitance parameterized by its inverse (so the model stays linear).
    """
    f = np.asarray(freqs, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("freqs must be a non-empty 1-d sequence")
    if np.any(f <= 0.0) or not np.all(np.isfinite(f)):
        raise ValueError("freqs must be finite and > 0")
    omega = 2.0 * np.pi * f
    wt = grid.quadrature_weights
    ot = omega[:, None] * grid.taus[None, :]
    den = 1.0 + ot * ot
    n_f = f.size
    n_tau = len(grid)
    n_cols = n_tau + 1 + (1 if include_series_capacitance else 0)
    kernel = np.zeros((2 * n_f, n_cols))
    kernel[:n_f, :n_tau] = wt / den
    kernel[n_f:, :n_tau] = -wt * ot / den
    kernel[:n_f, n_tau] = 1.0
    if include_series_capacitance:
        kernel[n_f:, n_tau + 1] = -1.0 / omega
    return kernel


def regularizer_matrix(n_tau: int, kind: str = "second-difference") -> np.ndarray:
    """Penalty operator on the gamma samples.

    ``second-difference`` is the curvature operator with zero boundary
    conditions (values beyond the grid treated as 0), which also damps
    linear ramps into the grid edges; ``identity`` is plain ridge.
    """
    if kind == "identity":
        return np.eye(n_tau)
    if kind == "second-difference":
        mat = -2.0 * np.eye(n_tau)
        idx = np.arange(n_tau - 1)
        mat[idx, idx + 1] = 1.0
        mat[idx + 1, idx] = 1.0
        return mat
    raise ValueError(f"unknown regularizer: {kind!r}")


def fit_drt(
    spectrum: ImpedanceSpectrum,
    grid: TauGrid | None = None,
    lam: float | None = None,
    lam_rel: float = 1e-3,
    nonneg: bool = True,
    include_series_capacitance: bool = False,
    regularizer: str = "second-difference",
) -> DrtResult:
    """Invert a spectrum to a relaxation-time distribution.

    Minimizes ``||K@x - z||^2 + lam^2 ||L@gamma||^2`` over
    ``x = [gamma, r_inf(, 1/c_series)]``, with all entries constrained
    non-negative when ``nonneg`` is set.

    Parameters
    ----------
    spectrum : ImpedanceSpectrum
        At least 4 frequency points.
    grid : TauGrid, optional
        Defaults to the spectrum band at 10 points/decade with one decade
        of padding each side.
    lam : float, optional
        Absolute regularization weight.  When omitted it is ``lam_rel``
        times the largest singular value of the kernel.
    lam_rel : float
        Relative weight used when ``lam`` is None.
    nonneg : bool
        Constrain gamma, r_inf (and the capacitance term) to >= 0.
    include_series_capacitance : bool
        Add a series blocking-capacitance column for spectra with a
        capacitive low-frequency tail; without it such spectra park a
        large-tau peak at the grid edge.
    regularizer : str
        ``"second-difference"`` (default) or ``"identity"``.

    Raises
    ------
    DataError
        If the spectrum is all zeros.
    ConvergenceError
        If the constrained solver hits its iteration cap.
    """
    if len(spectrum) < 4:
        raise ValueError("need at least 4 spectrum points")
    if np.all(spectrum.z == 0):
        raise DataError("spectrum is identically zero")
    if grid is None:
        grid = build_tau_grid(spectrum.freq_hz[0], spectrum.freq_hz[-1])
    n_tau = len(grid)
    kernel = build_kernel(spectrum.freq_hz, grid, include_series_capacitance)
    n_cols = kernel.shape[1]
    if lam is None:
        if lam_rel < 0.0:
            raise ValueError("lam_rel must be >= 0")
        lam = lam_rel * float(np.linalg.svd(kernel, compute_uv=False)[0])
    elif lam < 0.0:
        raise ValueError("lam must be >= 0")

    penalty = np.zeros((n_tau, n_cols))
    penalty[:, :n_tau] = lam * regularizer_matrix(n_tau, regularizer)
    a = np.vstack([kernel, penalty])
    b = np.concatenate([spectrum.z_re, spectrum.z_im, np.zeros(n_tau)])

    if nonneg:
        x = nnls(a, b)
    else:
        x = np.linalg.lstsq(a, b, rcond=None)[0]

    n_f = len(spectrum)
    residual = kernel @ x - b[: 2 * n_f]
    rms = math.sqrt(float(np.mean(residual * residual)))
    c_inv = x[n_tau + 1] if include_series_capacitance else None
    if c_inv is not None and c_inv == 0.0:
        c_inv = None
    return DrtResult(grid, x[:n_tau], x[n_tau], lam, rms, c_inv)


def _result_vector(result: DrtResult) -> np.ndarray:
    x = np.append(result.gamma, result.r_inf)
    if result.c_inv is not None:
        x = np.append(x, result.c_inv)
    return x


def reconstruct(result: DrtResult, freqs) -> ImpedanceSpectrum:
    """Evaluate a fitted relaxation model on a frequency grid."""
    f = np.asarray(freqs, dtype=float)
    kernel = build_kernel(f, result.grid, result.c_inv is not None)
    zx = kernel @ _result_vector(result)
    z = zx[: f.size] + 1j * zx[f.size :]
    return ImpedanceSpectrum(f, z, metadata={"model": "drt-reconstruction"})


def _interpolate_apex(ln_tau, g, i):
    """Quadratic refinement of a grid maximum in (ln tau, gamma)."""
    ym1, y0, yp1 = g[i - 1], g[i], g[i + 1]
    den = 2.0 * y0 - ym1 - yp1
    p = 0.0 if den <= 0.0 else (yp1 - ym1) / (2.0 * den)
    p = min(max(p, -1.0), 1.0)
    h = ln_tau[1] - ln_tau[0]
    tau = math.exp(ln_tau[i] + p * h)
    height = y0 - 0.25 * (ym1 - yp1) * p
    return tau, height


def _support(g, i):
    """Indices of the enclosing minima around the maximum at ``i``."""
    lo = i
    while lo > 0 and g[lo - 1] <= g[lo]:
        lo -= 1
    hi = i
    while hi < g.size - 1 and g[hi + 1] <= g[hi]:
        hi += 1
    return lo, hi


def find_peaks(result: DrtResult, min_prominence: float = 0.0) -> list:
    """Local maxima of gamma as Peak records, ascending in tau.

    Peak locations are refined by quadratic interpolation through the
    maximum and its neighbors in (ln tau, gamma); areas integrate gamma
    d(ln tau) between the enclosing minima by the trapezoid rule.
    """
    if min_prominence < 0.0:
        raise ValueError("min_prominence must be >= 0")
    g = result.gamma
    ln_tau = result.grid.ln_taus
    idx, props = _local_maxima(g, prominence=0.0)
    h = result.grid.delta_ln
    peaks = []
    for i, prom in zip(idx, props["prominences"]):
        if prom < min_prominence:
            continue
        tau, height = _interpolate_apex(ln_tau, g, i)
        lo, hi = _support(g, i)
        seg = g[lo : hi + 1]
        area = h * (float(np.sum(seg)) - 0.5 * (seg[0] + seg[-1]))
        peaks.append(Peak(tau, height, area, float(prom)))
    return peaks
