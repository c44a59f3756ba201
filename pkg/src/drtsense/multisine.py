"""Random-phase multisine design and rendering.

A multisine concentrates excitation energy on a chosen set of DFT bins so a
coherent record of ``n_samples`` points at rate ``fs`` holds an integer
number of cycles of every tone.  Tone targets are log-spaced, quantized to
exact bins, and collisions advance to the next free bin so the requested
tone count is always preserved.  Phases are drawn uniformly at random, which
keeps the crest factor moderate without any optimization step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Multisine", "SignalRecord", "design_multisine", "crest_factor"]


def _render_tones(freq_hz, amps, phases, fs, n_samples):
    """One coherent period of sum_k amps[k]*cos(2*pi*f_k*t + phases[k]).

    Shared by excitation and simulated-response rendering so that equal
    (amps, phases) inputs produce bit-identical waveforms.
    """
    t = np.arange(n_samples) / fs
    out = np.zeros(n_samples)
    for f, a, phi in zip(freq_hz, amps, phases):
        out += a * np.cos(2.0 * np.pi * f * t + phi)
    return out


@dataclass(frozen=True)
class SignalRecord:
    """A sampled voltage record spanning an integer number of periods."""

    samples: np.ndarray
    sample_rate: float
    periods: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float).copy()
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-d array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not (self.sample_rate > 0.0 and math.isfinite(self.sample_rate)):
            raise ValueError("sample_rate must be finite and > 0")
        if self.periods < 1 or samples.size % self.periods != 0:
            raise ValueError("record length must be a positive multiple of periods")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @property
    def samples_per_period(self) -> int:
        return self.samples.size // self.periods

    def by_period(self) -> np.ndarray:
        """(periods, samples_per_period) view of the record."""
        return self.samples.reshape(self.periods, self.samples_per_period)


@dataclass(frozen=True)
class Multisine:
    """An excitation with every tone on an exact DFT bin of one period.

    Attributes
    ----------
    fs : float
        Sample rate in Hz.
    n_samples : int
        Samples per coherent period.
    bins : np.ndarray
        Strictly increasing DFT bin index of each tone.
    amplitude : float
        Per-tone peak amplitude in volts (flat across tones).
    phases : np.ndarray
        Tone phases in radians, each in (0, 2*pi].
    """

    fs: float
    n_samples: int
    bins: np.ndarray
    amplitude: float
    phases: np.ndarray

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=int).copy()
        phases = np.asarray(self.phases, dtype=float).copy()
        if bins.ndim != 1 or bins.size == 0:
            raise ValueError("bins must be a non-empty 1-d array")
        if phases.shape != bins.shape:
            raise ValueError("phases must match bins in shape")
        if np.any(np.diff(bins) <= 0):
            raise ValueError("bins must be strictly increasing")
        if not (self.fs > 0.0 and math.isfinite(self.fs)):
            raise ValueError("fs must be finite and > 0")
        if self.n_samples < 2:
            raise ValueError("n_samples must be >= 2")
        if bins[0] < 1 or bins[-1] >= self.n_samples / 2:
            raise ValueError("bins must lie in [1, n_samples/2)")
        if not (self.amplitude > 0.0 and math.isfinite(self.amplitude)):
            raise ValueError("amplitude must be finite and > 0")
        if np.any(phases <= 0.0) or np.any(phases > 2.0 * np.pi):
            raise ValueError("phases must lie in (0, 2*pi]")
        bins.flags.writeable = False
        phases.flags.writeable = False
        object.__setattr__(self, "bins", bins)
        object.__setattr__(self, "phases", phases)

    @property
    def n_tones(self) -> int:
        return self.bins.size

    @property
    def freq_hz(self) -> np.ndarray:
        """Tone frequencies in Hz (bin * fs / n_samples)."""
        return self.bins * (self.fs / self.n_samples)

    @property
    def period_s(self) -> float:
        return self.n_samples / self.fs

    def render(self, periods: int = 1) -> SignalRecord:
        """Waveform over ``periods`` coherent periods.

        One period is synthesized and tiled, so repeated periods are
        bit-identical by construction.
        """
        if periods < 1:
            raise ValueError("periods must be >= 1")
        amps = np.full(self.n_tones, self.amplitude)
        one = _render_tones(self.freq_hz, amps, self.phases, self.fs, self.n_samples)
        samples = np.tile(one, periods) if periods > 1 else one
        return SignalRecord(samples, self.fs, periods)

    def with_amplitude(self, amplitude: float) -> "Multisine":
        return Multisine(self.fs, self.n_samples, self.bins, amplitude, self.phases)


def _quantize_bins(targets, k_lo, k_hi):
    """Round target bin positions to distinct integers in [k_lo, k_hi].

    Collisions move up to the next free bin (wrapping once to the lowest
    free bin if the top of the band is full).
    """
    if k_hi - k_lo + 1 < len(targets):
        raise ValueError(
            f"band holds only {k_hi - k_lo + 1} bins, cannot place {len(targets)} tones"
        )
    taken = set()
    bins = []
    for target in targets:
        k = int(round(target))
        k = min(max(k, k_lo), k_hi)
        while k in taken and k <= k_hi:
            k += 1
        if k > k_hi:
            k = k_lo
            while k in taken:
                k += 1
        taken.add(k)
        bins.append(k)
    return np.sort(np.array(bins, dtype=int))


def design_multisine(
    f_min: float = 1e3,
    f_max: float = 1e6,
    n_tones: int = 52,
    amplitude: float = 0.1,
    fs: float = 16e6,
    n_samples: int = 16384,
    seed=None,
) -> Multisine:
    """Design a random-phase multisine with log-spaced tones.

    Parameters
    ----------
    f_min, f_max : float
        Band edges in Hz.  Every tone lands on a DFT bin inside
        [f_min, f_max]; ``f_min == f_max`` is accepted only for one tone.
    n_tones : int
        Number of tones to place.
    amplitude : float
        Per-tone peak amplitude in volts.
    fs : float
        Sample rate in Hz; ``f_max`` must sit below fs/2.
    n_samples : int
        Samples per coherent period (sets the bin spacing fs/n_samples).
    seed : int, np.random.SeedSequence, or None
        Seed for the phase draw.  Phases are uniform on (0, 2*pi].

    Returns
    -------
    Multisine
    """
    if n_tones < 1:
        raise ValueError("n_tones must be >= 1")
    if not (0.0 < f_min <= f_max) or not math.isfinite(f_max):
        raise ValueError("need 0 < f_min <= f_max, both finite")
    if f_min == f_max and n_tones > 1:
        raise ValueError("f_min == f_max only admits a single tone")
    if f_max >= fs / 2.0:
        raise ValueError("f_max must be below fs/2")
    df = fs / n_samples
    # Float fuzz from the division must not eject an exact band edge.
    eps = 1e-9
    k_lo = max(int(math.ceil(f_min / df - eps)), 1)
    k_hi = int(math.floor(f_max / df + eps))
    if k_hi < k_lo:
        raise ValueError("no DFT bin falls inside [f_min, f_max]")
    if n_tones == 1:
        targets = np.array([math.sqrt(f_min * f_max) / df])
    else:
        targets = np.geomspace(f_min, f_max, n_tones) / df
    bins = _quantize_bins(targets, k_lo, k_hi)
    rng = np.random.default_rng(seed)
    phases = 2.0 * np.pi * (1.0 - rng.random(n_tones))
    return Multisine(fs, n_samples, bins, amplitude, phases)


def crest_factor(record) -> float:
    """Peak magnitude over RMS of a waveform or SignalRecord."""
    x = np.asarray(getattr(record, "samples", record), dtype=float)
    if x.size == 0:
        raise ValueError("waveform is empty")
    rms = math.sqrt(float(np.mean(x * x)))
    if rms == 0.0:
        raise ValueError("waveform has zero RMS")
    return float(np.max(np.abs(x))) / rms
