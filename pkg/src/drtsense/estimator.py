"""Simulated measurement channel and DFT-averaging impedance estimator.

The channel stands in for a potentiostat driving a cell and a transimpedance
stage reading the cell current: the output record is the steady-state
periodic response with per-tone complex gain R_f/Z(jw_k), plus optional
white noise on each channel.  The estimator divides period-averaged DFT
coefficients of the two records, which is unbiased for periodic excitation
and shrinks the noise variance as 1/periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import ImpedanceSpectrum, evaluate_model
from .errors import DataError, SingularChannelError
from .multisine import Multisine, SignalRecord, _render_tones

__all__ = [
    "ChannelConfig",
    "MeasurementRecord",
    "simulate_channel",
    "estimate_impedance",
    "estimate_noise_floor",
    "output_noise_std",
]


@dataclass(frozen=True)
class ChannelConfig:
    """Transimpedance readout: v_o = r_f * i, plus white noise per channel."""

    r_f: float = 100.0
    noise_std_vi: float = 0.0
    noise_std_vo: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.r_f > 0.0 and math.isfinite(self.r_f)):
            raise ValueError("r_f must be finite and > 0")
        if self.noise_std_vi < 0.0 or self.noise_std_vo < 0.0:
            raise ValueError("noise std values must be >= 0")


@dataclass(frozen=True)
class MeasurementRecord:
    """Paired excitation/response records from one acquisition."""

    v_i: SignalRecord
    v_o: SignalRecord
    channel: ChannelConfig
    excitation: Multisine

    def __post_init__(self):
        if self.v_i.samples.size != self.v_o.samples.size:
            raise ValueError("v_i and v_o must have equal length")
        if self.v_i.sample_rate != self.v_o.sample_rate:
            raise ValueError("v_i and v_o must share a sample rate")
        if self.v_i.periods != self.v_o.periods:
            raise ValueError("v_i and v_o must span the same period count")
        if self.v_i.sample_rate != self.excitation.fs:
            raise ValueError("record sample rate must match the excitation")
        if self.v_i.samples_per_period != self.excitation.n_samples:
            raise ValueError("record period length must match the excitation")

    @property
    def periods(self) -> int:
        return self.v_i.periods


def simulate_channel(
    excitation: Multisine,
    model,
    periods: int = 8,
    channel: ChannelConfig = ChannelConfig(),
) -> MeasurementRecord:
    """Acquire ``periods`` coherent periods of (v_i, v_o) for ``model``.

    The response is synthesized per tone in the frequency domain (steady
    state, no transients): tone k of the excitation is scaled by
    ``|r_f/Z(jw_k)|`` and shifted by ``angle(r_f/Z(jw_k))``.  Noise streams
    for the two channels are independent and derived from ``channel.seed``.

    Raises
    ------
    SingularChannelError
        If the model impedance is zero at an excited tone.
    """
    if periods < 1:
        raise ValueError("periods must be >= 1")
    freqs = excitation.freq_hz
    z = np.atleast_1d(np.asarray(evaluate_model(model, freqs), dtype=complex))
    if np.any(z == 0):
        k = int(excitation.bins[np.argmax(z == 0)])
        raise SingularChannelError(f"model impedance is zero at excited bin {k}")
    # amp = (A*r_f)*|1/z| keeps v_o exactly linear in r_f sample by sample.
    inv = 1.0 / z
    amps = (excitation.amplitude * channel.r_f) * np.abs(inv)
    phases = excitation.phases + np.angle(inv)
    one_o = _render_tones(freqs, amps, phases, excitation.fs, excitation.n_samples)

    vi = excitation.render(periods).samples
    vo = np.tile(one_o, periods) if periods > 1 else one_o
    if channel.noise_std_vi > 0.0 or channel.noise_std_vo > 0.0:
        ss_i, ss_o = np.random.SeedSequence(channel.seed).spawn(2)
        if channel.noise_std_vi > 0.0:
            vi = vi + np.random.default_rng(ss_i).normal(0.0, channel.noise_std_vi, vi.size)
        if channel.noise_std_vo > 0.0:
            vo = vo + np.random.default_rng(ss_o).normal(0.0, channel.noise_std_vo, vo.size)
    return MeasurementRecord(
        SignalRecord(vi, excitation.fs, periods),
        SignalRecord(vo, excitation.fs, periods),
        channel,
        excitation,
    )


def _mean_dft_at_bins(record: SignalRecord, bins) -> np.ndarray:
    """Per-period DFT coefficients at ``bins``, averaged over periods."""
    return np.fft.rfft(record.by_period(), axis=1)[:, bins].mean(axis=0)


def estimate_impedance(record: MeasurementRecord) -> ImpedanceSpectrum:
    """Impedance at every excited tone from period-averaged DFT ratios.

    For excited bin k,
    ``Z(jw_k) = mean_p DFT_p(v_i)[k] / (mean_p DFT_p(v_o)[k] / r_f)``.

    Raises
    ------
    DataError
        If the averaged output coefficient at an excited bin is too small
        to divide by (signal dropout).
    """
    bins = record.excitation.bins
    vi_bar = _mean_dft_at_bins(record.v_i, bins)
    vo_bar = _mean_dft_at_bins(record.v_o, bins)
    # Dropout guard: an excited bin should carry macroscopic output energy.
    floor = 1e-12 * float(np.max(np.abs(vo_bar))) + np.finfo(float).tiny
    dead = np.abs(vo_bar) < floor
    if np.any(dead):
        k = int(bins[np.argmax(dead)])
        raise DataError(f"averaged output DFT vanished at excited bin {k}")
    z = record.channel.r_f * vi_bar / vo_bar
    return ImpedanceSpectrum(
        record.excitation.freq_hz,
        z,
        metadata={"periods": record.periods, "r_f": record.channel.r_f},
    )


def output_noise_std(excitation: Multisine, model, r_f: float, snr_db: float) -> float:
    """White-noise std that sets the output record's SNR to ``snr_db``.

    The SNR is the RMS of the clean response over the noise std.
    """
    clean = simulate_channel(excitation, model, periods=1, channel=ChannelConfig(r_f=r_f))
    vo = clean.v_o.samples
    rms = math.sqrt(float(np.mean(vo * vo)))
    return rms * 10.0 ** (-snr_db / 20.0)


def estimate_noise_floor(record: MeasurementRecord) -> np.ndarray:
    """Per-tone sample std of the output's per-period DFT coefficients.

    The deterministic (periodic) content is identical in every period, so
    deviations from the per-bin mean measure only the noise.  Returns the
    unbiased std of the complex coefficients, one value per excited tone.

    Raises
    ------
    DataError
        If the record holds fewer than two periods.
    """
    if record.periods < 2:
        raise DataError("noise floor estimation needs at least 2 periods")
    coeffs = np.fft.rfft(record.v_o.by_period(), axis=1)[:, record.excitation.bins]
    dev = coeffs - coeffs.mean(axis=0, keepdims=True)
    return np.sqrt(np.sum(np.abs(dev) ** 2, axis=0) / (record.periods - 1))
