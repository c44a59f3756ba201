import numpy as np
import pytest

from drtsense import (
    ChannelConfig,
    CircuitParams,
    MeasurementRecord,
    RcLadder,
    SignalRecord,
    SingularChannelError,
    design_multisine,
    estimate_impedance,
    estimate_noise_floor,
    eval_colloid_circuit,
    output_noise_std,
    simulate_channel,
)
from drtsense.errors import DataError


@pytest.fixture(scope="module")
def small_excitation():
    """Short-record design; keeps Monte Carlo loops cheap."""
    return design_multisine(n_samples=2048, seed=5)


class TestSimulateChannel:
    def test_unity_gain_resistor_gives_identical_records(self, excitation):
        model = RcLadder(100.0, ())
        rec = simulate_channel(excitation, model, periods=2, channel=ChannelConfig(r_f=100.0))
        assert np.array_equal(rec.v_i.samples, rec.v_o.samples)

    def test_doubling_feedback_resistor_doubles_output_exactly(self, excitation):
        model = CircuitParams(1e-6, 100.0, 900.0, 2e-9)
        rec1 = simulate_channel(excitation, model, periods=1, channel=ChannelConfig(r_f=100.0))
        rec2 = simulate_channel(excitation, model, periods=1, channel=ChannelConfig(r_f=200.0))
        assert np.array_equal(rec2.v_o.samples, 2.0 * rec1.v_o.samples)
        assert np.array_equal(rec1.v_i.samples, rec2.v_i.samples)

    def test_debye_apex_tone_gain_and_phase(self):
        # put the single tone exactly at w*tau = 1: |R_f / (R/2)(1-j)| = sqrt(2), +45 deg
        fs, n = 16e6, 16384
        ms = design_multisine(f_min=97656.25, f_max=97656.25, n_tones=1, fs=fs, n_samples=n)
        f = ms.freq_hz[0]
        tau = 1.0 / (2.0 * np.pi * f)
        model = RcLadder(0.0, ((100.0, tau / 100.0),))
        rec = simulate_channel(ms, model, periods=1, channel=ChannelConfig(r_f=100.0))
        vi = np.fft.rfft(rec.v_i.samples)[ms.bins[0]]
        vo = np.fft.rfft(rec.v_o.samples)[ms.bins[0]]
        assert abs(vo) / abs(vi) == pytest.approx(np.sqrt(2.0), rel=1e-9)
        assert np.angle(vo / vi) == pytest.approx(np.pi / 4.0, abs=1e-9)

    def test_noise_changes_with_seed_and_is_reproducible(self, small_excitation):
        model = RcLadder(100.0, ())
        cfg1 = ChannelConfig(100.0, 1e-3, 1e-3, seed=1)
        cfg2 = ChannelConfig(100.0, 1e-3, 1e-3, seed=2)
        a = simulate_channel(small_excitation, model, 1, cfg1)
        b = simulate_channel(small_excitation, model, 1, cfg1)
        c = simulate_channel(small_excitation, model, 1, cfg2)
        assert np.array_equal(a.v_o.samples, b.v_o.samples)
        assert not np.array_equal(a.v_o.samples, c.v_o.samples)

    def test_zero_impedance_model_rejected(self, small_excitation):
        with pytest.raises(SingularChannelError):
            simulate_channel(small_excitation, RcLadder(0.0, ()), periods=1)

    def test_record_invariants_checked(self, small_excitation):
        rec = simulate_channel(small_excitation, RcLadder(100.0, ()), periods=2)
        with pytest.raises(ValueError):
            MeasurementRecord(
                rec.v_i,
                SignalRecord(rec.v_o.samples[:2048], rec.v_o.sample_rate, 1),
                rec.channel,
                small_excitation,
            )


class TestEstimateImpedance:
    def test_noiseless_resistor_recovered_exactly(self, excitation):
        rec = simulate_channel(excitation, RcLadder(100.0, ()), periods=2)
        est = estimate_impedance(rec)
        assert np.all(np.abs(est.z - 100.0) < 1e-9)

    def test_noiseless_colloid_round_trip(self, excitation):
        model = CircuitParams(1e-6, 100.0, 900.0, 2e-9)
        rec = simulate_channel(excitation, model, periods=8)
        est = estimate_impedance(rec)
        truth = eval_colloid_circuit(model, excitation.freq_hz)
        assert est.z.shape == truth.shape
        assert np.max(np.abs(est.z - truth) / np.abs(truth)) < 1e-9

    def test_output_ordering_matches_excitation(self, excitation):
        rec = simulate_channel(excitation, RcLadder(100.0, ()), periods=1)
        est = estimate_impedance(rec)
        assert np.array_equal(est.freq_hz, excitation.freq_hz)

    def test_scaling_output_scales_impedance_inversely(self, small_excitation):
        model = CircuitParams(1e-6, 100.0, 900.0, 2e-9)
        rec = simulate_channel(small_excitation, model, periods=2)
        scaled = MeasurementRecord(
            rec.v_i,
            SignalRecord(4.0 * rec.v_o.samples, rec.v_o.sample_rate, rec.v_o.periods),
            rec.channel,
            small_excitation,
        )
        z1 = estimate_impedance(rec).z
        z2 = estimate_impedance(scaled).z
        assert np.allclose(z2, z1 / 4.0, rtol=1e-12)

    def test_dropout_names_the_bin(self, small_excitation):
        rec = simulate_channel(small_excitation, RcLadder(100.0, ()), periods=1)
        dead = MeasurementRecord(
            rec.v_i,
            SignalRecord(np.zeros_like(rec.v_o.samples), rec.v_o.sample_rate, 1),
            rec.channel,
            small_excitation,
        )
        with pytest.raises(DataError, match=f"bin {small_excitation.bins[0]}"):
            estimate_impedance(dead)

    def test_variance_shrinks_with_period_averaging(self, small_excitation):
        # std at P=16 should be about a quarter of std at P=1
        model = CircuitParams(1e-6, 100.0, 900.0, 2e-9)
        sigma = output_noise_std(small_excitation, model, 100.0, snr_db=40.0)
        tone = 26
        stds = {}
        for periods in (1, 16):
            vals = []
            for seed in range(60):
                cfg = ChannelConfig(100.0, 0.0, sigma, seed=(periods, seed))
                est = estimate_impedance(simulate_channel(small_excitation, model, periods, cfg))
                vals.append(est.z[tone])
            vals = np.array(vals)
            stds[periods] = np.sqrt(np.mean(np.abs(vals - vals.mean()) ** 2))
        assert stds[1] / stds[16] == pytest.approx(4.0, rel=0.25)


class TestNoiseFloor:
    def test_zero_noise_gives_zero_floor(self, excitation):
        rec = simulate_channel(excitation, RcLadder(100.0, ()), periods=4)
        assert np.all(estimate_noise_floor(rec) <= 1e-12)

    def test_needs_at_least_two_periods(self, small_excitation):
        rec = simulate_channel(small_excitation, RcLadder(100.0, ()), periods=1)
        with pytest.raises(DataError):
            estimate_noise_floor(rec)

    def test_matches_analytic_white_noise_level(self, small_excitation):
        # complex DFT coefficient of white noise has std sigma*sqrt(N)
        sigma = 1e-3
        model = RcLadder(100.0, ())
        want = sigma * np.sqrt(small_excitation.n_samples)
        estimates = []
        for seed in range(100):
            cfg = ChannelConfig(100.0, 0.0, sigma, seed=seed)
            rec = simulate_channel(small_excitation, model, periods=8, channel=cfg)
            estimates.append(np.mean(estimate_noise_floor(rec)))
        assert np.mean(estimates) == pytest.approx(want, rel=0.15)

    def test_invariant_to_deterministic_content(self, small_excitation):
        # same noise seed, different excitation phases: same floor estimate
        other = design_multisine(n_samples=2048, seed=99)
        assert not np.array_equal(other.phases, small_excitation.phases)
        model = CircuitParams(1e-6, 100.0, 900.0, 2e-9)
        cfg = ChannelConfig(100.0, 0.0, 1e-3, seed=4)
        floor_a = estimate_noise_floor(simulate_channel(small_excitation, model, 8, cfg))
        floor_b = estimate_noise_floor(simulate_channel(other, model, 8, cfg))
        assert np.allclose(floor_a, floor_b, rtol=1e-6)


class TestChannelConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            ChannelConfig(r_f=0.0)
        with pytest.raises(ValueError):
            ChannelConfig(noise_std_vi=-1.0)

    def test_output_noise_std_matches_requested_snr(self, small_excitation):
        model = RcLadder(100.0, ())
        sigma = output_noise_std(small_excitation, model, 100.0, snr_db=40.0)
        clean = simulate_channel(small_excitation, model, 1)
        rms = np.sqrt(np.mean(clean.v_o.samples ** 2))
        assert 20.0 * np.log10(rms / sigma) == pytest.approx(40.0, abs=1e-9)
