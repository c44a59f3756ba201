from pathlib import Path

import numpy as np
import pytest

from drtsense import (
    CalibrationPoint,
    RcLadder,
    build_tau_grid,
    design_multisine,
    synthesize_spectrum,
)

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return ROOT / "data"


@pytest.fixture(scope="session")
def excitation():
    """Standard 52-tone design with a fixed phase seed."""
    return design_multisine(seed=1)


@pytest.fixture(scope="session")
def tone_freqs(excitation) -> np.ndarray:
    return excitation.freq_hz


@pytest.fixture(scope="session")
def fine_grid():
    """20 points/decade tau grid over the standard band."""
    return build_tau_grid(1e3, 1e6, points_per_decade=20, pad_decades=1.0)


@pytest.fixture(scope="session")
def dirac_ladder():
    """One Debye relaxation: 100 ohm at tau = 2 us over r_inf = 50 ohm."""
    return RcLadder(50.0, ((100.0, 2e-8),))


@pytest.fixture(scope="session")
def two_dirac_ladder():
    """Two relaxations at 1 us and 1 ms over r_inf = 50 ohm."""
    return RcLadder(50.0, ((100.0, 1e-8), (150.0, 1e-3 / 150.0)))


@pytest.fixture(scope="session")
def dirac_spectrum(dirac_ladder, tone_freqs):
    return synthesize_spectrum(dirac_ladder, tone_freqs)


@pytest.fixture(scope="session")
def reference_points():
    """Four (tau, kappa) samples used for the reference calibration."""
    return [
        CalibrationPoint(1.60e-6, 0.1, "s1"),
        CalibrationPoint(2.00e-6, 0.5, "s2"),
        CalibrationPoint(2.85e-6, 1.0, "s3"),
        CalibrationPoint(3.33e-6, 1.5, "s4"),
    ]
