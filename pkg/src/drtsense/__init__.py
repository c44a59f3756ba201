"""Impedance spectroscopy, relaxation-time inversion, concentration sensing.

The package covers a complete sensing chain for colloidal suspensions:

* forward circuit models (:mod:`drtsense.circuits`),
* random-phase multisine excitation (:mod:`drtsense.multisine`),
* a simulated measurement channel with a DFT-averaging impedance
  estimator (:mod:`drtsense.estimator`),
* regularized inversion to a distribution of relaxation times with peak
  extraction (:mod:`drtsense.drt`),
* linear concentration calibration (:mod:`drtsense.calibration`).

File formats live in :mod:`drtsense.io`, figures in :mod:`drtsense.plots`,
and the command-line surface in :mod:`drtsense.cli`.
"""

__version__ = "0.1.0"

from .calibration import (
    CalibrationModel,
    CalibrationPoint,
    characteristic_tau,
    fit_linear,
    predict,
    resolution,
    sensitivity,
)
from .circuits import (
    CircuitParams,
    ImpedanceSpectrum,
    RcLadder,
    colloid_debye_form,
    eval_colloid_circuit,
    eval_rc_ladder,
    evaluate_model,
    synthesize_spectrum,
)
from .drt import (
    DrtResult,
    Peak,
    TauGrid,
    build_kernel,
    build_tau_grid,
    find_peaks,
    fit_drt,
    reconstruct,
    regularizer_matrix,
)
from .errors import ConfigError, ConvergenceError, DataError, SingularChannelError
from .estimator import (
    ChannelConfig,
    MeasurementRecord,
    estimate_impedance,
    estimate_noise_floor,
    output_noise_std,
    simulate_channel,
)
from .multisine import Multisine, SignalRecord, crest_factor, design_multisine
from .nnls import nnls

__all__ = [
    "__version__",
    "CalibrationModel",
    "CalibrationPoint",
    "ChannelConfig",
    "CircuitParams",
    "ConfigError",
    "ConvergenceError",
    "DataError",
    "DrtResult",
    "ImpedanceSpectrum",
    "MeasurementRecord",
    "Multisine",
    "Peak",
    "RcLadder",
    "SignalRecord",
    "SingularChannelError",
    "TauGrid",
    "build_kernel",
    "build_tau_grid",
    "characteristic_tau",
    "colloid_debye_form",
    "crest_factor",
    "design_multisine",
    "estimate_impedance",
    "estimate_noise_floor",
    "eval_colloid_circuit",
    "eval_rc_ladder",
    "evaluate_model",
    "find_peaks",
    "fit_drt",
    "fit_linear",
    "nnls",
    "output_noise_std",
    "predict",
    "reconstruct",
    "regularizer_matrix",
    "resolution",
    "sensitivity",
    "simulate_channel",
    "synthesize_spectrum",
]
