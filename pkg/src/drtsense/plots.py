"""Static SVG figures: Nyquist spectra, relaxation distributions, calibration.

Figures are written headlessly and deterministically: the Agg backend needs
no display, the SVG date stamp is suppressed, and element ids are derived
from a fixed hash salt so identical inputs give identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["nyquist_svg", "drt_svg", "calibration_svg"]

_SVG_KW = {"format": "svg", "metadata": {"Date": None}}


def _new_figure():
    plt.rcParams["svg.hashsalt"] = "fixed"
    return plt.subplots(figsize=(6.0, 4.5), dpi=100)


def nyquist_svg(path, spectra, labels=None) -> None:
    """Nyquist plot (-Im Z vs Re Z) of one or more spectra."""
    if not isinstance(spectra, (list, tuple)):
        spectra = [spectra]
    labels = labels or [s.metadata.get("model", f"spectrum {i + 1}") for i, s in enumerate(spectra)]
    fig, ax = _new_figure()
    try:
        for spectrum, label in zip(spectra, labels):
            ax.plot(spectrum.z_re, -spectrum.z_im, marker="o", ms=3, lw=1, label=str(label))
        ax.set_xlabel(r"Re $Z$ ($\Omega$)")
        ax.set_ylabel(r"$-$Im $Z$ ($\Omega$)")
        ax.grid(True, alpha=0.3)
        if len(spectra) > 1 or labels[0]:
            ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path, **_SVG_KW)
    finally:
        plt.close(fig)


def drt_svg(path, result, peaks=()) -> None:
    """Distribution of relaxation times on a log-tau axis, peaks marked."""
    fig, ax = _new_figure()
    try:
        ax.plot(result.grid.taus, result.gamma, lw=1.2)
        for p in peaks:
            ax.axvline(p.tau, color="C3", lw=0.8, ls="--")
            ax.annotate(
                f"{p.tau * 1e6:.3g} us",
                xy=(p.tau, p.height),
                xytext=(3, 3),
                textcoords="offset points",
                fontsize=8,
            )
        ax.set_xscale("log")
        ax.set_xlabel(r"$\tau$ (s)")
        ax.set_ylabel(r"$\gamma(\ln\tau)$ ($\Omega$)")
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, **_SVG_KW)
    finally:
        plt.close(fig)


def calibration_svg(path, points, model) -> None:
    """Concentration vs relaxation time with the fitted line."""
    taus = np.array([p.tau for p in points])
    kappas = np.array([p.kappa for p in points])
    fig, ax = _new_figure()
    try:
        ax.plot(taus * 1e6, kappas, "o", label="samples")
        span = np.linspace(taus.min(), taus.max(), 50)
        ax.plot(
            span * 1e6,
            model.slope_a * span + model.intercept_b,
            "-",
            label=f"fit ($r^2$={model.r_squared:.4f})",
        )
        ax.set_xlabel(r"$\tau$ ($\mu$s)")
        ax.set_ylabel(r"$\kappa$ (wt.%)")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path, **_SVG_KW)
    finally:
        plt.close(fig)
