"""Cavity-resonated backward-wave biphoton source calculator."""

from ._core import (
    Scenario,
    g2_curve,
    generate_events,
    load_scenario,
    report,
    spectrum,
    spectrum_fwhm,
)

__all__ = [
    "Scenario",
    "g2_curve",
    "generate_events",
    "load_scenario",
    "report",
    "spectrum",
    "spectrum_fwhm",
]
