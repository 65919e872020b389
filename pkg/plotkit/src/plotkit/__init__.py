"""Figure scripts for spectra and excitation tables written by the qedlr CLI."""

from .io import InputError, load_excitations, load_peak_report, load_spectrum
from .plots import KINDS, PlotJob, plot_polariton_compare, plot_spectrum, render

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "KINDS",
    "PlotJob",
    "load_excitations",
    "load_peak_report",
    "load_spectrum",
    "plot_polariton_compare",
    "plot_spectrum",
    "render",
]
