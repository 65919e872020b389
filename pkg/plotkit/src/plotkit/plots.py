"""Figure builders for solver output files.

Three plot kinds:

- ``overlay``: one axis, every input spectrum as a labeled line.
- ``character``: excitation sticks colored by electronic weight sigma_e on a
  red-blue scale (red = electronic, blue = photonic), with an optional
  envelope spectrum behind them.
- ``compare``: one stacked panel per input spectrum, shared frequency axis;
  negative values (mixed matter-photon spectra) plot below a zero line.

An ``overlay`` job with a peak report attached becomes a lifetime zoom: the
axis is narrowed around the peak and the FWHM is drawn as a double arrow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import io  # noqa: E402

KINDS = ("overlay", "character", "compare")


@dataclass(frozen=True)
class PlotJob:
    """One figure: input data files, plot kind, and output image path."""

    inputs: tuple[str, ...]
    kind: str
    out: str
    labels: tuple[str, ...] = ()
    peak_report: str | None = None
    title: str | None = None
    dpi: int = 150

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input file is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError("labels must match inputs one-to-one")


def _labels(job: PlotJob) -> list[str]:
    if job.labels:
        return list(job.labels)
    return [Path(p).stem for p in job.inputs]


def _finish(fig, job: PlotJob) -> str:
    if job.title:
        fig.suptitle(job.title)
    fig.savefig(job.out, dpi=job.dpi)
    plt.close(fig)
    return job.out


def _annotate_fwhm(ax, report: dict) -> None:
    e0 = report["e_peak_eV"]
    half = 0.5 * report["fwhm_eV"]
    ymax = ax.get_ylim()[1]
    y = 0.5 * ymax
    ax.annotate("", xy=(e0 - half, y), xytext=(e0 + half, y),
                arrowprops=dict(arrowstyle="<->", color="black"))
    ax.annotate(
        f"FWHM = {report['fwhm_eV']:.4g} eV\n"
        f"tau = {report['tau_fs']:.4g} fs",
        xy=(e0, y), xytext=(0, 8), textcoords="offset points",
        ha="center", fontsize=9,
    )
    ax.set_xlim(e0 - 6 * half, e0 + 6 * half)


def plot_spectrum(job: PlotJob) -> str:
    """Overlay or character-colored figure; returns the written path."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if job.kind == "overlay":
        for path, label in zip(job.inputs, _labels(job)):
            grid, vals = io.load_spectrum(path)
            ax.plot(grid, vals, label=label, lw=1.2)
        ax.legend(frameon=False)
        if job.peak_report is not None:
            _annotate_fwhm(ax, io.load_peak_report(job.peak_report))
    elif job.kind == "character":
        cmap = plt.get_cmap("coolwarm")
        for i, path in enumerate(job.inputs):
            if i == 0 and len(job.inputs) > 1:
                # optional first input: envelope spectrum behind the sticks
                grid, vals = io.load_spectrum(path)
                ax.plot(grid, vals, color="0.6", lw=1.0, zorder=1,
                        label=_labels(job)[0])
                continue
            cols = io.load_excitations(path)
            colors = cmap(np.clip(cols["sigma_e"], 0.0, 1.0))
            ax.vlines(cols["Omega_eV"], 0.0, cols["f_nn"],
                      colors=colors, lw=1.5, zorder=2)
        sm = plt.cm.ScalarMappable(cmap=cmap,
                                   norm=plt.Normalize(0.0, 1.0))
        fig.colorbar(sm, ax=ax, label="electronic weight $\\sigma_e$")
        if any(ax.get_legend_handles_labels()[0]):
            ax.legend(frameon=False)
    else:
        raise ValueError("plot_spectrum handles 'overlay' and 'character'; "
                         "use plot_polariton_compare for 'compare'")
    ax.set_xlabel("energy (eV)")
    ax.set_ylabel("intensity")
    return _finish(fig, job)


def plot_polariton_compare(job: PlotJob) -> str:
    """Stacked panels, one per input spectrum, shared x axis."""
    n = len(job.inputs)
    fig, axes = plt.subplots(
        n, 1, sharex=True, figsize=(6.4, 1.6 * n + 1.2), squeeze=False
    )
    for ax, path, label in zip(axes[:, 0], job.inputs, _labels(job)):
        grid, vals = io.load_spectrum(path)
        ax.plot(grid, vals, lw=1.2)
        if np.any(vals < 0):
            ax.axhline(0.0, color="0.7", lw=0.8)
        ax.annotate(label, xy=(0.02, 0.8), xycoords="axes fraction",
                    fontsize=9)
        ax.set_ylabel("intensity")
    axes[-1, 0].set_xlabel("energy (eV)")
    return _finish(fig, job)


def render(job: PlotJob) -> str:
    if job.kind == "compare":
        return plot_polariton_compare(job)
    return plot_spectrum(job)
