"""Readers for the CSV/JSON files emitted by the qedlr command line tool.

plotkit never recomputes physics: these parsers are its only coupling to the
solver, via the documented on-disk formats (spectra, excitation tables, and
peak reports).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

SPECTRUM_HEADER = ["omega_eV", "value"]
EXCITATION_HEADER = ["Omega_eV", "f_nn", "f_pn", "f_pp", "sigma_e", "sigma_p"]


class InputError(ValueError):
    """Raised when an input file is missing, malformed, or empty."""


def _read_table(path, expected_header):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    rows = []
    header = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = next(csv.reader([line]))
        if header is None:
            header = [f.strip() for f in fields]
            if header != expected_header:
                raise InputError(
                    f"{path}:{lineno}: expected header "
                    f"{','.join(expected_header)!r}, got {line!r}"
                )
            continue
        if len(fields) != len(expected_header):
            raise InputError(
                f"{path}:{lineno}: expected {len(expected_header)} fields, "
                f"got {len(fields)}"
            )
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from exc
    if header is None:
        raise InputError(f"{path}: empty file")
    if not rows:
        raise InputError(f"{path}: no data rows")
    return np.array(rows)


def load_spectrum(path) -> tuple[np.ndarray, np.ndarray]:
    """Return (grid_eV, values) from an 'omega_eV,value' CSV."""
    data = _read_table(path, SPECTRUM_HEADER)
    return data[:, 0], data[:, 1]


def load_excitations(path) -> dict[str, np.ndarray]:
    """Return column arrays from an excitation-table CSV."""
    data = _read_table(path, EXCITATION_HEADER)
    return {name: data[:, i] for i, name in enumerate(EXCITATION_HEADER)}


def load_peak_report(path) -> dict:
    """Return the peak-report JSON (e_peak_eV, fwhm_eV, tau_fs, ...)."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    for key in ("e_peak_eV", "fwhm_eV", "tau_fs"):
        if key not in payload:
            raise InputError(f"{path}: missing key {key!r}")
    return payload
