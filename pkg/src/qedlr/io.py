"""On-disk formats: CSV with mandatory headers, eV/Angstrom/nm units.

Files never carry atomic units; conversion happens on load/save.  All
floats are written with 12 significant digits so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .types import PeakReport, PhotonMode, Transition
from .units import (
    BOHR_NM,
    HARTREE_EV,
    AU_TIME_FS,
    convert,
)

TRANSITION_HEADER = ["id", "omega_eV", "dx_eA", "dy_eA", "dz_eA", "x_nm", "y_nm", "z_nm"]
MODE_HEADER = ["id", "omega_eV", "lx", "ly", "lz"]
EXCITATION_HEADER = ["Omega_eV", "f_nn", "f_pn", "f_pp", "sigma_e", "sigma_p"]
SPECTRUM_HEADER = ["omega_eV", "value"]


class FormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _read_rows(path):
    """Rows with their 1-based line numbers; '#' comments and blanks skipped."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            rows.append((lineno, next(csv.reader([line]))))
    if not rows:
        raise FormatError(f"{path}: empty file")
    return rows


def _check_header(path, row, expected):
    got = [c.strip() for c in row]
    if got != expected:
        raise FormatError(
            f"{path}: bad header {got!r}, expected {expected!r}"
        )


def _parse_floats(path, lineno, cells, ncol):
    if len(cells) != ncol:
        raise FormatError(
            f"{path}:{lineno}: expected {ncol} columns, got {len(cells)}"
        )
    try:
        return [float(c) for c in cells]
    except ValueError as exc:
        raise FormatError(f"{path}:{lineno}: {exc}") from None


def load_transitions(path) -> list[Transition]:
    rows = _read_rows(path)
    _check_header(path, rows[0][1], TRANSITION_HEADER)
    out, seen = [], set()
    for lineno, cells in rows[1:]:
        vals = _parse_floats(path, lineno, cells, 8)
        tid = int(vals[0])
        if tid in seen:
            raise FormatError(f"{path}:{lineno}: duplicate transition id {tid}")
        seen.add(tid)
        if vals[1] <= 0:
            raise FormatError(
                f"{path}:{lineno}: omega_eV must be > 0, got {vals[1]:g}"
            )
        out.append(
            Transition(
                id=tid,
                omega_q=vals[1] / HARTREE_EV,
                dipole=[convert(v, "eA", "au") for v in vals[2:5]],
                position=[v / BOHR_NM for v in vals[5:8]],
            )
        )
    if not out:
        raise FormatError(f"{path}: no transitions")
    return out


def write_transitions(transitions, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(TRANSITION_HEADER) + "\n")
        for t in transitions:
            cells = (
                [str(t.id), _fmt(t.omega_q * HARTREE_EV)]
                + [_fmt(convert(v, "au", "eA")) for v in t.dipole]
                + [_fmt(v * BOHR_NM) for v in t.position]
            )
            fh.write(",".join(cells) + "\n")


def load_modes(path) -> list[PhotonMode]:
    rows = _read_rows(path)
    _check_header(path, rows[0][1], MODE_HEADER)
    out, seen = [], set()
    for lineno, cells in rows[1:]:
        vals = _parse_floats(path, lineno, cells, 5)
        mid = int(vals[0])
        if mid in seen:
            raise FormatError(f"{path}:{lineno}: duplicate mode id {mid}")
        seen.add(mid)
        if vals[1] <= 0:
            raise FormatError(
                f"{path}:{lineno}: omega_eV must be > 0, got {vals[1]:g}"
            )
        out.append(
            PhotonMode(
                id=mid,
                omega=vals[1] / HARTREE_EV,
                coupling=[convert(v, "eV^0.5/nm", "au") for v in vals[2:5]],
            )
        )
    return out


def write_modes(modes, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(MODE_HEADER) + "\n")
        for m in modes:
            cells = [str(m.id), _fmt(m.omega * HARTREE_EV)] + [
                _fmt(convert(v, "au", "eV^0.5/nm")) for v in m.coupling
            ]
            fh.write(",".join(cells) + "\n")


def write_excitations(path, omegas_au, f_nn, f_pn, f_pp, sigma_e, sigma_p) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(EXCITATION_HEADER) + "\n")
        for row in zip(omegas_au, f_nn, f_pn, f_pp, sigma_e, sigma_p):
            cells = [_fmt(row[0] * HARTREE_EV)] + [_fmt(v) for v in row[1:]]
            fh.write(",".join(cells) + "\n")


def load_excitations(path) -> dict[str, np.ndarray]:
    """Columns of a solve output; Omega_eV stays in eV."""
    rows = _read_rows(path)
    _check_header(path, rows[0][1], EXCITATION_HEADER)
    data = []
    for lineno, cells in rows[1:]:
        data.append(_parse_floats(path, lineno, cells, 6))
    if not data:
        raise FormatError(f"{path}: no excitations")
    arr = np.array(data)
    return dict(zip(EXCITATION_HEADER, arr.T))


def write_spectrum(path, grid_ev, values) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(SPECTRUM_HEADER) + "\n")
        for w, v in zip(grid_ev, values):
            fh.write(f"{_fmt(w)},{_fmt(v)}\n")


def load_spectrum(path):
    rows = _read_rows(path)
    _check_header(path, rows[0][1], SPECTRUM_HEADER)
    data = [
        _parse_floats(path, lineno, cells, 2) for lineno, cells in rows[1:]
    ]
    if not data:
        raise FormatError(f"{path}: empty spectrum")
    arr = np.array(data)
    return arr[:, 0], arr[:, 1]


def write_peak_report(path, report: PeakReport) -> None:
    """PeakReport JSON in eV / fs."""
    payload = {
        "e_peak_eV": report.e_peak * HARTREE_EV,
        "fwhm_eV": report.fwhm * HARTREE_EV,
        "tau_fs": report.tau * AU_TIME_FS,
        "asymmetry": report.asymmetry,
    }
    if report.fano_q is not None:
        payload["fano_q"] = report.fano_q
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_config(path) -> dict[str, str]:
    """Flat key-value config: 'key = value' lines, '#' comments."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise FormatError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        out[key.strip()] = value.strip()
    return out
