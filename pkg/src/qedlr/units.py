"""Physical constants and unit conversion.

All internal computation uses Hartree atomic units (hbar = e = m_e =
4*pi*eps0 = 1, c = 137.035999).  Conversion to/from eV, Angstrom, nm,
femtoseconds etc. happens only at IO boundaries.
"""

from __future__ import annotations

import math

# CODATA-2018 bridging constants
HARTREE_EV = 27.211386245988
BOHR_ANGSTROM = 0.529177210903
BOHR_NM = BOHR_ANGSTROM * 0.1
C_AU = 137.035999
HBAR_EVFS = 0.6582119569
HBARC_EV_NM = 197.3269804
AU_TIME_FS = HBAR_EVFS / HARTREE_EV  # one atomic time unit in fs

# eps0 = 1/(4 pi) in Hartree atomic units
EPS0_AU = 1.0 / (4.0 * math.pi)

# coupling lambda carries units energy^{1/2}/length
_COUPLING_EVNM_TO_AU = BOHR_NM / math.sqrt(HARTREE_EV)


class UnitError(ValueError):
    """Raised for unknown units or dimensionally incompatible conversion."""


# unit name -> (dimension, factor to atomic units)
_UNITS = {
    "ha": ("energy", 1.0),
    "hartree": ("energy", 1.0),
    "ev": ("energy", 1.0 / HARTREE_EV),
    "mev": ("energy", 1.0e-3 / HARTREE_EV),
    "bohr": ("length", 1.0),
    "a": ("length", 1.0 / BOHR_ANGSTROM),
    "angstrom": ("length", 1.0 / BOHR_ANGSTROM),
    "nm": ("length", 1.0 / BOHR_NM),
    "um": ("length", 1.0e3 / BOHR_NM),
    "au_time": ("time", 1.0),
    "fs": ("time", 1.0 / AU_TIME_FS),
    "au": (None, 1.0),  # dimension taken from the partner unit
    "ev^0.5/nm": ("coupling", _COUPLING_EVNM_TO_AU),
    "ev^1/2/nm": ("coupling", _COUPLING_EVNM_TO_AU),
    # transition dipoles on disk are e*Angstrom
    "ea": ("dipole", 1.0 / BOHR_ANGSTROM),
    "enm": ("dipole", 1.0 / BOHR_NM),
}


def _lookup(name: str):
    key = name.strip().lower()
    if key not in _UNITS:
        raise UnitError(f"unknown unit {name!r}")
    return _UNITS[key]


def convert(value: float, from_unit: str, to_unit: str) -> float:
    """Linear rescaling between units of the same dimension.

    The generic atomic unit 'au' is compatible with any dimension and
    inherits it from the other side of the conversion.
    """
    dim_f, fac_f = _lookup(from_unit)
    dim_t, fac_t = _lookup(to_unit)
    if dim_f is not None and dim_t is not None and dim_f != dim_t:
        raise UnitError(
            f"incompatible dimensions: {from_unit!r} is {dim_f}, "
            f"{to_unit!r} is {dim_t}"
        )
    return value * fac_f / fac_t


def ev_to_au(value: float) -> float:
    return value / HARTREE_EV


def au_to_ev(value: float) -> float:
    return value * HARTREE_EV


def lifetime_fs_from_fwhm_ev(fwhm_ev: float) -> float:
    """tau = hbar / Delta E, with hbar = 0.6582119569 eV fs."""
    return HBAR_EVFS / fwhm_ev
