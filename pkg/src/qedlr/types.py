"""Shared domain types.

All quantities held by these types are in Hartree atomic units.  The IO
layer (qedlr.io) converts to/from eV, Angstrom, nm on disk.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(3)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PhotonMode:
    """One quantized field mode: frequency and evaluated coupling vector."""

    id: int
    omega: float  # mode frequency omega_alpha > 0
    coupling: np.ndarray  # lambda_alpha, 3-vector, energy^{1/2}/length

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"mode {self.id}: omega must be > 0, got {self.omega}")
        c = _as_vec3(self.coupling)
        if not np.all(np.isfinite(c)):
            raise ValueError(f"mode {self.id}: coupling must be finite")
        object.__setattr__(self, "coupling", c)


@dataclass(frozen=True)
class Transition:
    """One occupied->unoccupied electronic pair."""

    id: int
    omega_q: float  # KS pair energy eps_a - eps_i > 0
    dipole: np.ndarray  # <i|e r|a>, 3-vector, charge*length
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if not self.omega_q > 0:
            raise ValueError(
                f"transition {self.id}: omega_q must be > 0, got {self.omega_q}"
            )
        d = _as_vec3(self.dipole)
        if not np.all(np.isfinite(d)):
            raise ValueError(f"transition {self.id}: dipole must be finite")
        object.__setattr__(self, "dipole", d)
        object.__setattr__(self, "position", _as_vec3(self.position))


@dataclass(frozen=True)
class Excitation:
    """One coupled eigenpair of the photon-extended response problem.

    evec_e and evec_p are the matter/photon parts of the normalized
    eigenvector; evec_p may be None for very large mode counts, in which
    case sigma_p still carries the photonic weight.
    """

    omega: float  # Omega_I (a.u.); for unstable roots this is sqrt(|Omega^2|)
    evec_e: np.ndarray
    evec_p: np.ndarray | None
    sigma_e: float
    sigma_p: float
    unstable: bool = False

    def __post_init__(self):
        e = np.asarray(self.evec_e, dtype=float)
        e.setflags(write=False)
        object.__setattr__(self, "evec_e", e)
        if self.evec_p is not None:
            p = np.asarray(self.evec_p, dtype=float)
            p.setflags(write=False)
            object.__setattr__(self, "evec_p", p)


@dataclass(frozen=True)
class Spectrum:
    """Sampled strength function on an ascending frequency grid."""

    grid: np.ndarray
    values: np.ndarray
    kind: str  # matter | photon | mixed | cross-section
    broadening: float = 0.0  # Delta; 0 means sticks binned at grid resolution

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise ValueError("grid must be strictly ascending")
        if not np.all(np.isfinite(v)):
            raise ValueError("spectrum values must be finite")
        g.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class StrengthSet:
    """Oscillator strengths of all four response channels per excitation."""

    omega: np.ndarray  # Omega_I
    f_nn: np.ndarray
    f_pn: np.ndarray
    f_np: np.ndarray
    f_pp: np.ndarray
    complete: bool = True  # False when built from a windowed solve

    def __post_init__(self):
        for name in ("omega", "f_nn", "f_pn", "f_np", "f_pp"):
            a = np.asarray(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)


@dataclass(frozen=True)
class PeakReport:
    """FWHM / lifetime summary of one spectral feature (a.u. internally)."""

    e_peak: float
    fwhm: float
    tau: float  # hbar / fwhm = 1/fwhm in a.u.
    asymmetry: float
    fano_q: float | None = None
