"""Photon environments, analytic decay rates, and lineshape analysis.

A quasi-1D cavity of dimensions Lx >> Ly, Lz carries modes
omega_alpha = alpha c pi / Lx with coupling
lam_alpha = sqrt(8 pi / V) sin(omega_alpha x0 / c) e_x   (a.u., eps0 = 1/4pi).

Lifetime extraction works on stick spectra binned at the coupled-mode
spacing: the sampled continuum produces the physical linewidth directly,
no artificial broadening is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .types import PeakReport, PhotonMode, Spectrum
from .units import C_AU


@dataclass(frozen=True)
class CavitySpec1D:
    lx: float  # a.u. lengths
    ly: float
    lz: float
    x0: float
    count: int = 0  # number of modes when no window is given
    window: tuple[float, float] | None = None  # (omega_lo, omega_hi), a.u.

    def __post_init__(self):
        if not (self.lx > 0 and self.ly > 0 and self.lz > 0):
            raise ValueError("cavity dimensions must be > 0")
        if not 0 <= self.x0 <= self.lx:
            raise ValueError("x0 must lie inside [0, Lx]")
        if self.window is None and self.count < 1:
            raise ValueError("need count >= 1 or a frequency window")


def gen_modes_1d(spec: CavitySpec1D) -> list[PhotonMode]:
    """Standing-wave modes of the quasi-1D cavity, evaluated at x0."""
    domega = np.pi * C_AU / spec.lx
    if spec.window is not None:
        lo, hi = spec.window
        a_lo = max(1, int(np.ceil(lo / domega)))
        a_hi = int(np.floor(hi / domega))
        if a_hi < a_lo:
            raise ValueError(
                f"window ({lo:g}, {hi:g}) a.u. contains no cavity modes "
                f"(spacing {domega:g})"
            )
        alphas = np.arange(a_lo, a_hi + 1)
    else:
        alphas = np.arange(1, spec.count + 1)
    omegas = alphas * domega
    amp = np.sqrt(8.0 * np.pi / (spec.lx * spec.ly * spec.lz))
    lam_x = amp * np.sin(alphas * np.pi * spec.x0 / spec.lx)
    return [
        PhotonMode(id=int(a), omega=float(w), coupling=(float(l), 0.0, 0.0))
        for a, w, l in zip(alphas, omegas, lam_x)
    ]


def add_strong_modes(modes, strong) -> list[PhotonMode]:
    """Append strongly coupled modes to a base ensemble.

    Each entry of `strong` is (omega, lambda_scale): a new mode at omega
    whose coupling is lambda_scale times the coupling magnitude of the
    nearest coupled base mode (same polarization direction).  Appending a
    zero-scale mode leaves all spectra unchanged.
    """
    modes = list(modes)
    top = max(np.linalg.norm(m.coupling) for m in modes)
    base = [m for m in modes if np.linalg.norm(m.coupling) > 1e-8 * top]
    if not base:
        raise ValueError("base ensemble has no coupled modes")
    next_id = max(m.id for m in modes) + 1
    out = list(modes)
    for omega, scale in strong:
        ref = min(base, key=lambda m: abs(m.omega - omega))
        unit = ref.coupling / np.linalg.norm(ref.coupling)
        mag = np.linalg.norm(ref.coupling)
        out.append(
            PhotonMode(id=next_id, omega=float(omega), coupling=scale * mag * unit)
        )
        next_id += 1
    return out


def ww_rate_3d(omega0: float, dipole) -> tuple[float, float]:
    """Free-space Wigner-Weisskopf rate: Gamma = omega^3 |d|^2/(3 pi eps0 c^3).

    Returns (Gamma, tau) in a.u.; eps0 = 1/(4 pi) makes this
    4 omega^3 |d|^2 / (3 c^3).
    """
    if not omega0 > 0:
        raise ValueError("omega0 must be > 0")
    d2 = float(np.sum(np.square(np.atleast_1d(dipole))))
    gamma = 4.0 * omega0 ** 3 * d2 / (3.0 * C_AU ** 3)
    tau = np.inf if gamma == 0 else 1.0 / gamma
    return gamma, tau


def ww_rate_1d(omega0: float, dipole, ly: float, lz: float) -> tuple[float, float]:
    """Quasi-1D cavity rate: Gamma = omega |d|^2/(Ly Lz eps0 c) = 4 pi omega |d|^2/(Ly Lz c)."""
    if not (omega0 > 0 and ly > 0 and lz > 0):
        raise ValueError("omega0, ly, lz must be > 0")
    d2 = float(np.sum(np.square(np.atleast_1d(dipole))))
    gamma = 4.0 * np.pi * omega0 * d2 / (ly * lz * C_AU)
    tau = np.inf if gamma == 0 else 1.0 / gamma
    return gamma, tau


class PeakError(ValueError):
    pass


def extract_peak(spectrum: Spectrum, search_window: tuple[float, float]) -> PeakReport:
    """Peak position, FWHM and lifetime from a sampled lineshape.

    Peak position is refined parabolically over three points; the
    half-maximum crossings are linearly interpolated and must both lie
    inside the window.
    """
    lo, hi = search_window
    g, v = spectrum.grid, spectrum.values
    sel = (g >= lo) & (g <= hi)
    if sel.sum() < 3:
        raise PeakError(f"window ({lo:g}, {hi:g}) holds fewer than 3 grid points")
    gw, vw = g[sel], v[sel]
    i = int(np.argmax(vw))
    if i == 0 or i == vw.size - 1:
        raise PeakError("maximum sits on the window edge; widen the window")
    # parabolic refinement of the peak position
    y0, y1, y2 = vw[i - 1], vw[i], vw[i + 1]
    denom = y0 - 2 * y1 + y2
    shift = 0.0 if denom == 0 else 0.5 * (y0 - y2) / denom
    shift = float(np.clip(shift, -0.5, 0.5))
    e_peak = gw[i] + shift * (
        gw[i + 1] - gw[i] if shift > 0 else gw[i] - gw[i - 1]
    )
    vmax = y1 - 0.25 * (y0 - y2) * shift
    half = 0.5 * vmax

    def cross(direction: int) -> float:
        j = i
        while 0 <= j < vw.size and vw[j] > half:
            j += direction
        if j < 0 or j >= vw.size:
            raise PeakError(
                "half-maximum crossing leaves the search window; widen it"
            )
        j_in = j - direction
        frac = (vw[j_in] - half) / (vw[j_in] - vw[j])
        return float(gw[j_in] + frac * (gw[j] - gw[j_in]))

    left = cross(-1)
    right = cross(+1)
    fwhm = right - left
    if not fwhm > 0:
        raise PeakError("non-positive FWHM; the window holds no resolved peak")
    asym = ((right - e_peak) - (e_peak - left)) / fwhm
    return PeakReport(
        e_peak=float(e_peak),
        fwhm=float(fwhm),
        tau=1.0 / fwhm,  # hbar = 1
        asymmetry=float(asym),
    )


def fano_profile(omega, q, gamma, e_r, amp, offset):
    eps = 2.0 * (np.asarray(omega) - e_r) / gamma
    return amp * (q + eps) ** 2 / (1.0 + eps ** 2) + offset


def fit_fano(spectrum: Spectrum, window: tuple[float, float]):
    """Least-squares Fano fit; returns (q, gamma, e_r, residual).

    |q| -> large recovers a Lorentzian.  The fit is seeded from
    extract_peak and bounded to keep gamma positive.
    """
    lo, hi = window
    sel = (spectrum.grid >= lo) & (spectrum.grid <= hi)
    gw, vw = spectrum.grid[sel], spectrum.values[sel]
    if gw.size < 6:
        raise PeakError("too few points in the fit window")
    peak = extract_peak(spectrum, window)
    vmax = float(np.max(vw))
    scale = max(vmax, 1e-300)

    def resid(p):
        q, gamma, e_r, amp, offset = p
        return (fano_profile(gw, q, gamma, e_r, amp, offset) - vw) / scale

    x0 = [50.0, peak.fwhm, peak.e_peak, vmax / 50.0 ** 2, 0.0]
    res = least_squares(
        resid,
        x0,
        bounds=(
            [-1e4, peak.fwhm * 1e-3, lo, 0.0, -vmax],
            [1e4, (hi - lo) * 10, hi, np.inf, vmax],
        ),
        max_nfev=20000,
    )
    if not res.success:
        raise RuntimeError(
            f"Fano fit did not converge: {res.message}; residual {np.linalg.norm(res.fun):.3e}"
        )
    q, gamma, e_r = res.x[0], res.x[1], res.x[2]
    return float(q), float(gamma), float(e_r), float(np.linalg.norm(res.fun))
