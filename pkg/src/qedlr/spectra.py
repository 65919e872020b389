"""Oscillator strengths, sum rules, broadening and cross sections.

Strength conventions, all from the Hermitian-form eigenvectors (E1, P1):

    matter transition dipole   D_mu(I) = sum_q sqrt(omega_q/Omega_I) d_q,mu E_1q
    photon transition moment   g_alpha(I) = P_1alpha / sqrt(2 Omega_I)

    f_nn = (2/div) Omega_I sum_mu |D_mu|^2
    f_pn(I, alpha) = 2 Omega_I g_alpha(I) (D . u_alpha)   (u_alpha: coupling direction)
    f_np = f_pn / omega_alpha
    f_pp(I, alpha) = (2/div) Omega_I g_alpha(I) sum_a' g_a'(I) / omega_a'

The trace divisor defaults to 3 (isotropic average); scalar models pass 1.
"""

from __future__ import annotations

import numpy as np

from .casida import CoupledSystem
from .types import Excitation, Spectrum, StrengthSet
from .units import C_AU


def _system_arrays(system: CoupledSystem):
    omega_q = np.array([t.omega_q for t in system.transitions])
    dip = np.array([t.dipole for t in system.transitions])
    omega_a = (
        np.array([m.omega for m in system.modes])
        if system.m
        else np.zeros(0)
    )
    return omega_q, dip, omega_a


def transition_dipoles(excitations, system: CoupledSystem) -> np.ndarray:
    """Many-body transition dipole vectors D_mu(I), shape (n_exc, 3)."""
    omega_q, dip, _ = _system_arrays(system)
    sq = np.sqrt(omega_q)
    e = np.array([exc.evec_e for exc in excitations])
    om = np.array([exc.omega for exc in excitations])
    return (e * sq[None, :]) @ dip / np.sqrt(om)[:, None]


def oscillator_strength_nn(
    excitations, system: CoupledSystem, trace_divisor: float = 3.0
) -> np.ndarray:
    """f_I = (2/div) sum_mu |sum_q sqrt(omega_q) d_q,mu E_1q|^2."""
    omega_q, dip, _ = _system_arrays(system)
    sq = np.sqrt(omega_q)
    e = np.array([exc.evec_e for exc in excitations])
    amp = (e * sq[None, :]) @ dip  # n_exc x 3
    return (2.0 / trace_divisor) * np.sum(amp ** 2, axis=1)


def strength_set(
    excitations, system: CoupledSystem, trace_divisor: float = 3.0
) -> StrengthSet:
    """All four channels; f_pn/f_np/f_pp are mode-summed per excitation.

    Requires photon eigenvector components; excitations solved with
    store_vectors=False only carry f_nn.
    """
    omega_q, dip, omega_a = _system_arrays(system)
    om = np.array([exc.omega for exc in excitations])
    f_nn = oscillator_strength_nn(excitations, system, trace_divisor)

    have_p = all(exc.evec_p is not None for exc in excitations) and system.m
    if not have_p:
        z = np.zeros_like(om)
        return StrengthSet(
            omega=om, f_nn=f_nn, f_pn=z, f_np=z, f_pp=z,
            complete=len(excitations) == system.n + system.m,
        )

    p = np.array([exc.evec_p for exc in excitations])  # n_exc x M
    g = p / np.sqrt(2.0 * om)[:, None]  # <0|q_alpha|I>
    d_vec = transition_dipoles(excitations, system)  # n_exc x 3
    lam = np.array([m.coupling for m in system.modes])
    nrm = np.linalg.norm(lam, axis=1)
    unit = np.zeros_like(lam)
    mask = nrm > 0
    unit[mask] = lam[mask] / nrm[mask, None]
    unit[~mask] = [1.0, 0.0, 0.0]
    d_on_modes = d_vec @ unit.T  # n_exc x M
    f_pn_ma = 2.0 * om[:, None] * g * d_on_modes
    f_np_ma = f_pn_ma / omega_a[None, :]
    g_over_w = g @ (1.0 / omega_a)
    f_pp = (2.0 / trace_divisor) * om * np.sum(g, axis=1) * g_over_w
    return StrengthSet(
        omega=om,
        f_nn=f_nn,
        f_pn=np.sum(f_pn_ma, axis=1),
        f_np=np.sum(f_np_ma, axis=1),
        f_pp=f_pp,
        complete=len(excitations) == system.n + system.m,
    )


def mixed_and_photon_strengths(excitations, system, trace_divisor: float = 3.0):
    """(f_pn, f_np, f_pp) arrays, mode-summed; see strength_set."""
    s = strength_set(excitations, system, trace_divisor)
    return s.f_pn, s.f_np, s.f_pp


def trk_sum(strengths: StrengthSet) -> float:
    """Sum of f_nn over a complete (unwindowed) solve.

    Equals sum_q (2/div) omega_q |d_q|^2 by eigenvector completeness.
    """
    if not strengths.complete:
        raise ValueError(
            "TRK sum rule is undefined on a windowed solve; include all excitations"
        )
    return float(np.sum(strengths.f_nn))


def bare_trk_sum(system: CoupledSystem, trace_divisor: float = 3.0) -> float:
    omega_q, dip, _ = _system_arrays(system)
    return float(
        (2.0 / trace_divisor) * np.sum(omega_q * np.sum(dip ** 2, axis=1))
    )


def broaden(omegas, strengths, delta: float, grid) -> Spectrum:
    """Lorentzian-broadened strength function, or binned sticks for delta=0.

    S(w) = sum_I f_I (1/pi) Delta / ((w - Omega_I)^2 + Delta^2); with
    delta=0 each stick is deposited linearly onto its two neighboring
    grid points and divided by the cell width, so the curve keeps unit
    integral per unit strength and is insensitive to grid alignment.
    """
    grid = np.asarray(grid, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    strengths = np.asarray(strengths, dtype=float)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if omegas.size == 0:
        return Spectrum(grid=grid, values=np.zeros_like(grid), kind="matter",
                        broadening=delta)
    if delta > 0:
        diff = grid[:, None] - omegas[None, :]
        vals = (strengths[None, :] / np.pi * delta / (diff ** 2 + delta ** 2)).sum(
            axis=1
        )
    else:
        if grid.size < 2:
            raise ValueError("delta=0 binning needs at least two grid points")
        inside = (omegas >= grid[0]) & (omegas <= grid[-1])
        om_in, f_in = omegas[inside], strengths[inside]
        j = np.clip(np.searchsorted(grid, om_in), 1, grid.size - 1)
        frac = (om_in - grid[j - 1]) / (grid[j] - grid[j - 1])
        sums = np.zeros(grid.size)
        np.add.at(sums, j - 1, f_in * (1.0 - frac))
        np.add.at(sums, j, f_in * frac)
        edges = np.concatenate(
            [
                [grid[0] - 0.5 * (grid[1] - grid[0])],
                0.5 * (grid[1:] + grid[:-1]),
                [grid[-1] + 0.5 * (grid[-1] - grid[-2])],
            ]
        )
        vals = sums / np.diff(edges)
    return Spectrum(grid=grid, values=vals, kind="matter", broadening=delta)


def cross_section(
    excitations,
    system: CoupledSystem,
    grid,
    eta: float = 1e-3,
    trace_divisor: float = 3.0,
) -> Spectrum:
    """Photoabsorption cross section from the polarizability trace.

    alpha_mumu(z) = sum_I 2 Omega_I D_mu(I)^2 / (Omega_I^2 - z^2),
    sigma(w) = (4 pi w / c) Im Tr alpha(w + i eta) / div.
    """
    if eta <= 0:
        raise ValueError("eta must be > 0")
    grid = np.asarray(grid, dtype=float)
    if not excitations:
        return Spectrum(grid=grid, values=np.zeros_like(grid),
                        kind="cross-section", broadening=eta)
    om = np.array([exc.omega for exc in excitations])
    d = transition_dipoles(excitations, system)  # n_exc x 3
    z2 = (grid + 1j * eta) ** 2
    denom = om[None, :] ** 2 - z2[:, None]
    tr = (2.0 * om[None, :] * np.sum(d ** 2, axis=1)[None, :] / denom).sum(axis=1)
    vals = (4.0 * np.pi * grid / C_AU) * np.imag(tr) / trace_divisor
    return Spectrum(grid=grid, values=vals, kind="cross-section", broadening=eta)


def field_spectrum(
    excitations,
    system: CoupledSystem,
    mode_subset,
    grid,
    eta: float = 1e-3,
    trace_divisor: float = 3.0,
) -> Spectrum:
    """Field absorption from the photon polarizability of selected modes.

    beta_alpha(z) = sum_I P_1alpha(I)^2 / (omega_alpha (Omega_I^2 - z^2)),
    sigma~(w) = (4 pi w / c) Im sum_alpha beta_alpha(w + i eta) / div.
    """
    if eta <= 0:
        raise ValueError("eta must be > 0")
    grid = np.asarray(grid, dtype=float)
    subset = np.asarray(list(mode_subset), dtype=int)
    exc = [e for e in excitations if e.evec_p is not None]
    if not exc or subset.size == 0:
        return Spectrum(grid=grid, values=np.zeros_like(grid), kind="photon",
                        broadening=eta)
    om = np.array([e.omega for e in exc])
    p = np.array([e.evec_p for e in exc])[:, subset]  # n_exc x |subset|
    omega_a = np.array([system.modes[i].omega for i in subset])
    z2 = (grid + 1j * eta) ** 2
    denom = om[None, :] ** 2 - z2[:, None]  # grid x n_exc
    w = np.sum(p ** 2 / omega_a[None, :], axis=1)  # per excitation
    tr = (w[None, :] / denom).sum(axis=1)
    vals = (4.0 * np.pi * grid / C_AU) * np.imag(tr) / trace_divisor
    return Spectrum(grid=grid, values=vals, kind="photon", broadening=eta)
