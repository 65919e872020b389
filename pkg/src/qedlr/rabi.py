"""Extended Rabi model: exact diagonalization oracle and analytic benchmarks.

The model is a two-level system (splitting omega0) coupled to a single
photon mode (frequency omegac) through lambda * sigma_x * q, with
q = (a + a^dag)/sqrt(2 omegac).  There is no dipole self-energy term:
sigma_x^2 is the identity, so it would only shift all energies.

Response pairs are labelled by (observable, perturbation):
    "ss"  dipole response to a classical potential on sigma_x
    "qs"  field response to the same potential
    "sq"  dipole response to an external current driving the mode
    "qq"  field response to the current
The current-driven pairs ("sq", "qq") carry a 1/omegac prefactor in
their Lehmann weights; for real eigenfunctions this gives the
reciprocity  chi_qs(w) = omegac * chi_sq(w).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PAIRS = ("ss", "qs", "sq", "qq")

_MAX_NFOCK = 4096
_TOP_OCC_TOL = 1e-10


@dataclass(frozen=True)
class RabiParams:
    omega0: float
    omegac: float
    lam: float
    n_fock: int = 40

    def __post_init__(self):
        if not (self.omega0 > 0 and self.omegac > 0):
            raise ValueError("omega0 and omegac must be > 0")
        if self.n_fock < 2:
            raise ValueError(f"n_fock must be >= 2, got {self.n_fock}")


@dataclass(frozen=True)
class ResponseFunction:
    """Pole expansion of a response function: chi(z) = sum_k w_k * 2*Omega_k/(z^2-Omega_k^2)."""

    poles: np.ndarray  # excitation energies Omega_k > 0
    weights: np.ndarray  # real weights for real eigenfunctions

    def __call__(self, omega, eta: float = 1e-3) -> np.ndarray:
        z = np.asarray(omega, dtype=complex) + 1j * eta
        zz = z[..., None]
        terms = 1.0 / (zz - self.poles) - 1.0 / (zz + self.poles)
        return terms @ self.weights


def build_hamiltonian(params: RabiParams) -> np.ndarray:
    """H = (omega0/2) sigma_z x 1 + omegac 1 x a^dag a + lam sigma_x x q.

    Basis ordering: {|g>, |e>} x {|0>..|n_fock-1>}, ground sector first.
    """
    nf = params.n_fock
    n = np.arange(nf)
    sqn = np.sqrt(n[1:])
    # a + a^dag in the Fock basis
    x = np.zeros((nf, nf))
    x[n[1:], n[1:] - 1] = sqn
    x[n[1:] - 1, n[1:]] = sqn
    q = x / np.sqrt(2.0 * params.omegac)

    h = np.zeros((2 * nf, 2 * nf))
    # sigma_z = diag(-1, +1) on (g, e)
    h[:nf, :nf] = -0.5 * params.omega0 * np.eye(nf) + params.omegac * np.diag(n)
    h[nf:, nf:] = +0.5 * params.omega0 * np.eye(nf) + params.omegac * np.diag(n)
    # sigma_x swaps the two sectors
    h[:nf, nf:] = params.lam * q
    h[nf:, :nf] = params.lam * q
    return h


def _sigma_x_op(nf: int) -> np.ndarray:
    s = np.zeros((2 * nf, 2 * nf))
    s[:nf, nf:] = np.eye(nf)
    s[nf:, :nf] = np.eye(nf)
    return s


def _q_op(nf: int, omegac: float) -> np.ndarray:
    n = np.arange(nf)
    sqn = np.sqrt(n[1:])
    x = np.zeros((nf, nf))
    x[n[1:], n[1:] - 1] = sqn
    x[n[1:] - 1, n[1:]] = sqn
    q1 = x / np.sqrt(2.0 * omegac)
    q = np.zeros((2 * nf, 2 * nf))
    q[:nf, :nf] = q1
    q[nf:, nf:] = q1
    return q


def diagonalize(params: RabiParams, auto_converge: bool = True):
    """Exact diagonalization with automatic Fock-space doubling.

    Doubles n_fock until the ground state's occupation of the top Fock
    state is below 1e-10.  Returns (energies, eigenvectors, params) with
    the possibly enlarged truncation.
    """
    p = params
    while True:
        h = build_hamiltonian(p)
        evals, evecs = np.linalg.eigh(h)
        nf = p.n_fock
        gs = evecs[:, 0]
        top_occ = gs[nf - 1] ** 2 + gs[2 * nf - 1] ** 2
        if top_occ < _TOP_OCC_TOL:
            return evals, evecs, p
        if not auto_converge or 2 * nf > _MAX_NFOCK:
            raise ValueError(
                f"Fock truncation not converged: top-state occupation "
                f"{top_occ:.2e} at n_fock={nf}"
            )
        p = RabiParams(p.omega0, p.omegac, p.lam, 2 * nf)


def exact_response(params: RabiParams, pair: str) -> ResponseFunction:
    """Lehmann response function of the exact coupled ground state."""
    if pair not in PAIRS:
        raise ValueError(f"pair must be one of {PAIRS}, got {pair!r}")
    evals, evecs, p = diagonalize(params)
    nf = p.n_fock
    gs = evecs[:, 0]
    f = (gs @ _sigma_x_op(nf)) @ evecs  # <0|sigma_x|k>
    g = (gs @ _q_op(nf, p.omegac)) @ evecs  # <0|q|k>
    omegas = evals - evals[0]
    keep = omegas > 1e-12
    f, g, omegas = f[keep], g[keep], omegas[keep]
    if pair == "ss":
        w = f * f
    elif pair == "qs":
        w = g * f
    elif pair == "sq":
        w = f * g / p.omegac
    else:  # qq
        w = g * g / p.omegac
    return ResponseFunction(poles=omegas, weights=w)


def prpa_frequencies(params: RabiParams):
    """Closed-form pRPA polariton frequencies and eigenvectors.

    Omega_pm^2 = (omega0^2+omegac^2)/2 pm sqrt((omega0^2-omegac^2)^2 + 8 lam^2 omega0)/2.
    Returns (omega_minus, omega_plus, vecs) where vecs[:, i] are the
    normalized (E1, P1) eigenvectors of the 2x2 Hermitian form.  An
    overcritical coupling (Omega_-^2 < 0) raises ValueError.
    """
    w02 = params.omega0 ** 2
    wc2 = params.omegac ** 2
    disc = np.sqrt((w02 - wc2) ** 2 + 8.0 * params.lam ** 2 * params.omega0)
    om2_minus = 0.5 * (w02 + wc2) - 0.5 * disc
    om2_plus = 0.5 * (w02 + wc2) + 0.5 * disc
    if om2_minus < 0:
        raise ValueError(
            f"overcritical coupling: Omega_-^2 = {om2_minus:.6e} < 0 (unstable)"
        )
    v = np.sqrt(2.0) * params.lam * np.sqrt(params.omega0)
    mat = np.array([[w02, v], [v, wc2]])
    _, vecs = np.linalg.eigh(mat)
    return np.sqrt(om2_minus), np.sqrt(om2_plus), vecs


def rwa_frequencies(params: RabiParams):
    """Jaynes-Cummings one-photon transition frequencies (Omega_-, Omega_+)."""
    lam_p = params.lam / np.sqrt(2.0 * params.omegac)
    delta = params.omega0 - params.omegac
    om0 = np.sqrt(delta ** 2 + 4.0 * lam_p ** 2)
    lower = 0.5 * (params.omegac + params.omega0 - om0)
    upper = 0.5 * (params.omegac + params.omega0 + om0)
    return lower, upper


def _rwa_response(params: RabiParams, pair: str) -> ResponseFunction:
    # single-excitation JC sector in the {|g,1>, |e,0>} basis
    lam_p = params.lam / np.sqrt(2.0 * params.omegac)
    h2 = np.array([[params.omegac, lam_p], [lam_p, params.omega0]])
    evals, vecs = np.linalg.eigh(h2)
    f = vecs[1, :].copy()  # <g,0|sigma_x|pm> = |e,0> component
    g = vecs[0, :] / np.sqrt(2.0 * params.omegac)  # |g,1> component
    if pair == "ss":
        w = f * f
    elif pair == "qs":
        w = g * f
    elif pair == "sq":
        w = f * g / params.omegac
    else:
        w = g * g / params.omegac
    return ResponseFunction(poles=evals, weights=w)


def _prpa_response(params: RabiParams, pair: str) -> ResponseFunction:
    om_minus, om_plus, vecs = prpa_frequencies(params)
    omegas = np.array([om_minus, om_plus])
    # transition amplitudes from the Hermitian-form eigenvectors:
    # <0|sigma_x|I> = sqrt(omega0/Omega_I) E_I, <0|q|I> = P_I/sqrt(2 Omega_I)
    f = np.sqrt(params.omega0 / omegas) * vecs[0, :]
    g = vecs[1, :] / np.sqrt(2.0 * omegas)
    if pair == "ss":
        w = f * f
    elif pair == "qs":
        w = g * f
    elif pair == "sq":
        w = f * g / params.omegac
    else:
        w = g * g / params.omegac
    return ResponseFunction(poles=omegas, weights=w)


def response(params: RabiParams, method: str, pair: str) -> ResponseFunction:
    """Response function by method in {exact, prpa, rwa}."""
    if pair not in PAIRS:
        raise ValueError(f"pair must be one of {PAIRS}, got {pair!r}")
    if method == "exact":
        return exact_response(params, pair)
    if method == "prpa":
        return _prpa_response(params, pair)
    if method == "rwa":
        return _rwa_response(params, pair)
    raise ValueError(f"method must be exact, prpa or rwa, got {method!r}")


def extract_kernels(params: RabiParams, omega_grid, eta: float = 1e-3):
    """Frequency-dependent Mxc kernels from exact response functions.

    f_sigma(w) = 1/chi_ss_uncoupled(w) - 1/chi_ss(w)
    f_q(w)     = chi_sq(w) / (chi_ss(w) * chi_qq(w))

    f_q follows from inverting the coupled Dyson-type equations for the
    current-driven responses; its weak-coupling limit is the mean-field
    value lam.  Grid points where a response vanishes show up as poles
    (inf) of the kernel rather than raising.
    """
    if eta <= 0:
        raise ValueError("eta must be > 0")
    omega_grid = np.asarray(omega_grid, dtype=float)
    chi_ss = exact_response(params, "ss")(omega_grid, eta)
    chi_sq = exact_response(params, "sq")(omega_grid, eta)
    chi_qq = exact_response(params, "qq")(omega_grid, eta)
    chi_s = ResponseFunction(
        poles=np.array([params.omega0]), weights=np.array([1.0])
    )(omega_grid, eta)

    with np.errstate(divide="ignore", invalid="ignore"):
        f_sigma = 1.0 / chi_s - 1.0 / chi_ss
        f_q = chi_sq / (chi_ss * chi_qq)
    return f_sigma, f_q


def rabi_spectra(params: RabiParams, method: str, pair: str, grid, eta: float = 1e-3):
    """sigma(w) = -(4 pi w / c) Im chi_pair(w + i eta) on the given grid.

    The sign makes same-channel absorption positive with our retarded
    Lehmann convention; mixed pairs keep their signed peaks.
    Returns (Spectrum, ResponseFunction) so callers can also compare
    stick data directly.
    """
    from .types import Spectrum
    from .units import C_AU

    grid = np.asarray(grid, dtype=float)
    chi = response(params, method, pair)
    vals = -(4.0 * np.pi * grid / C_AU) * np.imag(chi(grid, eta))
    kind = {"ss": "matter", "qq": "photon"}.get(pair, "mixed")
    return Spectrum(grid=grid, values=vals, kind=kind, broadening=eta), chi
