"""Photon-extended Casida pseudo-eigenvalue problem in the pRPA.

The Hermitian form is
    [[U, V], [V^T, diag(omega_alpha^2)]] Z = Omega^2 Z
with
    U_qq' = delta_qq' omega_q^2 + 2 sqrt(omega_q omega_q') K_qq'
    K_qq' = K^elec_qq' + sum_alpha (lam_alpha.d_q)(lam_alpha.d_q')   [self-energy]
    V_qa  = sqrt(2) sqrt(omega_q) omega_alpha (lam_alpha.d_q)

The coupling product keeps its algebraic sign; flipping the sign of any
single dipole is a diag(+-1) similarity and leaves the spectrum
invariant.

Three solvers are provided: a dense symmetric eigensolve, a 4-block
non-Hermitian reference, and a structured large-M solver that exploits
the diagonal photon block through Haynsworth inertia counting and
bisection on the Schur complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .types import Excitation, PhotonMode, Transition

_DENSE_GUARD = 20000
_REFERENCE_GUARD = 500
# store full photon eigenvector components only below this element count
_VECTOR_BUDGET = 5_000_000


class SolverSizeError(ValueError):
    pass


@dataclass(frozen=True)
class CoupledSystem:
    transitions: tuple[Transition, ...]
    modes: tuple[PhotonMode, ...]
    k_elec: np.ndarray | None = None
    include_self_energy: bool = True

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "modes", tuple(self.modes))
        n = len(self.transitions)
        if n < 1:
            raise ValueError("at least one transition is required")
        if self.k_elec is not None:
            k = np.asarray(self.k_elec, dtype=float)
            if k.shape != (n, n):
                raise ValueError(
                    f"k_elec shape {k.shape} does not match {n} transitions"
                )
            if not np.allclose(k, k.T, atol=1e-14):
                raise ValueError("k_elec must be symmetric")
            object.__setattr__(self, "k_elec", k)

    @property
    def n(self) -> int:
        return len(self.transitions)

    @property
    def m(self) -> int:
        return len(self.modes)


@dataclass(frozen=True)
class CoupledBlocks:
    u: np.ndarray  # n x n symmetric
    v: np.ndarray  # n x M, columns in ascending-d order
    d: np.ndarray  # omega_alpha^2, ascending
    mode_order: np.ndarray  # d[i] belongs to system.modes[mode_order[i]]
    omega_q: np.ndarray  # transition energies, for downstream strengths

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def m(self) -> int:
        return self.d.size


def assemble_blocks(system: CoupledSystem) -> CoupledBlocks:
    """Build U, V and the diagonal photon block from transition data."""
    n, m = system.n, system.m
    omega_q = np.array([t.omega_q for t in system.transitions])
    dip = np.array([t.dipole for t in system.transitions])  # n x 3
    if m:
        omega_a = np.array([mo.omega for mo in system.modes])
        lam = np.array([mo.coupling for mo in system.modes])  # M x 3
        coupling = dip @ lam.T  # n x M, signed lam_alpha . d_q
    else:
        omega_a = np.zeros(0)
        coupling = np.zeros((n, 0))

    k = np.zeros((n, n)) if system.k_elec is None else system.k_elec.copy()
    if system.include_self_energy and m:
        k += coupling @ coupling.T
    sq = np.sqrt(omega_q)
    u = np.diag(omega_q ** 2) + 2.0 * np.outer(sq, sq) * k
    v = np.sqrt(2.0) * sq[:, None] * omega_a[None, :] * coupling

    order = np.argsort(omega_a, kind="stable")
    return CoupledBlocks(
        u=u,
        v=v[:, order],
        d=omega_a[order] ** 2,
        mode_order=order,
        omega_q=omega_q,
    )


def _excitation_from_parts(omega2, e_raw, p_raw, unstable=False):
    nrm = np.sqrt(e_raw @ e_raw + (p_raw @ p_raw if p_raw is not None else 0.0))
    e = e_raw / nrm
    p = p_raw / nrm if p_raw is not None else None
    se = float(e @ e)
    sp = float(p @ p) if p is not None else 1.0 - se
    return Excitation(
        omega=float(np.sqrt(abs(omega2))),
        evec_e=e,
        evec_p=p,
        sigma_e=se,
        sigma_p=sp,
        unstable=unstable,
    )


def _unpermute(p_sorted: np.ndarray, mode_order: np.ndarray) -> np.ndarray:
    p = np.empty_like(p_sorted)
    p[mode_order] = p_sorted
    return p


def solve_dense(blocks: CoupledBlocks) -> list[Excitation]:
    """All n+M eigenpairs of the full symmetric matrix, ascending in Omega."""
    n, m = blocks.n, blocks.m
    if n + m > _DENSE_GUARD:
        raise SolverSizeError(
            f"n+M = {n + m} exceeds the dense guard {_DENSE_GUARD}; "
            "use solve_structured with a window"
        )
    a = np.zeros((n + m, n + m))
    a[:n, :n] = blocks.u
    a[:n, n:] = blocks.v
    a[n:, :n] = blocks.v.T
    a[n:, n:] = np.diag(blocks.d)
    evals, evecs = np.linalg.eigh(a)
    out = []
    for i in range(n + m):
        p = _unpermute(evecs[n:, i], blocks.mode_order)
        out.append(
            _excitation_from_parts(evals[i], evecs[:n, i], p, unstable=evals[i] < 0)
        )
    return out


def excitation_character(exc: Excitation) -> tuple[float, float]:
    """(sigma_e, sigma_p) photonic/electronic weights; sums to one."""
    return exc.sigma_e, exc.sigma_p


# ---------------------------------------------------------------------------
# structured large-M solver


class _SchurEvaluator:
    """Chunked evaluation of the Schur complement S(mu) = U - mu - V (D-mu)^-1 V^T.

    Pair rows (v_i * v_j over modes) are precomputed once, so each batch
    of evaluation points costs one BLAS matmul of shape (npairs, Mc) x
    (Mc, K).
    """

    def __init__(self, u, vc, dc):
        self.u = u
        self.dc = dc
        self.n = u.shape[0]
        iu = np.triu_indices(self.n)
        self.iu = iu
        self.pair_rows = vc[iu[0], :] * vc[iu[1], :]  # npairs x Mc

    def _pair_sums(self, mus, power=1):
        den = self.dc[:, None] - mus[None, :]
        # keep a pole collision finite; the caller never evaluates at a pole
        # except in the degenerate near-uncoupled case
        tiny = 1e-300
        den = np.where(np.abs(den) < tiny, tiny, den)
        if power == 1:
            c = 1.0 / den
        else:
            c = 1.0 / den ** 2
        return self.pair_rows @ c  # npairs x K

    def build(self, mus, power=1):
        """Stack of matrices: S(mu_k) for power=1, G(mu_k)=V (D-mu)^-2 V^T for power=2."""
        mus = np.asarray(mus, dtype=float)
        k = mus.size
        ps = self._pair_sums(mus, power)
        s = np.zeros((k, self.n, self.n))
        s[:, self.iu[0], self.iu[1]] = -ps.T if power == 1 else ps.T
        s[:, self.iu[1], self.iu[0]] = s[:, self.iu[0], self.iu[1]]
        if power == 1:
            s += self.u[None, :, :]
            s[:, np.arange(self.n), np.arange(self.n)] -= mus[:, None]
        return s

    def neg_counts(self, mus):
        s = self.build(mus)
        if self.n == 1:
            return (s[:, 0, 0] < 0).astype(np.int64)
        ev = np.linalg.eigvalsh(s)
        return np.count_nonzero(ev < 0, axis=1)


def _count_below(schur: _SchurEvaluator, mus: np.ndarray, chunk=2048) -> np.ndarray:
    """Eigenvalues of the coupled subproblem strictly below each mu."""
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    out = np.empty(mus.size, dtype=np.int64)
    for i in range(0, mus.size, chunk):
        m = mus[i : i + chunk]
        below_d = np.searchsorted(schur.dc, m, side="left")
        out[i : i + chunk] = below_d + schur.neg_counts(m)
    return out


def solve_structured(
    blocks: CoupledBlocks,
    window: tuple[float, float],
    store_vectors: bool | None = None,
    chunk: int = 2048,
) -> list[Excitation]:
    """Eigenpairs with Omega inside the window, via inertia bisection.

    Uncoupled modes (zero column of V) are deflated up front and emitted
    as trivial photonic excitations.  The remaining roots are isolated by
    counting eigenvalues below mu (Haynsworth inertia of the photon block
    plus the Schur complement), bracketed by Cauchy interlacing with the
    photon poles, and bisected to relative 5e-15.
    """
    lo, hi = window
    if not (0 < lo < hi):
        raise ValueError(f"window must satisfy 0 < lo < hi, got {window}")
    n, m = blocks.n, blocks.m
    mu_lo, mu_hi = lo * lo, hi * hi

    colnorm = np.linalg.norm(blocks.v, axis=0)
    # a coupling this far below the largest one shifts its root off the
    # photon pole by less than bisection can resolve (the shift scales
    # with the coupling squared); deflate it or its weights come out noise
    coupled = colnorm > 1e-8 * (colnorm.max() if colnorm.size else 0.0)
    dc = blocks.d[coupled]
    vc = blocks.v[:, coupled]
    mc = dc.size

    auto_vectors = store_vectors is None
    if auto_vectors:
        store_vectors = True  # decided below once the root count is known

    out: list[Excitation] = []

    # trivial excitations from deflated modes
    d_unc = blocks.d[~coupled]
    idx_unc = np.flatnonzero(~coupled)
    sel = (d_unc > mu_lo) & (d_unc < mu_hi)
    keep_vec_unc = sel.sum() * m <= _VECTOR_BUDGET
    for i, d0 in zip(idx_unc[sel], d_unc[sel]):
        p = None
        if keep_vec_unc:
            p = np.zeros(m)
            p[blocks.mode_order[i]] = 1.0
        out.append(
            Excitation(
                omega=float(np.sqrt(d0)),
                evec_e=np.zeros(n),
                evec_p=p,
                sigma_e=0.0,
                sigma_p=1.0,
            )
        )

    schur = _SchurEvaluator(blocks.u, vc, dc)
    k_lo, k_hi = _count_below(schur, np.array([mu_lo, mu_hi]), chunk)
    nroots = int(k_hi - k_lo)
    if nroots:
        idx = np.arange(k_lo, k_hi)  # global eigenvalue indices, 0-based
        # Cauchy interlacing: mu_j in [d_{j-n}, d_j]
        if mc:
            los = np.where(idx - n >= 0, dc[np.clip(idx - n, 0, mc - 1)], mu_lo)
            his = np.where(idx < mc, dc[np.clip(idx, 0, mc - 1)], mu_hi)
        else:
            los = np.full(nroots, mu_lo)
            his = np.full(nroots, mu_hi)
        los = np.maximum(los, mu_lo)
        his = np.minimum(his, mu_hi)
        # nudge off the poles and repair any bracket the clamp broke
        eps = 1e-13
        los = los * (1 - eps)
        his = his * (1 + eps)
        bad = _count_below(schur, los, chunk) > idx
        los[bad] = mu_lo
        bad = _count_below(schur, his, chunk) <= idx
        his[bad] = mu_hi

        for _ in range(90):
            mid = 0.5 * (los + his)
            above = _count_below(schur, mid, chunk) >= idx + 1
            his = np.where(above, mid, his)
            los = np.where(~above, mid, los)
            if np.max((his - los) / np.maximum(his, 1e-300)) < 5e-15:
                break
        mus = 0.5 * (los + his)

        if auto_vectors and nroots * m > _VECTOR_BUDGET:
            store_vectors = False

        for i0 in range(0, nroots, chunk):
            mu_c = mus[i0 : i0 + chunk]
            s = schur.build(mu_c)
            if n == 1:
                e_raw = np.ones((mu_c.size, 1))
            else:
                ev, evec = np.linalg.eigh(s)
                pick = np.argmin(np.abs(ev), axis=1)
                e_raw = evec[np.arange(mu_c.size), :, pick]
            g = schur.build(mu_c, power=2)  # V (D-mu)^-2 V^T
            p_norm2 = np.einsum("ki,kij,kj->k", e_raw, g, e_raw)
            if store_vectors:
                den = mu_c[:, None] - dc[None, :]
                tiny = 1e-300
                den = np.where(np.abs(den) < tiny, tiny, den)
                t = e_raw @ vc  # K x Mc
                p_raw = t / den
                for j in range(mu_c.size):
                    p_full = np.zeros(m)
                    p_full[coupled] = p_raw[j]
                    p_full = _unpermute(p_full, blocks.mode_order)
                    out.append(_excitation_from_parts(mu_c[j], e_raw[j], p_full))
            else:
                nrm2 = np.einsum("ki,ki->k", e_raw, e_raw) + p_norm2
                for j in range(mu_c.size):
                    se = float((e_raw[j] @ e_raw[j]) / nrm2[j])
                    out.append(
                        Excitation(
                            omega=float(np.sqrt(mu_c[j])),
                            evec_e=e_raw[j] / np.sqrt(nrm2[j]),
                            evec_p=None,
                            sigma_e=se,
                            sigma_p=1.0 - se,
                        )
                    )
    out.sort(key=lambda e: e.omega)
    return out


# ---------------------------------------------------------------------------
# non-Hermitian 4-block reference


def solve_nonhermitian_reference(system: CoupledSystem) -> list[Excitation]:
    """Direct solve of the 4-block (X, Y, A, B) generalized eigenproblem.

    Reference-quality only (n+M <= 500); returns the positive-frequency
    branch mapped onto the Hermitian-form eigenvectors.
    """
    n, m = system.n, system.m
    if n + m > _REFERENCE_GUARD:
        raise SolverSizeError(
            f"n+M = {n + m} exceeds the reference guard {_REFERENCE_GUARD}"
        )
    omega_q = np.array([t.omega_q for t in system.transitions])
    dip = np.array([t.dipole for t in system.transitions])
    omega_a = np.array([mo.omega for mo in system.modes]) if m else np.zeros(0)
    lam = (
        np.array([mo.coupling for mo in system.modes])
        if m
        else np.zeros((0, 3))
    )
    coupling = dip @ lam.T  # n x M

    k = np.zeros((n, n)) if system.k_elec is None else np.asarray(system.k_elec)
    k = k.copy()
    if system.include_self_energy and m:
        k += coupling @ coupling.T
    l_blk = np.diag(omega_q) + k
    m_blk = -coupling * omega_a[None, :]  # M_{q,alpha} = -omega_alpha lam.d
    n_blk = -0.5 * coupling.T  # N_{alpha,q} = -(1/2) lam.d
    w_blk = np.diag(omega_a)

    size = 2 * n + 2 * m
    a = np.zeros((size, size))
    a[:n, :n] = l_blk
    a[:n, n : 2 * n] = k
    a[:n, 2 * n : 2 * n + m] = m_blk
    a[:n, 2 * n + m :] = m_blk
    a[n : 2 * n, :n] = k
    a[n : 2 * n, n : 2 * n] = l_blk
    a[n : 2 * n, 2 * n : 2 * n + m] = m_blk
    a[n : 2 * n, 2 * n + m :] = m_blk
    a[2 * n : 2 * n + m, :n] = n_blk
    a[2 * n : 2 * n + m, n : 2 * n] = n_blk
    a[2 * n : 2 * n + m, 2 * n : 2 * n + m] = w_blk
    a[2 * n + m :, :n] = n_blk
    a[2 * n + m :, n : 2 * n] = n_blk
    a[2 * n + m :, 2 * n + m :] = w_blk

    b = np.diag(
        np.concatenate(
            [np.ones(n), -np.ones(n), np.ones(m), -np.ones(m)]
        )
    )
    evals, evecs = scipy.linalg.eig(a, b)
    out = []
    for i in range(size):
        ev = evals[i]
        if abs(ev.imag) > 1e-8 * max(1.0, abs(ev.real)) or ev.real <= 0:
            continue
        z = evecs[:, i].real
        x, y = z[:n], z[n : 2 * n]
        aa, bb = z[2 * n : 2 * n + m], z[2 * n + m :]
        # Hermitian-form components: E = (X+Y)/sqrt(omega_q), P = -sqrt(2)(A+B)
        e_raw = (x + y) / np.sqrt(omega_q)
        p_raw = -np.sqrt(2.0) * (aa + bb) if m else np.zeros(0)
        nrm = np.sqrt(e_raw @ e_raw + p_raw @ p_raw)
        if nrm < 1e-12:
            # pure photon excitation in the decoupled limit
            e_raw = np.zeros(n)
            p_raw = np.zeros(m)
            p_raw[np.argmin(np.abs(omega_a - ev.real))] = 1.0
        out.append(_excitation_from_parts(ev.real ** 2, e_raw, p_raw))
    out.sort(key=lambda e: e.omega)
    return out


# ---------------------------------------------------------------------------
# model correspondence helper


def rabi_prpa_system(omega0: float, omegac: float, lam: float) -> CoupledSystem:
    """The n=1, M=1 system whose pRPA blocks reproduce the Rabi closed form.

    The mode coupling is chosen so that lam_mode . d = lam/omegac, which
    gives V = 2 lam sqrt(omega0/2); the Rabi model carries no dipole
    self-energy.
    """
    t = Transition(id=1, omega_q=omega0, dipole=(1.0, 0.0, 0.0))
    mo = PhotonMode(id=1, omega=omegac, coupling=(lam / omegac, 0.0, 0.0))
    return CoupledSystem(
        transitions=(t,), modes=(mo,), include_self_energy=False
    )
