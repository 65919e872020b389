"""Command-line interface.

Subcommands: rabi, solve, spectrum, modes gen-1d, lifetime, ww.  Exit
codes: 0 success, 2 input error, 3 numerical failure.  Every key of the
flat key-value config file has a flag of the same name; explicit flags
win over config values.
"""

from __future__ import annotations

import os

# QEDR_THREADS bounds BLAS parallelism; must be set before numpy loads.
_threads = os.environ.get("QEDR_THREADS")
if _threads:
    for _var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ.setdefault(_var, _threads)

import argparse
import json
import sys

import numpy as np

from . import casida, cavity, io, rabi, spectra
from .types import Spectrum
from .units import HARTREE_EV, UnitError, convert


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# subcommand implementations


def _cmd_rabi(args) -> int:
    params = rabi.RabiParams(args.omega0, args.omegac, args.lam, args.n_fock)
    chi = rabi.response(params, args.method, args.pair)
    order = np.argsort(chi.poles)
    sys.stdout.write("# Omega_au,weight\n")
    for i in order:
        sys.stdout.write(f"{_fmt(chi.poles[i])},{_fmt(chi.weights[i])}\n")
    if args.out:
        if args.grid is None:
            raise ValueError("--out requires --grid LO HI N (a.u.)")
        lo, hi, npts = args.grid
        grid = np.linspace(lo, hi, int(npts))
        spec, _ = rabi.rabi_spectra(params, args.method, args.pair, grid, args.eta)
        io.write_spectrum(args.out, grid * HARTREE_EV, spec.values)
    return 0


def _load_system(args) -> casida.CoupledSystem:
    transitions = io.load_transitions(args.transitions)
    modes = io.load_modes(args.modes) if args.modes else []
    k_elec = None
    if getattr(args, "kelec", None):
        k_elec = np.loadtxt(args.kelec, delimiter=",", ndmin=2)
    return casida.CoupledSystem(
        transitions=transitions,
        modes=modes,
        k_elec=k_elec,
        include_self_energy=not args.no_self_energy,
    )


def _window_au(window_ev):
    return (window_ev[0] / HARTREE_EV, window_ev[1] / HARTREE_EV)


def _cmd_solve(args) -> int:
    system = _load_system(args)
    if args.solver == "reference":
        excitations = casida.solve_nonhermitian_reference(system)
    else:
        blocks = casida.assemble_blocks(system)
        if args.solver == "dense":
            excitations = casida.solve_dense(blocks)
        else:
            if args.window_ev is None:
                raise ValueError("--solver structured requires --window-ev LO HI")
            excitations = casida.solve_structured(blocks, _window_au(args.window_ev))
    s = spectra.strength_set(system=system, excitations=excitations,
                             trace_divisor=args.trace_divisor)
    sigma_e = np.array([e.sigma_e for e in excitations])
    sigma_p = np.array([e.sigma_p for e in excitations])
    io.write_excitations(args.out, s.omega, s.f_nn, s.f_pn, s.f_pp, sigma_e, sigma_p)
    return 0


_KIND_COLUMN = {"matter": "f_nn", "photon": "f_pp", "mixed": "f_pn"}


def _cmd_spectrum(args) -> int:
    cols = io.load_excitations(args.excitations)
    lo, hi, npts = args.grid_ev
    grid_ev = np.linspace(lo, hi, int(npts))
    if args.kind == "cross-section":
        # sigma(w) = (4 pi w / c) Im sum_I f_I / (Omega_I^2 - (w + i eta)^2), a.u.
        from .units import C_AU

        om = cols["Omega_eV"] / HARTREE_EV
        f = cols["f_nn"]
        z2 = (grid_ev / HARTREE_EV + 1j * args.eta_ev / HARTREE_EV) ** 2
        tr = (f[None, :] / (om[None, :] ** 2 - z2[:, None])).sum(axis=1)
        vals = (4.0 * np.pi * grid_ev / HARTREE_EV / C_AU) * np.imag(tr)
    else:
        f = cols[_KIND_COLUMN[args.kind]]
        spec = spectra.broaden(cols["Omega_eV"], f, args.delta_ev, grid_ev)
        vals = spec.values
    io.write_spectrum(args.out, grid_ev, vals)
    return 0


def _cmd_modes_gen1d(args) -> int:
    lx = convert(args.lx_um, "um", "bohr")
    spec = cavity.CavitySpec1D(
        lx=lx,
        ly=convert(args.ly_A, "a", "bohr"),
        lz=convert(args.lz_A, "a", "bohr"),
        x0=args.x0_frac * lx,
        count=args.count,
        window=_window_au(args.window_ev) if args.window_ev else None,
    )
    io.write_modes(cavity.gen_modes_1d(spec), args.out)
    return 0


def _coupled_spacing(modes) -> float:
    norms = np.array([np.linalg.norm(m.coupling) for m in modes])
    # same relative cut as the solver's deflation: couplings that are only
    # rounding noise must not shrink the inferred stick spacing
    coupled = norms > 1e-8 * (norms.max() if norms.size else 0.0)
    om = np.sort(np.array([m.omega for m in modes])[coupled])
    if om.size < 2:
        raise ValueError("need at least two coupled modes to infer a bin width")
    return float(np.min(np.diff(om)))


def _cmd_lifetime(args) -> int:
    system = _load_system(args)
    if not system.m:
        raise ValueError("lifetime extraction needs a photon mode ensemble")
    blocks = casida.assemble_blocks(system)
    window = _window_au(args.window_ev)
    excitations = casida.solve_structured(blocks, window, store_vectors=False)
    f_nn = spectra.oscillator_strength_nn(excitations, system,
                                          trace_divisor=args.trace_divisor)
    om = np.array([e.omega for e in excitations])
    bin_au = (
        args.bin_ev / HARTREE_EV if args.bin_ev else _coupled_spacing(system.modes)
    )
    grid = np.arange(window[0], window[1] + 0.5 * bin_au, bin_au)
    spec = spectra.broaden(om, f_nn, 0.0, grid)
    peak_window = (
        _window_au(args.peak_window_ev) if args.peak_window_ev else window
    )
    report = cavity.extract_peak(spec, peak_window)
    io.write_peak_report(args.out, report)
    if args.spectrum_out:
        io.write_spectrum(args.spectrum_out, grid * HARTREE_EV, spec.values)
    return 0


def _cmd_ww(args) -> int:
    omega0 = args.omega0_eV / HARTREE_EV
    dipole = convert(args.dipole_eA, "eA", "au")
    if args.dim == "1d":
        if args.ly_A is None or args.lz_A is None:
            raise ValueError("--dim 1d requires --ly-A and --lz-A")
        gamma, tau = cavity.ww_rate_1d(
            omega0,
            dipole,
            convert(args.ly_A, "a", "bohr"),
            convert(args.lz_A, "a", "bohr"),
        )
    else:
        gamma, tau = cavity.ww_rate_3d(omega0, dipole)
    tau_fs = convert(tau, "au_time", "fs")
    payload = {
        "gamma_eV": float(_fmt(gamma * HARTREE_EV)),
        "tau_fs": float(_fmt(tau_fs)),
        "tau_ns": float(_fmt(tau_fs * 1e-6)),
    }
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qedlr",
        description="Linear-response spectra of matter coupled to photon modes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    leaves = {}

    p = sub.add_parser("rabi", help="two-level + single-mode model benchmarks")
    p.add_argument("--omega0", type=float, required=True, help="level splitting (a.u.)")
    p.add_argument("--omegac", type=float, required=True, help="mode frequency (a.u.)")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="coupling strength (a.u.)")
    p.add_argument("--method", choices=("exact", "prpa", "rwa"), default="exact")
    p.add_argument("--pair", choices=rabi.PAIRS, default="ss")
    p.add_argument("--n-fock", type=int, default=40)
    p.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "N"),
                   help="spectrum grid in a.u.")
    p.add_argument("--eta", type=float, default=1e-3, help="broadening (a.u.)")
    p.add_argument("--out", help="spectrum CSV path")
    p.set_defaults(func=_cmd_rabi)
    leaves["rabi"] = p

    p = sub.add_parser("solve", help="solve the coupled eigenvalue problem")
    p.add_argument("--transitions", required=True)
    p.add_argument("--modes", help="mode CSV; omit for the matter-only limit")
    p.add_argument("--kelec", help="electronic coupling matrix CSV (a.u.)")
    p.add_argument("--solver", choices=("dense", "structured", "reference"),
                   default="dense")
    p.add_argument("--window-ev", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--no-self-energy", action="store_true")
    p.add_argument("--trace-divisor", type=float, default=3.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_solve)
    leaves["solve"] = p

    p = sub.add_parser("spectrum", help="broaden a solve output onto a grid")
    p.add_argument("--excitations", required=True, help="CSV written by solve")
    p.add_argument("--kind",
                   choices=("matter", "photon", "mixed", "cross-section"),
                   default="matter")
    p.add_argument("--grid-ev", type=float, nargs=3, required=True,
                   metavar=("LO", "HI", "N"))
    p.add_argument("--delta-ev", type=float, default=0.0,
                   help="Lorentzian width; 0 bins sticks at grid resolution")
    p.add_argument("--eta-ev", type=float, default=0.01,
                   help="broadening for the cross-section kind")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_spectrum)
    leaves["spectrum"] = p

    p_modes = sub.add_parser("modes", help="photon environment generators")
    msub = p_modes.add_subparsers(dest="modes_command", required=True)
    p = msub.add_parser("gen-1d", help="standing-wave modes of a quasi-1D cavity")
    p.add_argument("--lx-um", type=float, required=True)
    p.add_argument("--ly-A", type=float, required=True)
    p.add_argument("--lz-A", type=float, required=True)
    p.add_argument("--x0-frac", type=float, default=0.5,
                   help="emitter position as a fraction of Lx")
    p.add_argument("--count", type=int, default=0)
    p.add_argument("--window-ev", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_modes_gen1d)
    leaves["modes gen-1d"] = p

    p = sub.add_parser("lifetime", help="radiative lifetime from a mode continuum")
    p.add_argument("--transitions", required=True)
    p.add_argument("--modes", required=True)
    p.add_argument("--window-ev", type=float, nargs=2, required=True,
                   metavar=("LO", "HI"))
    p.add_argument("--peak-window-ev", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--bin-ev", type=float,
                   help="stick binning width; default: coupled-mode spacing")
    p.add_argument("--no-self-energy", action="store_true")
    p.add_argument("--trace-divisor", type=float, default=3.0)
    p.add_argument("--out", required=True, help="peak report JSON")
    p.add_argument("--spectrum-out", help="binned spectrum CSV")
    p.set_defaults(func=_cmd_lifetime)
    leaves["lifetime"] = p

    p = sub.add_parser("ww", help="closed-form spontaneous-emission rates")
    p.add_argument("--dim", choices=("1d", "3d"), required=True)
    p.add_argument("--omega0-eV", type=float, required=True)
    p.add_argument("--dipole-eA", type=float, required=True)
    p.add_argument("--ly-A", type=float)
    p.add_argument("--lz-A", type=float)
    p.add_argument("--out", help="rate report JSON")
    p.set_defaults(func=_cmd_ww)
    leaves["ww"] = p

    for leaf in leaves.values():
        leaf.add_argument("--config", help="flat key-value config file")
    return parser, leaves


def _leaf_key(argv):
    if not argv:
        return None
    if argv[0] == "modes" and len(argv) > 1:
        return f"modes {argv[1]}"
    return argv[0]


def _apply_config(leaf: argparse.ArgumentParser, cfg: dict[str, str]) -> None:
    """Config keys are flag names without dashes; flags still override."""
    actions = {}
    for action in leaf._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                actions[opt[2:]] = action
    defaults = {}
    for key, raw in cfg.items():
        if key not in actions:
            raise ValueError(f"unknown config key {key!r}")
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[action.dest] = raw.lower() in ("1", "true", "yes")
            continue
        conv = action.type or str
        if action.nargs in (2, 3, "+", "*"):
            parts = raw.replace(",", " ").split()
            defaults[action.dest] = [conv(x) for x in parts]
        else:
            defaults[action.dest] = conv(raw)
        if action.required:
            action.required = False
    leaf.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = _build_parser()
    try:
        key = _leaf_key(argv)
        if key in leaves and ("--config" in argv):
            cfg_path = argv[argv.index("--config") + 1]
            _apply_config(leaves[key], io.load_config(cfg_path))
        args = parser.parse_args(argv)
        return args.func(args)
    except cavity.PeakError as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return 3
    except (np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return 3
    except (io.FormatError, UnitError, ValueError, OSError) as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
