"""Linear-response spectra of matter coupled to quantized photon modes."""

from .types import (
    Excitation,
    PeakReport,
    PhotonMode,
    Spectrum,
    StrengthSet,
    Transition,
)
from .units import (
    AU_TIME_FS,
    BOHR_ANGSTROM,
    C_AU,
    HARTREE_EV,
    HBAR_EVFS,
    UnitError,
    convert,
    lifetime_fs_from_fwhm_ev,
)
from .rabi import (
    RabiParams,
    ResponseFunction,
    exact_response,
    extract_kernels,
    prpa_frequencies,
    rabi_spectra,
    response,
    rwa_frequencies,
)
from .casida import (
    CoupledBlocks,
    CoupledSystem,
    SolverSizeError,
    assemble_blocks,
    rabi_prpa_system,
    solve_dense,
    solve_nonhermitian_reference,
    solve_structured,
)
from .spectra import (
    bare_trk_sum,
    broaden,
    cross_section,
    field_spectrum,
    oscillator_strength_nn,
    strength_set,
    transition_dipoles,
    trk_sum,
)
from .cavity import (
    CavitySpec1D,
    PeakError,
    add_strong_modes,
    extract_peak,
    fit_fano,
    gen_modes_1d,
    ww_rate_1d,
    ww_rate_3d,
)

__version__ = "0.1.0"

__all__ = [
    "AU_TIME_FS",
    "BOHR_ANGSTROM",
    "C_AU",
    "CavitySpec1D",
    "CoupledBlocks",
    "CoupledSystem",
    "Excitation",
    "HARTREE_EV",
    "HBAR_EVFS",
    "PeakError",
    "PeakReport",
    "PhotonMode",
    "RabiParams",
    "ResponseFunction",
    "SolverSizeError",
    "Spectrum",
    "StrengthSet",
    "Transition",
    "UnitError",
    "add_strong_modes",
    "assemble_blocks",
    "bare_trk_sum",
    "broaden",
    "convert",
    "cross_section",
    "exact_response",
    "extract_kernels",
    "extract_peak",
    "field_spectrum",
    "fit_fano",
    "gen_modes_1d",
    "lifetime_fs_from_fwhm_ev",
    "oscillator_strength_nn",
    "prpa_frequencies",
    "rabi_prpa_system",
    "rabi_spectra",
    "response",
    "rwa_frequencies",
    "solve_dense",
    "solve_nonhermitian_reference",
    "solve_structured",
    "strength_set",
    "transition_dipoles",
    "trk_sum",
    "ww_rate_1d",
    "ww_rate_3d",
]
