import numpy as np
import pytest

from qedlr import cavity
from qedlr.types import Spectrum
from qedlr.units import AU_TIME_FS, C_AU, HARTREE_EV, convert


def test_mode_frequencies_and_couplings():
    lx, ly, lz = 1.0e6, 20.0, 5.0
    spec = cavity.CavitySpec1D(lx=lx, ly=ly, lz=lz, x0=0.5 * lx, count=6)
    modes = cavity.gen_modes_1d(spec)
    domega = np.pi * C_AU / lx
    amp = np.sqrt(8 * np.pi / (lx * ly * lz))
    for a, m in enumerate(modes, start=1):
        assert m.omega == pytest.approx(a * domega, rel=1e-14)
        assert m.coupling[0] == pytest.approx(
            amp * np.sin(a * np.pi / 2), abs=1e-9 * amp
        )
        assert m.coupling[1] == m.coupling[2] == 0.0


def test_window_selection():
    lx = 1.0e6
    domega = np.pi * C_AU / lx
    spec = cavity.CavitySpec1D(
        lx=lx, ly=20.0, lz=5.0, x0=0.3 * lx, window=(3.2 * domega, 7.8 * domega)
    )
    modes = cavity.gen_modes_1d(spec)
    assert [m.id for m in modes] == [4, 5, 6, 7]


def test_empty_window_raises():
    spec = cavity.CavitySpec1D(
        lx=1.0e6, ly=20.0, lz=5.0, x0=0.5e6, window=(1e-9, 2e-9)
    )
    with pytest.raises(ValueError, match="no cavity modes"):
        cavity.gen_modes_1d(spec)


def test_ww_1d_rate():
    om = 6.88 / HARTREE_EV
    d = convert(0.952, "eA", "au")
    gamma, tau = cavity.ww_rate_1d(
        om, d, convert(10.58, "a", "bohr"), convert(2.65, "a", "bohr")
    )
    assert tau * AU_TIME_FS == pytest.approx(32.275, rel=1e-4)
    assert gamma * HARTREE_EV == pytest.approx(0.0203942, rel=1e-4)


def test_ww_3d_rate():
    om = 6.88 / HARTREE_EV
    d = convert(0.952, "eA", "au")
    _, tau = cavity.ww_rate_3d(om, d)
    assert tau * AU_TIME_FS * 1e-6 == pytest.approx(0.8925, rel=1e-3)


def test_ww_hydrogen_2p():
    # 2p -> 1s: omega = 3/8 Ha, |<1s|z|2p>| = 128 sqrt(2) / 243
    tau = cavity.ww_rate_3d(0.375, 128 * np.sqrt(2) / 243)[1]
    assert tau * AU_TIME_FS * 1e-6 == pytest.approx(1.595, rel=1e-3)


def test_ww_rejects_bad_input():
    with pytest.raises(ValueError):
        cavity.ww_rate_3d(-1.0, 1.0)
    with pytest.raises(ValueError):
        cavity.ww_rate_1d(1.0, 1.0, 0.0, 1.0)


def test_extract_peak_on_lorentzian():
    grid = np.linspace(0.0, 2.0, 4001)
    gamma = 0.05
    vals = (gamma / 2) / ((grid - 1.0) ** 2 + (gamma / 2) ** 2) / np.pi
    rep = cavity.extract_peak(
        Spectrum(grid=grid, values=vals, kind="matter"), (0.5, 1.5)
    )
    assert rep.e_peak == pytest.approx(1.0, abs=1e-4)
    assert rep.fwhm == pytest.approx(gamma, rel=1e-3)
    assert rep.tau == pytest.approx(1.0 / gamma, rel=1e-3)
    assert abs(rep.asymmetry) < 1e-3


def test_extract_peak_window_errors():
    grid = np.linspace(0.0, 1.0, 101)
    vals = np.exp(-0.5 * (grid - 0.9) ** 2 / 0.05 ** 2)
    spec = Spectrum(grid=grid, values=vals, kind="matter")
    with pytest.raises(cavity.PeakError):
        cavity.extract_peak(spec, (0.0, 0.3))  # maximum on window edge
    with pytest.raises(cavity.PeakError):
        cavity.extract_peak(spec, (0.5, 0.50001))  # too few points


def test_fano_fit_recovers_parameters():
    grid = np.linspace(0.5, 1.5, 2001)
    truth = dict(q=4.0, gamma=0.08, e_r=1.02, amp=0.3, offset=0.0)
    vals = cavity.fano_profile(grid, **truth)
    q, gamma, e_r, _ = cavity.fit_fano(
        Spectrum(grid=grid, values=vals, kind="matter"), (0.5, 1.5)
    )
    assert abs(q) == pytest.approx(4.0, rel=1e-4)
    assert gamma == pytest.approx(0.08, rel=1e-4)
    assert e_r == pytest.approx(1.02, rel=1e-5)


def test_fano_large_q_is_lorentzian_limit():
    grid = np.linspace(0.5, 1.5, 2001)
    gamma = 0.05
    vals = (gamma / 2) ** 2 / ((grid - 1.0) ** 2 + (gamma / 2) ** 2)
    q, gfit, _, _ = cavity.fit_fano(
        Spectrum(grid=grid, values=vals, kind="matter"), (0.5, 1.5)
    )
    assert abs(q) > 50
    assert gfit == pytest.approx(gamma, rel=5e-2)


def test_add_strong_modes_zero_scale_is_noop_in_weight():
    base = [
        cavity.PhotonMode(id=1, omega=0.5, coupling=(0.02, 0, 0)),
        cavity.PhotonMode(id=2, omega=0.7, coupling=(0.03, 0, 0)),
    ]
    out = cavity.add_strong_modes(base, [(0.6, 0.0)])
    assert len(out) == 3
    assert np.allclose(out[2].coupling, 0.0)
    assert out[2].omega == 0.6


def test_add_strong_modes_scales_nearest_coupled():
    base = [
        cavity.PhotonMode(id=1, omega=0.5, coupling=(0.02, 0, 0)),
        cavity.PhotonMode(id=2, omega=0.7, coupling=(1e-18, 0, 0)),  # numeric zero
    ]
    out = cavity.add_strong_modes(base, [(0.69, 10.0)])
    # the near-zero mode is not a valid template even though it is nearer
    assert out[2].coupling[0] == pytest.approx(0.2, rel=1e-12)


def test_cavity_spec_validation():
    with pytest.raises(ValueError):
        cavity.CavitySpec1D(lx=-1.0, ly=1.0, lz=1.0, x0=0.0, count=3)
    with pytest.raises(ValueError):
        cavity.CavitySpec1D(lx=1.0, ly=1.0, lz=1.0, x0=2.0, count=3)
    with pytest.raises(ValueError):
        cavity.CavitySpec1D(lx=1.0, ly=1.0, lz=1.0, x0=0.5)
