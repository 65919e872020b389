import json

import numpy as np
import pytest

from qedlr import casida, cli, io, spectra
from qedlr.units import HARTREE_EV, convert

TRANS_CSV = (
    "id,omega_eV,dx_eA,dy_eA,dz_eA,x_nm,y_nm,z_nm\n"
    "1,6.88,0.952,0,0,0,0,0\n"
)


@pytest.fixture
def trans_file(tmp_path):
    p = tmp_path / "transitions.csv"
    p.write_text(TRANS_CSV)
    return p


@pytest.fixture
def modes_file(tmp_path):
    modes = []
    for a in range(40):
        omega = (6.0 + 0.05 * a) / HARTREE_EV
        lam = convert(2.0, "eV^0.5/nm", "au")
        modes.append(f"{a + 1},{omega * HARTREE_EV},{2.0},0,0\n")
    p = tmp_path / "modes.csv"
    p.write_text("id,omega_eV,lx,ly,lz\n" + "".join(modes))
    return p


def test_rabi_prints_prpa_poles(capsys):
    rc = cli.main(
        ["rabi", "--omega0", "1", "--omegac", "1", "--lambda", "0.1",
         "--method", "prpa"]
    )
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    vals = sorted(float(line.split(",")[0]) for line in out[1:])
    assert vals[0] == pytest.approx(0.926595, abs=5e-7)
    assert vals[1] == pytest.approx(1.068373, abs=5e-7)


def test_ww_1d_report(tmp_path, capsys):
    out = tmp_path / "ww.json"
    rc = cli.main(
        ["ww", "--dim", "1d", "--omega0-eV", "6.88", "--dipole-eA", "0.952",
         "--ly-A", "10.58", "--lz-A", "2.65", "--out", str(out)]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["tau_fs"] == pytest.approx(32.27, abs=0.1)


def test_ww_1d_requires_cross_section(capsys):
    rc = cli.main(["ww", "--dim", "1d", "--omega0-eV", "6.88",
                   "--dipole-eA", "0.952"])
    assert rc == 2
    assert "error: input:" in capsys.readouterr().err


def test_solve_writes_sorted_excitations(tmp_path, trans_file, modes_file):
    out = tmp_path / "exc.csv"
    rc = cli.main(
        ["solve", "--transitions", str(trans_file), "--modes", str(modes_file),
         "--out", str(out)]
    )
    assert rc == 0
    cols = io.load_excitations(out)
    assert np.all(np.diff(cols["Omega_eV"]) > 0)
    assert len(cols["Omega_eV"]) == 41
    assert np.allclose(cols["sigma_e"] + cols["sigma_p"], 1.0, atol=1e-10)


def test_solve_matter_only_limit(tmp_path, trans_file):
    out = tmp_path / "exc.csv"
    rc = cli.main(["solve", "--transitions", str(trans_file), "--out", str(out)])
    assert rc == 0
    cols = io.load_excitations(out)
    assert cols["Omega_eV"][0] == pytest.approx(6.88, rel=1e-10)
    assert cols["f_nn"][0] == pytest.approx(0.5455293778, rel=1e-8)


def test_solve_missing_file_is_input_error(tmp_path, capsys):
    rc = cli.main(
        ["solve", "--transitions", str(tmp_path / "nope.csv"),
         "--out", str(tmp_path / "o.csv")]
    )
    assert rc == 2
    assert "error: input:" in capsys.readouterr().err


def test_spectrum_round_trip_matches_in_process(tmp_path, trans_file, modes_file):
    """CLI solve -> spectrum equals the library pipeline to 1e-12."""
    exc = tmp_path / "exc.csv"
    spec_out = tmp_path / "spec.csv"
    assert cli.main(
        ["solve", "--transitions", str(trans_file), "--modes", str(modes_file),
         "--out", str(exc)]
    ) == 0
    assert cli.main(
        ["spectrum", "--excitations", str(exc), "--kind", "matter",
         "--grid-ev", "6.0", "8.0", "501", "--delta-ev", "0.05",
         "--out", str(spec_out)]
    ) == 0
    grid_ev, vals = io.load_spectrum(spec_out)

    system = casida.CoupledSystem(
        io.load_transitions(trans_file), io.load_modes(modes_file)
    )
    ex = casida.solve_dense(casida.assemble_blocks(system))
    s = spectra.strength_set(ex, system)
    ref = spectra.broaden(
        s.omega * HARTREE_EV, s.f_nn, 0.05, np.linspace(6.0, 8.0, 501)
    )
    assert np.max(np.abs(vals - ref.values)) < 1e-12 * max(1.0, ref.values.max())


def test_spectrum_requires_valid_kind(tmp_path, trans_file):
    exc = tmp_path / "exc.csv"
    cli.main(["solve", "--transitions", str(trans_file), "--out", str(exc)])
    with pytest.raises(SystemExit):
        cli.main(["spectrum", "--excitations", str(exc), "--kind", "banana",
                  "--grid-ev", "6", "8", "10", "--out", str(tmp_path / "s.csv")])


def test_modes_gen_1d_writes_standing_waves(tmp_path):
    out = tmp_path / "modes.csv"
    rc = cli.main(
        ["modes", "gen-1d", "--lx-um", "1239.8424", "--ly-A", "10.58",
         "--lz-A", "2.65", "--window-ev", "6.87", "6.89", "--out", str(out)]
    )
    assert rc == 0
    modes = io.load_modes(out)
    assert len(modes) > 10
    spacings = np.diff([m.omega for m in modes]) * HARTREE_EV
    assert np.allclose(spacings, spacings[0], rtol=1e-6)


def test_byte_identical_reruns(tmp_path, trans_file, modes_file):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["solve", "--transitions", str(trans_file), "--modes",
            str(modes_file)]
    assert cli.main(args + ["--out", str(out1)]) == 0
    assert cli.main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("omega0 = 1.0\nomegac = 1.0\nlambda = 0.1\nmethod = prpa\n")
    rc = cli.main(["rabi", "--config", str(cfg)])
    assert rc == 0
    first = capsys.readouterr().out
    # explicit flag overrides the config value
    rc = cli.main(["rabi", "--config", str(cfg), "--method", "rwa"])
    assert rc == 0
    second = capsys.readouterr().out
    assert first != second
    vals = sorted(float(l.split(",")[0]) for l in second.strip().splitlines()[1:])
    assert vals[0] == pytest.approx(1.0 - 0.1 / np.sqrt(2.0), rel=1e-10)


def test_unknown_config_key_is_input_error(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("volume = 12\n")
    rc = cli.main(["rabi", "--config", str(cfg)])
    assert rc == 2
    assert "unknown config key" in capsys.readouterr().err


def test_lifetime_numerical_failure_exit_code(tmp_path, trans_file, capsys):
    # binning far coarser than the window leaves too few grid points
    p = tmp_path / "modes.csv"
    p.write_text("id,omega_eV,lx,ly,lz\n1,1.0,2.0,0,0\n2,1.001,2.0,0,0\n")
    rc = cli.main(
        ["lifetime", "--transitions", str(trans_file), "--modes", str(p),
         "--window-ev", "0.9", "1.1", "--bin-ev", "0.2",
         "--out", str(tmp_path / "r.json")]
    )
    assert rc == 3
    assert "error: numerical:" in capsys.readouterr().err
