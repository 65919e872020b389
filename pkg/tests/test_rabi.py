import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qedlr import rabi


def test_prpa_closed_form_resonance():
    p = rabi.RabiParams(1.0, 1.0, 0.1)
    lo, hi, vecs = rabi.prpa_frequencies(p)
    assert lo == pytest.approx(0.926595, abs=5e-7)
    assert hi == pytest.approx(1.068373, abs=5e-7)
    # eigenvectors are orthonormal
    assert np.allclose(vecs.T @ vecs, np.eye(2), atol=1e-14)


def test_prpa_detuned():
    p = rabi.RabiParams(1.0, 1.2, 0.05)
    lo, hi, _ = rabi.prpa_frequencies(p)
    disc = np.sqrt((1.0 - 1.2 ** 2) ** 2 + 8 * 0.05 ** 2)
    assert lo ** 2 == pytest.approx((1.0 + 1.44 - disc) / 2, rel=1e-14)
    assert hi ** 2 == pytest.approx((1.0 + 1.44 + disc) / 2, rel=1e-14)


def test_prpa_overcritical_raises():
    with pytest.raises(ValueError, match="overcritical"):
        rabi.prpa_frequencies(rabi.RabiParams(1.0, 1.0, 1.0))


def test_rwa_closed_form():
    p = rabi.RabiParams(1.0, 1.0, 0.1)
    lo, hi = rabi.rwa_frequencies(p)
    lam_p = 0.1 / np.sqrt(2.0)
    assert lo == pytest.approx(1.0 - lam_p, rel=1e-14)
    assert hi == pytest.approx(1.0 + lam_p, rel=1e-14)


def test_fock_convergence_enlarges_basis():
    p = rabi.RabiParams(1.0, 1.0, 0.7, n_fock=4)
    _, _, p_conv = rabi.diagonalize(p)
    assert p_conv.n_fock > 4


def test_exact_close_to_rwa_at_weak_coupling():
    p = rabi.RabiParams(1.0, 1.0, 0.02)
    chi = rabi.exact_response(p, "ss")
    strong = np.sort(chi.poles[np.abs(chi.weights) > 1e-4])[:2]
    lo, hi = rabi.rwa_frequencies(p)
    assert strong[0] == pytest.approx(lo, rel=1e-4)
    assert strong[1] == pytest.approx(hi, rel=1e-4)


def test_exact_ss_weights_sum_to_one_at_zero_coupling():
    p = rabi.RabiParams(1.0, 1.3, 1e-9)
    chi = rabi.exact_response(p, "ss")
    assert np.sum(chi.weights) == pytest.approx(1.0, abs=1e-6)
    assert np.sort(chi.poles[np.abs(chi.weights) > 0.5])[0] == pytest.approx(
        1.0, abs=1e-6
    )


def test_reciprocity_qs_equals_omegac_sq():
    p = rabi.RabiParams(1.0, 0.9, 0.3)
    w = np.linspace(0.1, 2.5, 53)
    chi_qs = rabi.response(p, "exact", "qs")(w, 1e-3)
    chi_sq = rabi.response(p, "exact", "sq")(w, 1e-3)
    assert np.max(np.abs(chi_qs - p.omegac * chi_sq)) < 1e-12


def test_prpa_response_matches_closed_form_poles():
    p = rabi.RabiParams(1.0, 1.0, 0.1)
    chi = rabi.response(p, "prpa", "ss")
    lo, hi, _ = rabi.prpa_frequencies(p)
    assert np.allclose(np.sort(chi.poles), [lo, hi], rtol=1e-14)


def test_all_methods_share_decoupled_limit():
    """At lam -> 0 every method reduces to a single pole at omega0 (ss)
    and one at omegac (qq, weight 1/(2 omegac^2))."""
    p = rabi.RabiParams(1.1, 0.8, 1e-10)
    for method in ("exact", "prpa", "rwa"):
        chi = rabi.response(p, method, "ss")
        i = np.argmax(np.abs(chi.weights))
        assert chi.poles[i] == pytest.approx(1.1, abs=1e-6)
        assert chi.weights[i] == pytest.approx(1.0, abs=1e-6)
        chi_q = rabi.response(p, method, "qq")
        j = np.argmax(np.abs(chi_q.weights))
        assert chi_q.poles[j] == pytest.approx(0.8, abs=1e-6)
        assert chi_q.weights[j] == pytest.approx(
            1.0 / (2 * 0.8 ** 2), abs=1e-6
        )


def test_mixed_weights_have_both_signs():
    p = rabi.RabiParams(1.0, 1.0, 0.1)
    chi = rabi.response(p, "prpa", "qs")
    strong = chi.weights[np.abs(chi.weights) > 1e-4]
    assert (strong > 0).any() and (strong < 0).any()


def test_absorption_spectrum_positive_for_same_channel():
    p = rabi.RabiParams(1.0, 1.0, 0.1)
    grid = np.linspace(0.5, 1.5, 400)
    spec, _ = rabi.rabi_spectra(p, "exact", "ss", grid, eta=5e-3)
    assert spec.values.min() > -1e-10
    assert spec.values.max() > 0


def test_kernel_fq_weak_coupling_limit():
    p = rabi.RabiParams(1.0, 1.2, 0.005)
    _, fq = rabi.extract_kernels(p, np.array([0.3, 0.55]), eta=1e-4)
    assert np.allclose(fq.real, 0.005, rtol=2e-2)


def test_kernel_fsigma_vanishes_at_zero_coupling():
    p = rabi.RabiParams(1.0, 1.2, 1e-8)
    fs, _ = rabi.extract_kernels(p, np.array([0.3, 0.7]), eta=1e-3)
    assert np.max(np.abs(fs)) < 1e-5


def test_invalid_pair_and_method_raise():
    p = rabi.RabiParams(1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        rabi.response(p, "exact", "xx")
    with pytest.raises(ValueError):
        rabi.response(p, "cisd", "ss")


@settings(deadline=None, max_examples=30)
@given(
    st.floats(min_value=0.5, max_value=1.5),
    st.floats(min_value=0.5, max_value=1.5),
    st.floats(min_value=0.0, max_value=0.2),
)
def test_prpa_ordering_and_reality(omega0, omegac, lam):
    p = rabi.RabiParams(omega0, omegac, lam)
    lo, hi, _ = rabi.prpa_frequencies(p)
    assert 0 < lo <= hi
    assert lo <= max(omega0, omegac) + 1e-12
    assert hi >= min(omega0, omegac) - 1e-12
