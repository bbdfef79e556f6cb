import numpy as np
import pytest

from nclab.ensembles import make_rng, random_separable_mixture
from nclab.fock import (
    TwoModeFockState,
    TwoModeMixture,
    coherent_state,
    intelligent_state,
    tmsv_state,
)
from nclab.gaussian import two_mode_squeezed_vacuum
from nclab.gaussian_criteria import mancini_product
from nclab.nphi_criteria import (
    amplitude_squared_product,
    pseudo_spin_conjecture,
    extra_term_profile_nphi,
    generic_product_bound,
    hz_criterion,
    intelligent_times_coherent,
    mancini_fock,
    nha_zubairy_sr,
    normal_ordered_variances,
    nphi_product_generic,
    nphi_quadratures,
    number_noise_area,
    pseudo_spin_moments,
    raymer_product_nphi,
    rotated_hz,
    simon_like_mu_nphi,
    sr_nphi,
    xp_operators,
)

R, NBAR = 5 / 7, 5.0


def pair(n1, n2, d=4):
    psi = np.zeros((d, d), dtype=complex)
    psi[n1, n2] = 1.0
    return psi


def coherent_pair(a1, a2, d=30):
    return TwoModeFockState.product(coherent_state(a1, d), coherent_state(a2, d))


def test_hz_examples():
    bell = TwoModeFockState.normalized(pair(0, 1) + pair(1, 0))
    prod = hz_criterion(bell)["product"]
    assert prod.violated and prod.lhs == 0.0 and prod.rhs == pytest.approx(0.25)
    coh = hz_criterion(coherent_pair(1.2, 0.7j))
    assert not coh["product"].violated and abs(coh["product"].margin) < 1e-10
    assert not coh["sum"].violated and abs(coh["sum"].margin) < 1e-10
    assert not hz_criterion(TwoModeFockState.from_matrix(pair(1, 1)))["product"].violated


def test_nha_zubairy_vacuum():
    vac = TwoModeFockState.from_matrix(pair(0, 0))
    for form in ("printed", "variance"):
        assert not nha_zubairy_sr(vac, form).violated
    with pytest.raises(ValueError):
        nha_zubairy_sr(vac, "other")


def test_nha_zubairy_variance_form_flags_bell():
    bell = TwoModeFockState.normalized(pair(0, 1) - pair(1, 0))
    assert not nha_zubairy_sr(bell, "printed").violated
    # the variance form of the PT inequality is not guaranteed to see every entangled state
    assert nha_zubairy_sr(bell, "variance").margin <= nha_zubairy_sr(bell, "variance", extra_term=False).margin


def test_extra_term_zero_without_rotation():
    st = intelligent_times_coherent(R, NBAR, np.pi / 4, d=40)
    assert nha_zubairy_sr(st).extra["extra_term"] < 1e-6


def test_extra_term_profile_peak():
    phis = np.linspace(0, np.pi / 2, 9)
    prof = extra_term_profile_nphi(R, NBAR, np.pi / 4, phis, d=40)
    assert np.all(prof[:, 1] >= 0)
    assert prof[0, 1] < 1e-6
    assert prof[np.argmax(prof[:, 1]), 0] == pytest.approx(np.pi / 4)


def test_nphi_quadratures_structure():
    st = intelligent_times_coherent(R, NBAR, np.pi / 4, d=40)
    q = nphi_quadratures(st)
    dense = [op.dense() for op in q.as_list()]
    for M in dense:
        assert np.abs(M - M.conj().T).max() < 1e-12
    for i in (0, 1):
        for j in (2, 3):
            assert np.abs(dense[i] @ dense[j] - dense[j] @ dense[i]).max() < 1e-12


def test_nphi_commutator_near_bosonic():
    d = 80
    st = intelligent_times_coherent(0.5, 10.0, np.pi / 4, d=d)
    q = nphi_quadratures(st)
    for k, mode in ((0, 1), (2, 2)):
        # both quadratures of a mode live in a single local term
        Q, P = (op.terms[0][mode] for op in q.as_list()[k:k + 2])
        comm = np.trace(st.reduced(mode) @ (-1j * (Q @ P - P @ Q)))
        assert abs(comm - 1.0) <= 5e-2


def test_simon_like_coherent_boundary():
    st = coherent_pair(3.0, 3.0, d=60)
    assert simon_like_mu_nphi(st).lhs >= -1e-3


def test_simon_like_flags_mixed_intelligent_state():
    # an imaginary coherent amplitude keeps both outputs bright at theta_BS = pi/4
    st = intelligent_times_coherent(R, NBAR, np.pi / 4, d=40, alpha=1j * np.sqrt(NBAR))
    assert simon_like_mu_nphi(st).violated


def test_sr_and_raymer_separable_product():
    st = TwoModeFockState.product(intelligent_state(R, NBAR, 40), coherent_state(np.sqrt(NBAR), 40))
    for th in (0.3, np.pi / 4, 1.2):
        assert not sr_nphi(st, th).violated
        assert not raymer_product_nphi(st, th).violated


def test_sr_theta_zero_single_mode_bound():
    st = intelligent_times_coherent(R, NBAR, np.pi / 4, d=40, alpha=1j * np.sqrt(NBAR))
    v = sr_nphi(st, 0.0)
    m1 = np.trace(st.reduced(1) @ np.diag(np.arange(40))).real
    assert v.rhs - v.extra["cross"] ** 2 == pytest.approx(m1 ** 2, rel=1e-12)
    assert raymer_product_nphi(st, 0.0).rhs == 0.0


def test_sr_stronger_than_raymer():
    for i in range(40):
        st = random_separable_mixture(make_rng(3, i))
        th = 0.1 + 1.3 * i / 40
        assert sr_nphi(st, th).margin <= raymer_product_nphi(st, th).margin + 1e-12


def test_rotated_hz_twin_fock():
    twin = TwoModeFockState.from_matrix(pair(3, 3, 6))
    res = rotated_hz(twin)
    assert res["number_sum"].violated and res["number_sum"].lhs == pytest.approx(0.0, abs=1e-14)
    assert res["number_sum"].rhs == pytest.approx(6.0)
    assert res["sz"].violated


def test_rotated_hz_coherent_equality():
    res = rotated_hz(coherent_pair(1.1, -0.6))
    for k in ("sz_sy_sum", "sz", "number_sum"):
        assert not res[k].violated
    assert abs(res["number_sum"].margin) < 1e-10


def test_rotated_hz_number_squeezed_product():
    s = intelligent_state(R, NBAR, 40)
    assert rotated_hz(TwoModeFockState.product(s, s))["number_sum"].violated


def test_normal_ordered_variances():
    for st in (coherent_pair(0.9, 0.4j), TwoModeFockState.normalized(pair(0, 2, 5) + pair(1, 1, 5))):
        ps = pseudo_spin_moments(st)
        sy, sz = normal_ordered_variances(st)
        assert ps.var("Sy") == pytest.approx(ps.mean("N") / 4 + sy, abs=1e-12)
        assert ps.var("Sz") == pytest.approx(ps.mean("N") / 4 + sz, abs=1e-12)


def test_number_noise_area():
    assert number_noise_area(coherent_pair(1.5, 2.0, d=40))["product"].lhs == pytest.approx(1.0, abs=1e-10)
    s = intelligent_state(R, NBAR, 40)
    assert number_noise_area((s, s))["product"].violated
    # thermal-like mixture of number-state products (geometric weights in both modes)
    d, k, q = 30, 15, 0.5
    pw = (1 - q) * q ** np.arange(k)
    pw = pw / pw.sum()
    terms = [(pw[i] * pw[j], TwoModeFockState.from_matrix(pair(i, j, d))) for i in range(k) for j in range(k)]
    mix = TwoModeMixture(tuple(w for w, _ in terms), tuple(t for _, t in terms))
    assert number_noise_area(mix)["product"].lhs > 1.0
    with pytest.raises(ValueError):
        number_noise_area(TwoModeFockState.from_matrix(pair(0, 0)))


def test_conjecture_vacuum():
    v = pseudo_spin_conjecture(TwoModeFockState.from_matrix(pair(0, 0)))
    assert not v.violated and v.extra["observation_only"]


def test_generic_bound_reproduces_mancini():
    d = 40
    g = mancini_product(two_mode_squeezed_vacuum(0.3), np.pi / 4)
    f = mancini_fock(tmsv_state(0.3, d), np.pi / 4)
    assert f.lhs == pytest.approx(g.lhs, abs=1e-6)
    assert f.rhs == pytest.approx(g.rhs, abs=1e-6)


def test_generic_bound_reproduces_raymer():
    st = intelligent_times_coherent(R, NBAR, np.pi / 4, d=40, alpha=1j * np.sqrt(NBAR))
    for th in (0.4, np.pi / 4):
        a, b = nphi_product_generic(st, th), raymer_product_nphi(st, th)
        assert a.lhs == pytest.approx(b.lhs, rel=1e-10)
        assert a.rhs == pytest.approx(b.rhs, rel=1e-10)


def test_amplitude_squared_variant_runs_on_separable():
    st = coherent_pair(0.8, 0.5, d=30)
    assert not amplitude_squared_product(st).violated


def test_generic_bound_rejects_non_hermitian():
    x, p = xp_operators(6)
    st = TwoModeFockState.from_matrix(pair(0, 0, 6))
    with pytest.raises(ValueError):
        generic_product_bound(x + 1j * p, p, x, p, 0.5, 0.5, st)
