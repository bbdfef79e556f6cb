"""Criteria for number-phase squeezed two-mode states.

Every function accepts a :class:`~nclab.fock.TwoModeFockState` or a
:class:`~nclab.fock.TwoModeMixture`. Pseudo-spin operators follow
``S+ = a2^dag a1``, ``Sx = (S+ + S-)/2``, ``Sy = -i (S+ - S-)/2``,
``Sz = (n2 - n1)/2`` and ``N+ = n1 + n2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nclab.fock import (
    FockOperator,
    FockState,
    TwoModeFockState,
    TruncationError,
    TwoModeOp,
    bs_apply,
    coherent_state,
    covariance2,
    expect2,
    intelligent_state,
    ladder_operators,
    rotate_nphi,
    phase_operators,
    resolve_phase_ref,
    scaled_annihilation_from_moments,
)
from nclab.gaussian_criteria import simon_mu_value
from nclab.verdict import CriterionVerdict

MU_TOL = 1e-9


# --------------------------------------------------------------------------
# operator sets
# --------------------------------------------------------------------------

def _ops(d):
    a, ad, n = ladder_operators(d)
    return a, ad, n


def pseudo_spin_operators(d):
    """``dict`` of :class:`TwoModeOp` for ``Sx, Sy, Sz, N, Sp`` (``Sp = S+``)."""
    a, ad, n = _ops(d)
    Sp = TwoModeOp.product(a, ad)      # a2^dag a1
    Sm = TwoModeOp.product(ad, a)      # a1^dag a2
    return {
        "Sx": 0.5 * (Sp + Sm),
        "Sy": -0.5j * (Sp - Sm),
        "Sz": 0.5 * (TwoModeOp.local(n, 2) - TwoModeOp.local(n, 1)),
        "N": TwoModeOp.local(n, 1) + TwoModeOp.local(n, 2),
        "Sp": Sp,
    }


@dataclass(frozen=True)
class PseudoSpinMoments:
    """Means and symmetrized covariance of ``(Sx, Sy, Sz, N)``."""

    means: np.ndarray
    cov: np.ndarray

    def mean(self, name):
        return float(self.means[_PS_INDEX[name]])

    def var(self, name):
        i = _PS_INDEX[name]
        return float(self.cov[i, i])


_PS_INDEX = {"Sx": 0, "Sy": 1, "Sz": 2, "N": 3}


def pseudo_spin_moments(state) -> PseudoSpinMoments:
    ops = pseudo_spin_operators(state.d)
    cov, means = covariance2(state, [ops[k] for k in ("Sx", "Sy", "Sz", "N")])
    return PseudoSpinMoments(means, cov)


def _marginal_moments(state, mode, phase_ref="mean"):
    """``(<n>, <C>, Var n, ref)`` of one marginal, ``C`` measured from ``ref``."""
    rho = state.reduced(mode)
    d = rho.shape[0]
    _, _, n = _ops(d)
    ref = resolve_phase_ref(rho, phase_ref)
    _, C = phase_operators(d, ref)
    mn = float(np.trace(rho @ n).real)
    return (mn, float(np.trace(rho @ C).real), float(np.trace(rho @ n @ n).real) - mn * mn,
            ref)


# --------------------------------------------------------------------------
# Hillery-Zubairy and Nha-Zubairy
# --------------------------------------------------------------------------

def hz_criterion(state):
    """HZ witnesses.

    Returns:
        dict with ``sum`` (``Var Sx + Var Sy >= <N+>/2``) and ``product``
        (``<n1 n2> >= |<a2^dag a1>|^2``) verdicts.
    """
    ps = pseudo_spin_moments(state)
    _, _, n = _ops(state.d)
    n1n2 = expect2(state, TwoModeOp.product(n, n)).real
    sp = expect2(state, pseudo_spin_operators(state.d)["Sp"])
    return {
        "sum": CriterionVerdict.from_sides(ps.var("Sx") + ps.var("Sy"), ps.mean("N") / 2,
                                           "hz_sum"),
        "product": CriterionVerdict.from_sides(n1n2, abs(sp) ** 2, "hz_product"),
    }


def _nz_moments(state):
    ops = pseudo_spin_operators(state.d)
    u = 2.0 * ops["Sx"]        # a2^dag a1 + a1^dag a2
    v = -2.0 * ops["Sy"]       # i (a2^dag a1 - a1^dag a2)
    cov, means = covariance2(state, [u, v, ops["N"]])
    return cov, means


def nha_zubairy_sr(state, form="printed", extra_term=True) -> CriterionVerdict:
    """Nha-Zubairy Schroedinger-Robertson criterion with its cross term.

    ``form="printed"``:
        ``(<u^2> + 1)(<v^2> + 1) >= <n1 + n2> + cross^2``.
    ``form="variance"``:
        ``(Var u + 1)(Var v + 1) >= (<n1 + n2> + 1)^2 + cross^2``, the
        partially transposed SR inequality written with variances.

    ``extra_term=False`` drops ``cross^2`` (HUR variant). The cross term is
    reported in ``extra["extra_term"]`` either way.
    """
    cov, means = _nz_moments(state)
    cross2 = cov[0, 1] ** 2
    add = cross2 if extra_term else 0.0
    if form == "printed":
        u2 = cov[0, 0] + means[0] ** 2
        v2 = cov[1, 1] + means[1] ** 2
        lhs, rhs = (u2 + 1) * (v2 + 1), means[2] + add
    elif form == "variance":
        lhs = (cov[0, 0] + 1) * (cov[1, 1] + 1)
        rhs = (means[2] + 1) ** 2 + add
    else:
        raise ValueError("form must be 'printed' or 'variance'")
    label = "nha_zubairy" + ("" if extra_term else "_hur") + ("_var" if form == "variance" else "")
    return CriterionVerdict.from_sides(lhs, rhs, label, {"form": form},
                                       {"extra_term": cross2})


def nz_extra_term(state) -> float:
    """``<du dv>_S^2`` for the Nha-Zubairy operators."""
    cov, _ = _nz_moments(state)
    return float(cov[0, 1] ** 2)


def _coherent_checked(alpha, d) -> FockState:
    s = coherent_state(alpha, d)
    if not s.is_converged():
        raise TruncationError(f"coherent tail mass {s.tail_mass:.2e} at d={d}")
    return s


def intelligent_times_coherent(r=5 / 7, nbar=5.0, theta_bs=np.pi / 4, phi=0.0, d=None,
                               alpha=None, about="mean") -> TwoModeFockState:
    """Intelligent state (optionally n-Phi rotated) mixed with a coherent state."""
    d = int(d or 8 * int(np.ceil(nbar)))
    alpha = np.sqrt(nbar) if alpha is None else alpha
    s1 = intelligent_state(r, nbar, d)
    if phi != 0.0:
        s1 = rotate_nphi(s1, phi, about=about)
    s2 = _coherent_checked(alpha, d)
    return bs_apply(TwoModeFockState.product(s1, s2), theta_bs)


def extra_term_profile_nphi(r, nbar, theta_bs, phis, d=None, alpha=None, about="mean"):
    """Nha-Zubairy extra term versus the n-Phi rotation of the intelligent input.

    Returns:
        array of shape ``(len(phis), 2)`` with columns ``phi, extra``.
    """
    d = int(d or 8 * int(np.ceil(nbar)))
    alpha = np.sqrt(nbar) if alpha is None else alpha
    s1 = intelligent_state(r, nbar, d)
    s2 = _coherent_checked(alpha, d)
    phis = np.asarray(phis, dtype=float)
    out = np.empty((phis.size, 2))
    for i, phi in enumerate(phis):
        s = rotate_nphi(s1, phi, about=about) if phi != 0.0 else s1
        out[i] = phi, nz_extra_term(bs_apply(TwoModeFockState.product(s, s2), theta_bs))
    return out


# --------------------------------------------------------------------------
# Simon-like criterion in n-Phi
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NPhiQuadratures:
    """``Q_i, P_i`` built from per-mode scaled annihilators."""

    Q1: TwoModeOp
    P1: TwoModeOp
    Q2: TwoModeOp
    P2: TwoModeOp
    gammas: tuple
    mean_c: tuple

    def as_list(self):
        return [self.Q1, self.P1, self.Q2, self.P2]


def nphi_quadratures(state, phase_ref="mean") -> NPhiQuadratures:
    """Per-mode ``a_n`` quadratures with ``gamma_i`` and ``<C_i>`` from marginals.

    With ``phase_ref="mean"`` each mode's phase is measured from its own mean
    phase (a local number-conserving rotation).
    """
    ops, gammas, cs = [], [], []
    for mode in (1, 2):
        mn, mc, _, ref = _marginal_moments(state, mode, phase_ref)
        an = scaled_annihilation_from_moments(state.d, mn, mc, ref)
        x, p = an.quadratures()
        ops += [TwoModeOp.local(x, mode), TwoModeOp.local(p, mode)]
        gammas.append(an.gamma)
        cs.append(an.mean_c)
    return NPhiQuadratures(*ops, tuple(gammas), tuple(cs))


def nphi_covariance(state, phase_ref="mean"):
    """Real symmetric ``V_n`` over ``(Q1, P1, Q2, P2)``."""
    V, _ = covariance2(state, nphi_quadratures(state, phase_ref).as_list())
    return V


def simon_like_mu_nphi(state, phase_ref="mean") -> CriterionVerdict:
    """Simon determinant test on the number-phase covariance ``V_n``."""
    V = nphi_covariance(state, phase_ref)
    mu = simon_mu_value(V[:2, :2], V[2:, 2:], V[:2, 2:])
    return CriterionVerdict.from_sides(mu, 0.0, "simon_nphi", tol=MU_TOL)


def simon_profile_nphi(r, nbar, theta_bs_values, d=None, alpha=None, phi=0.0, about="mean"):
    """``mu`` versus the beam-splitter angle for intelligent x coherent inputs."""
    d = int(d or 8 * int(np.ceil(nbar)))
    alpha = np.sqrt(nbar) if alpha is None else alpha
    s1 = intelligent_state(r, nbar, d)
    if phi != 0.0:
        s1 = rotate_nphi(s1, phi, about=about)
    prod = TwoModeFockState.product(s1, _coherent_checked(alpha, d))
    vals = np.asarray(theta_bs_values, dtype=float)
    out = np.empty((vals.size, 2))
    for i, th in enumerate(vals):
        out[i] = th, simon_like_mu_nphi(bs_apply(prod, th)).lhs
    return out


# --------------------------------------------------------------------------
# SR and product forms for n-Phi
# --------------------------------------------------------------------------

def _nphi_uv(state, theta, phase_ref="mean"):
    c, s = np.cos(theta), np.sin(theta)
    d = state.d
    _, _, n = _ops(d)
    m1, c1, _, r1 = _marginal_moments(state, 1, phase_ref)
    m2, c2, _, r2 = _marginal_moments(state, 2, phase_ref)
    for m, cm in ((m1, c1), (m2, c2)):
        scaled_annihilation_from_moments(d, m, cm)  # precondition check
    S1, _ = phase_operators(d, r1)
    S2, _ = phase_operators(d, r2)
    g1, g2 = 2 * m1, 2 * m2
    u = c * TwoModeOp.local(n, 1) + s * TwoModeOp.local(n, 2)
    v = (c * g1 / c1) * TwoModeOp.local(S1, 1) - (s * g2 / c2) * TwoModeOp.local(S2, 2)
    cov, _ = covariance2(state, [u, v])
    return cov, m1, m2


def sr_nphi(state, theta, phase_ref="mean") -> CriterionVerdict:
    """``Var u Var v >= (c^2 <n1> + s^2 <n2>)^2 + cross^2``.

    ``u = c n1 + s n2`` and ``v = c gamma1 Phi1 - s gamma2 Phi2`` with
    ``Phi_i = S_i/<C_i>``.
    """
    cov, m1, m2 = _nphi_uv(state, theta, phase_ref)
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    rhs = (c2 * m1 + s2 * m2) ** 2 + cov[0, 1] ** 2
    return CriterionVerdict.from_sides(cov[0, 0] * cov[1, 1], rhs, "sr_nphi",
                                       {"theta": theta}, {"cross": cov[0, 1]})


def raymer_product_nphi(state, theta, phase_ref="mean") -> CriterionVerdict:
    """``Var u Var v >= 4 c^2 s^2 <n1><n2>``."""
    cov, m1, m2 = _nphi_uv(state, theta, phase_ref)
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    return CriterionVerdict.from_sides(cov[0, 0] * cov[1, 1], 4 * c2 * s2 * m1 * m2,
                                       "raymer_nphi", {"theta": theta})


# --------------------------------------------------------------------------
# rotated HZ and number noise areas
# --------------------------------------------------------------------------

def rotated_hz(state):
    """Rotated-HZ nonclassicality conditions.

    Returns:
        dict with ``sz_sy_sum`` (``Var Sz + Var Sy >= <N+>/2``), ``sz``
        (``Var Sz >= <N+>/4``) and ``number_sum`` (``Var n1 + Var n2 >= <N+>``).
    """
    ps = pseudo_spin_moments(state)
    N = ps.mean("N")
    v1 = _marginal_moments(state, 1)[2]
    v2 = _marginal_moments(state, 2)[2]
    return {
        "sz_sy_sum": CriterionVerdict.from_sides(ps.var("Sz") + ps.var("Sy"), N / 2, "rotated_hz"),
        "sz": CriterionVerdict.from_sides(ps.var("Sz"), N / 4, "rotated_hz_sz"),
        "number_sum": CriterionVerdict.from_sides(v1 + v2, N, "number_sum"),
    }


def normal_ordered_variances(state):
    """``<:dSy^2:>`` and ``<:dSz^2:>`` from explicitly normal-ordered products.

    With these, ``Var Sy = <N+>/4 + <:dSy^2:>`` and likewise for ``Sz``.
    """
    a, ad, n = _ops(state.d)
    ps = pseudo_spin_operators(state.d)
    n1n2 = TwoModeOp.product(n, n)
    sp2 = TwoModeOp.product(a @ a, ad @ ad)        # a2^dag2 a1^2
    sm2 = TwoModeOp.product(ad @ ad, a @ a)        # a1^dag2 a2^2
    no_sy2 = -0.25 * (expect2(state, sp2) + expect2(state, sm2) - 2 * expect2(state, n1n2))
    nn = ad @ ad @ a @ a
    no_sz2 = 0.25 * (expect2(state, TwoModeOp.local(nn, 1)) + expect2(state, TwoModeOp.local(nn, 2))
                     - 2 * expect2(state, n1n2))
    my = expect2(state, ps["Sy"]).real
    mz = expect2(state, ps["Sz"]).real
    return float(no_sy2.real - my * my), float(no_sz2.real - mz * mz)


def number_noise_area(state):
    """Number noise-area conditions from the two marginals.

    Args:
        state: a two-mode state/mixture, or a pair of :class:`FockState`.

    Returns:
        dict with ``product`` (``Omega_n >= 1``, ``Omega_n`` the product of
        Fano factors) and ``sum`` (``Var n1 + Var n2 >= <n1> + <n2>``).
    """
    if isinstance(state, tuple):
        mv = []
        for s in state:
            _, _, n = _ops(s.d)
            m = s.expect(n).real
            mv.append((m, s.expect(n @ n).real - m * m))
    else:
        mv = [_marginal_moments(state, k)[0:3:2] for k in (1, 2)]
    (m1, v1), (m2, v2) = mv
    if m1 <= 1e-12 or m2 <= 1e-12:
        raise ValueError("number noise area needs <n> > 0 in both modes")
    return {
        "product": CriterionVerdict.from_sides((v1 / m1) * (v2 / m2), 1.0, "number_noise_area"),
        "sum": CriterionVerdict.from_sides(v1 + v2, m1 + m2, "number_noise_sum"),
    }


# --------------------------------------------------------------------------
# conjectured criterion and the generic product bound
# --------------------------------------------------------------------------

def pseudo_spin_conjecture(state) -> CriterionVerdict:
    """``Var(N+ + Sx) Var(N+ - Sx) >= <N+>^2 - <Sx>^2`` (observation only)."""
    ops = pseudo_spin_operators(state.d)
    cov, means = covariance2(state, [ops["N"] + ops["Sx"], ops["N"] - ops["Sx"]])
    N = expect2(state, ops["N"]).real
    sx = expect2(state, ops["Sx"]).real
    return CriterionVerdict.from_sides(cov[0, 0] * cov[1, 1], N * N - sx * sx,
                                       "pseudo_spin_conjecture", extra={"observation_only": True})


def _herm(M, name):
    M = M.matrix if isinstance(M, FockOperator) else np.asarray(M, dtype=complex)
    if np.max(np.abs(M - M.conj().T)) > 1e-12:
        raise ValueError(f"operator {name} is not Hermitian")
    return M


def generic_product_bound(A1, B1, A2, B2, alpha, beta, state, pt=True,
                          label="generic_product") -> CriterionVerdict:
    """Separability bound ``Var u Var v >= alpha^2 beta^2 C1 C2``.

    ``u = alpha A1 + beta A2``, ``v = alpha B1 -+ beta B2`` (minus for
    ``pt=True``) and ``C_i = |<[A_i, B_i]>|`` on the joint state.
    """
    A1, B1, A2, B2 = (_herm(M, k) for M, k in zip((A1, B1, A2, B2), ("A1", "B1", "A2", "B2")))
    sgn = -1.0 if pt else 1.0
    u = alpha * TwoModeOp.local(A1, 1) + beta * TwoModeOp.local(A2, 2)
    v = alpha * TwoModeOp.local(B1, 1) + (sgn * beta) * TwoModeOp.local(B2, 2)
    cov, _ = covariance2(state, [u, v])
    C1 = abs(expect2(state, TwoModeOp.local(A1 @ B1 - B1 @ A1, 1)))
    C2 = abs(expect2(state, TwoModeOp.local(A2 @ B2 - B2 @ A2, 2)))
    return CriterionVerdict.from_sides(cov[0, 0] * cov[1, 1], alpha**2 * beta**2 * C1 * C2,
                                       label, {"alpha": alpha, "beta": beta, "pt": pt},
                                       {"C1": C1, "C2": C2})


def xp_operators(d):
    a, ad, _ = _ops(d)
    return (a + ad) / np.sqrt(2), (a - ad) / (1j * np.sqrt(2))


def amplitude_squared_operators(d):
    """``Y1 = a^dag2 + a^2`` and ``Y2 = i (a^dag2 - a^2)``."""
    a, ad, _ = _ops(d)
    return ad @ ad + a @ a, 1j * (ad @ ad - a @ a)


def mancini_fock(state, theta=np.pi / 4) -> CriterionVerdict:
    """Quadrature product criterion through :func:`generic_product_bound`."""
    x, p = xp_operators(state.d)
    return generic_product_bound(x, p, x, p, np.cos(theta), np.sin(theta), state,
                                 label="mancini_fock")


def nphi_product_generic(state, theta=np.pi / 4, phase_ref="mean") -> CriterionVerdict:
    """``A_i = n_i``, ``B_i = gamma_i Phi_i`` through the generic bound."""
    d = state.d
    _, _, n = _ops(d)
    m1, c1, _, r1 = _marginal_moments(state, 1, phase_ref)
    m2, c2, _, r2 = _marginal_moments(state, 2, phase_ref)
    for m, cm in ((m1, c1), (m2, c2)):
        scaled_annihilation_from_moments(d, m, cm)
    S1, _ = phase_operators(d, r1)
    S2, _ = phase_operators(d, r2)
    return generic_product_bound(n, 2 * m1 * S1 / c1, n, 2 * m2 * S2 / c2,
                                 np.cos(theta), np.sin(theta), state, label="nphi_product_generic")


def amplitude_squared_product(state, theta=np.pi / 4) -> CriterionVerdict:
    Y1, Y2 = amplitude_squared_operators(state.d)
    return generic_product_bound(Y1, Y2, Y1, Y2, np.cos(theta), np.sin(theta), state,
                                 label="amplitude_squared_product")
