"""Entanglement measures and criteria for two-mode Gaussian states."""

from __future__ import annotations

import numpy as np

from nclab.gaussian import (
    SingleModeGaussian,
    TwoModeCovariance,
    align_min_noise,
    bs_mix,
    local_rotation,
    noise_eigenvalues,
    symplectic_eigenvalues,
    partial_transpose,
)
from nclab.optimizer import SearchBox, grid_refine_minimize
from nclab.verdict import CriterionVerdict

LOG2E = np.log2(np.e)
J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


# --------------------------------------------------------------------------
# measures
# --------------------------------------------------------------------------

def log_negativity(V: TwoModeCovariance) -> float:
    """Logarithmic negativity from the smaller PT symplectic eigenvalue.

    Uses the closed two-mode form with
    ``Delta~ = det A + det B - 2 det C``.
    """
    detV = np.linalg.det(V.V)
    if detV < -1e-12:
        raise ValueError("non-physical covariance (det V < 0)")
    nu_minus, _ = symplectic_eigenvalues(partial_transpose(V))
    if nu_minus <= 0:
        raise ValueError("degenerate covariance (zero symplectic eigenvalue)")
    return float(max(0.0, -np.log2(2.0 * nu_minus)))


def en_from_input_depths(tau1, tau2) -> float:
    """E_N of BS-mixed inputs from their nonclassical depths (tau < 1/2)."""
    for t in (tau1, tau2):
        if not 0.0 <= t < 0.5:
            raise ValueError(f"depth {t} outside [0, 1/2)")
    return en_from_input_noise(1 - 2 * tau1, 1 - 2 * tau2)


def en_from_input_noise(lambda1, lambda2) -> float:
    """Same as :func:`en_from_input_depths` in lambda units.

    Accepts ``lambda > 1`` (e.g. ``1 + 2 nbar`` for a thermal partner), which
    the depth form cannot encode.
    """
    if lambda1 <= 0 or lambda2 <= 0:
        raise ValueError("noise eigenvalues must be positive")
    return float(max(0.0, -0.5 * np.log2(lambda1 * lambda2)))


def s_n(lambda_in, lambda_out) -> float:
    """``log2`` of the output-to-input noise-area ratio."""
    lin = np.asarray(lambda_in, dtype=float)
    lout = np.asarray(lambda_out, dtype=float)
    if np.any(lin <= 0) or np.any(lout <= 0):
        raise ValueError("noise eigenvalues must be positive")
    return float(np.log2(np.prod(lout) / np.prod(lin)))


def tau_ent(s1: SingleModeGaussian, s2: SingleModeGaussian, theta) -> float:
    """Entanglement in nonclassical-depth units, ``|sc| (|a1-a2| + |b1-b2|)``."""
    return float(abs(np.sin(theta) * np.cos(theta))
                 * (abs(s1.a - s2.a) + abs(s1.b - s2.b)))


# --------------------------------------------------------------------------
# DGCZ family
# --------------------------------------------------------------------------

def _uv_vectors(theta, pt=True):
    c, s = np.cos(theta), np.sin(theta)
    g = np.array([c, 0.0 * c, s, 0.0 * c])
    h = np.array([0.0 * c, c, 0.0 * c, -s if pt else s])
    return g, h


def dgcz_uv_variances(V: TwoModeCovariance, theta, pt=True):
    """Variances of ``u = c x1 + s x2`` and ``v = c p1 -+ s p2``.

    ``pt=True`` takes the minus sign (partially transposed ``v``).

    Returns:
        (varU, varV, cross) with ``cross`` the symmetrized covariance.
    """
    g, h = _uv_vectors(theta, pt)
    M = V.V
    return float(g @ M @ g), float(h @ M @ h), float(g @ M @ h)


def sr_criterion(V: TwoModeCovariance, theta) -> CriterionVerdict:
    """Schroedinger-Robertson form: ``varU varV >= 1/4 + cross^2``."""
    vu, vv, cr = dgcz_uv_variances(V, theta)
    return CriterionVerdict.from_sides(vu * vv, 0.25 + cr * cr, "sr",
                                       {"theta": theta}, {"cross": cr})


def mancini_product(V: TwoModeCovariance, theta) -> CriterionVerdict:
    """Product form ``varU varV >= 1/4``."""
    vu, vv, cr = dgcz_uv_variances(V, theta)
    return CriterionVerdict.from_sides(vu * vv, 0.25, "mancini", {"theta": theta},
                                       {"cross": cr})


def dgcz_sum(V: TwoModeCovariance, theta) -> CriterionVerdict:
    """Sum form ``varU + varV >= 1``."""
    vu, vv, cr = dgcz_uv_variances(V, theta)
    return CriterionVerdict.from_sides(vu + vv, 1.0, "dgcz_sum", {"theta": theta},
                                       {"cross": cr})


def extra_term_profile(s1: SingleModeGaussian, s2: SingleModeGaussian, theta_bs, phis,
                       theta=np.pi / 4):
    """Squared cross term versus a local rotation of output mode 1.

    After mixing, both output modes are rotated to their minimum-noise
    orientation; mode 1 is then rotated by each ``phi`` while mode 2 stays
    aligned. The value at ``pi/2`` vanishes only when the inputs carry equal
    total noise (``a1 == a2``).

    Returns:
        array of shape ``(len(phis), 2)`` with columns ``phi1, cross^2``.
    """
    V = align_min_noise(bs_mix(s1, s2, theta_bs))
    phis = np.asarray(phis, dtype=float)
    out = np.empty((phis.size, 2))
    for i, phi in enumerate(phis):
        _, _, cr = dgcz_uv_variances(local_rotation(V, phi, 0.0), theta)
        out[i] = phi, cr * cr
    return out


def omega_dgcz(V: TwoModeCovariance, theta, phi1, phi2):
    """``4 varU varV`` after local rotations (vacuum gives 1).

    Broadcasts over array-valued angles.
    """
    M = V.V
    theta, phi1, phi2 = np.broadcast_arrays(*(np.asarray(x, dtype=float)
                                              for x in (theta, phi1, phi2)))
    c, s = np.cos(theta), np.sin(theta)
    c1, s1 = np.cos(phi1), np.sin(phi1)
    c2, s2 = np.cos(phi2), np.sin(phi2)
    # rows of R(phi1, phi2) applied to g and h: (R^T g)
    g = np.stack([c * c1, -c * s1, s * c2, -s * s2])
    h = np.stack([c * s1, c * c1, -s * s2, -s * c2])
    vu = np.einsum("i...,ij,j...->...", g, M, g)
    vv = np.einsum("i...,ij,j...->...", h, M, h)
    out = 4.0 * vu * vv
    return float(out) if out.ndim == 0 else out


def minimize_omega_dgcz(V: TwoModeCovariance, resolution=64, tol=1e-8):
    """Global minimum of :func:`omega_dgcz` over ``(phi1, phi2, theta)``.

    ``phi1, phi2`` range over ``[0, pi)`` and ``theta`` over ``[-pi/2, pi/2)``;
    together with the symmetry ``(phi1 + pi, theta) ~ (phi1, -theta)`` this
    covers every distinct configuration.
    """
    box = SearchBox(((0.0, np.pi), (0.0, np.pi), (-np.pi / 2, np.pi / 2)),
                    resolution=resolution, tol=tol, periodic=True)
    res = grid_refine_minimize(lambda p1, p2, th: omega_dgcz(V, th, p1, p2), box,
                               vectorized=True)
    return res


def simon_mu(V: TwoModeCovariance) -> CriterionVerdict:
    """Simon determinant test; ``mu >= 0`` for separable states."""
    mu = simon_mu_value(V.A, V.B, V.C)
    return CriterionVerdict.from_sides(mu, 0.0, "simon")


def simon_mu_value(A, B, C) -> float:
    dA, dB, dC = np.linalg.det(A), np.linalg.det(B), np.linalg.det(C)
    tr = np.trace(A @ J2 @ C @ J2 @ B @ J2 @ C.T @ J2)
    return float(dA * dB + (0.25 - abs(dC)) ** 2 - tr - 0.25 * (dA + dB))


def quadrature_nonclassicality(state):
    """Quadrature P-function conditions on minimum-noise aligned modes.

    Args:
        state: a :class:`TwoModeCovariance` (reduced modes are used) or a pair
            of :class:`SingleModeGaussian`.

    Returns:
        dict of verdicts ``product`` (``<dx1^2><dx2^2> >= 1/4``),
        ``noise_area`` (``lambda1 lambda2 >= 1``) and ``sum``
        (``<dx1^2> + <dx2^2> >= 1``).
    """
    if isinstance(state, TwoModeCovariance):
        s1, s2 = state.mode(1), state.mode(2)
    else:
        s1, s2 = state
    l1, l2 = noise_eigenvalues(s1).lambda_sm, noise_eigenvalues(s2).lambda_sm
    x1, x2 = l1 / 2, l2 / 2
    return {
        "product": CriterionVerdict.from_sides(x1 * x2, 0.25, "quadrature_product"),
        "noise_area": CriterionVerdict.from_sides(l1 * l2, 1.0, "quadrature_noise_area"),
        "sum": CriterionVerdict.from_sides(x1 + x2, 1.0, "quadrature_sum"),
    }
