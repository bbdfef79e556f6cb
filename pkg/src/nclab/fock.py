"""Truncated Fock-space engine.

Single-mode states are length-``d`` vectors; two-mode pure states are stored
as ``d*d`` vectors in row-major ``|n1> (x) |n2>`` order and handled internally
as ``d x d`` amplitude matrices ``Psi[n1, n2]``, so a local operator acts as
``O1 @ Psi`` on mode 1 and ``Psi @ O2.T`` on mode 2. Dense two-mode operators
are only formed on request (:meth:`TwoModeOp.dense`).

All matrix functions go through Hermitian eigendecompositions
(``numpy.linalg.eigh``) since every generator used here is Hermitian or
anti-Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh as _eigh_subset
from scipy.special import gammaln

from nclab.gaussian import NoiseEigenpair, TwoModeCovariance

NORM_TOL = 1e-10
TAIL_TOL = 1e-8
MAX_ORACLE_DIM = 40


class DegeneratePhaseError(ValueError):
    """``<C>`` (or ``<n>``) too small to define the scaled annihilator."""


class TruncationError(RuntimeError):
    """State has too much weight near the truncation edge."""


class ConvergenceError(RuntimeError):
    """Iterative construction did not converge."""


# --------------------------------------------------------------------------
# operators
# --------------------------------------------------------------------------

def ladder_operators(d):
    """Truncated ``(a, a^dag, n)`` as complex ``d x d`` arrays."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(complex)
    return a, a.conj().T.copy(), np.diag(np.arange(d, dtype=float)).astype(complex)


def sc_operators(d):
    """Sine/cosine phase operators ``(S, C)``.

    ``e- = (n + 1)^(-1/2) a`` is the exact one-step lowering operator, and
    ``S = (e- - e+)/2i``, ``C = (e- + e+)/2``.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    em = np.eye(d, k=1, dtype=complex)
    ep = em.T.copy()
    return (em - ep) / 2j, (em + ep) / 2


def lowering_phase_operator(d):
    return np.eye(d, k=1, dtype=complex)


@dataclass(frozen=True)
class FockOperator:
    """Dense operator on a truncated single- or two-mode Fock space."""

    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if self.hermitian and np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12:
            raise ValueError("operator tagged hermitian is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]


# --------------------------------------------------------------------------
# states
# --------------------------------------------------------------------------

def _check_norm(v):
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {nrm!r} differs from 1")


@dataclass(frozen=True)
class FockState:
    """Normalized single-mode pure state in a truncated number basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        if v.size < 2:
            raise ValueError("dimension must be at least 2")
        _check_norm(v)
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, v):
        v = np.asarray(v, dtype=complex)
        return cls(v / np.linalg.norm(v))

    @property
    def d(self):
        return self.amplitudes.size

    @property
    def tail_mass(self):
        return float(abs(self.amplitudes[-1]) ** 2)

    def is_converged(self, tol=TAIL_TOL):
        return self.tail_mass <= tol

    def expect(self, O):
        O = O.matrix if isinstance(O, FockOperator) else O
        return complex(np.vdot(self.amplitudes, O @ self.amplitudes))

    def to_json_dict(self):
        return {"dim": self.d, "modes": 1, "amplitudes": _interleave(self.amplitudes)}


@dataclass(frozen=True)
class TwoModeFockState:
    """Normalized two-mode pure state, amplitudes row-major ``|n1, n2>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        d = int(round(np.sqrt(v.size)))
        if d * d != v.size or d < 2:
            raise ValueError("two-mode amplitude vector must have length d*d, d >= 2")
        _check_norm(v)
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, v):
        v = np.asarray(v, dtype=complex)
        return cls(v / np.linalg.norm(v))

    @classmethod
    def from_matrix(cls, Psi):
        return cls(np.asarray(Psi, dtype=complex).ravel())

    @classmethod
    def product(cls, s1: FockState, s2: FockState):
        if s1.d != s2.d:
            raise ValueError("both modes must share the truncation dimension")
        return cls.normalized(np.outer(s1.amplitudes, s2.amplitudes).ravel())

    @property
    def d(self):
        return int(round(np.sqrt(self.amplitudes.size)))

    @property
    def matrix(self):
        return self.amplitudes.reshape(self.d, self.d)

    def components(self):
        return [(1.0, self.matrix)]

    def reduced(self, mode):
        """Reduced density matrix of mode 1 or 2."""
        P = self.matrix
        return P @ P.conj().T if mode == 1 else P.T @ P.conj()

    @property
    def tail_mass(self):
        P = np.abs(self.matrix) ** 2
        return float(P[-1, :].sum() + P[:, -1].sum() - P[-1, -1])

    def to_json_dict(self):
        return {"dim": self.d, "modes": 2, "amplitudes": _interleave(self.amplitudes)}


@dataclass(frozen=True)
class TwoModeMixture:
    """Convex mixture ``sum_k p_k |psi_k><psi_k|`` of two-mode pure states."""

    weights: tuple
    states: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.states) or len(w) == 0:
            raise ValueError("weights and states must have equal nonzero length")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-10:
            raise ValueError("weights must be a probability vector")
        if len({s.d for s in self.states}) != 1:
            raise ValueError("all components must share the dimension")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def d(self):
        return self.states[0].d

    def components(self):
        return [(p, s.matrix) for p, s in zip(self.weights, self.states)]

    def reduced(self, mode):
        return sum(p * s.reduced(mode) for p, s in zip(self.weights, self.states))

    def density_matrix(self):
        return DensityMatrix(sum(p * np.outer(s.amplitudes, s.amplitudes.conj())
                                 for p, s in zip(self.weights, self.states)))


@dataclass(frozen=True)
class DensityMatrix:
    """Two-mode density matrix (oracle support only)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = m.shape[0]
        d = int(round(np.sqrt(n)))
        if m.shape != (n, n) or d * d != n:
            raise ValueError("density matrix must be (d*d) x (d*d)")
        if d > MAX_ORACLE_DIM:
            raise ValueError(f"oracle size guard: d = {d} > {MAX_ORACLE_DIM}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        if abs(np.trace(m).real - 1.0) > 1e-10:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(m)[0] < -1e-10:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pure(cls, state: TwoModeFockState):
        v = state.amplitudes
        return cls(np.outer(v, v.conj()))

    @property
    def d(self):
        return int(round(np.sqrt(self.matrix.shape[0])))


def _interleave(v):
    out = np.empty(2 * v.size)
    out[0::2], out[1::2] = v.real, v.imag
    return out.tolist()


def state_from_json_dict(d):
    """Parse a Fock state JSON object (``dim``, ``amplitudes``, ``modes``)."""
    dim = int(d["dim"])
    raw = np.asarray(d["amplitudes"], dtype=float)
    if raw.size % 2:
        raise ValueError("amplitudes must interleave real and imaginary parts")
    v = raw[0::2] + 1j * raw[1::2]
    modes = int(d.get("modes", 2 if v.size == dim * dim and dim > 1 else 1))
    if modes == 1:
        if v.size != dim:
            raise ValueError("amplitude count does not match dim")
        return FockState(v)
    if v.size != dim * dim:
        raise ValueError("amplitude count does not match dim*dim")
    return TwoModeFockState(v)


# constructors ---------------------------------------------------------------

def number_state(n, d):
    v = np.zeros(d, complex)
    v[n] = 1.0
    return FockState(v)


def coherent_state(alpha, d):
    n = np.arange(d)
    alpha = complex(alpha)
    if alpha == 0:
        return number_state(0, d)
    logmag = n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    v = np.exp(logmag - logmag.max()) * np.exp(1j * n * np.angle(alpha))
    return FockState.normalized(v)


def squeezed_vacuum_state(r, d, phase=0.0):
    """Squeezed vacuum; ``phase = 0`` squeezes ``x`` (``<a^2> < 0``)."""
    v = np.zeros(d, complex)
    m = np.arange((d + 1) // 2)
    t = np.tanh(r)
    with np.errstate(divide="ignore"):
        logc = 0.5 * gammaln(2 * m + 1) - m * np.log(2.0) - gammaln(m + 1) + m * np.log(abs(t))
    if t == 0:
        logc = np.where(m == 0, 0.0, -np.inf)
    v[2 * m] = np.exp(logc) * (-np.sign(t)) ** m * np.exp(2j * m * phase)
    return FockState.normalized(v)


def tmsv_state(r, d):
    """Two-mode squeezed vacuum ``sum_n tanh(r)^n |n, n> / cosh r``."""
    Psi = np.diag(np.tanh(r) ** np.arange(d)).astype(complex)
    return TwoModeFockState.normalized(Psi.ravel())


# --------------------------------------------------------------------------
# two-mode operators
# --------------------------------------------------------------------------

class TwoModeOp:
    """Sum of tensor products ``sum_k c_k M1_k (x) M2_k`` on two modes.

    ``None`` stands for the identity on that mode.
    """

    __slots__ = ("terms", "d")

    def __init__(self, terms, d):
        self.terms = tuple(terms)
        self.d = d

    @classmethod
    def local(cls, M, mode):
        M = M.matrix if isinstance(M, FockOperator) else np.asarray(M)
        d = M.shape[0]
        return cls([(1.0, M, None)] if mode == 1 else [(1.0, None, M)], d)

    @classmethod
    def product(cls, M1, M2):
        return cls([(1.0, np.asarray(M1), np.asarray(M2))], np.asarray(M1).shape[0])

    def __add__(self, other):
        return TwoModeOp(self.terms + other.terms, self.d)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, c):
        return TwoModeOp([(c * k, A, B) for k, A, B in self.terms], self.d)

    def __mul__(self, c):
        return self.__rmul__(c)

    def adjoint(self):
        return TwoModeOp([(np.conj(k), None if A is None else A.conj().T,
                           None if B is None else B.conj().T) for k, A, B in self.terms],
                         self.d)

    def apply(self, Psi):
        out = np.zeros_like(Psi, dtype=complex)
        for k, A, B in self.terms:
            X = Psi if A is None else A @ Psi
            if B is not None:
                X = X @ B.T
            out += k * X
        return out

    def dense(self):
        if self.d > MAX_ORACLE_DIM:
            raise ValueError("dense two-mode operators limited to d <= 40")
        eye = np.eye(self.d)
        out = np.zeros((self.d**2, self.d**2), complex)
        for k, A, B in self.terms:
            out += k * np.kron(eye if A is None else A, eye if B is None else B)
        return out


def _components(state):
    return state.components()


def expect2(state, op: TwoModeOp) -> complex:
    """``<op>`` on a pure two-mode state or mixture."""
    return complex(sum(p * np.vdot(P, op.apply(P)) for p, P in _components(state)))


def second_moment2(state, A: TwoModeOp, B: TwoModeOp) -> complex:
    """``<A B>`` assuming ``A`` Hermitian (computed as ``<A psi | B psi>``)."""
    return complex(sum(p * np.vdot(A.apply(P), B.apply(P)) for p, P in _components(state)))


def covariance2(state, ops):
    """Symmetrized covariance matrix of Hermitian two-mode operators."""
    k = len(ops)
    means = np.zeros(k)
    G = np.zeros((k, k))
    for p, P in _components(state):
        vs = [o.apply(P) for o in ops]
        m = np.array([np.vdot(P, v).real for v in vs])
        means += p * m
        G += p * np.real(np.array([[np.vdot(vi, vj) for vj in vs] for vi in vs]))
    G = 0.5 * (G + G.T)
    return G - np.outer(means, means), means


# --------------------------------------------------------------------------
# number-phase machinery
# --------------------------------------------------------------------------

def phase_operators(d, ref=0.0):
    """``(S, C)`` measured from the reference phase ``ref``.

    Uses ``e- -> exp(-i ref) e-``; ``ref = 0`` gives :func:`sc_operators`.
    """
    em = np.exp(-1j * ref) * np.eye(d, k=1, dtype=complex)
    ep = em.conj().T
    return (em - ep) / 2j, (em + ep) / 2


def mean_phase(rho):
    """``arg <e->`` of a single-mode density matrix."""
    return float(np.angle(np.trace(rho @ np.eye(rho.shape[0], k=1))))


@dataclass(frozen=True)
class ScaledAnnihilation:
    """``a_n = (n + i gamma S/<C>)/sqrt(2 gamma)`` frozen from a state.

    Attributes:
        operator: the operator matrix (not Hermitian).
        gamma: ``2 <n>`` of the reference state.
        mean_c: ``<C>`` of the reference state.
        phase_ref: phase origin of ``S`` and ``C`` (0 for the plain operators).
    """

    operator: FockOperator
    gamma: float
    mean_c: float
    phase_ref: float = 0.0

    @property
    def matrix(self):
        return self.operator.matrix

    def quadratures(self):
        """``(x_n, p_n) = (n/sqrt(gamma), sqrt(gamma) S/<C>)``."""
        a = self.matrix
        return (a + a.conj().T) / np.sqrt(2), (a - a.conj().T) / (1j * np.sqrt(2))


def scaled_annihilation_from_moments(d, mean_n, mean_c, phase_ref=0.0) -> ScaledAnnihilation:
    if mean_n <= 1e-6:
        raise DegeneratePhaseError(f"<n> = {mean_n:.3g} too small for a scaled annihilator")
    if abs(mean_c) <= 1e-6:
        raise DegeneratePhaseError(f"|<C>| = {abs(mean_c):.3g} too small (ill-defined phase)")
    _, _, n = ladder_operators(d)
    S, _ = phase_operators(d, phase_ref)
    gamma = 2.0 * mean_n
    op = (n + 1j * gamma * S / mean_c) / np.sqrt(2 * gamma)
    return ScaledAnnihilation(FockOperator(op), gamma, float(mean_c), float(phase_ref))


def resolve_phase_ref(rho, phase_ref):
    return mean_phase(rho) if phase_ref == "mean" else float(phase_ref)


def scaled_annihilation_rho(rho, phase_ref="mean") -> ScaledAnnihilation:
    d = rho.shape[0]
    ref = resolve_phase_ref(rho, phase_ref)
    _, _, n = ladder_operators(d)
    _, C = phase_operators(d, ref)
    mean_n = float(np.trace(rho @ n).real)
    mean_c = float(np.trace(rho @ C).real)
    return scaled_annihilation_from_moments(d, mean_n, mean_c, ref)


def scaled_annihilation(state, phase_ref="mean") -> ScaledAnnihilation:
    """Scaled annihilator with ``gamma`` and ``<C>`` frozen from ``state``.

    Args:
        state: :class:`FockState` or a single-mode density matrix.
        phase_ref: ``"mean"`` measures the phase from ``arg <e->`` of the
            state so that ``<S> = 0``; a number fixes the origin (0 gives the
            plain ``S/<C>`` surrogate).

    Raises:
        DegeneratePhaseError: ``<n>`` or ``|<C>|`` at most ``1e-6``.
    """
    return scaled_annihilation_rho(_rho1(state), phase_ref)


def _rho1(state):
    if isinstance(state, FockState):
        v = state.amplitudes
        return np.outer(v, v.conj())
    rho = np.asarray(state, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise TypeError("expected a FockState or a single-mode density matrix")
    return rho


def nphi_noise_matrix(state, phase_ref="mean"):
    """Real number-phase noise matrix and its normalized eigenvalues.

    ``V_n = [[Var n / gamma, cov_S(n, Phi)], [cov_S(n, Phi), gamma Var Phi]]``
    with ``Phi = S/<C>``, i.e. the covariance of the ``a_n`` quadratures
    ``n/sqrt(gamma)`` and ``sqrt(gamma) Phi``.

    Returns:
        (V_n, NoiseEigenpair) with ``lambda = 2 * eig(V_n)``.
    """
    rho = _rho1(state)
    an = scaled_annihilation_rho(rho, phase_ref)
    x, p = an.quadratures()
    V = _cov_from_rho(rho, [x, p])
    w = np.linalg.eigvalsh(V)
    return V, NoiseEigenpair(2 * w[0], 2 * w[1])


def nphi_noise_matrix_complex(state, phase_ref="mean"):
    """Complex-representation noise matrix ``[[<{da, da^dag}>/2, <da^2>], [c.c.]]``."""
    rho = _rho1(state)
    a = scaled_annihilation_rho(rho, phase_ref).matrix
    ad = a.conj().T
    ma = np.trace(rho @ a)
    A = 0.5 * np.trace(rho @ (a @ ad + ad @ a)).real - abs(ma) ** 2
    B = np.trace(rho @ a @ a) - ma * ma
    return np.array([[A, B], [np.conj(B), A]])


def _cov_from_rho(rho, ops):
    m = np.array([np.trace(rho @ o).real for o in ops])
    k = len(ops)
    G = np.array([[0.5 * np.trace(rho @ (ops[i] @ ops[j] + ops[j] @ ops[i])).real
                   for j in range(k)] for i in range(k)])
    return G - np.outer(m, m)


def _expm_hermitian(H, t):
    """``exp(-i t H)`` for Hermitian ``H``."""
    w, U = np.linalg.eigh(H)
    return (U * np.exp(-1j * t * w)) @ U.conj().T


def rotate_nphi(state: FockState, phi, about="mean", phase_ref="mean") -> FockState:
    """Rotate a state in the number-phase plane.

    ``about="mean"`` applies ``exp(i phi da^dag da)`` with
    ``da = a_n - <a_n>``, which turns the noise ellipse about the mean
    point. ``about="origin"`` applies ``exp(i phi a_n^dag a_n)``. The scaled
    annihilator is frozen from the input state in both cases.
    """
    an = scaled_annihilation(state, phase_ref).matrix
    if about == "mean":
        an = an - state.expect(an) * np.eye(state.d)
    elif about != "origin":
        raise ValueError("about must be 'mean' or 'origin'")
    H = an.conj().T @ an
    H = 0.5 * (H + H.conj().T)
    return FockState.normalized(_expm_hermitian(H, -phi) @ state.amplitudes)


def displace_nphi(state: FockState, beta, phase_ref="mean") -> FockState:
    """Apply ``exp(beta a_n^dag - beta^* a_n)`` (``a_n`` frozen from ``state``)."""
    an = scaled_annihilation(state, phase_ref).matrix
    G = beta * an.conj().T - np.conj(beta) * an  # anti-Hermitian
    H = 1j * G
    H = 0.5 * (H + H.conj().T)
    return FockState.normalized(_expm_hermitian(H, 1.0) @ state.amplitudes)


@dataclass(frozen=True)
class IntelligentStateResult:
    state: FockState
    kappa: float
    residual: float
    iterations: int
    extra: dict = field(default_factory=dict)


def intelligent_state(r, nbar_target, d=None) -> FockState:
    """Number-phase intelligent state (see :func:`intelligent_state_info`)."""
    return intelligent_state_info(r, nbar_target, d).state


def intelligent_state_info(r, nbar_target, d=None, max_iter=100, tol=1e-12):
    """Construct the intelligent state of ``E = n + i kappa S``.

    The eigenvector with eigenvalue near ``nbar_target`` is taken in the
    least-squares sense: the ground state of the Hermitian operator
    ``(E - nbar)^dag (E - nbar) = (n - nbar)^2 + kappa^2 S^2 - kappa C``,
    which is real and has zero mean phase. ``kappa = 2 r <n>/<C>`` is updated
    by fixed-point iteration until its relative change is below ``tol``.

    Args:
        r: squeezing ratio (``r < 1`` number squeezed, ``r > 1`` phase squeezed).
        nbar_target: target eigenvalue, ``>= 1``.
        d: truncation; defaults to ``8 * max(nbar_target, 1)``.

    Returns:
        IntelligentStateResult with the residual ``||(E - nbar) psi||^2``.

    Raises:
        ConvergenceError: no fixed point after ``max_iter`` iterations.
        TruncationError: tail mass above ``1e-8``.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if nbar_target < 1:
        raise ValueError("nbar_target must be at least 1")
    d = int(d or 8 * max(int(np.ceil(nbar_target)), 1))
    if d < 8 * nbar_target:
        raise ValueError(f"dimension {d} below 8 * nbar_target")
    _, _, n = ladder_operators(d)
    S, C = sc_operators(d)
    n, S2, C = n.real, (S @ S).real, C.real
    shift = n - nbar_target * np.eye(d)
    base = shift @ shift
    mean_n, mean_c = float(nbar_target), 1.0
    kappa = 2 * r * mean_n / mean_c
    for it in range(1, max_iter + 1):
        H = base + kappa**2 * S2 - kappa * C
        w, v = _eigh_subset(H, subset_by_index=[0, 0])
        psi = v[:, 0]
        psi = psi * np.sign(psi.sum())
        mean_n, mean_c = float(psi @ n @ psi), float(psi @ C @ psi)
        new = 2 * r * mean_n / mean_c
        if abs(new - kappa) < tol * kappa:
            kappa = new
            break
        kappa = new
    else:
        raise ConvergenceError(f"intelligent state did not converge in {max_iter} iterations")
    state = FockState.normalized(psi)
    if not state.is_converged():
        raise TruncationError(f"tail mass {state.tail_mass:.2e} exceeds {TAIL_TOL:g} at d={d}")
    return IntelligentStateResult(state, kappa, float(w[0]), it,
                                  {"mean_n": mean_n, "mean_c": mean_c})


# --------------------------------------------------------------------------
# beam splitter
# --------------------------------------------------------------------------

def bs_apply(state, theta):
    """Beam splitter on a two-mode pure state.

    Applies ``U = exp[theta (a1 a2^dag - a1^dag a2)]``, the Schroedinger
    picture of ``a1 -> c a1 - s a2``, ``a2 -> s a1 + c a2`` used by
    :func:`nclab.gaussian.bs_mix`. The generator conserves ``n1 + n2``, so it
    is exponentiated exactly inside each fixed-total sector of the
    truncated space.
    """
    Psi = state.matrix
    d = Psi.shape[0]
    out = np.zeros_like(Psi)
    for N in range(2 * d - 1):
        n1 = np.arange(max(0, N - d + 1), min(N, d - 1) + 1)
        n2 = N - n1
        m = n1.size
        if m == 1:
            out[n1, n2] = Psi[n1, n2]
            continue
        # G = a1 a2^dag - a1^dag a2 on basis |n1, N-n1>; real antisymmetric
        # a1 a2^dag |n1, n2> = sqrt(n1 (n2+1)) |n1-1, n2+1>
        off = np.sqrt(n1[1:] * (n2[1:] + 1.0))
        G = np.diag(off, 1) - np.diag(off, -1)
        w, U = np.linalg.eigh(1j * G)
        Ut = (U * np.exp(-1j * theta * w)) @ U.conj().T  # exp(theta G)
        out[n1, n2] = Ut @ Psi[n1, n2]
    return TwoModeFockState.normalized(out.ravel())


# --------------------------------------------------------------------------
# Gaussian bridge and negativity oracle
# --------------------------------------------------------------------------

def _xp(d):
    a, ad, _ = ladder_operators(d)
    return (a + ad) / np.sqrt(2), (a - ad) / (1j * np.sqrt(2))


def covariance_from_fock(state) -> TwoModeCovariance:
    """Symmetrized quadrature covariance of a two-mode Fock state."""
    x, p = _xp(state.d)
    ops = [TwoModeOp.local(x, 1), TwoModeOp.local(p, 1),
           TwoModeOp.local(x, 2), TwoModeOp.local(p, 2)]
    V, _ = covariance2(state, ops)
    return TwoModeCovariance(V, validate=False)


def single_mode_covariance_from_fock(state: FockState):
    x, p = _xp(state.d)
    v = state.amplitudes
    return _cov_from_rho(np.outer(v, v.conj()), [x, p])


def partial_transpose_fock(rho: DensityMatrix):
    d = rho.d
    R = rho.matrix.reshape(d, d, d, d)
    return R.transpose(0, 3, 2, 1).reshape(d * d, d * d)


def _trace_norm_pt(rho):
    rho = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    return float(np.sum(np.abs(np.linalg.eigvalsh(partial_transpose_fock(rho)))))


def pt_negativity(rho) -> float:
    """Negativity ``(||rho^T2||_1 - 1)/2``."""
    return 0.5 * (_trace_norm_pt(rho) - 1.0)


def log_negativity_fock(rho) -> float:
    """``log2 ||rho^T2||_1`` from the eigenvalues of the partial transpose."""
    return float(np.log2(_trace_norm_pt(rho)))
