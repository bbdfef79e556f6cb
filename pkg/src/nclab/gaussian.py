"""Two-mode Gaussian states described by covariance matrices.

Conventions (used by every module in the package):

* real basis order is ``(x1, p1, x2, p2)``;
* ``x = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))`` so the vacuum
  covariance is ``I/2``;
* noise eigenvalues ``lambda = 2 Lambda`` are normalized so that the standard
  quantum limit is 1;
* the beam splitter maps ``a1 -> c a1 - s a2`` and ``a2 -> s a1 + c a2``
  (``c = cos theta_BS``, ``s = sin theta_BS``);
* a local rotation by ``phi`` maps ``a -> exp(i phi) a``.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

import numpy as np

PHYS_TOL = 1e-10

#: symplectic form for the (x1, p1, x2, p2) ordering
OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))

_T1 = np.array([[1.0, 1.0j], [1.0, -1.0j]]) / np.sqrt(2.0)
#: mode-local change of basis (x, p) -> (a, a^dag), one block per mode
T2 = np.kron(np.eye(2), _T1)


def _rot2(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class NoiseEigenpair:
    """Smallest and largest normalized noise of one mode (SQL = 1)."""

    lambda_sm: float
    lambda_lg: float


@dataclass(frozen=True)
class SingleModeGaussian:
    """Single-mode zero-mean Gaussian state in complex noise form.

    Attributes:
        a: symmetric noise ``<a^dag a> + 1/2``.
        b: anomalous moment ``<a^2>``.
    """

    a: float
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a < 0.5 - 1e-9 or self.a**2 - abs(self.b) ** 2 < 0.25 - 1e-9:
            raise ValueError(f"non-physical single-mode state a={self.a}, b={self.b}")

    @classmethod
    def vacuum(cls):
        return cls(0.5, 0.0)

    @classmethod
    def thermal(cls, nbar):
        return cls(nbar + 0.5, 0.0)

    @classmethod
    def squeezed(cls, r, phase=0.0, nbar=0.0):
        """Squeezed thermal state.

        ``phase = 0`` squeezes ``x`` (``b`` real negative); ``phase = pi/2``
        squeezes ``p``.
        """
        nu = nbar + 0.5
        return cls(nu * np.cosh(2 * r), -nu * np.sinh(2 * r) * np.exp(2j * phase))

    @classmethod
    def from_covariance(cls, block):
        block = np.asarray(block, dtype=float)
        a = 0.5 * (block[0, 0] + block[1, 1])
        b = 0.5 * (block[0, 0] - block[1, 1]) + 1j * 0.5 * (block[0, 1] + block[1, 0])
        return cls(a, b)

    def covariance(self):
        """Real 2x2 covariance in ``(x, p)``."""
        return np.array([[self.a + self.b.real, self.b.imag],
                         [self.b.imag, self.a - self.b.real]])

    def aligned(self):
        """Same state rotated so its minimum noise lies along ``x``."""
        return SingleModeGaussian(self.a, -abs(self.b))


class TwoModeCovariance:
    """Real symmetric 4x4 covariance matrix over ``(x1, p1, x2, p2)``.

    Args:
        V: covariance matrix, vacuum normalized to ``I/2``.
        validate: check the uncertainty principle. Partially transposed
            matrices are built with ``validate=False`` since they may be
            unphysical by design.
    """

    __slots__ = ("_V",)

    def __init__(self, V, validate=True):
        V = np.array(V, dtype=float)
        if V.shape != (4, 4):
            raise ValueError(f"expected a 4x4 covariance, got {V.shape}")
        if not np.all(np.isfinite(V)):
            raise ValueError("covariance contains non-finite entries")
        if np.max(np.abs(V - V.T)) > 1e-9 * max(1.0, np.max(np.abs(V))):
            raise ValueError("covariance is not symmetric")
        V = 0.5 * (V + V.T)
        V.setflags(write=False)
        self._V = V
        if validate and not self.is_physical():
            raise ValueError("covariance violates the uncertainty principle")

    @property
    def V(self):
        return self._V

    @property
    def A(self):
        return self._V[:2, :2]

    @property
    def B(self):
        return self._V[2:, 2:]

    @property
    def C(self):
        return self._V[:2, 2:]

    def min_uncertainty_eigenvalue(self):
        return float(np.linalg.eigvalsh(self._V + 0.5j * OMEGA)[0])

    def is_physical(self, tol=PHYS_TOL):
        return self.min_uncertainty_eigenvalue() >= -tol

    def mode(self, k):
        """Reduced single-mode state of mode ``k`` (1 or 2)."""
        return SingleModeGaussian.from_covariance(self.A if k == 1 else self.B)

    def __repr__(self):
        return f"TwoModeCovariance({np.array2string(self._V, precision=6)})"

    # serialization -----------------------------------------------------
    def to_json_dict(self):
        return {"basis": "x1 p1 x2 p2", "vacuum": 0.5, "matrix": self._V.tolist()}

    @classmethod
    def from_json_dict(cls, d):
        if d.get("basis", "x1 p1 x2 p2") != "x1 p1 x2 p2":
            raise ValueError(f"unsupported basis tag {d.get('basis')!r}")
        if float(d.get("vacuum", 0.5)) != 0.5:
            raise ValueError("only vacuum = 0.5 normalization is supported")
        return cls(d["matrix"])

    def dumps(self):
        return json.dumps(self.to_json_dict())


def direct_sum(s1: SingleModeGaussian, s2: SingleModeGaussian) -> TwoModeCovariance:
    V = np.zeros((4, 4))
    V[:2, :2] = s1.covariance()
    V[2:, 2:] = s2.covariance()
    return TwoModeCovariance(V)


def vacuum() -> TwoModeCovariance:
    return TwoModeCovariance(0.5 * np.eye(4))


def complex_representation(V: TwoModeCovariance):
    """Covariance in the ``(a1, a1^dag, a2, a2^dag)`` representation.

    Each 2x2 block becomes ``[[a, b], [b*, a]]``-like. The transform acts
    mode-locally (block-diagonal ``T1``) so that blocks stay attached to
    their modes.
    """
    return T2 @ V.V @ T2.conj().T


def real_representation(Vc):
    """Inverse of :func:`complex_representation` (returns a real array)."""
    return (T2.conj().T @ np.asarray(Vc) @ T2).real


def noise_eigenvalues(s: SingleModeGaussian) -> NoiseEigenpair:
    """Normalized min/max quadrature noise ``2(a -+ |b|)``."""
    return NoiseEigenpair(2 * (s.a - abs(s.b)), 2 * (s.a + abs(s.b)))


def quadrature_noise_at_angle(s: SingleModeGaussian, phi):
    """``<x_phi^2>`` for the zero-mean state, ``x_phi = (a e^{-i phi} + h.c.)/sqrt 2``."""
    return s.a + (s.b * np.exp(-2j * np.asarray(phi))).real


def nonclassical_depth(lambda_sm):
    """Nonclassical depth ``max(0, (1 - lambda_sm)/2)``."""
    if np.any(np.asarray(lambda_sm) <= 0):
        raise ValueError("lambda_sm must be positive")
    return np.maximum(0.0, 0.5 * (1.0 - np.asarray(lambda_sm)))


def bs_matrix(theta):
    """Real symplectic matrix of the beam splitter."""
    c, s = np.cos(theta), np.sin(theta)
    I = np.eye(2)
    return np.block([[c * I, -s * I], [s * I, c * I]])


def bs_transform(V: TwoModeCovariance, theta) -> TwoModeCovariance:
    M = bs_matrix(theta)
    return TwoModeCovariance(M @ V.V @ M.T)


def bs_mix(s1: SingleModeGaussian, s2: SingleModeGaussian, theta) -> TwoModeCovariance:
    """Mix two single-mode states on a lossless beam splitter.

    The output blocks are ``A = c^2 V1 + s^2 V2``, ``B = s^2 V1 + c^2 V2`` and
    ``C = s c (V1 - V2)``.
    """
    c, s = np.cos(theta), np.sin(theta)
    V1, V2 = s1.covariance(), s2.covariance()
    V = np.zeros((4, 4))
    V[:2, :2] = c * c * V1 + s * s * V2
    V[2:, 2:] = s * s * V1 + c * c * V2
    V[:2, 2:] = s * c * (V1 - V2)
    V[2:, :2] = V[:2, 2:].T
    return TwoModeCovariance(V)


def strip_correlations(V: TwoModeCovariance):
    """Noise eigenpairs of the two reduced modes after zeroing ``C``."""
    return noise_eigenvalues(V.mode(1)), noise_eigenvalues(V.mode(2))


def noise_area_in(s1: SingleModeGaussian, s2: SingleModeGaussian):
    """``lambda_1,sm * lambda_2,sm`` of the inputs (vacuum gives 1)."""
    return noise_eigenvalues(s1).lambda_sm * noise_eigenvalues(s2).lambda_sm


def noise_area_out(s1: SingleModeGaussian, s2: SingleModeGaussian, theta):
    """Residual noise area after mixing minimum-noise aligned inputs.

    Both inputs are rotated so that their squeezed quadratures coincide,
    mixed on the beam splitter, and the correlation block is discarded.
    """
    l1, l2 = strip_correlations(bs_mix(s1.aligned(), s2.aligned(), theta))
    return l1.lambda_sm * l2.lambda_sm


def noise_area_increase(s1: SingleModeGaussian, s2: SingleModeGaussian, theta):
    """Closed-form increase ``s^2 c^2 (lambda_1 - lambda_2)^2`` in lambda units."""
    c, s = np.cos(theta), np.sin(theta)
    d = noise_eigenvalues(s1).lambda_sm - noise_eigenvalues(s2).lambda_sm
    return (s * c) ** 2 * d * d


def two_mode_squeezed_vacuum(r) -> TwoModeCovariance:
    ch, sh = np.cosh(2 * r), np.sinh(2 * r)
    V = np.zeros((4, 4))
    V[:2, :2] = V[2:, 2:] = 0.5 * ch * np.eye(2)
    V[:2, 2:] = V[2:, :2] = 0.5 * sh * np.diag([1.0, -1.0])
    return TwoModeCovariance(V)


def local_rotation_matrix(phi1, phi2):
    R = np.zeros((4, 4))
    R[:2, :2] = _rot2(phi1)
    R[2:, 2:] = _rot2(phi2)
    return R


def local_rotation(V: TwoModeCovariance, phi1, phi2) -> TwoModeCovariance:
    R = local_rotation_matrix(phi1, phi2)
    return TwoModeCovariance(R @ V.V @ R.T, validate=False)


def min_noise_angles(V: TwoModeCovariance):
    """Local rotation angles that put each mode's minimum noise along ``x``."""
    out = []
    for block in (V.A, V.B):
        _, vecs = np.linalg.eigh(block)
        vx, vp = vecs[:, 0]
        out.append(-float(np.arctan2(vp, vx)))
    return tuple(out)


def align_min_noise(V: TwoModeCovariance) -> TwoModeCovariance:
    """Rotate both modes locally so that ``x1`` and ``x2`` carry the least noise."""
    return local_rotation(V, *min_noise_angles(V))


def partial_transpose(V: TwoModeCovariance) -> TwoModeCovariance:
    """``p2 -> -p2``; the result may be unphysical."""
    P = np.diag([1.0, 1.0, 1.0, -1.0])
    return TwoModeCovariance(P @ V.V @ P, validate=False)


def symplectic_eigenvalues(V: TwoModeCovariance):
    """Two-mode symplectic eigenvalues ``(nu_minus, nu_plus)`` in closed form."""
    dA, dB, dC = np.linalg.det(V.A), np.linalg.det(V.B), np.linalg.det(V.C)
    delta = dA + dB + 2 * dC
    detV = np.linalg.det(V.V)
    disc = max(delta * delta - 4 * detV, 0.0)
    lo = max((delta - np.sqrt(disc)) / 2, 0.0)
    return np.sqrt(lo), np.sqrt((delta + np.sqrt(disc)) / 2)
