"""Seeded random state ensembles.

Every sample ``i`` of a run with seed ``s`` draws from its own stream,
``numpy.random.Generator(PCG64(SeedSequence([s, i])))``, so results do not
depend on evaluation order or worker count and can be reproduced from the
pair ``(seed, index)`` alone.
"""

from __future__ import annotations

import numpy as np

from nclab.fock import (
    FockState,
    TwoModeFockState,
    TwoModeMixture,
    DensityMatrix,
    coherent_state,
    log_negativity_fock,
)
from nclab.gaussian import (
    SingleModeGaussian,
    TwoModeCovariance,
    bs_mix,
    direct_sum,
    local_rotation,
    two_mode_squeezed_vacuum,
)

R_MAX = 1.2
NBAR_MAX = 1.0


def make_rng(seed, index):
    """Independent PCG64 stream for sample ``index`` of run ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


# --------------------------------------------------------------------------
# Gaussian
# --------------------------------------------------------------------------

def random_single_mode(rng, r_max=R_MAX, thermal=True) -> SingleModeGaussian:
    """Squeezed thermal state with ``r ~ U[0, r_max]``, uniform orientation."""
    r = rng.uniform(0.0, r_max)
    phase = rng.uniform(0.0, np.pi)
    nbar = rng.uniform(0.0, NBAR_MAX) if thermal else 0.0
    return SingleModeGaussian.squeezed(r, phase, nbar)


def random_classical_single_mode(rng) -> SingleModeGaussian:
    """Squeezed thermal state that stays at or above the vacuum noise."""
    nbar = rng.uniform(0.0, NBAR_MAX)
    r = rng.uniform(0.0, 0.5 * np.log(2 * nbar + 1)) if nbar > 0 else 0.0
    return SingleModeGaussian.squeezed(r, rng.uniform(0.0, np.pi), nbar)


def random_separable_gaussian(rng) -> TwoModeCovariance:
    return direct_sum(random_single_mode(rng), random_single_mode(rng))


def random_classical_gaussian(rng) -> TwoModeCovariance:
    return direct_sum(random_classical_single_mode(rng), random_classical_single_mode(rng))


def random_observation_state(rng):
    """State from the family where the noise-area identity is expected.

    Half of the samples are TMSV, half are orthogonally squeezed (possibly
    thermal) inputs mixed at ``theta_BS = pi/4``; both get random local
    rotations afterwards.

    Returns:
        (TwoModeCovariance, family label)
    """
    if rng.uniform() < 0.5:
        V = two_mode_squeezed_vacuum(rng.uniform(0.05, R_MAX))
        fam = "tmsv"
    else:
        phase = rng.uniform(0.0, np.pi)
        s1 = SingleModeGaussian.squeezed(rng.uniform(0.05, R_MAX), phase, rng.uniform(0, NBAR_MAX))
        s2 = SingleModeGaussian.squeezed(rng.uniform(0.05, R_MAX), phase + np.pi / 2,
                                         rng.uniform(0, NBAR_MAX))
        V = bs_mix(s1, s2, np.pi / 4)
        fam = "bs_orthogonal"
    V = local_rotation(V, rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
    return TwoModeCovariance(V.V), fam


def random_general_bs_state(rng):
    """Arbitrary squeezed thermal inputs, orientations and mixing angle."""
    s1, s2 = random_single_mode(rng), random_single_mode(rng)
    return bs_mix(s1, s2, rng.uniform(0.0, np.pi / 2)), "bs_general"


# --------------------------------------------------------------------------
# Fock
# --------------------------------------------------------------------------

def haar_vector(rng, k, d):
    """Haar-random pure state on the first ``k`` levels of a ``d``-level space."""
    v = np.zeros(d, complex)
    v[:k] = rng.normal(size=k) + 1j * rng.normal(size=k)
    return v / np.linalg.norm(v)


def random_separable_mixture(rng, dmax=6, kmax=5, pad=3) -> TwoModeMixture:
    """``sum_k p_k psi1_k (x) psi2_k`` with Haar factors on up to ``dmax`` levels.

    Factors live in a ``dmax + pad`` dimensional space so that ladder
    operators act without truncation artefacts on their support.
    """
    d = dmax + pad
    K = int(rng.integers(1, kmax + 1))
    w = rng.dirichlet(np.ones(K))
    comps = []
    for _ in range(K):
        k1, k2 = (int(x) for x in rng.integers(2, dmax + 1, size=2))
        comps.append(TwoModeFockState.product(FockState(haar_vector(rng, k1, d)),
                                              FockState(haar_vector(rng, k2, d))))
    return TwoModeMixture(tuple(w), tuple(comps))


def random_coherent_mixture(rng, kmax=3, amax=1.2, d=20) -> TwoModeMixture:
    """Mixture of coherent products (a classical state)."""
    K = int(rng.integers(1, kmax + 1))
    w = rng.dirichlet(np.ones(K))
    comps = []
    for _ in range(K):
        a1, a2 = (amax * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
                  for _ in range(2))
        comps.append(TwoModeFockState.product(coherent_state(a1, d), coherent_state(a2, d)))
    return TwoModeMixture(tuple(w), tuple(comps))


def random_entangled_pure(rng, dmax=6, pad=3, min_en=1e-6):
    """Haar-random two-mode pure state on ``k1 x k2`` levels (``k <= dmax``).

    Resamples until the PT-negativity oracle certifies entanglement.

    Returns:
        (TwoModeFockState, E_N)
    """
    d = dmax + pad
    while True:
        k1, k2 = (int(x) for x in rng.integers(2, dmax + 1, size=2))
        Psi = np.zeros((d, d), complex)
        Psi[:k1, :k2] = rng.normal(size=(k1, k2)) + 1j * rng.normal(size=(k1, k2))
        st = TwoModeFockState.normalized(Psi.ravel())
        en = log_negativity_fock(DensityMatrix.from_pure(st))
        if en > min_en:
            return st, en
