"""Registry of every criterion reachable from the CLI.

``kind`` decides how the soundness sweep treats a criterion:

* ``entanglement``: must never flag a separable state;
* ``nonclassicality``: must never flag a classical (P-representable) state;
* ``observation``: evaluated and reported, never gated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from nclab import gaussian_criteria as gc
from nclab import nphi_criteria as nc

DEFAULT_THETA = -np.pi / 4


@dataclass(frozen=True)
class Criterion:
    name: str
    domain: str          # "gaussian" | "fock"
    kind: str            # "entanglement" | "nonclassicality" | "observation"
    evaluate: Callable   # (state, theta) -> CriterionVerdict
    angular: bool = False
    description: str = ""


def _pick(fn, key):
    return lambda s, theta=None: fn(s)[key]


def _plain(fn):
    return lambda s, theta=None: fn(s)


def _ang(fn, default):
    return lambda s, theta=None: fn(s, default if theta is None else theta)


_ENTRIES = [
    # Gaussian
    Criterion("simon", "gaussian", "entanglement", _plain(gc.simon_mu),
              description="Simon determinant test on the covariance matrix"),
    Criterion("sr", "gaussian", "entanglement", _ang(gc.sr_criterion, DEFAULT_THETA), True,
              "DGCZ operators, Schroedinger-Robertson product with cross term"),
    Criterion("mancini", "gaussian", "entanglement", _ang(gc.mancini_product, DEFAULT_THETA),
              True, "DGCZ operators, product form"),
    Criterion("dgcz_sum", "gaussian", "entanglement", _ang(gc.dgcz_sum, DEFAULT_THETA), True,
              "DGCZ operators, sum form"),
    Criterion("quadrature_product", "gaussian", "nonclassicality",
              _pick(gc.quadrature_nonclassicality, "product"),
              description="<dx1^2><dx2^2> on minimum-noise quadratures"),
    Criterion("quadrature_noise_area", "gaussian", "nonclassicality",
              _pick(gc.quadrature_nonclassicality, "noise_area"),
              description="lambda1 lambda2 noise area"),
    Criterion("quadrature_sum", "gaussian", "nonclassicality",
              _pick(gc.quadrature_nonclassicality, "sum"),
              description="<dx1^2> + <dx2^2> on minimum-noise quadratures"),
    # Fock
    Criterion("hz_sum", "fock", "entanglement", _pick(nc.hz_criterion, "sum"),
              description="Var Sx + Var Sy >= <N+>/2"),
    Criterion("hz_product", "fock", "entanglement", _pick(nc.hz_criterion, "product"),
              description="<n1 n2> >= |<a2^dag a1>|^2"),
    Criterion("nha_zubairy", "fock", "entanglement",
              lambda s, theta=None: nc.nha_zubairy_sr(s, "printed"),
              description="Nha-Zubairy SR criterion as printed"),
    Criterion("nha_zubairy_var", "fock", "entanglement",
              lambda s, theta=None: nc.nha_zubairy_sr(s, "variance"),
              description="Nha-Zubairy SR criterion, variance form"),
    Criterion("nha_zubairy_hur", "fock", "entanglement",
              lambda s, theta=None: nc.nha_zubairy_sr(s, "variance", extra_term=False),
              description="Nha-Zubairy variance form without the cross term"),
    Criterion("simon_nphi", "fock", "entanglement", _plain(nc.simon_like_mu_nphi),
              description="Simon-like test on the number-phase covariance"),
    Criterion("sr_nphi", "fock", "entanglement", _ang(nc.sr_nphi, np.pi / 4), True,
              "n-Phi Schroedinger-Robertson inequality"),
    Criterion("raymer_nphi", "fock", "entanglement", _ang(nc.raymer_product_nphi, np.pi / 4),
              True, "n-Phi product bound 4 c^2 s^2 <n1><n2>"),
    Criterion("mancini_fock", "fock", "entanglement", _ang(nc.mancini_fock, np.pi / 4), True,
              "generic product bound with x, p"),
    Criterion("nphi_product_generic", "fock", "entanglement",
              _ang(nc.nphi_product_generic, np.pi / 4), True,
              "generic product bound with n, gamma Phi"),
    Criterion("amplitude_squared_product", "fock", "entanglement",
              _ang(nc.amplitude_squared_product, np.pi / 4), True,
              "generic product bound with amplitude-squared quadratures"),
    Criterion("rotated_hz", "fock", "nonclassicality", _pick(nc.rotated_hz, "sz_sy_sum"),
              description="Var Sz + Var Sy >= <N+>/2"),
    Criterion("rotated_hz_sz", "fock", "nonclassicality", _pick(nc.rotated_hz, "sz"),
              description="Var Sz >= <N+>/4"),
    Criterion("number_sum", "fock", "nonclassicality", _pick(nc.rotated_hz, "number_sum"),
              description="Var n1 + Var n2 >= <N+>"),
    Criterion("number_noise_area", "fock", "nonclassicality",
              _pick(nc.number_noise_area, "product"),
              description="product of Fano factors >= 1"),
    Criterion("pseudo_spin_conjecture", "fock", "observation", _plain(nc.pseudo_spin_conjecture),
              description="conjectured pseudo-spin product inequality (not a certified witness)"),
]

REGISTRY = {c.name: c for c in _ENTRIES}


def names(domain=None, kind=None):
    return [c.name for c in _ENTRIES
            if (domain is None or c.domain == domain) and (kind is None or c.kind == kind)]


def get(name) -> Criterion:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown criterion {name!r}; valid names: {', '.join(REGISTRY)}") from None
