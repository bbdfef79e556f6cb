"""Deterministic grid scan, coordinate-wise golden-section refinement, simplex polish."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from nclab.verdict import OptimizationResult

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchBox:
    """Search region for :func:`grid_refine_minimize`.

    Attributes:
        bounds: ``((lo, hi), ...)`` per dimension.
        resolution: grid points per dimension (scalar or per-dimension).
        tol: bracket width at which refinement stops.
        periodic: per-dimension flags. Periodic axes are sampled on
            ``lo + i h`` with ``h = (hi - lo)/n`` and refinement brackets may
            wrap past the ends; other axes are sampled including both ends
            and brackets are clipped.
    """

    bounds: tuple
    resolution: tuple | int = 64
    tol: float = 1e-8
    periodic: tuple | bool = False

    def __post_init__(self):
        b = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if not 1 <= len(b) <= 3:
            raise ValueError("SearchBox supports 1 to 3 dimensions")
        for lo, hi in b:
            if not lo < hi:
                raise ValueError(f"empty interval ({lo}, {hi})")
        res = self.resolution
        res = tuple([int(res)] * len(b)) if np.isscalar(res) else tuple(int(x) for x in res)
        per = self.periodic
        per = tuple([bool(per)] * len(b)) if np.isscalar(per) else tuple(bool(x) for x in per)
        if len(res) != len(b) or len(per) != len(b):
            raise ValueError("resolution/periodic length must match bounds")
        if min(res) < 8:
            raise ValueError("resolution must be at least 8")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        object.__setattr__(self, "bounds", b)
        object.__setattr__(self, "resolution", res)
        object.__setattr__(self, "periodic", per)

    @property
    def ndim(self):
        return len(self.bounds)

    def axis(self, k):
        lo, hi = self.bounds[k]
        n = self.resolution[k]
        if self.periodic[k]:
            return lo + (hi - lo) * np.arange(n) / n
        return np.linspace(lo, hi, n)

    def step(self, k):
        lo, hi = self.bounds[k]
        n = self.resolution[k]
        return (hi - lo) / (n if self.periodic[k] else n - 1)


def _golden(f, lo, hi, tol):
    """Golden-section search on ``[lo, hi]``; returns ``(x, fx, evals)``."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    n = 2
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        n += 1
    return (c, fc, n) if fc <= fd else (d, fd, n)


def grid_refine_minimize(objective, box: SearchBox, vectorized=False, passes=3,
                         tie_tol=0.0, polish=True) -> OptimizationResult:
    """Minimize ``objective`` over ``box``.

    A full tensor grid is scanned first; the best grid point (lexicographically
    smallest among values within ``tie_tol`` of the minimum) seeds ``passes``
    round-robin golden-section sweeps, one axis at a time, each on a bracket
    of one grid step around the incumbent. With ``polish`` a Nelder-Mead
    simplex (scipy) then runs from the incumbent to ``box.tol``.

    Args:
        objective: ``f(x1, ..., xk) -> float``. With ``vectorized=True`` it
            must accept broadcastable arrays and return an array.
        box: search region.
        vectorized: evaluate the grid in one call.
        passes: number of sweeps on full grid-step brackets.
        polish: finish with a Nelder-Mead simplex.
        tie_tol: absolute tolerance for grid ties.

    Returns:
        OptimizationResult. ``converged`` is True when the value is finite
        and, with ``polish``, the simplex met its tolerances.
    """
    k = box.ndim
    axes = [box.axis(i) for i in range(k)]
    mesh = np.meshgrid(*axes, indexing="ij")
    if vectorized:
        values = np.broadcast_to(np.asarray(objective(*mesh), dtype=float), mesh[0].shape)
    else:
        values = np.empty(mesh[0].shape)
        for idx in np.ndindex(values.shape):
            values[idx] = objective(*(ax[i] for ax, i in zip(axes, idx)))
    evals = values.size
    if not np.all(np.isfinite(values)):
        raise ValueError("objective returned non-finite values on the grid")
    flat = values.ravel()
    best = np.flatnonzero(flat <= flat.min() + tie_tol)[0]  # C order = lexicographic
    idx = np.unravel_index(best, values.shape)
    x = np.array([ax[i] for ax, i in zip(axes, idx)], dtype=float)
    fx = float(flat[best])

    def call(pt):
        return float(objective(*pt))

    for _ in range(passes):
        for j in range(k):
            h = box.step(j)
            lo, hi = x[j] - h, x[j] + h
            if not box.periodic[j]:
                lo, hi = max(lo, box.bounds[j][0]), min(hi, box.bounds[j][1])

            def fj(t, j=j):
                pt = x.copy()
                pt[j] = t
                return call(pt)

            t, ft, n = _golden(fj, lo, hi, box.tol)
            evals += n
            if ft < fx:
                x[j], fx = t, ft
    converged = bool(np.isfinite(fx))
    if polish:
        # Coordinate sweeps crawl along curved valleys; finish with a simplex.
        lo_b = np.array([lo for lo, _ in box.bounds])
        hi_b = np.array([hi for _, hi in box.bounds])
        per = np.array(box.periodic)

        def fv(pt):
            if np.any(~per & ((pt < lo_b) | (pt > hi_b))):
                return np.inf
            return call(pt)

        simplex = np.vstack([x] + [x + np.eye(k)[j] * box.step(j) / 4 for j in range(k)])
        res = optimize.minimize(fv, x, method="Nelder-Mead",
                                options={"xatol": box.tol, "fatol": 1e-13 * max(1.0, abs(fx)),
                                         "initial_simplex": simplex, "maxiter": 4000 * k})
        evals += int(res.nfev)
        if res.fun <= fx:
            x, fx = np.asarray(res.x, float), float(res.fun)
        converged = converged and bool(res.success)
    for j in range(k):
        if box.periodic[j]:
            lo, hi = box.bounds[j]
            x[j] = lo + np.mod(x[j] - lo, hi - lo)
    return OptimizationResult(fx, tuple(float(v) for v in x), int(evals), converged)
