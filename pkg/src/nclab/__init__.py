"""Entanglement and nonclassicality criteria for two-mode Gaussian and
number-phase squeezed states.

Submodules:
    gaussian            covariance-matrix states, beam splitter, noise areas
    gaussian_criteria   log-negativity, DGCZ/Mancini/SR, Simon, noise experiments
    fock                truncated Fock-space engine and PT-negativity oracle
    nphi_criteria       number-phase criteria (HZ, Nha-Zubairy, Simon-like, ...)
    optimizer           deterministic grid + golden-section minimizer
    cli                 command line front end
"""

from nclab.verdict import CriterionVerdict, OptimizationResult

__all__ = ["CriterionVerdict", "OptimizationResult"]
__version__ = "0.1.0"
