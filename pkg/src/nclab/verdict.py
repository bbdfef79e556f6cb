"""Result containers shared by all criteria modules."""

from __future__ import annotations

from dataclasses import dataclass, field
import math

VERDICT_TOL = 1e-10


@dataclass(frozen=True)
class CriterionVerdict:
    """Evaluated separability inequality ``lhs >= rhs``.

    ``lhs`` is the side that is bounded from below for every separable (or
    classical) state and ``rhs`` the bound. ``margin = lhs - rhs`` so a
    negative margin means the inequality is violated.

    Attributes:
        lhs: evaluated left side.
        rhs: evaluated bound.
        margin: ``lhs - rhs``.
        violated: True iff ``margin < -tol``.
        label: criterion name.
        parameters: angles and other settings used for the evaluation.
        extra: auxiliary diagnostics (e.g. the cross term of an SR form).
    """

    lhs: float
    rhs: float
    margin: float
    violated: bool
    label: str
    parameters: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            raise ValueError(f"{self.label}: non-finite sides ({self.lhs}, {self.rhs})")

    @classmethod
    def from_sides(cls, lhs, rhs, label, parameters=None, extra=None, tol=VERDICT_TOL):
        lhs = float(lhs)
        rhs = float(rhs)
        margin = lhs - rhs
        return cls(lhs, rhs, margin, bool(margin < -tol), label,
                   dict(parameters or {}), dict(extra or {}))

    @property
    def status(self) -> str:
        # absence of violation never certifies separability
        return "violated" if self.violated else "inconclusive"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "violated": self.violated,
            "status": self.status,
            "parameters": {k: _plain(v) for k, v in self.parameters.items()},
            "extra": {k: _plain(v) for k, v in self.extra.items()},
        }


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of :func:`nclab.optimizer.grid_refine_minimize`."""

    min_value: float
    argmin: tuple
    evaluations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "min_value": self.min_value,
            "argmin": [float(x) for x in self.argmin],
            "evaluations": self.evaluations,
            "converged": self.converged,
        }


def _plain(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, complex):
        return [v.real, v.imag]
    try:
        return float(v)
    except (TypeError, ValueError):
        return str(v)
