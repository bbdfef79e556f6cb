"""Deterministic serialization of experiment output and state files."""

from __future__ import annotations

import io
import json

import numpy as np

from nclab.fock import TwoModeFockState, TwoModeMixture, state_from_json_dict
from nclab.gaussian import TwoModeCovariance


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def to_csv(columns, rows) -> str:
    """One header row, floats at 17 significant digits."""
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_cell(v) for v in r) + "\n")
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def render(output, fmt) -> str:
    if fmt == "csv":
        return to_csv(output.columns, output.rows)
    return to_json({"columns": output.columns, "rows": output.rows, "summary": output.summary})


def load_state(d):
    """Parse a state JSON object.

    Accepted shapes:

    * Gaussian: ``{"matrix": 4x4, "basis": "x1 p1 x2 p2", "vacuum": 0.5}``;
    * pure Fock: ``{"dim", "modes", "amplitudes"}`` with interleaved re/im;
    * Fock mixture: ``{"weights": [...], "states": [pure two-mode, ...]}``.

    Returns:
        (state, domain) with domain ``"gaussian"`` or ``"fock"``.

    Raises:
        ValueError: on any malformed or unphysical input.
    """
    if not isinstance(d, dict):
        raise ValueError("state file must hold a JSON object")
    try:
        if "matrix" in d:
            V = TwoModeCovariance.from_json_dict(d)
            if not V.is_physical():
                raise ValueError("covariance violates the uncertainty principle")
            return V, "gaussian"
        if "weights" in d:
            states = tuple(state_from_json_dict(s) for s in d["states"])
            if not all(isinstance(s, TwoModeFockState) for s in states):
                raise ValueError("mixture components must be two-mode states")
            return TwoModeMixture(tuple(float(w) for w in d["weights"]), states), "fock"
        if "amplitudes" in d:
            st = state_from_json_dict(d)
            if not isinstance(st, TwoModeFockState):
                raise ValueError("criteria need a two-mode state (modes = 2)")
            return st, "fock"
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state: {exc}") from None
    raise ValueError("state needs 'matrix', 'amplitudes' or 'weights'")
