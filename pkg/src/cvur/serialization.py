"""JSON schemas for states and quadrature sets.

Gaussian state::

    {"type": "gaussian", "ordering": "xxpp", "mean": [...], "cov": [[...], ...]}

``mean`` is optional (defaults to zero) and ``ordering`` may be
``"interleaved"``. Fock state::

    {"type": "fock", "n_modes": 1, "dim": 8, "amplitudes_re": [...], "amplitudes_im": [...]}

For two modes the amplitude arrays are ``dim x dim`` nested lists;
``amplitudes_im`` is optional. Quadrature set::

    {"n_modes": 1, "rows": [{"a": [1.0], "ap": [0.0]}, ...]}

A quadrature file holds either one bare set (used as ``R``) or an object of
named sets such as ``{"Y": {...}, "Z": {...}}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .quadratures import QuadratureSet
from .states import FockState, GaussianState
from .symplectic import Ordering

__all__ = [
    "SchemaError",
    "state_from_dict",
    "state_to_dict",
    "load_state",
    "dump_state",
    "quadratures_from_dict",
    "quadratures_to_dict",
    "load_quadrature_file",
]


class SchemaError(ValueError):
    """Input JSON does not match the documented schema; the message starts with the field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _require(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    return obj[key]


def _array(value, path: str, ndim: int) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(path, "expected numbers") from None
    if arr.ndim != ndim:
        raise SchemaError(path, f"expected a {ndim}-d array, got {arr.ndim}-d")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(path, "contains non-finite values")
    return arr


def state_from_dict(data: dict, path: str = "state"):
    kind = _require(data, "type", path)
    if kind == "gaussian":
        ordering = data.get("ordering", "xxpp")
        try:
            ordering = Ordering.parse(ordering)
        except ValueError as exc:
            raise SchemaError(f"{path}.ordering", str(exc)) from None
        cov = _array(_require(data, "cov", path), f"{path}.cov", 2)
        if cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 or cov.shape[0] == 0:
            raise SchemaError(f"{path}.cov", f"expected a 2n x 2n matrix, got {cov.shape}")
        mean = data.get("mean")
        mean = np.zeros(cov.shape[0]) if mean is None else _array(mean, f"{path}.mean", 1)
        if mean.shape != (cov.shape[0],):
            raise SchemaError(f"{path}.mean", f"expected {cov.shape[0]} entries, got {mean.size}")
        try:
            return GaussianState(mean, cov, ordering)
        except ValueError as exc:
            raise SchemaError(f"{path}.cov", str(exc)) from None
    if kind == "fock":
        n_modes = data.get("n_modes", 1)
        if n_modes not in (1, 2):
            raise SchemaError(f"{path}.n_modes", f"expected 1 or 2, got {n_modes!r}")
        re = _array(_require(data, "amplitudes_re", path), f"{path}.amplitudes_re", n_modes)
        im = data.get("amplitudes_im")
        im = np.zeros_like(re) if im is None else _array(im, f"{path}.amplitudes_im", n_modes)
        if im.shape != re.shape:
            raise SchemaError(f"{path}.amplitudes_im", f"shape {im.shape} differs from amplitudes_re {re.shape}")
        dim = data.get("dim", re.shape[0])
        if not isinstance(dim, int) or re.shape != (dim,) * n_modes:
            raise SchemaError(f"{path}.dim", f"amplitudes of shape {re.shape} do not match dim={dim!r}")
        try:
            return FockState(re + 1j * im, n_modes=n_modes)
        except ValueError as exc:
            raise SchemaError(f"{path}.amplitudes_re", str(exc)) from None
    raise SchemaError(f"{path}.type", f"expected 'gaussian' or 'fock', got {kind!r}")


def state_to_dict(state) -> dict:
    if isinstance(state, GaussianState):
        mean, cov = state.moments(state.ordering)
        return {"type": "gaussian", "ordering": state.ordering.value, "mean": mean.tolist(), "cov": cov.tolist()}
    if isinstance(state, FockState):
        return {
            "type": "fock",
            "n_modes": state.n_modes,
            "dim": state.dim,
            "amplitudes_re": state.tensor().real.tolist(),
            "amplitudes_im": state.tensor().imag.tolist(),
        }
    raise TypeError(f"unsupported state type {type(state).__name__}")


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_state(path):
    return state_from_dict(_read_json(path))


def dump_state(state, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state), indent=2) + "\n")


def quadratures_from_dict(data: dict, path: str = "quadratures") -> QuadratureSet:
    n = _require(data, "n_modes", path)
    if not isinstance(n, int) or n < 1:
        raise SchemaError(f"{path}.n_modes", f"expected a positive integer, got {n!r}")
    rows = _require(data, "rows", path)
    if not isinstance(rows, list) or not rows:
        raise SchemaError(f"{path}.rows", "expected a non-empty list")
    coeffs = []
    for i, row in enumerate(rows):
        a = _array(_require(row, "a", f"{path}.rows[{i}]"), f"{path}.rows[{i}].a", 1)
        ap = _array(_require(row, "ap", f"{path}.rows[{i}]"), f"{path}.rows[{i}].ap", 1)
        if a.size != n or ap.size != n:
            raise SchemaError(f"{path}.rows[{i}]", f"expected {n} coefficients in a and ap")
        coeffs.append(np.concatenate([a, ap]))
    try:
        return QuadratureSet(np.array(coeffs))
    except ValueError as exc:
        raise SchemaError(f"{path}.rows", str(exc)) from None


def quadratures_to_dict(Q: QuadratureSet) -> dict:
    return {"n_modes": Q.n_modes, "rows": [{"a": a.tolist(), "ap": ap.tolist()} for a, ap in zip(Q.a, Q.ap)]}


def load_quadrature_file(path) -> dict:
    """Named quadrature sets from a file; a bare set is returned under ``"R"``."""
    data = _read_json(path)
    if isinstance(data, dict) and "rows" in data:
        return {"R": quadratures_from_dict(data)}
    if not isinstance(data, dict) or not data:
        raise SchemaError("quadratures", "expected a quadrature set or an object of named sets")
    return {name: quadratures_from_dict(value, f"quadratures.{name}") for name, value in data.items()}
