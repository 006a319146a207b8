"""Input validation helpers shared across the package."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from .errors import InvalidDistribution, InvalidQuantumObject

if TYPE_CHECKING:  # pragma: no cover
    from .correlations import Scenario

#: Tolerance below which a probability may stray outside [0, 1] and be clipped.
PROB_SLACK = 1e-12

#: Tolerance on the total mass of a probability table before normalization.
SUM_TOL = 1e-9

#: Tolerance for unit-norm and orthonormality checks on quantum objects.
ORTHO_TOL = 1e-12


def check_probability_cells(cells, what: str) -> tuple[float, ...]:
    """Validate raw probability cells and return them normalized.

    Entries may stray below 0 or above 1 by at most ``PROB_SLACK`` (they are
    clipped back); the total must be 1 within ``SUM_TOL``.  The returned tuple
    is rescaled to sum to exactly 1 in floating point.
    """
    values = []
    for c in cells:
        p = float(c)
        if not math.isfinite(p):
            raise InvalidDistribution(f"{what}: non-finite entry {p!r}")
        if p < -PROB_SLACK or p > 1.0 + PROB_SLACK:
            raise InvalidDistribution(f"{what}: entry {p!r} outside [0, 1]")
        values.append(min(max(p, 0.0), 1.0))
    total = sum(values)
    if abs(total - 1.0) > SUM_TOL:
        raise InvalidDistribution(f"{what}: entries sum to {total!r}, expected 1")
    return tuple(v / total for v in values)


def check_counts(counts, what: str) -> tuple[int, ...]:
    """Validate nonnegative integer counts."""
    out = []
    for c in counts:
        n = int(c)
        if n != c or n < 0:
            raise InvalidDistribution(f"{what}: count {c!r} is not a nonnegative integer")
        out.append(n)
    return tuple(out)


def check_unit_vector(v, dim: int, what: str) -> np.ndarray:
    """Validate a complex vector of the given dimension with unit norm (ORTHO_TOL)."""
    arr = np.asarray(v, dtype=np.complex128).reshape(-1)
    if arr.shape != (dim,):
        raise InvalidQuantumObject(f"{what}: expected {dim} amplitudes, got shape {arr.shape}")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > ORTHO_TOL:
        raise InvalidQuantumObject(f"{what}: norm {norm!r} differs from 1 beyond {ORTHO_TOL}")
    return arr


def check_unitary(m, dim: int, what: str) -> np.ndarray:
    """Validate a dim x dim complex matrix with orthonormal columns (ORTHO_TOL)."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.shape != (dim, dim):
        raise InvalidQuantumObject(f"{what}: expected {dim}x{dim} matrix, got shape {arr.shape}")
    gram = arr.conj().T @ arr
    err = float(np.max(np.abs(gram - np.eye(dim))))
    if err > ORTHO_TOL:
        raise InvalidQuantumObject(f"{what}: columns not orthonormal (max Gram error {err:.3e})")
    return arr


def readonly(arr: np.ndarray) -> np.ndarray:
    """Return a non-writeable copy, for storage inside frozen dataclasses."""
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


def as_scenario(source: Any) -> "Scenario":
    """Coerce a Scenario, JSON mapping, JSON text, or file path into a Scenario."""
    from .correlations import Scenario

    if isinstance(source, Scenario):
        return source
    if isinstance(source, dict):
        return Scenario.from_json_dict(source)
    if isinstance(source, Path):
        return Scenario.from_json_dict(json.loads(source.read_text()))
    if isinstance(source, str):
        return Scenario.from_json_dict(json.loads(source))
    raise TypeError(f"cannot interpret {type(source).__name__} as a scenario")
