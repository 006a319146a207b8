"""Givens-rotation parameterization of orthonormal 4-frames.

A joint measurement on two qubits is an orthonormal frame of C^4 (one column
per outcome).  Frames are parameterized by 12 reals: six two-level rotations,
each with a mixing angle and a relative phase, applied in the fixed QR
elimination order below.  Products of exact rotations stay orthonormal to
machine precision under optimization, so no re-orthogonalization is needed.

Column phases are deliberately not parameterized: Born probabilities are
invariant under them, and dropping them removes a flat direction from the
search space.  Consequently ``frame_from_params(decompose_frame(U))``
reproduces U only up to a phase per column, which is exact for every
probability this package computes.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

#: Row pairs of the six rotations, in application order (a QR elimination
#: schedule: column 0 bottom-up, then column 1, then column 2).
PAIR_SEQUENCE = ((2, 3), (1, 2), (0, 1), (2, 3), (1, 2), (2, 3))

#: Column targeted by each rotation of PAIR_SEQUENCE during decomposition.
_TARGET_COLUMNS = (0, 0, 0, 1, 1, 2)

#: Real parameters per frame: (angle, phase) per rotation.
FRAME_PARAM_COUNT = 2 * len(PAIR_SEQUENCE)


def _rotation(i: int, j: int, angle: float, phase: float) -> np.ndarray:
    """The 4x4 unitary acting as [[c, s], [-conj(s), c]] on rows (i, j)."""
    g = np.eye(4, dtype=np.complex128)
    c = math.cos(angle)
    s = cmath.exp(1j * phase) * math.sin(angle)
    g[i, i] = c
    g[i, j] = s
    g[j, i] = -s.conjugate()
    g[j, j] = c
    return g


def frame_from_params(params) -> np.ndarray:
    """Build the orthonormal frame for 12 parameters (angle, phase) x 6."""
    x = np.asarray(params, dtype=np.float64).reshape(-1)
    if x.shape != (FRAME_PARAM_COUNT,):
        raise ValueError(f"expected {FRAME_PARAM_COUNT} frame parameters, got {x.shape}")
    frame = np.eye(4, dtype=np.complex128)
    for k, (i, j) in enumerate(PAIR_SEQUENCE):
        g = _rotation(i, j, x[2 * k], x[2 * k + 1])
        frame = frame @ g.conj().T
    return frame


def decompose_frame(unitary: np.ndarray) -> np.ndarray:
    """Parameters reproducing a given frame up to per-column phases.

    Runs the Givens QR elimination in PAIR_SEQUENCE order; the rotation that
    zeroes entry (j, k) against pivot (i, k) has angle atan2(|b|, |a|) and
    phase arg(a) - arg(b), with a, b the current pivot/target entries.  The
    leftover diagonal of unit-modulus entries is discarded.
    """
    r = np.array(unitary, dtype=np.complex128, copy=True)
    if r.shape != (4, 4):
        raise ValueError(f"expected a 4x4 frame, got shape {r.shape}")
    params = np.zeros(FRAME_PARAM_COUNT)
    for k, ((i, j), col) in enumerate(zip(PAIR_SEQUENCE, _TARGET_COLUMNS)):
        a = r[i, col]
        b = r[j, col]
        if abs(b) < 1e-15:
            angle, phase = 0.0, 0.0
        else:
            angle = math.atan2(abs(b), abs(a))
            phase = (cmath.phase(a) if abs(a) >= 1e-15 else 0.0) - cmath.phase(b)
        params[2 * k] = angle
        params[2 * k + 1] = phase
        r = _rotation(i, j, angle, phase) @ r
    return params


def random_frame_params(rng: np.random.Generator) -> np.ndarray:
    """Random frame parameters: angles uniform on [0, pi/2], phases on [0, 2pi]."""
    params = np.empty(FRAME_PARAM_COUNT)
    params[0::2] = rng.uniform(0.0, math.pi / 2.0, size=len(PAIR_SEQUENCE))
    params[1::2] = rng.uniform(0.0, 2.0 * math.pi, size=len(PAIR_SEQUENCE))
    return params
