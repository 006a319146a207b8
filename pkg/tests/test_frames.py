"""Tests for the Givens parameterization of orthonormal 4-frames."""

import numpy as np
import pytest
from scipy.stats import unitary_group

from bell_lab.frames import (
    FRAME_PARAM_COUNT,
    decompose_frame,
    frame_from_params,
    random_frame_params,
)


def max_unitarity_error(m):
    return float(np.max(np.abs(m.conj().T @ m - np.eye(4))))


class TestFrameFromParams:
    def test_identity_at_zero(self):
        assert np.allclose(frame_from_params(np.zeros(FRAME_PARAM_COUNT)), np.eye(4))

    def test_always_unitary(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            frame = frame_from_params(rng.uniform(-10, 10, FRAME_PARAM_COUNT))
            assert max_unitarity_error(frame) < 1e-13

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            frame_from_params(np.zeros(5))


class TestDecomposeFrame:
    def test_round_trip_columns_match_up_to_phase(self):
        rng = np.random.default_rng(42)
        for i in range(100):
            u = unitary_group.rvs(4, random_state=rng)
            v = frame_from_params(decompose_frame(u))
            overlaps = np.abs(np.sum(v.conj() * u, axis=0))
            assert np.all(np.abs(overlaps - 1.0) < 1e-12)

    def test_round_trip_on_permutation_frames(self):
        # Degenerate pivots (exact zeros) must decompose cleanly too.
        for perm in ([0, 1, 2, 3], [1, 0, 3, 2], [3, 2, 1, 0], [2, 3, 0, 1]):
            u = np.eye(4, dtype=complex)[:, perm]
            v = frame_from_params(decompose_frame(u))
            overlaps = np.abs(np.sum(v.conj() * u, axis=0))
            assert np.all(np.abs(overlaps - 1.0) < 1e-12)

    def test_round_trip_on_real_rotations(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
            v = frame_from_params(decompose_frame(q))
            overlaps = np.abs(np.sum(v.conj() * q, axis=0))
            assert np.all(np.abs(overlaps - 1.0) < 1e-12)

    def test_born_probabilities_preserved(self):
        # All that matters downstream: |<column|psi>|^2 survives the round trip.
        rng = np.random.default_rng(9)
        for _ in range(50):
            u = unitary_group.rvs(4, random_state=rng)
            psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            psi /= np.linalg.norm(psi)
            v = frame_from_params(decompose_frame(u))
            pu = np.abs(u.conj().T @ psi) ** 2
            pv = np.abs(v.conj().T @ psi) ** 2
            assert np.allclose(pu, pv, atol=1e-12)

    def test_wrong_shape_rejected(self):
        with pytest.raises(ValueError):
            decompose_frame(np.eye(3))


class TestRandomFrameParams:
    def test_shape_and_ranges(self):
        rng = np.random.default_rng(1)
        params = random_frame_params(rng)
        assert params.shape == (FRAME_PARAM_COUNT,)
        assert np.all(params[0::2] >= 0) and np.all(params[0::2] <= np.pi / 2)
        assert np.all(params[1::2] >= 0) and np.all(params[1::2] <= 2 * np.pi)
