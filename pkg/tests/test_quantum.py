"""Tests for states, measurement frames, and Born-rule predictions."""

import math

import numpy as np
import pytest

from bell_lab import (
    BELL_PSI_PLUS,
    BasisKind,
    InvalidQuantumObject,
    LocalBasis,
    MeasurementBasis4,
    Representation,
    Setting,
    SingletModel,
    TwoQubitState,
    VesselsModel,
    born_table,
    chsh,
    expectation,
    full_marginal_audit,
    marginal_identity_check,
    predict,
    product_marginal_discrepancy,
    product_representation,
    random_entangled_representation,
    random_product_representation,
    scenario_linf,
    schmidt_rank,
    vessels_representation,
)

SQ2 = math.sqrt(2.0)


class TestTwoQubitState:
    def test_rejects_unnormalized(self):
        with pytest.raises(InvalidQuantumObject):
            TwoQubitState(np.array([1.0, 1.0, 0.0, 0.0]))

    def test_normalized_constructor(self):
        s = TwoQubitState.normalized([3.0, 4.0, 0.0, 0.0])
        assert np.allclose(np.abs(s.amplitudes), [0.6, 0.8, 0.0, 0.0])

    def test_rejects_zero_vector(self):
        with pytest.raises(InvalidQuantumObject):
            TwoQubitState.normalized([0, 0, 0, 0])

    def test_amplitudes_immutable(self):
        s = TwoQubitState(BELL_PSI_PLUS)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 1.0


class TestLocalBasis:
    def test_angles_produce_orthonormal_pairs(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            b = LocalBasis.from_angles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            gram = b.matrix.conj().T @ b.matrix
            assert np.allclose(gram, np.eye(2), atol=1e-14)

    def test_angle_recovery_round_trip(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            theta, phi = rng.uniform(0.1, math.pi - 0.1), rng.uniform(0.1, 2 * math.pi - 0.1)
            recovered = LocalBasis(LocalBasis.from_angles(theta, phi).matrix).angles()
            rebuilt = LocalBasis.from_angles(*recovered)
            # Same measurement up to per-vector phases.
            for k in range(2):
                overlap = abs(np.vdot(rebuilt.matrix[:, k],
                                      LocalBasis.from_angles(theta, phi).matrix[:, k]))
                assert overlap == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_orthonormal(self):
        with pytest.raises(InvalidQuantumObject):
            LocalBasis(np.array([[1.0, 1.0], [0.0, 0.0]]))


class TestSchmidtRank:
    def test_basis_state_is_product(self):
        assert schmidt_rank(np.array([1, 0, 0, 0])) == 1

    def test_shared_bell_state_is_entangled(self):
        # Amplitude matrix [[0, 1/sqrt2], [1/sqrt2, 0]]: a scaled permutation,
        # singular values both 1/sqrt2.
        assert schmidt_rank(BELL_PSI_PLUS) == 2
        singular = np.linalg.svd(BELL_PSI_PLUS.reshape(2, 2), compute_uv=False)
        assert np.allclose(singular, [1 / SQ2, 1 / SQ2])

    def test_superposition_on_one_side_is_product(self):
        vec = np.array([1, 1, 0, 0]) / SQ2  # (|11> + |12>)/sqrt2 = |1>(|1>+|2>)
        assert schmidt_rank(vec) == 1

    def test_tolerance_knob(self):
        nearly_product = np.array([1.0, 0.0, 0.0, 1e-6])
        nearly_product /= np.linalg.norm(nearly_product)
        assert schmidt_rank(nearly_product, tol=1e-3) == 1
        assert schmidt_rank(nearly_product, tol=1e-9) == 2


class TestBornRule:
    def test_basis_state_in_computational_frame(self):
        state = TwoQubitState(np.array([1, 0, 0, 0], dtype=complex))
        table = born_table(state, MeasurementBasis4.computational())
        assert table.cells == (1.0, 0.0, 0.0, 0.0)

    def test_shared_bell_state_in_computational_frame(self):
        # By hand: |<12|psi>|^2 = |<21|psi>|^2 = 1/2, others 0.
        table = born_table(TwoQubitState(BELL_PSI_PLUS), MeasurementBasis4.computational())
        assert np.allclose(table.cells, (0, 0.5, 0.5, 0), atol=1e-15)

    def test_tables_always_normalized(self):
        rng = np.random.default_rng(14)
        for _ in range(100):
            rep = random_entangled_representation(rng)
            scen = predict(rep)
            for setting in Setting:
                assert abs(sum(scen.joint(setting).cells) - 1.0) <= 1e-12


class TestVesselsRepresentation:
    def test_reproduces_exact_tables(self):
        target = VesselsModel().scenario()
        predicted = predict(vessels_representation())
        assert scenario_linf(predicted, target) <= 1e-12

    def test_chsh_reaches_algebraic_bound(self):
        report = chsh(predict(vessels_representation()))
        assert report.s_value == pytest.approx(4.0, abs=1e-12)

    def test_basis_kinds(self):
        rep = vessels_representation()
        assert rep.basis_ab.kind is BasisKind.PRODUCT
        for basis in (rep.basis_abp, rep.basis_apb, rep.basis_apbp):
            assert basis.kind is BasisKind.ENTANGLED

    def test_primed_frames_contain_entangled_vectors(self):
        rep = vessels_representation()
        for basis in (rep.basis_abp, rep.basis_apb, rep.basis_apbp):
            assert 2 in basis.schmidt_ranks()

    def test_outcome_11_vector_is_the_state(self):
        rep = vessels_representation()
        overlap = abs(np.vdot(rep.basis_abp.vector("11"), rep.state.amplitudes))
        assert overlap == pytest.approx(1.0, abs=1e-15)


class TestProductMarginalIdentity:
    def test_computational_bases_zero_discrepancy(self):
        state = TwoQubitState.normalized([0.2, 0.3 + 0.1j, 0.5, 0.7])
        comp = LocalBasis.computational()
        disc = product_marginal_discrepancy(state, comp, comp, comp, comp)
        assert disc <= 1e-15

    def test_random_draws_stay_at_noise_level(self):
        assert marginal_identity_check(200, seed=17) <= 1e-9

    def test_solo_context_agrees_with_joint_marginals(self):
        rng = np.random.default_rng(25)
        rep = random_product_representation(rng)
        scen = predict(rep)
        assert scen.solo_a is not None
        reports = full_marginal_audit(scen, epsilon=1e-12, include_solo=True)
        assert all(r.holds for r in reports)

    def test_singlet_cross_check(self):
        # The closed-form spin-pair tables are realized by the shared state
        # (|12>+|21>)/sqrt2 measured along in-plane directions.
        rng = np.random.default_rng(31)
        psi = TwoQubitState(BELL_PSI_PLUS)
        for _ in range(25):
            a, ap, b, bp = rng.uniform(0, 2 * math.pi, size=4)
            rep = product_representation(
                psi,
                LocalBasis.from_angles(a),
                LocalBasis.from_angles(ap),
                LocalBasis.from_angles(b),
                LocalBasis.from_angles(bp),
            )
            scen = predict(rep)
            model = SingletModel(a, ap, b, bp)
            for setting in Setting:
                assert scenario_linf(scen, model.scenario()) <= 1e-12
                e = expectation(scen.joint(setting))
                assert e == pytest.approx(-math.cos(model.effective_angle(setting)), abs=1e-12)
            disc = product_marginal_discrepancy(
                psi,
                LocalBasis.from_angles(a),
                LocalBasis.from_angles(ap),
                LocalBasis.from_angles(b),
                LocalBasis.from_angles(bp),
            )
            assert disc <= 1e-12


class TestTsirelsonForProductClass:
    def test_sampled_product_representations_respect_bound(self):
        rng = np.random.default_rng(40)
        bound = 2 * SQ2 + 1e-9
        for _ in range(500):
            report = chsh(predict(random_product_representation(rng)))
            assert abs(report.s_value) <= bound

    def test_entangled_class_can_exceed_bound(self):
        report = chsh(predict(vessels_representation()))
        assert abs(report.s_value) > 2 * SQ2


class TestMeasurementBasis4:
    def test_product_frame_is_kron_of_locals(self):
        a = LocalBasis.from_angles(0.7, 1.1)
        b = LocalBasis.from_angles(2.0, 0.3)
        frame = MeasurementBasis4.product(a, b)
        assert np.allclose(frame.matrix, np.kron(a.matrix, b.matrix))
        assert frame.kind is BasisKind.PRODUCT

    def test_rejects_non_orthonormal(self):
        with pytest.raises(InvalidQuantumObject):
            MeasurementBasis4.entangled(np.ones((4, 4)))

    def test_shared_local_bases_detection(self):
        rng = np.random.default_rng(50)
        rep = random_product_representation(rng)
        shared = rep.shared_local_bases()
        assert shared is not None
        # A representation with one frame swapped out is no longer shared.
        broken = Representation(
            rep.state,
            rep.basis_ab,
            rep.basis_abp,
            rep.basis_apb,
            MeasurementBasis4.computational(),
        )
        assert broken.shared_local_bases() is None or np.allclose(
            rep.basis_apbp.matrix, np.eye(4)
        )
        assert vessels_representation().shared_local_bases() is None
