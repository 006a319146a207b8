"""Two-qubit states, joint measurement bases, and Born-rule predictions.

A representation is a normalized state vector in C^4 together with one
orthonormal measurement frame per setting.  The Born rule turns it into a
scenario: p(outcome) = |<outcome vector | state>|^2, which sums to 1 over each
frame by completeness.

Frames come in two kinds.  A *product* frame is the tensor product of one
basis per side, so each side's marginal is fixed by the reduced state and
that side's basis alone; sharing the per-side bases across settings in the
CHSH pattern therefore forces the marginal law exactly (an algebraic
identity, checked here numerically).  An *entangled* frame has at least one
outcome vector of Schmidt rank 2 and can break the marginal law, which is
what lets it reproduce tables such as the connected-vessels scenario at the
algebraic CHSH bound 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .correlations import (
    JointDistribution,
    Scenario,
    Setting,
    SingleDistribution,
    full_marginal_audit,
)
from .errors import InvalidQuantumObject
from .frames import random_frame_params, frame_from_params
from .validation import ORTHO_TOL, check_unit_vector, check_unitary, readonly

#: Outcome labels in frame-column order.
OUTCOME_ORDER = ("11", "12", "21", "22")

#: The shared state behind the built-in maximal-violation constructions:
#: (|12> + |21>)/sqrt(2).
BELL_PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)


class BasisKind(Enum):
    PRODUCT = "product"
    ENTANGLED = "entangled"


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """A normalized complex 4-vector of amplitudes, basis order 11, 12, 21, 22."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = check_unit_vector(self.amplitudes, 4, "TwoQubitState")
        object.__setattr__(self, "amplitudes", readonly(amps))

    @classmethod
    def normalized(cls, amplitudes) -> "TwoQubitState":
        """Construct from any nonzero 4-vector, rescaling to unit norm."""
        arr = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(arr)
        if norm < 1e-12:
            raise InvalidQuantumObject("cannot normalize a (near-)zero state vector")
        return cls(arr / norm)

    @property
    def amplitude_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to 2x2, rows = left-qubit basis, cols = right."""
        return self.amplitudes.reshape(2, 2)


@dataclass(frozen=True, eq=False)
class LocalBasis:
    """An orthonormal basis of one qubit, columns = outcome vectors 1, 2."""

    matrix: np.ndarray
    theta: float | None = None
    phi: float | None = None

    def __post_init__(self):
        mat = check_unitary(self.matrix, 2, "LocalBasis")
        object.__setattr__(self, "matrix", readonly(mat))

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> "LocalBasis":
        """Bloch-style parameterization: v1 = (cos t/2, e^{i phi} sin t/2)."""
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        e = np.exp(1j * phi)
        mat = np.array([[c, -s], [e * s, e * c]], dtype=np.complex128)
        return cls(mat, theta=theta, phi=phi)

    @classmethod
    def computational(cls) -> "LocalBasis":
        return cls.from_angles(0.0, 0.0)

    def vector(self, outcome: int) -> np.ndarray:
        return self.matrix[:, outcome - 1]

    def angles(self) -> tuple[float, float]:
        """(theta, phi) reproducing this basis up to per-vector phases."""
        if self.theta is not None:
            return (self.theta, self.phi or 0.0)
        v1 = self.matrix[:, 0]
        theta = 2.0 * math.atan2(abs(v1[1]), abs(v1[0]))
        if abs(v1[1]) < 1e-15 or abs(v1[0]) < 1e-15:
            phi = 0.0
        else:
            phi = float(np.angle(v1[1]) - np.angle(v1[0]))
        return (theta, phi)


@dataclass(frozen=True, eq=False)
class MeasurementBasis4:
    """An orthonormal frame of C^4; column k measures outcome OUTCOME_ORDER[k]."""

    matrix: np.ndarray
    kind: BasisKind
    local_pair: tuple[LocalBasis, LocalBasis] | None = None

    def __post_init__(self):
        mat = check_unitary(self.matrix, 4, "MeasurementBasis4")
        object.__setattr__(self, "matrix", readonly(mat))

    @classmethod
    def product(cls, left: LocalBasis, right: LocalBasis) -> "MeasurementBasis4":
        """Tensor-product frame of two local bases."""
        mat = np.kron(left.matrix, right.matrix)
        return cls(mat, kind=BasisKind.PRODUCT, local_pair=(left, right))

    @classmethod
    def entangled(cls, matrix) -> "MeasurementBasis4":
        """Frame from an explicit unitary; at least potentially entangled."""
        return cls(np.asarray(matrix, dtype=np.complex128), kind=BasisKind.ENTANGLED)

    @classmethod
    def computational(cls) -> "MeasurementBasis4":
        return cls.product(LocalBasis.computational(), LocalBasis.computational())

    def vector(self, outcome: str) -> np.ndarray:
        return self.matrix[:, OUTCOME_ORDER.index(outcome)]

    def schmidt_ranks(self, tol: float = 1e-9) -> tuple[int, int, int, int]:
        return tuple(schmidt_rank(self.matrix[:, k], tol) for k in range(4))


@dataclass(frozen=True, eq=False)
class Representation:
    """A state plus one measurement frame per setting."""

    state: TwoQubitState
    basis_ab: MeasurementBasis4
    basis_abp: MeasurementBasis4
    basis_apb: MeasurementBasis4
    basis_apbp: MeasurementBasis4

    def basis(self, setting: Setting) -> MeasurementBasis4:
        return {
            Setting.AB: self.basis_ab,
            Setting.ABp: self.basis_abp,
            Setting.ApB: self.basis_apb,
            Setting.ApBp: self.basis_apbp,
        }[setting]

    def shared_local_bases(self) -> tuple[LocalBasis, LocalBasis, LocalBasis, LocalBasis] | None:
        """The (A, A', B, B') local bases when all four frames share them.

        Returns None unless every frame is a product frame and the per-side
        bases agree across settings in the CHSH pattern.
        """
        frames = [self.basis_ab, self.basis_abp, self.basis_apb, self.basis_apbp]
        if any(f.local_pair is None for f in frames):
            return None
        a1, b1 = self.basis_ab.local_pair
        a2, bp1 = self.basis_abp.local_pair
        ap1, b2 = self.basis_apb.local_pair
        ap2, bp2 = self.basis_apbp.local_pair
        for x, y in ((a1, a2), (ap1, ap2), (b1, b2), (bp1, bp2)):
            if not np.allclose(x.matrix, y.matrix, atol=ORTHO_TOL, rtol=0.0):
                return None
        return (a1, ap1, b1, bp1)


def schmidt_rank(vector, tol: float = 1e-9) -> int:
    """Number of singular values of the 2x2 amplitude matrix above tol.

    Rank 1 vectors are tensor products; rank 2 vectors are entangled.
    """
    arr = np.asarray(vector, dtype=np.complex128).reshape(2, 2)
    singular = np.linalg.svd(arr, compute_uv=False)
    return int(np.sum(singular > tol))


def born_table(state: TwoQubitState, basis: MeasurementBasis4) -> JointDistribution:
    """Born rule: p(outcome k) = |<column k | state>|^2."""
    probabilities = np.abs(basis.matrix.conj().T @ state.amplitudes) ** 2
    return JointDistribution(*probabilities)


def _local_marginal(state: TwoQubitState, basis: LocalBasis, left: bool) -> SingleDistribution:
    """Outcome distribution of one side measured alone (partner untouched)."""
    m = state.amplitude_matrix
    probs = []
    for outcome in (1, 2):
        v = basis.vector(outcome)
        amp = v.conj() @ m if left else m @ v.conj()
        probs.append(float(np.linalg.norm(amp) ** 2))
    return SingleDistribution(*probs)


def predict(r: Representation) -> Scenario:
    """Born-rule scenario of a representation.

    When all four frames are product frames sharing their per-side bases in
    the CHSH pattern, the solo distributions are well defined (they depend
    only on the reduced state and the side's basis) and are included.
    """
    shared = r.shared_local_bases()
    solos = {}
    if shared is not None:
        a, ap, b, bp = shared
        solos = {
            "solo_a": _local_marginal(r.state, a, left=True),
            "solo_ap": _local_marginal(r.state, ap, left=True),
            "solo_b": _local_marginal(r.state, b, left=False),
            "solo_bp": _local_marginal(r.state, bp, left=False),
        }
    return Scenario(
        ab=born_table(r.state, r.basis_ab),
        abp=born_table(r.state, r.basis_abp),
        apb=born_table(r.state, r.basis_apb),
        apbp=born_table(r.state, r.basis_apbp),
        **solos,
    )


def product_representation(
    state: TwoQubitState,
    basis_a: LocalBasis,
    basis_ap: LocalBasis,
    basis_b: LocalBasis,
    basis_bp: LocalBasis,
) -> Representation:
    """CHSH-structured product representation: per-side bases shared across settings."""
    return Representation(
        state=state,
        basis_ab=MeasurementBasis4.product(basis_a, basis_b),
        basis_abp=MeasurementBasis4.product(basis_a, basis_bp),
        basis_apb=MeasurementBasis4.product(basis_ap, basis_b),
        basis_apbp=MeasurementBasis4.product(basis_ap, basis_bp),
    )


def vessels_representation() -> Representation:
    """Closed-form representation reproducing the connected-vessels tables.

    The state is (|12> + |21>)/sqrt(2).  The double-siphon experiment is the
    computational product frame (perfect anti-correlation); each experiment
    involving a spoon is an entangled frame whose outcome-11 vector is the
    state itself, completed orthonormally, so outcome 11 is certain.
    """
    psi = TwoQubitState(BELL_PSI_PLUS)
    sqrt2 = math.sqrt(2.0)
    primed_frame = np.array(
        [
            [0.0, 0.0, 1.0, 0.0],
            [1.0 / sqrt2, 1.0 / sqrt2, 0.0, 0.0],
            [1.0 / sqrt2, -1.0 / sqrt2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        dtype=np.complex128,
    )
    primed = MeasurementBasis4.entangled(primed_frame)
    return Representation(
        state=psi,
        basis_ab=MeasurementBasis4.computational(),
        basis_abp=primed,
        basis_apb=primed,
        basis_apbp=primed,
    )


def product_marginal_discrepancy(
    state: TwoQubitState,
    basis_a: LocalBasis,
    basis_ap: LocalBasis,
    basis_b: LocalBasis,
    basis_bp: LocalBasis,
    include_solo: bool = True,
) -> float:
    """Worst marginal-law discrepancy of one product representation.

    Builds the four shared-basis product frames, predicts, and audits every
    side/outcome marginal at zero tolerance (solo contexts included by
    default, since product predictions define them).  For product
    measurements this is an algebraic identity, so the result is numerical
    noise, at most ~1e-15.
    """
    rep = product_representation(state, basis_a, basis_ap, basis_b, basis_bp)
    reports = full_marginal_audit(predict(rep), epsilon=0.0, include_solo=include_solo)
    return max(r.max_discrepancy for r in reports)


def random_state(rng: np.random.Generator) -> TwoQubitState:
    """State with amplitudes drawn from the complex standard normal."""
    raw = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return TwoQubitState.normalized(raw)


def random_local_basis(rng: np.random.Generator) -> LocalBasis:
    return LocalBasis.from_angles(
        theta=float(rng.uniform(0.0, math.pi)),
        phi=float(rng.uniform(0.0, 2.0 * math.pi)),
    )


def random_product_representation(rng: np.random.Generator) -> Representation:
    """Random state and four random shared local bases in the CHSH pattern."""
    return product_representation(
        random_state(rng),
        random_local_basis(rng),
        random_local_basis(rng),
        random_local_basis(rng),
        random_local_basis(rng),
    )


def random_entangled_representation(rng: np.random.Generator) -> Representation:
    """Random state and four independent random orthonormal frames."""
    frames = [
        MeasurementBasis4.entangled(frame_from_params(random_frame_params(rng)))
        for _ in range(4)
    ]
    return Representation(random_state(rng), *frames)


def marginal_identity_check(trials: int, seed: int = 0) -> float:
    """Max marginal-law discrepancy over `trials` random product representations.

    Always at numerical-noise level; the sweep exists to exercise the identity
    across the parameter space rather than at hand-picked points.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        rep = random_product_representation(rng)
        a, ap, b, bp = rep.shared_local_bases()
        worst = max(worst, product_marginal_discrepancy(rep.state, a, ap, b, bp))
    return worst
