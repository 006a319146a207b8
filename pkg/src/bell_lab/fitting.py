"""Fit two-qubit representations to target scenarios.

The search space is a flat real parameter vector:

state
    8 reals (real and imaginary parts of the four amplitudes), normalized and
    gauge-fixed on decode (first non-negligible amplitude rotated to the
    nonnegative real axis), leaving 6 effective degrees of freedom.

product class
    One local basis per side measurement (A, A', B, B'), two angles each;
    every setting's frame is the tensor product of its sides' bases.  16
    parameters total.  This class obeys the marginal law identically and is
    bounded by the Tsirelson value |s| <= 2*sqrt(2).

entangled class
    One 12-parameter Givens frame (see :mod:`bell_lab.frames`) per setting,
    56 parameters total.  This class can violate the marginal law and reach
    the algebraic bound |s| = 4.

The objective is the sum of squared errors over all 16 joint cells, plus the
solo cells whenever the target records them and the class predicts them
(product only; an entangled frame carries no per-side structure to predict a
solo outcome from).  Minimization is Nelder-Mead restarted from a few
canonical archetype representations, any user-supplied warm starts, and
seeded random points; the best restart wins, ties broken by start index, so
restarts may be evaluated in parallel without changing the result.

:class:`RepresentationFitter` wraps the search in the scikit-learn estimator
protocol (``fit`` / ``predict`` / ``score`` / ``get_params``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from sklearn.base import BaseEstimator

from .correlations import Scenario, Setting, Side
from .frames import FRAME_PARAM_COUNT, decompose_frame, frame_from_params, random_frame_params
from .quantum import (
    BELL_PSI_PLUS,
    BasisKind,
    LocalBasis,
    MeasurementBasis4,
    Representation,
    TwoQubitState,
    predict,
    product_representation,
    vessels_representation,
)
from .streams import DOMAIN_RESTART, substream
from .validation import as_scenario

_SETTING_ORDER = (Setting.AB, Setting.ABp, Setting.ApB, Setting.ApBp)

#: (scenario attribute, local-basis slot, acts on the left qubit) per side.
_SOLO_SLOTS = (
    ("solo_a", 0, True),
    ("solo_ap", 1, True),
    ("solo_b", 2, False),
    ("solo_bp", 3, False),
)

PRODUCT_PARAM_COUNT = 8 + 8
ENTANGLED_PARAM_COUNT = 8 + 4 * FRAME_PARAM_COUNT

DEFAULT_RESTARTS = 20
DEFAULT_MAX_EVALS = 50_000
DEFAULT_XATOL = 1e-10
DEFAULT_FATOL = 1e-12

#: A loss at or below this floor counts as converged even if the simplex had
#: not yet shrunk below xatol when the budget ran out.
LOSS_FLOOR = 1e-12


def _decode_amplitudes(x8: np.ndarray) -> np.ndarray:
    """8 reals -> normalized, gauge-fixed amplitude vector."""
    amps = x8[:4] + 1j * x8[4:8]
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        amps = np.array([1.0, 0.0, 0.0, 0.0], dtype=np.complex128)
        norm = 1.0
    amps = amps / norm
    for a in amps:
        if abs(a) > 1e-12:
            amps = amps * (a.conjugate() / abs(a))
            break
    return amps


def _encode_amplitudes(amps: np.ndarray) -> np.ndarray:
    return np.concatenate([amps.real, amps.imag])


def _local_matrix(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    e = np.exp(1j * phi)
    return np.array([[c, -s], [e * s, e * c]], dtype=np.complex128)


def _unpack(kind: str, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray] | None]:
    """Parameter vector -> (amplitudes, four setting frames, local matrices or None)."""
    amps = _decode_amplitudes(x)
    if kind == "product":
        locals_ = [_local_matrix(x[8 + 2 * i], x[9 + 2 * i]) for i in range(4)]
        a, ap, b, bp = locals_
        frames = [np.kron(a, b), np.kron(a, bp), np.kron(ap, b), np.kron(ap, bp)]
        return amps, frames, locals_
    frames = [
        frame_from_params(x[8 + k * FRAME_PARAM_COUNT: 8 + (k + 1) * FRAME_PARAM_COUNT])
        for k in range(4)
    ]
    return amps, frames, None


def _solo_probs(amps: np.ndarray, local: np.ndarray, left: bool) -> np.ndarray:
    m = amps.reshape(2, 2)
    out = np.empty(2)
    for k in range(2):
        v = local[:, k]
        vec = v.conj() @ m if left else m @ v.conj()
        out[k] = float(np.linalg.norm(vec) ** 2)
    return out


class _Objective:
    """Sum of squared cell errors against a fixed target scenario."""

    def __init__(self, kind: str, target: Scenario):
        self.kind = kind
        self.joints = np.array([target.joint(s).cells for s in _SETTING_ORDER])
        self.solos = []
        if kind == "product":
            for attr, slot, left in _SOLO_SLOTS:
                solo = getattr(target, attr)
                if solo is not None:
                    self.solos.append((slot, left, np.array([solo.p1, solo.p2])))

    def residuals(self, x: np.ndarray) -> np.ndarray:
        amps, frames, locals_ = _unpack(self.kind, x)
        errs = [
            np.abs(frames[k].conj().T @ amps) ** 2 - self.joints[k]
            for k in range(4)
        ]
        for slot, left, target in self.solos:
            errs.append(_solo_probs(amps, locals_[slot], left) - target)
        return np.concatenate(errs)

    def __call__(self, x: np.ndarray) -> float:
        r = self.residuals(x)
        return float(r @ r)


def _build_representation(kind: str, x: np.ndarray) -> Representation:
    amps, frames, _ = _unpack(kind, x)
    state = TwoQubitState(amps)
    if kind == "product":
        a, ap, b, bp = (
            LocalBasis(_local_matrix(x[8 + 2 * i], x[9 + 2 * i]),
                       theta=float(x[8 + 2 * i]), phi=float(x[9 + 2 * i]))
            for i in range(4)
        )
        return product_representation(state, a, ap, b, bp)
    bases = [MeasurementBasis4.entangled(f) for f in frames]
    return Representation(state, *bases)


def encode_representation(kind: str, rep: Representation) -> np.ndarray:
    """Parameter vector reproducing a representation's predictions exactly."""
    x_state = _encode_amplitudes(np.asarray(rep.state.amplitudes))
    if kind == "product":
        shared = rep.shared_local_bases()
        if shared is None:
            raise ValueError(
                "product-class warm starts need shared per-side local bases"
            )
        angles = []
        for basis in shared:
            angles.extend(basis.angles())
        return np.concatenate([x_state, np.array(angles)])
    frame_params = [decompose_frame(rep.basis(s).matrix) for s in _SETTING_ORDER]
    return np.concatenate([x_state] + frame_params)


def canonical_representations(kind: str) -> list[Representation]:
    """Archetype warm starts: deterministic, target-independent."""
    comp = LocalBasis.computational()
    basis_state = TwoQubitState(np.array([1.0, 0.0, 0.0, 0.0], dtype=np.complex128))
    uniform = TwoQubitState(np.full(4, 0.5, dtype=np.complex128))
    entangled_state = TwoQubitState(BELL_PSI_PLUS)
    if kind == "product":
        return [
            product_representation(basis_state, comp, comp, comp, comp),
            product_representation(uniform, comp, comp, comp, comp),
            product_representation(entangled_state, comp, comp, comp, comp),
        ]
    comp4 = MeasurementBasis4.computational()
    return [
        vessels_representation(),
        Representation(basis_state, comp4, comp4, comp4, comp4),
        Representation(uniform, comp4, comp4, comp4, comp4),
    ]


def _random_start(kind: str, rng: np.random.Generator) -> np.ndarray:
    x_state = rng.standard_normal(8)
    if kind == "product":
        angles = np.empty(8)
        angles[0::2] = rng.uniform(0.0, math.pi, size=4)
        angles[1::2] = rng.uniform(0.0, 2.0 * math.pi, size=4)
        return np.concatenate([x_state, angles])
    frames = [random_frame_params(rng) for _ in range(4)]
    return np.concatenate([x_state] + frames)


@dataclass(frozen=True)
class FitResult:
    """Best representation found, with its loss and bookkeeping."""

    kind: str
    representation: Representation
    params: np.ndarray
    loss: float
    residual_linf: float
    iterations: int
    converged: bool
    n_starts: int
    best_start: int

    def to_json_dict(self) -> dict:
        predicted = predict(self.representation)
        return {
            "kind": self.kind,
            "loss": self.loss,
            "residual_linf": self.residual_linf,
            "iterations": self.iterations,
            "converged": self.converged,
            "n_starts": self.n_starts,
            "best_start": self.best_start,
            "parameters": [float(v) for v in self.params],
            "predicted": predicted.to_json_dict(),
            "basis_kinds": {
                s.value: self.representation.basis(s).kind.value for s in _SETTING_ORDER
            },
            "schmidt_ranks": {
                s.value: list(self.representation.basis(s).schmidt_ranks())
                for s in _SETTING_ORDER
            },
        }


def fit_scenario(
    target,
    kind: str = "entangled",
    restarts: int = DEFAULT_RESTARTS,
    max_evals: int = DEFAULT_MAX_EVALS,
    seed: int = 0,
    xatol: float = DEFAULT_XATOL,
    fatol: float = DEFAULT_FATOL,
    include_canonical_starts: bool = True,
    warm_starts=None,
) -> FitResult:
    """Nelder-Mead search for the best representation of a target scenario.

    ``restarts`` counts the seeded random starts; canonical archetypes and any
    ``warm_starts`` (Representation objects) run first as extra deterministic
    starts.  The evaluation budget is split evenly across all starts.  The
    returned result is converged when the winning restart terminated by the
    simplex tolerances, or when its loss is at the numerical floor; otherwise
    the budget ran out and the best-so-far point is returned as-is.
    """
    if kind not in ("product", "entangled"):
        raise ValueError(f"kind must be 'product' or 'entangled', got {kind!r}")
    if restarts < 0:
        raise ValueError(f"restarts must be >= 0, got {restarts}")
    target = as_scenario(target)
    objective = _Objective(kind, target)

    starts: list[np.ndarray] = []
    if include_canonical_starts:
        starts.extend(encode_representation(kind, rep) for rep in canonical_representations(kind))
    for rep in warm_starts or ():
        starts.append(encode_representation(kind, rep))
    for i in range(restarts):
        rng = substream(seed, DOMAIN_RESTART, i)
        starts.append(_random_start(kind, rng))
    if not starts:
        raise ValueError("no starting points: enable canonical starts or set restarts >= 1")

    quota = max(len(starts) * 8, int(max_evals)) // len(starts)
    best_idx, best_x, best_loss, best_success = -1, None, math.inf, False
    total_evals = 0
    for idx, x0 in enumerate(starts):
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxfev": quota,
                "maxiter": quota,
                "xatol": xatol,
                "fatol": fatol,
                "adaptive": kind == "entangled",
            },
        )
        total_evals += int(res.nfev)
        if res.fun < best_loss:
            best_idx, best_x, best_loss, best_success = idx, res.x, float(res.fun), bool(res.success)

    residuals = objective.residuals(best_x)
    loss = float(residuals @ residuals)
    return FitResult(
        kind=kind,
        representation=_build_representation(kind, best_x),
        params=np.asarray(best_x, dtype=float),
        loss=loss,
        residual_linf=float(np.max(np.abs(residuals))),
        iterations=total_evals,
        converged=best_success or loss <= LOSS_FLOOR,
        n_starts=len(starts),
        best_start=best_idx,
    )


def scenario_sse(predicted: Scenario, target: Scenario) -> float:
    """Sum of squared differences over the 16 joint cells and shared solos."""
    total = 0.0
    for s in _SETTING_ORDER:
        for a, b in zip(predicted.joint(s).cells, target.joint(s).cells):
            total += (a - b) ** 2
    for side in Side:
        sp, st = predicted.solo(side), target.solo(side)
        if sp is not None and st is not None:
            total += (sp.p1 - st.p1) ** 2 + (sp.p2 - st.p2) ** 2
    return total


def scenario_linf(predicted: Scenario, target: Scenario) -> float:
    """Largest absolute cell difference over the 16 joint cells."""
    worst = 0.0
    for s in _SETTING_ORDER:
        for a, b in zip(predicted.joint(s).cells, target.joint(s).cells):
            worst = max(worst, abs(a - b))
    return worst


class RepresentationFitter(BaseEstimator):
    """Scikit-learn style estimator fitting a representation to a scenario.

    Parameters mirror :func:`fit_scenario`.  ``fit(X)`` accepts a Scenario,
    a scenario JSON mapping/text, or a path to one.  Fitted attributes follow
    the sklearn trailing-underscore convention.

    >>> fitter = RepresentationFitter(kind="entangled", restarts=4, seed=1)
    >>> fitter.fit(scenario).loss_  # doctest: +SKIP
    """

    def __init__(
        self,
        kind: str = "entangled",
        restarts: int = DEFAULT_RESTARTS,
        max_evals: int = DEFAULT_MAX_EVALS,
        seed: int = 0,
        xatol: float = DEFAULT_XATOL,
        fatol: float = DEFAULT_FATOL,
        include_canonical_starts: bool = True,
        warm_starts=None,
    ):
        self.kind = kind
        self.restarts = restarts
        self.max_evals = max_evals
        self.seed = seed
        self.xatol = xatol
        self.fatol = fatol
        self.include_canonical_starts = include_canonical_starts
        self.warm_starts = warm_starts

    def fit(self, X, y=None):
        """Search for the best representation of the target scenario X."""
        result = fit_scenario(
            X,
            kind=self.kind,
            restarts=self.restarts,
            max_evals=self.max_evals,
            seed=self.seed,
            xatol=self.xatol,
            fatol=self.fatol,
            include_canonical_starts=self.include_canonical_starts,
            warm_starts=self.warm_starts,
        )
        self.result_ = result
        self.representation_ = result.representation
        self.loss_ = result.loss
        self.residual_linf_ = result.residual_linf
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        return self

    def _check_fitted(self):
        if not hasattr(self, "result_"):
            raise AttributeError("this RepresentationFitter instance is not fitted yet")

    def predict(self, X=None) -> Scenario:
        """Born-rule scenario of the fitted representation (X is ignored)."""
        self._check_fitted()
        return predict(self.representation_)

    def score(self, X, y=None) -> float:
        """Negative sum of squared cell errors against a scenario X."""
        self._check_fitted()
        return -scenario_sse(self.predict(), as_scenario(X))
