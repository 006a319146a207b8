"""Built-in generative models with closed-form tables and latent-variable samplers.

Each model describes a concrete bipartite system, exposes the exact outcome
table of every coincidence experiment, and can realize single trials from an
explicit latent variable so that empirical frequencies converge to the exact
tables.  Sampling is driven by uniforms handed in from the counter-based
streams in :mod:`bell_lab.streams`; a model never owns RNG state, which keeps
instances immutable and trivially shareable across workers.

The catalogue:

vessels
    Two vessels joined by a tube holding 20 liters of water in total.  The
    unprimed measurement siphons a side into a reference vessel (outcome 1:
    more than 10 liters collected); the primed measurement extracts a spoonful
    and checks transparency (outcome 1: transparent).  Siphoning both sides
    splits the 20 liters, a perfect anti-correlation; any experiment involving
    a spoon ends with all remaining water siphoned to one side or simply a
    transparent spoonful, so every primed combination yields outcome 11 with
    certainty.  CHSH reaches the algebraic bound 4 and the marginal law is
    violated (the siphon side sees marginal 1/2 or 1 depending on the partner).

cats
    Two brother cats and an owner who thinks of one of them when prompted.  A
    hidden coin decides each day whether both cats wear collar bells.  The
    unprimed measurements score whether the owner's thought matches the
    bell situation; the primed measurements simply check a cat for a bell.
    All four tables are perfectly (anti-)correlated with equal halves, CHSH
    again reaches 4, yet every marginal is exactly 1/2 in every context: a
    non-local box, with no statistical signature usable for signaling.

singlet
    The maximally entangled spin-pair reference pattern.  Settings are
    analyzer angles; a pair measured at angles (x, y) correlates as
    E = -cos(x + y), i.e. the familiar -cos(angle between) law with the right
    side's orientation reversed, the convention under which the textbook demo
    angles (0, pi/2, pi/4, 3pi/4) attain the Tsirelson value +2*sqrt(2) for
    the combination E(A',B') + E(A',B) + E(A,B') - E(A,B).  Equivalently: the
    shared state (|12> + |21>)/sqrt(2) measured along in-plane directions.

animal-acts
    Empirical concept-combination data: subjects pick an animal (Horse/Bear)
    and an action sound for the combination "The Animal Acts".  Only the
    measured solo probability p(A1) = 0.531 and the horse-row cells of the
    two A-side coincidence tables are built in; the remaining cells must be
    loaded from a scenario JSON before exact tables or sampling are available.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np

from .correlations import (
    JointDistribution,
    MarginalReport,
    Scenario,
    Setting,
    Side,
    SingleDistribution,
)
from .errors import IncompleteData
from .streams import DOMAIN_SETTING, substream, trial_uniforms
from .validation import as_scenario

SETTINGS = (Setting.AB, Setting.ABp, Setting.ApB, Setting.ApBp)
SETTING_INDEX = {s: i for i, s in enumerate(SETTINGS)}

#: Combined outcome labels addressed by the integer codes 0..3.
OUTCOME_LABELS = ("11", "12", "21", "22")


class GenerativeModel(abc.ABC):
    """A samplable bipartite system with closed-form per-setting tables."""

    name: str = "model"

    @property
    def settings(self) -> tuple[Setting, ...]:
        """The four coincidence experiments the model defines."""
        return SETTINGS

    @abc.abstractmethod
    def exact_distribution(self, setting: Setting) -> JointDistribution:
        """The exact outcome table of one coincidence experiment."""

    @abc.abstractmethod
    def draws_per_trial(self, setting: Setting) -> int:
        """How many of a trial's four uniforms the latent realization consumes."""

    @abc.abstractmethod
    def outcomes_from_uniforms(self, setting: Setting, u: np.ndarray) -> np.ndarray:
        """Map trial uniforms (shape (n, draws_per_trial)) to outcome codes 0..3."""

    def solo_distribution(self, side: Side) -> SingleDistribution | None:
        """Solo outcome table for one side, when the model defines one."""
        return None

    def scenario(self) -> Scenario:
        """Assemble the exact tables (and any solo tables) into a Scenario."""
        return Scenario(
            ab=self.exact_distribution(Setting.AB),
            abp=self.exact_distribution(Setting.ABp),
            apb=self.exact_distribution(Setting.ApB),
            apbp=self.exact_distribution(Setting.ApBp),
            solo_a=self.solo_distribution(Side.A),
            solo_ap=self.solo_distribution(Side.Ap),
            solo_b=self.solo_distribution(Side.B),
            solo_bp=self.solo_distribution(Side.Bp),
        )

    def sample(self, setting: Setting, seed: int, index: int = 0) -> str:
        """One outcome label, fully determined by (seed, setting, index)."""
        gen = substream(seed, DOMAIN_SETTING, SETTING_INDEX[setting])
        u = trial_uniforms(gen, index, 1)
        code = self.outcomes_from_uniforms(setting, u[:, : self.draws_per_trial(setting)])[0]
        return OUTCOME_LABELS[code]


def _table_sampler(table: JointDistribution, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sampling of outcome codes from a 4-cell table."""
    cum = np.cumsum(table.cells)
    codes = np.searchsorted(cum, u[:, 0], side="right")
    return np.minimum(codes, 3).astype(np.int64)


@dataclass(frozen=True)
class VesselsModel(GenerativeModel):
    """Connected vessels of water: CHSH = 4 with a violated marginal law."""

    total_volume: float = 20.0
    threshold: float = 10.0

    name = "vessels"

    def exact_distribution(self, setting: Setting) -> JointDistribution:
        if setting is Setting.AB:
            return JointDistribution(0.0, 0.5, 0.5, 0.0)
        return JointDistribution(1.0, 0.0, 0.0, 0.0)

    def draws_per_trial(self, setting: Setting) -> int:
        return 1 if setting is Setting.AB else 0

    def siphon_split(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Latent volumes collected (left, right); they sum to total_volume exactly."""
        left = self.total_volume * np.asarray(u, dtype=np.float64)
        return left, self.total_volume - left

    def outcomes_from_uniforms(self, setting: Setting, u: np.ndarray) -> np.ndarray:
        if setting is Setting.AB:
            left, _ = self.siphon_split(u[:, 0])
            # Exact threshold ties have probability zero; a degenerate tie
            # counts as "less than threshold" (outcome 2) on the left.
            return np.where(left > self.threshold, 1, 2).astype(np.int64)
        return np.zeros(len(u), dtype=np.int64)


@dataclass(frozen=True)
class CatsModel(GenerativeModel):
    """Two belled (or unbelled) cats and an owner's thought: a non-local box."""

    bell_probability: float = 0.5

    name = "cats"

    def exact_distribution(self, setting: Setting) -> JointDistribution:
        if setting is Setting.AB:
            return JointDistribution(0.0, 0.5, 0.5, 0.0)
        return JointDistribution(0.5, 0.0, 0.0, 0.5)

    def draws_per_trial(self, setting: Setting) -> int:
        # Every trial draws the shared bell state; only the double-cat
        # context additionally draws which cat the owner thinks of.
        return 2 if setting is Setting.AB else 1

    def outcomes_from_uniforms(self, setting: Setting, u: np.ndarray) -> np.ndarray:
        bell = u[:, 0] < self.bell_probability
        if setting is Setting.AB:
            thinks_first = u[:, 1] < 0.5
            # Left outcome 1: thought matches the bell situation for the first
            # cat; the right side's rule is the exact complement, so the pair
            # is 12 or 21 with equal probability.
            left_one = thinks_first == bell
            return np.where(left_one, 1, 2).astype(np.int64)
        # Primed experiments read only the shared bell state: 11 when belled,
        # 22 when not, in every one of the three remaining contexts.
        return np.where(bell, 0, 3).astype(np.int64)


@dataclass(frozen=True)
class SingletModel(GenerativeModel):
    """Maximally entangled spin-pair correlations, E(x, y) = -cos(x + y)."""

    angle_a: float = 0.0
    angle_ap: float = math.pi / 2
    angle_b: float = math.pi / 4
    angle_bp: float = 3 * math.pi / 4

    name = "singlet"

    def effective_angle(self, setting: Setting) -> float:
        """The angle whose cosine sets the table, per setting pair."""
        left = {Setting.AB: self.angle_a, Setting.ABp: self.angle_a,
                Setting.ApB: self.angle_ap, Setting.ApBp: self.angle_ap}[setting]
        right = {Setting.AB: self.angle_b, Setting.ApB: self.angle_b,
                 Setting.ABp: self.angle_bp, Setting.ApBp: self.angle_bp}[setting]
        return left + right

    def exact_distribution(self, setting: Setting) -> JointDistribution:
        c = math.cos(self.effective_angle(setting))
        same = (1.0 - c) / 4.0
        diff = (1.0 + c) / 4.0
        return JointDistribution(same, diff, diff, same)

    def draws_per_trial(self, setting: Setting) -> int:
        return 1

    def outcomes_from_uniforms(self, setting: Setting, u: np.ndarray) -> np.ndarray:
        return _table_sampler(self.exact_distribution(setting), u)


#: Cells measured in the concept-combination experiment, keyed by
#: (setting, outcome label).  Only the horse row (left outcome 1) was reported.
ANIMAL_ACTS_CELLS: dict[tuple[Setting, str], float] = {
    (Setting.AB, "11"): 0.049,
    (Setting.AB, "12"): 0.630,
    (Setting.ABp, "11"): 0.593,
    (Setting.ABp, "12"): 0.025,
}

#: Measured solo probability of choosing Horse with no sound context present.
ANIMAL_ACTS_SOLO_A = (0.531, 0.469)


@dataclass(frozen=True)
class AnimalActsData(GenerativeModel):
    """Concept-combination survey data, shipped partially.

    The built-in cells support the A-side outcome-1 marginal analysis on
    their own.  Everything else (full tables, sampling) requires loading a
    complete scenario via :meth:`with_tables`.
    """

    tables: Scenario | None = None

    name = "animal-acts"

    @classmethod
    def with_tables(cls, source) -> "AnimalActsData":
        """Load the full tables from a Scenario (or scenario JSON/dict/path)."""
        return cls(tables=as_scenario(source))

    def _require_tables(self) -> Scenario:
        if self.tables is None:
            raise IncompleteData(
                "animal-acts ships only the measured horse-row cells; "
                "load the full tables from a scenario JSON first"
            )
        return self.tables

    def exact_distribution(self, setting: Setting) -> JointDistribution:
        return self._require_tables().joint(setting)

    def draws_per_trial(self, setting: Setting) -> int:
        return 1

    def outcomes_from_uniforms(self, setting: Setting, u: np.ndarray) -> np.ndarray:
        return _table_sampler(self.exact_distribution(setting), u)

    def solo_distribution(self, side: Side) -> SingleDistribution | None:
        if self.tables is not None:
            loaded = self.tables.solo(side)
            if loaded is not None:
                return loaded
        if side is Side.A:
            return SingleDistribution(*ANIMAL_ACTS_SOLO_A)
        return None

    def scenario(self) -> Scenario:
        tables = self._require_tables()
        return Scenario(
            ab=tables.ab,
            abp=tables.abp,
            apb=tables.apb,
            apbp=tables.apbp,
            solo_a=self.solo_distribution(Side.A),
            solo_ap=tables.solo_ap,
            solo_b=tables.solo_b,
            solo_bp=tables.solo_bp,
        )

    def known_marginal(self, setting: Setting) -> float:
        """A-side outcome-1 marginal of one A context, from the shipped cells."""
        try:
            return ANIMAL_ACTS_CELLS[(setting, "11")] + ANIMAL_ACTS_CELLS[(setting, "12")]
        except KeyError:
            raise IncompleteData(f"no shipped cells for setting {setting.value}") from None

    def horse_marginal_report(
        self, epsilon: float = 0.01, include_solo: bool = False
    ) -> MarginalReport:
        """Marginal report for (side A, outcome 1) built from the shipped cells.

        This is the one check the partial data supports without a loaded file.
        """
        values: list[tuple[str, float]] = []
        if include_solo:
            values.append(("solo", ANIMAL_ACTS_SOLO_A[0]))
        values.append((Setting.AB.value, self.known_marginal(Setting.AB)))
        values.append((Setting.ABp.value, self.known_marginal(Setting.ABp)))
        numbers = [v for _, v in values]
        max_discrepancy = max(numbers) - min(numbers)
        return MarginalReport(
            side=Side.A,
            outcome=1,
            values=tuple(values),
            max_discrepancy=max_discrepancy,
            epsilon=epsilon,
            holds=max_discrepancy <= epsilon,
            include_solo=include_solo,
        )


def build_model(name: str, angles: tuple[float, float, float, float] | None = None) -> GenerativeModel:
    """Instantiate a built-in model by CLI name."""
    if name == "vessels":
        return VesselsModel()
    if name == "cats":
        return CatsModel()
    if name == "singlet":
        return SingletModel(*angles) if angles is not None else SingletModel()
    if name == "animal-acts":
        return AnimalActsData()
    raise KeyError(f"unknown model {name!r}; choose from {sorted(MODEL_NAMES)}")


MODEL_NAMES = ("vessels", "cats", "singlet", "animal-acts")
