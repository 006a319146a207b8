"""Exact statistics of two-party coincidence experiments.

A coincidence experiment pairs one two-outcome measurement on each side of a
bipartite system.  With two settings per side (A, A' on the left; B, B' on the
right) there are four joint experiments, each summarized by a 2x2 probability
table over the combined outcomes 11, 12, 21, 22.

This module provides the domain types plus three exact computations:

expectation
    E = p11 - p12 - p21 + p22, the correlation of the +1/-1 valued outcomes.

chsh
    s = E(A',B') + E(A',B) + E(A,B') - E(A,B), compared against the classical
    bound 2, the Tsirelson bound 2*sqrt(2), and the algebraic bound 4.

marginal checks
    One side's outcome probability, summed over the partner's outcomes, must
    not depend on the partner's setting choice ("marginal law").  A scenario
    may additionally record solo distributions (the side measured with no
    partner experiment at all), which can optionally be counted as one more
    context.

All types are immutable after construction and every operation is a pure
function, so everything here is safe to call concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import EmptyCounts, InvalidDistribution, MissingSolo
from .validation import check_counts, check_probability_cells

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
ALGEBRAIC_BOUND = 4.0

#: Combined outcome labels in table order.
OUTCOMES = ("11", "12", "21", "22")

#: Default tolerance when checking the marginal law on exact tables.
EXACT_EPSILON = 1e-9

#: Suggested tolerance when checking the marginal law on empirical tables.
EMPIRICAL_EPSILON = 0.01


class Setting(enum.Enum):
    """The four joint experiments."""

    AB = "AB"
    ABp = "ABp"
    ApB = "ApB"
    ApBp = "ApBp"


class Side(enum.Enum):
    """The four single-party measurements."""

    A = "A"
    Ap = "Ap"
    B = "B"
    Bp = "Bp"


@dataclass(frozen=True)
class JointDistribution:
    """Outcome probabilities of one coincidence experiment.

    Cells are ordered (11, 12, 21, 22): the first digit is the left side's
    outcome, the second the right side's.  Construction clips sub-tolerance
    negatives and rescales so the cells sum to exactly 1.
    """

    p11: float
    p12: float
    p21: float
    p22: float

    def __post_init__(self):
        cells = check_probability_cells(
            (self.p11, self.p12, self.p21, self.p22), "JointDistribution"
        )
        for name, value in zip(("p11", "p12", "p21", "p22"), cells):
            object.__setattr__(self, name, value)

    @classmethod
    def from_counts(cls, n11, n12, n21, n22) -> "JointDistribution":
        """Build from raw trial counts; rejects negatives, normalizes by the total."""
        counts = check_counts((n11, n12, n21, n22), "JointDistribution.from_counts")
        total = sum(counts)
        if total == 0:
            raise EmptyCounts("cannot normalize a table of all-zero counts")
        return cls(*(c / total for c in counts))

    @property
    def cells(self) -> tuple[float, float, float, float]:
        return (self.p11, self.p12, self.p21, self.p22)

    def left_marginal(self, outcome: int) -> float:
        """Probability that the left side shows `outcome`, partner summed out."""
        if outcome == 1:
            return self.p11 + self.p12
        if outcome == 2:
            return self.p21 + self.p22
        raise ValueError(f"outcome must be 1 or 2, got {outcome!r}")

    def right_marginal(self, outcome: int) -> float:
        """Probability that the right side shows `outcome`, partner summed out."""
        if outcome == 1:
            return self.p11 + self.p21
        if outcome == 2:
            return self.p12 + self.p22
        raise ValueError(f"outcome must be 1 or 2, got {outcome!r}")

    def to_json_dict(self) -> dict:
        return {"p11": self.p11, "p12": self.p12, "p21": self.p21, "p22": self.p22}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "JointDistribution":
        return cls(obj["p11"], obj["p12"], obj["p21"], obj["p22"])


@dataclass(frozen=True)
class SingleDistribution:
    """Outcome probabilities of one measurement performed alone."""

    p1: float
    p2: float

    def __post_init__(self):
        p1, p2 = check_probability_cells((self.p1, self.p2), "SingleDistribution")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    def probability(self, outcome: int) -> float:
        if outcome == 1:
            return self.p1
        if outcome == 2:
            return self.p2
        raise ValueError(f"outcome must be 1 or 2, got {outcome!r}")

    def to_json_dict(self) -> dict:
        return {"p1": self.p1, "p2": self.p2}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SingleDistribution":
        return cls(obj["p1"], obj["p2"])


#: JSON keys for the four joint tables, in canonical order.
_JOINT_KEYS = (("ab", "AB"), ("abp", "ABp"), ("apb", "ApB"), ("apbp", "ApBp"))
#: JSON keys for the optional solo tables.
_SOLO_KEYS = (("solo_a", "soloA"), ("solo_ap", "soloAp"), ("solo_b", "soloB"), ("solo_bp", "soloBp"))


@dataclass(frozen=True)
class Scenario:
    """The four joint tables of a CHSH-style experiment, plus optional solos.

    Solo distributions are present only when the corresponding measurement was
    actually performed without a partner experiment; the built-in macroscopic
    models define coincidence experiments only.
    """

    ab: JointDistribution
    abp: JointDistribution
    apb: JointDistribution
    apbp: JointDistribution
    solo_a: SingleDistribution | None = None
    solo_ap: SingleDistribution | None = None
    solo_b: SingleDistribution | None = None
    solo_bp: SingleDistribution | None = None

    def joint(self, setting: Setting) -> JointDistribution:
        return {
            Setting.AB: self.ab,
            Setting.ABp: self.abp,
            Setting.ApB: self.apb,
            Setting.ApBp: self.apbp,
        }[setting]

    def solo(self, side: Side) -> SingleDistribution | None:
        return {
            Side.A: self.solo_a,
            Side.Ap: self.solo_ap,
            Side.B: self.solo_b,
            Side.Bp: self.solo_bp,
        }[side]

    def to_json_dict(self) -> dict:
        out = {}
        for attr, key in _JOINT_KEYS:
            out[key] = getattr(self, attr).to_json_dict()
        for attr, key in _SOLO_KEYS:
            solo = getattr(self, attr)
            if solo is not None:
                out[key] = solo.to_json_dict()
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Scenario":
        known = {key for _, key in _JOINT_KEYS} | {key for _, key in _SOLO_KEYS}
        unknown = set(obj) - known
        if unknown:
            raise InvalidDistribution(f"unknown scenario keys {sorted(unknown)}")
        kwargs = {}
        for attr, key in _JOINT_KEYS:
            kwargs[attr] = JointDistribution.from_json_dict(obj[key])
        for attr, key in _SOLO_KEYS:
            if key in obj:
                kwargs[attr] = SingleDistribution.from_json_dict(obj[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class ChshReport:
    """The four expectation values and their CHSH combination."""

    e_ab: float
    e_abp: float
    e_apb: float
    e_apbp: float
    s_value: float
    violates_classical: bool
    exceeds_tsirelson: bool
    classical_bound: float = CLASSICAL_BOUND
    tsirelson_bound: float = TSIRELSON_BOUND
    algebraic_bound: float = ALGEBRAIC_BOUND

    def to_json_dict(self) -> dict:
        return {
            "e_AB": self.e_ab,
            "e_ABp": self.e_abp,
            "e_ApB": self.e_apb,
            "e_ApBp": self.e_apbp,
            "s_value": self.s_value,
            "classical_bound": self.classical_bound,
            "tsirelson_bound": self.tsirelson_bound,
            "algebraic_bound": self.algebraic_bound,
            "violates_classical": self.violates_classical,
            "exceeds_tsirelson": self.exceeds_tsirelson,
        }


@dataclass(frozen=True)
class MarginalReport:
    """One side/outcome marginal compared across the partner's contexts.

    ``values`` lists (context label, marginal probability) pairs; the solo
    context, when requested, comes first.  ``max_discrepancy`` is the largest
    pairwise absolute difference, i.e. max - min.
    """

    side: Side
    outcome: int
    values: tuple[tuple[str, float], ...]
    max_discrepancy: float
    epsilon: float
    holds: bool
    include_solo: bool

    def to_json_dict(self) -> dict:
        return {
            "side": self.side.value,
            "outcome": self.outcome,
            "values": [{"context": c, "marginal": v} for c, v in self.values],
            "max_discrepancy": self.max_discrepancy,
            "epsilon": self.epsilon,
            "holds": self.holds,
            "include_solo": self.include_solo,
        }


def expectation(d: JointDistribution) -> float:
    """Correlation E = p11 - p12 - p21 + p22 of the two +1/-1 outcomes."""
    return d.p11 - d.p12 - d.p21 + d.p22


def chsh(s: Scenario) -> ChshReport:
    """CHSH combination s = E(A',B') + E(A',B) + E(A,B') - E(A,B).

    Classical (local hidden variable) models obey |s| <= 2; two-qubit states
    with product measurements obey |s| <= 2*sqrt(2); any probability tables at
    all obey |s| <= 4.  Violation flags use strict inequality, treating each
    bound as included in its class.
    """
    e_ab = expectation(s.ab)
    e_abp = expectation(s.abp)
    e_apb = expectation(s.apb)
    e_apbp = expectation(s.apbp)
    s_value = e_apbp + e_apb + e_abp - e_ab
    return ChshReport(
        e_ab=e_ab,
        e_abp=e_abp,
        e_apb=e_apb,
        e_apbp=e_apbp,
        s_value=s_value,
        violates_classical=abs(s_value) > CLASSICAL_BOUND,
        exceeds_tsirelson=abs(s_value) > TSIRELSON_BOUND,
    )


#: Contexts per side: (setting, which margin of the table the side occupies).
_SIDE_CONTEXTS: dict[Side, tuple[tuple[Setting, str], ...]] = {
    Side.A: ((Setting.AB, "left"), (Setting.ABp, "left")),
    Side.Ap: ((Setting.ApB, "left"), (Setting.ApBp, "left")),
    Side.B: ((Setting.AB, "right"), (Setting.ApB, "right")),
    Side.Bp: ((Setting.ABp, "right"), (Setting.ApBp, "right")),
}


def marginal_check(
    s: Scenario,
    side: Side,
    outcome: int,
    epsilon: float = EXACT_EPSILON,
    include_solo: bool = False,
) -> MarginalReport:
    """Compare one side/outcome marginal across the partner's two settings.

    With ``include_solo`` the solo measurement of that side counts as a third
    context; this raises :class:`MissingSolo` when the scenario records none.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon!r}")
    values: list[tuple[str, float]] = []
    if include_solo:
        solo = s.solo(side)
        if solo is None:
            raise MissingSolo(f"scenario records no solo distribution for side {side.value}")
        values.append(("solo", solo.probability(outcome)))
    for setting, margin in _SIDE_CONTEXTS[side]:
        table = s.joint(setting)
        marginal = table.left_marginal(outcome) if margin == "left" else table.right_marginal(outcome)
        values.append((setting.value, marginal))
    numbers = [v for _, v in values]
    max_discrepancy = max(numbers) - min(numbers)
    return MarginalReport(
        side=side,
        outcome=outcome,
        values=tuple(values),
        max_discrepancy=max_discrepancy,
        epsilon=epsilon,
        holds=max_discrepancy <= epsilon,
        include_solo=include_solo,
    )


def full_marginal_audit(
    s: Scenario,
    epsilon: float = EXACT_EPSILON,
    include_solo: bool = False,
) -> list[MarginalReport]:
    """Run marginal_check for all eight side/outcome pairs, in fixed order."""
    return [
        marginal_check(s, side, outcome, epsilon=epsilon, include_solo=include_solo)
        for side in (Side.A, Side.Ap, Side.B, Side.Bp)
        for outcome in (1, 2)
    ]


def marginal_law_holds(
    s: Scenario,
    epsilon: float = EXACT_EPSILON,
    include_solo: bool = False,
) -> bool:
    """True when every report of the full audit holds at the given tolerance."""
    return all(r.holds for r in full_marginal_audit(s, epsilon=epsilon, include_solo=include_solo))
