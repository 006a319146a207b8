"""Seeded sampling harness: models -> counts -> estimated scenarios.

Trials are tallied from the counter-based substreams in
:mod:`bell_lab.streams`; a trial's draws are addressed by (seed, setting,
trial index) alone, so identical seeds give bit-identical counts regardless
of how trials are split across workers, and partial counts merge by addition.

Cell estimates carry Wilson score intervals rather than normal-approximation
ones because the built-in models have deterministic cells (p = 0 or 1), where
the naive interval degenerates to zero width.
"""

from __future__ import annotations

import io
import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .correlations import JointDistribution, Scenario, Setting
from .errors import EmptyCounts
from .models import SETTINGS, SETTING_INDEX, GenerativeModel
from .streams import DOMAIN_SETTING, partition, substream, trial_uniforms

#: Two-sided z for the 95% confidence level.
Z_95 = 1.959963984540054


@dataclass(frozen=True)
class TrialCounts:
    """Outcome tallies of repeated runs of one coincidence experiment."""

    n11: int
    n12: int
    n21: int
    n22: int

    @property
    def n_total(self) -> int:
        return self.n11 + self.n12 + self.n21 + self.n22

    @property
    def cells(self) -> tuple[int, int, int, int]:
        return (self.n11, self.n12, self.n21, self.n22)

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "TrialCounts":
        counts = np.bincount(codes, minlength=4)
        return cls(*(int(c) for c in counts[:4]))

    def __add__(self, other: "TrialCounts") -> "TrialCounts":
        return TrialCounts(
            self.n11 + other.n11,
            self.n12 + other.n12,
            self.n21 + other.n21,
            self.n22 + other.n22,
        )

    def to_json_dict(self) -> dict:
        return {"n11": self.n11, "n12": self.n12, "n21": self.n21, "n22": self.n22,
                "n_total": self.n_total}


def wilson_interval(k: int, n: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval for k successes out of n, as (low, high)."""
    if n <= 0:
        raise EmptyCounts("Wilson interval requires n >= 1")
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z * z / (4 * n * n)) / denom
    # The k = 0 (k = n) endpoint is exactly 0 (exactly 1); snap it so that
    # deterministic cells are never excluded by rounding residue.
    low = 0.0 if k == 0 else max(0.0, center - half)
    high = 1.0 if k == n else min(1.0, center + half)
    return (low, high)


@dataclass(frozen=True)
class EstimatedDistribution:
    """Point estimates and per-cell 95% Wilson intervals for one table.

    The interval of a cell is [ci_low, ci_high]; it is generally not centered
    at the point estimate. ``ci_halfwidth`` is half the interval length.
    """

    point: JointDistribution
    ci_low: tuple[float, float, float, float]
    ci_high: tuple[float, float, float, float]
    ci_halfwidth: tuple[float, float, float, float]
    n: int

    def covers(self, exact: JointDistribution) -> bool:
        """Whether every exact cell lies inside its interval."""
        return all(
            lo <= cell <= hi
            for cell, lo, hi in zip(exact.cells, self.ci_low, self.ci_high)
        )

    def to_json_dict(self) -> dict:
        keys = ("p11", "p12", "p21", "p22")
        return {
            "point": self.point.to_json_dict(),
            "ci_low": dict(zip(keys, self.ci_low)),
            "ci_high": dict(zip(keys, self.ci_high)),
            "ci_halfwidth": dict(zip(keys, self.ci_halfwidth)),
            "n": self.n,
        }


def estimate(c: TrialCounts) -> EstimatedDistribution:
    """Frequency estimates plus Wilson 95% intervals for each cell."""
    n = c.n_total
    if n < 1:
        raise EmptyCounts("cannot estimate a distribution from zero trials")
    bounds = [wilson_interval(k, n) for k in c.cells]
    return EstimatedDistribution(
        point=JointDistribution(*(k / n for k in c.cells)),
        ci_low=tuple(b[0] for b in bounds),
        ci_high=tuple(b[1] for b in bounds),
        ci_halfwidth=tuple((b[1] - b[0]) / 2.0 for b in bounds),
        n=n,
    )


def _count_block(model: GenerativeModel, setting: Setting, seed: int,
                 lo: int, hi: int) -> TrialCounts:
    gen = substream(seed, DOMAIN_SETTING, SETTING_INDEX[setting])
    u = trial_uniforms(gen, lo, hi - lo)
    codes = model.outcomes_from_uniforms(setting, u[:, : model.draws_per_trial(setting)])
    return TrialCounts.from_codes(codes)


def run_trials(model: GenerativeModel, setting: Setting, n: int, seed: int,
               workers: int = 1) -> TrialCounts:
    """Tally n seeded trials of one setting.

    ``workers`` only chooses how the trial range is partitioned (and whether
    blocks run on a thread pool); the counts are identical for any value.
    """
    if n < 1:
        raise EmptyCounts(f"need at least one trial, got n={n}")
    blocks = partition(n, workers)
    if len(blocks) == 1:
        return _count_block(model, setting, seed, 0, n)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _count_block(model, setting, seed, *b), blocks))
    else:
        parts = [_count_block(model, setting, seed, lo, hi) for lo, hi in blocks]
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


@dataclass(frozen=True)
class EmpiricalScenario:
    """Empirical scenario assembled from independent per-setting substreams."""

    scenario: Scenario
    counts: dict[Setting, TrialCounts]
    estimates: dict[Setting, EstimatedDistribution]
    n_per_setting: int
    seed: int


def empirical_scenario(model: GenerativeModel, n_per_setting: int, seed: int,
                       workers: int = 1) -> EmpiricalScenario:
    """Sample all four settings and package the frequency tables as a Scenario."""
    if n_per_setting < 1:
        raise EmptyCounts(f"need at least one trial per setting, got n={n_per_setting}")
    counts = {s: run_trials(model, s, n_per_setting, seed, workers=workers) for s in SETTINGS}
    estimates = {s: estimate(counts[s]) for s in SETTINGS}
    scenario = Scenario(
        ab=estimates[Setting.AB].point,
        abp=estimates[Setting.ABp].point,
        apb=estimates[Setting.ApB].point,
        apbp=estimates[Setting.ApBp].point,
    )
    return EmpiricalScenario(
        scenario=scenario,
        counts=counts,
        estimates=estimates,
        n_per_setting=n_per_setting,
        seed=seed,
    )


def counts_csv(result: EmpiricalScenario) -> str:
    """CSV of the raw counts: setting, n11, n12, n21, n22, seed, n_total."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["setting", "n11", "n12", "n21", "n22", "seed", "n_total"])
    for setting in SETTINGS:
        c = result.counts[setting]
        writer.writerow([setting.value, c.n11, c.n12, c.n21, c.n22, result.seed, c.n_total])
    return buf.getvalue()
