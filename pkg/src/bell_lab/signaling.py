"""Regime-encoding statistical channel between the two sides of a model.

The sender (Bob, right side) fixes one measurement setting for a whole block
of trials ("a day") to encode one bit; the receiver (Alice, left side) keeps
her own setting fixed throughout and watches her daily outcome-1 frequency.
When the model violates the marginal law, Alice's marginal depends on Bob's
choice of regime, so a threshold on her daily frequency decodes the bit; when
the marginal law holds, both regimes induce the same marginal and decoding is
a coin flip no matter how many trials a day contains.

Each day draws from its own counter-based substream, so days are independent
and may be evaluated in parallel without changing any outcome.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .correlations import Setting, Side
from .errors import DegenerateChannelWarning, InvalidChannel
from .models import GenerativeModel
from .streams import DOMAIN_BITS, DOMAIN_DAY, substream, trial_uniforms

#: Joint setting selected by (Alice side, Bob side).
_PAIR_SETTING = {
    (Side.A, Side.B): Setting.AB,
    (Side.A, Side.Bp): Setting.ABp,
    (Side.Ap, Side.B): Setting.ApB,
    (Side.Ap, Side.Bp): Setting.ApBp,
}

#: Tolerance below which the two theoretical marginals count as equal.
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class ChannelConfig:
    """One fixed Alice setting, two Bob regimes, and a block size per bit."""

    model: GenerativeModel
    trials_per_day: int = 500
    alice_setting: Side = Side.A
    bob_regime_for_0: Side = Side.B
    bob_regime_for_1: Side = Side.Bp
    decoder_threshold: float | None = None

    def __post_init__(self):
        if self.alice_setting not in (Side.A, Side.Ap):
            raise InvalidChannel("alice_setting must be a left-side measurement (A or Ap)")
        for regime in (self.bob_regime_for_0, self.bob_regime_for_1):
            if regime not in (Side.B, Side.Bp):
                raise InvalidChannel("bob regimes must be right-side measurements (B or Bp)")
        if self.bob_regime_for_0 is self.bob_regime_for_1:
            raise InvalidChannel("the two bob regimes must be distinct settings")
        if self.trials_per_day < 1:
            raise InvalidChannel(f"trials_per_day must be >= 1, got {self.trials_per_day}")
        if self.decoder_threshold is not None and not (0.0 < self.decoder_threshold < 1.0):
            raise InvalidChannel("decoder_threshold must lie strictly inside (0, 1)")

    def setting_for_bit(self, bit: int) -> Setting:
        regime = self.bob_regime_for_1 if bit else self.bob_regime_for_0
        return _PAIR_SETTING[(self.alice_setting, regime)]


@dataclass(frozen=True)
class ChannelResult:
    """Sent and decoded bit strings plus the daily receiver statistics."""

    sent_bits: str
    decoded_bits: str
    ber: float
    daily_marginals: tuple[float, ...]
    threshold: float
    marginal_for_0: float
    marginal_for_1: float
    degenerate: bool
    trials_per_day: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "sent_bits": self.sent_bits,
            "decoded_bits": self.decoded_bits,
            "ber": self.ber,
            "daily_marginals": list(self.daily_marginals),
            "threshold": self.threshold,
            "marginal_for_0": self.marginal_for_0,
            "marginal_for_1": self.marginal_for_1,
            "degenerate": self.degenerate,
            "trials_per_day": self.trials_per_day,
            "seed": self.seed,
        }


def theoretical_marginals(cfg: ChannelConfig) -> tuple[float, float]:
    """Alice's exact outcome-1 marginal under Bob's regime 0 and regime 1."""
    out = []
    for bit in (0, 1):
        table = cfg.model.exact_distribution(cfg.setting_for_bit(bit))
        out.append(table.left_marginal(1))
    return (out[0], out[1])


def _coerce_bits(bits) -> str:
    if isinstance(bits, str):
        text = bits
    else:
        text = "".join(str(int(b)) for b in bits)
    if not text or any(ch not in "01" for ch in text):
        raise InvalidChannel(f"bits must be a non-empty string over {{0,1}}, got {bits!r}")
    return text


def run_channel(cfg: ChannelConfig, bits, seed: int) -> ChannelResult:
    """Transmit a bit string through the channel, one block of trials per bit.

    The decoder compares each day's outcome-1 frequency against a threshold
    (by default the midpoint of the two theoretical marginals) oriented by
    which regime induces the larger marginal.  When both marginals coincide
    the channel is degenerate: a warning is emitted, the run proceeds, and
    the decoded bits document chance-level transfer.
    """
    text = _coerce_bits(bits)
    p0, p1 = theoretical_marginals(cfg)
    degenerate = abs(p1 - p0) <= DEGENERATE_TOL
    if degenerate:
        warnings.warn(
            f"both regimes give marginal {p0!r}; decoding is chance level",
            DegenerateChannelWarning,
            stacklevel=2,
        )
        threshold = cfg.decoder_threshold if cfg.decoder_threshold is not None else p0
    elif cfg.decoder_threshold is not None:
        lo, hi = min(p0, p1), max(p0, p1)
        if not (lo < cfg.decoder_threshold < hi):
            raise InvalidChannel(
                f"decoder_threshold {cfg.decoder_threshold} must lie strictly between "
                f"the theoretical marginals {lo} and {hi}"
            )
        threshold = cfg.decoder_threshold
    else:
        threshold = (p0 + p1) / 2.0

    decoded = []
    daily = []
    for day, ch in enumerate(text):
        bit = int(ch)
        setting = cfg.setting_for_bit(bit)
        gen = substream(seed, DOMAIN_DAY, day)
        u = trial_uniforms(gen, 0, cfg.trials_per_day)
        codes = cfg.model.outcomes_from_uniforms(
            setting, u[:, : cfg.model.draws_per_trial(setting)]
        )
        freq = float(np.mean(codes <= 1))  # codes 0,1 mean left outcome 1
        daily.append(freq)
        above = freq > threshold
        if degenerate or p1 > p0:
            decoded.append("1" if above else "0")
        else:
            decoded.append("0" if above else "1")

    decoded_text = "".join(decoded)
    errors = sum(a != b for a, b in zip(text, decoded_text))
    return ChannelResult(
        sent_bits=text,
        decoded_bits=decoded_text,
        ber=errors / len(text),
        daily_marginals=tuple(daily),
        threshold=threshold,
        marginal_for_0=p0,
        marginal_for_1=p1,
        degenerate=degenerate,
        trials_per_day=cfg.trials_per_day,
        seed=seed,
    )


def random_bits(length: int, seed: int) -> str:
    """Deterministic payload bits for channel experiments."""
    if length < 1:
        raise InvalidChannel(f"need at least one bit, got length={length}")
    gen = substream(seed, DOMAIN_BITS, 0)
    return "".join("1" if b else "0" for b in gen.integers(0, 2, size=length))


def ber_curve(cfg: ChannelConfig, bits_len: int, trials_grid, seeds) -> list[tuple[int, float]]:
    """Mean bit error rate per block size, averaged over seeds.

    Quantifies the statistics/duration trade-off: separated marginals drive
    the error rate down as blocks grow, equal marginals pin it near 1/2.
    """
    grid = [int(n) for n in trials_grid]
    seed_list = [int(s) for s in seeds]
    if not grid or not seed_list:
        raise InvalidChannel("trials_grid and seeds must be non-empty")
    rows = []
    for n in grid:
        day_cfg = ChannelConfig(
            model=cfg.model,
            trials_per_day=n,
            alice_setting=cfg.alice_setting,
            bob_regime_for_0=cfg.bob_regime_for_0,
            bob_regime_for_1=cfg.bob_regime_for_1,
            decoder_threshold=cfg.decoder_threshold,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateChannelWarning)
            bers = [
                run_channel(day_cfg, random_bits(bits_len, s), s).ber for s in seed_list
            ]
        rows.append((n, sum(bers) / len(bers)))
    return rows
