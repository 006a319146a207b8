"""Exception hierarchy and warning categories for bell_lab.

Public functions raise these instead of bare ValueError/KeyError so that
callers (notably the CLI) can map failure modes to exit codes.
"""


class BellLabError(Exception):
    """Base class for all bell_lab errors."""


class InvalidDistribution(BellLabError, ValueError):
    """A probability table violates its contract (range, normalization)."""


class MissingSolo(BellLabError, LookupError):
    """A solo-context marginal was requested but the scenario records none."""


class IncompleteData(BellLabError):
    """A model was queried for cells it does not provide and no table was loaded."""


class EmptyCounts(BellLabError, ValueError):
    """An estimate or trial run was requested over zero samples."""


class InvalidChannel(BellLabError, ValueError):
    """A signaling channel configuration violates its contract."""


class InvalidQuantumObject(BellLabError, ValueError):
    """A state vector or measurement basis violates normalization/orthonormality."""


class DegenerateChannelWarning(UserWarning):
    """The two regimes induce identical receiver marginals; decoding is chance-level."""
