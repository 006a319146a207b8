"""bell_lab: coincidence-experiment statistics, non-local box models, and fitters.

The toolkit represents two-party coincidence experiments as probability
scenarios, computes CHSH and marginal-law reports, simulates macroscopic
systems that reach the algebraic CHSH bound (with and without a usable
signaling side channel), and fits two-qubit Born-rule representations with
product or entangled measurement frames to target correlation data.
"""

from .correlations import (
    ALGEBRAIC_BOUND,
    CLASSICAL_BOUND,
    EMPIRICAL_EPSILON,
    EXACT_EPSILON,
    TSIRELSON_BOUND,
    ChshReport,
    JointDistribution,
    MarginalReport,
    Scenario,
    Setting,
    Side,
    SingleDistribution,
    chsh,
    expectation,
    full_marginal_audit,
    marginal_check,
    marginal_law_holds,
)
from .errors import (
    BellLabError,
    DegenerateChannelWarning,
    EmptyCounts,
    IncompleteData,
    InvalidChannel,
    InvalidDistribution,
    InvalidQuantumObject,
    MissingSolo,
)
from .fitting import FitResult, RepresentationFitter, fit_scenario, scenario_linf, scenario_sse
from .models import (
    ANIMAL_ACTS_CELLS,
    ANIMAL_ACTS_SOLO_A,
    MODEL_NAMES,
    AnimalActsData,
    CatsModel,
    GenerativeModel,
    SingletModel,
    VesselsModel,
    build_model,
)
from .montecarlo import (
    EmpiricalScenario,
    EstimatedDistribution,
    TrialCounts,
    counts_csv,
    empirical_scenario,
    estimate,
    run_trials,
    wilson_interval,
)
from .quantum import (
    BELL_PSI_PLUS,
    BasisKind,
    LocalBasis,
    MeasurementBasis4,
    Representation,
    TwoQubitState,
    born_table,
    marginal_identity_check,
    predict,
    product_marginal_discrepancy,
    product_representation,
    random_entangled_representation,
    random_product_representation,
    schmidt_rank,
    vessels_representation,
)
from .schema import load_schema
from .signaling import (
    ChannelConfig,
    ChannelResult,
    ber_curve,
    random_bits,
    run_channel,
    theoretical_marginals,
)

__version__ = "0.1.0"

__all__ = [
    "ALGEBRAIC_BOUND",
    "ANIMAL_ACTS_CELLS",
    "ANIMAL_ACTS_SOLO_A",
    "BELL_PSI_PLUS",
    "BasisKind",
    "BellLabError",
    "CLASSICAL_BOUND",
    "CatsModel",
    "ChannelConfig",
    "ChannelResult",
    "ChshReport",
    "DegenerateChannelWarning",
    "EMPIRICAL_EPSILON",
    "EXACT_EPSILON",
    "EmpiricalScenario",
    "EmptyCounts",
    "EstimatedDistribution",
    "FitResult",
    "GenerativeModel",
    "IncompleteData",
    "InvalidChannel",
    "InvalidDistribution",
    "InvalidQuantumObject",
    "JointDistribution",
    "LocalBasis",
    "MODEL_NAMES",
    "MarginalReport",
    "MeasurementBasis4",
    "MissingSolo",
    "Representation",
    "RepresentationFitter",
    "Scenario",
    "Setting",
    "Side",
    "SingleDistribution",
    "SingletModel",
    "TSIRELSON_BOUND",
    "TrialCounts",
    "TwoQubitState",
    "VesselsModel",
    "AnimalActsData",
    "ber_curve",
    "born_table",
    "build_model",
    "chsh",
    "counts_csv",
    "empirical_scenario",
    "estimate",
    "expectation",
    "fit_scenario",
    "full_marginal_audit",
    "load_schema",
    "marginal_check",
    "marginal_identity_check",
    "marginal_law_holds",
    "predict",
    "product_marginal_discrepancy",
    "product_representation",
    "random_bits",
    "random_entangled_representation",
    "random_product_representation",
    "run_channel",
    "run_trials",
    "scenario_linf",
    "scenario_sse",
    "schmidt_rank",
    "theoretical_marginals",
    "vessels_representation",
    "wilson_interval",
]
