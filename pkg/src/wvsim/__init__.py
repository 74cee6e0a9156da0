"""Post-selected qubit measurement statistics at finite strength.

Exact conditional averages of a Gaussian-meter spin measurement with
pre- and post-selection, the Bayesian state update they derive from,
the classical coin-toss analogue, and seeded Monte Carlo plus
quadrature oracles that reproduce every closed form by brute force.
"""

from .bayes import (
    UpdateMode,
    bayes_update,
    outcome_density,
    post_select_prob,
    selection_prob,
)
from .cointoss import (
    CoinTossConfig,
    PostSelectionRule,
    SDependent,
    SIndependent,
    acceptance_prob,
    coin_m1_m2,
    coin_outcome_prob,
    coin_pps_average,
    s_dependent_average_closed,
    s_dependent_ps_prob,
)
from .errors import (
    InvalidDisturbance,
    NonDiagonalInput,
    OverlapTooSmall,
    QuadratureNotConverged,
    ZeroPpsProbability,
)
from .mc import COIN_TOSS, McConfig, McEstimate, run_coin_toss, run_gaussian_pps
from .meter import (
    MeterConfig,
    OutcomeDistribution,
    aav_approx_amplitude,
    coarse_grain,
    exact_meter_amplitude,
    outcome_distribution,
    p_sigma,
    wavepacket,
)
from .pps import (
    PpsResult,
    delta_m2,
    pps_average_classical,
    pps_average_closed,
    pps_average_compact,
    pps_average_dual,
    quadrature_pps_oracle,
)
from .qubit import (
    OVERLAP_FLOOR,
    SPIN_DOWN,
    SPIN_UP,
    PureQubitState,
    QubitDensityMatrix,
    aav_weak_value,
    braket,
    density_of,
    make_state,
)

__version__ = "0.1.0"

__all__ = [
    "COIN_TOSS",
    "CoinTossConfig",
    "InvalidDisturbance",
    "McConfig",
    "McEstimate",
    "MeterConfig",
    "NonDiagonalInput",
    "OVERLAP_FLOOR",
    "OutcomeDistribution",
    "OverlapTooSmall",
    "PostSelectionRule",
    "PpsResult",
    "PureQubitState",
    "QuadratureNotConverged",
    "QubitDensityMatrix",
    "SDependent",
    "SIndependent",
    "SPIN_DOWN",
    "SPIN_UP",
    "UpdateMode",
    "ZeroPpsProbability",
    "aav_approx_amplitude",
    "aav_weak_value",
    "acceptance_prob",
    "bayes_update",
    "braket",
    "coarse_grain",
    "coin_m1_m2",
    "coin_outcome_prob",
    "coin_pps_average",
    "delta_m2",
    "density_of",
    "exact_meter_amplitude",
    "make_state",
    "outcome_density",
    "outcome_distribution",
    "p_sigma",
    "post_select_prob",
    "pps_average_classical",
    "pps_average_closed",
    "pps_average_compact",
    "pps_average_dual",
    "quadrature_pps_oracle",
    "run_coin_toss",
    "run_gaussian_pps",
    "s_dependent_average_closed",
    "s_dependent_ps_prob",
    "selection_prob",
    "wavepacket",
]
