"""Classical two-state coin-toss model with post-selection.

A coin with intrinsic state up/down produces a binary meter outcome
s = +-1 with probabilities ``P_sigma(s) = (1 + s sigma lambda)/2``; the
pre-state enters only through its weights ``(p_up, 1 - p_up)``.  Two
post-selection rules are supported:

* the outcome-dependent rule ``r(sigma, s) = 1 - delta/(1 + s sigma lambda)``,
  which manufactures conditional averages of ``lambda A_bar/(1 - delta)``
  and hence arbitrarily "anomalous" scaled values;
* honest outcome-independent acceptance ``(q_up, q_down)``, for which the
  scaled average is a weighted mean of +-1 and can never leave [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidDisturbance, ZeroPpsProbability


@dataclass(frozen=True)
class CoinTossConfig:
    """Strength ``lam`` in (0, 1), disturbance ``delta`` in [0, 1 - lam],
    and pre-state up-weight ``p_up``."""

    lam: float
    delta: float = 0.0
    p_up: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.lam < 1.0):
            raise ValueError(f"lambda must be in (0, 1), got {self.lam}")
        if not (0.0 <= self.p_up <= 1.0):
            raise ValueError(f"p_up must be in [0, 1], got {self.p_up}")
        if not (0.0 <= self.delta <= 1.0 - self.lam):
            raise InvalidDisturbance(
                f"delta must be in [0, 1 - lambda] = [0, {1.0 - self.lam}], "
                f"got {self.delta}"
            )

    @property
    def a_bar(self) -> float:
        """Pre-state expectation of sigma_z, 2 p_up - 1."""
        return 2.0 * self.p_up - 1.0


@dataclass(frozen=True)
class SDependent:
    """Outcome-dependent post-selection rule (the criticized one)."""


@dataclass(frozen=True)
class SIndependent:
    """Acceptance depending only on the coin's intrinsic state."""

    q_up: float
    q_down: float

    def __post_init__(self) -> None:
        for q in (self.q_up, self.q_down):
            if not (0.0 <= q <= 1.0):
                raise ValueError(f"acceptance probabilities must be in [0, 1], got {q}")


PostSelectionRule = SDependent | SIndependent


def _check_labels(sigma: int, s: int) -> None:
    if sigma not in (+1, -1):
        raise ValueError(f"spin label must be +-1, got {sigma}")
    if s not in (+1, -1):
        raise ValueError(f"outcome s must be +-1, got {s}")


def coin_outcome_prob(cfg: CoinTossConfig, sigma: int, s: int) -> float:
    """``P_up(s) = (1 + s lam)/2`` and ``P_down(s) = (1 - s lam)/2``."""
    _check_labels(sigma, s)
    return (1.0 + s * sigma * cfg.lam) / 2.0


def s_dependent_ps_prob(cfg: CoinTossConfig, sigma: int, s: int) -> float:
    """Outcome-dependent acceptance ``1 - delta/(1 + s sigma lam)``."""
    _check_labels(sigma, s)
    return 1.0 - cfg.delta / (1.0 + s * sigma * cfg.lam)


def acceptance_prob(
    cfg: CoinTossConfig, rule: PostSelectionRule, sigma: int, s: int
) -> float:
    if isinstance(rule, SDependent):
        return s_dependent_ps_prob(cfg, sigma, s)
    _check_labels(sigma, s)
    return rule.q_up if sigma == +1 else rule.q_down


def coin_m1_m2(
    cfg: CoinTossConfig, rule: PostSelectionRule
) -> tuple[float, float]:
    """Numerator and acceptance weight of the conditional mean (four-term sums)."""
    m1 = 0.0
    m2 = 0.0
    for sigma, weight in ((+1, cfg.p_up), (-1, 1.0 - cfg.p_up)):
        for s in (+1, -1):
            joint = weight * coin_outcome_prob(cfg, sigma, s) * acceptance_prob(
                cfg, rule, sigma, s
            )
            m1 += s * joint
            m2 += joint
    return m1, m2


def coin_pps_average(cfg: CoinTossConfig, rule: PostSelectionRule) -> float:
    """Conditional mean of s over accepted trials.

    Under the outcome-dependent rule this equals
    ``lam * a_bar / (1 - delta)`` identically.
    """
    m1, m2 = coin_m1_m2(cfg, rule)
    if m2 <= 1e-300:
        raise ZeroPpsProbability("no acceptance weight under this rule")
    return m1 / m2


def s_dependent_average_closed(cfg: CoinTossConfig) -> float:
    """Closed form of the outcome-dependent average, ``lam a_bar/(1 - delta)``."""
    return cfg.lam * cfg.a_bar / (1.0 - cfg.delta)
