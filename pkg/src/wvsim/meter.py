"""Gaussian meter model: outcome densities, wavepacket amplitudes, and
the coarse-grained (sign-of-x) two-outcome reduction.

The meter wavepacket is ``Phi(x) = (2 pi D)^{-1/4} exp[-x^2/(4D)]``, so
the outcome density for a definite spin is a Gaussian of variance D
centered at ``+x0`` (up) or ``-x0`` (down).  The dimensionless strength
is ``g = x0^2 / (4 D)``; the derived suppression factor
``G = (1 - e^{-2g}) / 2`` controls how far conditional averages deviate
from the bare weak value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .qubit import OVERLAP_FLOOR, PureQubitState, aav_weak_value, braket


def _check_sigma(sigma: int) -> int:
    if sigma not in (+1, -1):
        raise ValueError(f"spin label must be +1 (up) or -1 (down), got {sigma}")
    return sigma


def _check_s(s: int) -> int:
    if s not in (+1, -1):
        raise ValueError(f"coarse outcome s must be +1 or -1, got {s}")
    return s


@dataclass(frozen=True)
class MeterConfig:
    """Meter parameters: shift magnitude ``x0``, wavepacket variance
    parameter ``D``, and optional position-coupling strength ``eps2``
    (units of inverse length; 0 selects the plain momentum coupling,
    for which ``eps1 == x0``)."""

    x0: float
    D: float
    eps2: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x0) and math.isfinite(self.D) and math.isfinite(self.eps2)):
            raise ValueError("meter parameters must be finite")
        if self.D <= 0.0:
            raise ValueError(f"D must be positive, got {self.D}")
        if self.x0 < 0.0:
            raise ValueError(f"x0 must be non-negative, got {self.x0}")

    @property
    def xbar_up(self) -> float:
        return +self.x0

    @property
    def xbar_down(self) -> float:
        return -self.x0

    @property
    def g(self) -> float:
        """Dimensionless measurement strength (xbar_up - xbar_down)^2 / (16 D)."""
        return (self.xbar_up - self.xbar_down) ** 2 / (16.0 * self.D)

    @property
    def big_g(self) -> float:
        """Suppression factor G = (1 - e^{-2g}) / 2, in [0, 0.5)."""
        return -math.expm1(-2.0 * self.g) / 2.0

    @property
    def lambda_eff(self) -> float:
        """Coarse-grained strength erf(x0 / sqrt(2 D)) in [0, 1)."""
        return math.erf(self.x0 / math.sqrt(2.0 * self.D))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Gaussian outcome density of one spin branch."""

    center: float
    variance: float

    def pdf(self, x: float) -> float:
        return math.exp(-((x - self.center) ** 2) / (2.0 * self.variance)) / math.sqrt(
            2.0 * math.pi * self.variance
        )


def outcome_distribution(cfg: MeterConfig, sigma: int) -> OutcomeDistribution:
    return OutcomeDistribution(center=_check_sigma(sigma) * cfg.x0, variance=cfg.D)


def p_sigma(cfg: MeterConfig, sigma: int, x: float) -> float:
    """Outcome density ``(2 pi D)^{-1/2} exp[-(x - xbar_sigma)^2 / (2D)]``."""
    c = _check_sigma(sigma) * cfg.x0
    return math.exp(-((x - c) ** 2) / (2.0 * cfg.D)) / math.sqrt(2.0 * math.pi * cfg.D)


def wavepacket(cfg: MeterConfig, x: float) -> float:
    """Meter amplitude ``Phi(x) = (2 pi D)^{-1/4} exp[-x^2/(4D)]``."""
    return (2.0 * math.pi * cfg.D) ** -0.25 * math.exp(-(x * x) / (4.0 * cfg.D))


def exact_meter_amplitude(
    cfg: MeterConfig, pre: PureQubitState, post: PureQubitState, x: float
) -> complex:
    """Post-selected meter amplitude at outcome ``x``, exact at any strength.

    The impulsive momentum coupling displaces the wavepacket by +-x0 on
    the two spin branches, so the amplitude is the two-branch sum
    ``conj(a) alpha Phi(x - x0) + conj(b) beta Phi(x + x0)``.
    """
    return (
        post.up.conjugate() * pre.up * wavepacket(cfg, x - cfg.x0)
        + post.down.conjugate() * pre.down * wavepacket(cfg, x + cfg.x0)
    )


def aav_approx_amplitude(
    cfg: MeterConfig,
    pre: PureQubitState,
    post: PureQubitState,
    x: float,
    overlap_floor: float = OVERLAP_FLOOR,
) -> complex:
    """Weak-coupling approximation ``<post|pre> Phi(x - x0 A_w)``.

    The square in the Gaussian exponent is taken in complex arithmetic,
    with the full complex weak value as the shift.  Undefined (raises
    :class:`~wvsim.errors.OverlapTooSmall`) at orthogonal selection.
    """
    aw = aav_weak_value(pre, post, overlap_floor)
    shift = x - cfg.x0 * aw
    return (
        braket(post, pre)
        * (2.0 * math.pi * cfg.D) ** -0.25
        * cmath.exp(-(shift * shift) / (4.0 * cfg.D))
    )


def coarse_grain(
    cfg: MeterConfig, sigma: int, s: int, lam: float | None = None
) -> float:
    """Probability that branch ``sigma`` lands in the half-line labeled ``s``.

    ``s = +1`` collects x > 0 and ``s = -1`` collects x < 0 (the x = 0
    tie is measure-zero and assigned to +1), giving
    ``P_sigma(s) = (1 + s sigma lambda)/2`` with
    ``lambda = erf(x0/sqrt(2D))``.  Passing ``lam`` overrides the
    meter-derived strength for pure coin-toss runs.
    """
    _check_sigma(sigma)
    _check_s(s)
    lam_eff = cfg.lambda_eff if lam is None else lam
    if not (0.0 <= lam_eff <= 1.0):
        raise ValueError(f"lambda must be in [0, 1], got {lam_eff}")
    return (1.0 + s * sigma * lam_eff) / 2.0
