"""Outcome-conditioned state update (quantum Bayesian rule).

Diagonals follow the classical Bayes formula; the coherence is fixed by
purity preservation, ``coh -> coh * sqrt(P_up P_down) / N``.  The
dual-coupling variant additionally imprints a phase ``e^{-i eps2 x}`` on
the up-down coherence (the sign convention is chosen so that the
conditional average acquires a ``+eps2``-proportional Im(A_w) term; see
:mod:`wvsim.pps`).  The classical variant keeps the Bayesian diagonals
and drops the coherence entirely.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum

from .meter import MeterConfig, p_sigma
from .qubit import QubitDensityMatrix, PureQubitState, density_of


class UpdateMode(Enum):
    QUANTUM = "quantum"
    QUANTUM_DUAL_COUPLING = "dual"
    CLASSICAL_DIAGONAL = "classical"


def outcome_density(rho: QubitDensityMatrix, cfg: MeterConfig, x: float) -> float:
    """Pre-selection outcome density ``N(x) = p_up P_up(x) + p_down P_down(x)``."""
    return rho.p_up * p_sigma(cfg, +1, x) + rho.p_down * p_sigma(cfg, -1, x)


def bayes_update(
    rho: QubitDensityMatrix,
    cfg: MeterConfig,
    x: float,
    mode: UpdateMode = UpdateMode.QUANTUM,
) -> QubitDensityMatrix:
    """Update ``rho`` conditioned on meter outcome ``x`` (out of place)."""
    if math.isnan(x):
        raise ValueError("outcome x must not be NaN")
    pu = p_sigma(cfg, +1, x)
    pd = p_sigma(cfg, -1, x)
    norm = rho.p_up * pu + rho.p_down * pd
    if norm <= 0.0:
        raise ValueError(f"outcome density underflowed at x = {x}")
    p_up_new = rho.p_up * pu / norm
    if mode is UpdateMode.CLASSICAL_DIAGONAL:
        coh_new: complex = 0.0
    else:
        coh_new = rho.coh * math.sqrt(pu * pd) / norm
        if mode is UpdateMode.QUANTUM_DUAL_COUPLING:
            coh_new *= cmath.exp(-1j * cfg.eps2 * x)
        # Round-off in the likelihood ratio can push a pure state a few
        # ulps outside the positivity disc; project the magnitude back.
        limit = math.sqrt(max(p_up_new * (1.0 - p_up_new), 0.0))
        mag = abs(coh_new)
        if mag > limit:
            coh_new = coh_new * (limit / mag) if mag > 0.0 else 0.0
    return QubitDensityMatrix(p_up_new, coh_new)


def selection_prob(rho_updated: QubitDensityMatrix, rho_post: QubitDensityMatrix) -> float:
    """Trace overlap ``Tr[rho_post rho_updated]``, clipped to [0, 1]."""
    p = (
        rho_post.p_up * rho_updated.p_up
        + rho_post.p_down * rho_updated.p_down
        + 2.0 * (rho_post.coh.conjugate() * rho_updated.coh).real
    )
    return min(max(p, 0.0), 1.0)


def post_select_prob(rho_updated: QubitDensityMatrix, post: PureQubitState) -> float:
    """Success probability ``<post|rho_updated|post>``."""
    return selection_prob(rho_updated, density_of(post))
