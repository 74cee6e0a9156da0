"""Seeded Monte Carlo sampler for post-selected averages.

Every trial draws its randomness from a dedicated Philox counter block
derived from ``(seed, trial_index)``: trial ``i`` owns the four 64-bit
words of counter block ``i``.  Batches therefore produce identical
numbers no matter how the work is split or scheduled, and batch
statistics are merged in index order, so a run is reproducible
bit-for-bit from ``(seed, n_trials, batch_size)`` alone (in fact from
the seed alone).

A Gaussian trial samples the outcome x from the two-component mixture
``N(x) = p_up P_up(x) + p_down P_down(x)`` (the mixture label may be
drawn from the diagonals because N(x) never sees the coherences),
applies the Bayesian update, and accepts with the post-selection
probability of the updated state.  A coin-toss trial mirrors the same
scheme on the binary outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .bayes import UpdateMode
from .cointoss import CoinTossConfig, PostSelectionRule, SDependent, SIndependent
from .meter import MeterConfig
from .qubit import PureQubitState, QubitDensityMatrix, density_of

#: McConfig.mode value selecting the classical coin-toss sampler.
COIN_TOSS = "coin-toss"

_INV_2_53 = 2.0**-53
_U_FLOOR = 2.0**-54  # keeps ndtri away from the u = 0 singularity


@dataclass(frozen=True)
class McConfig:
    seed: int
    n_trials: int
    batch_size: int = 1 << 16
    mode: UpdateMode | str = UpdateMode.QUANTUM

    def __post_init__(self) -> None:
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    """Accepted-sample mean and its standard error; ``mean`` and
    ``std_err`` are NaN when nothing was accepted (reported, not fatal)."""

    mean: float
    std_err: float
    n_accepted: int
    n_total: int
    accept_rate: float


def _trial_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms in [0, 1) for trials [start, start + count), shape (count, 4)."""
    bits = np.random.Philox(key=seed, counter=start).random_raw(4 * count)
    return (bits >> np.uint64(11)).astype(np.float64).reshape(count, 4) * _INV_2_53


def _gaussian_accept_probs(
    rho: QubitDensityMatrix,
    rho_post: QubitDensityMatrix,
    cfg: MeterConfig,
    xs: np.ndarray,
    mode: UpdateMode,
) -> np.ndarray:
    """Vectorized ``Tr[rho_post rho_tilde(x)]`` for a batch of outcomes.

    Same arithmetic as bayes_update + selection_prob (asserted against
    the scalar path in the test suite).
    """
    pu = np.exp(-((xs - cfg.x0) ** 2) / (2.0 * cfg.D))
    pd = np.exp(-((xs + cfg.x0) ** 2) / (2.0 * cfg.D))
    norm = rho.p_up * pu + rho.p_down * pd
    probs = (rho_post.p_up * rho.p_up * pu + rho_post.p_down * rho.p_down * pd) / norm
    if mode is not UpdateMode.CLASSICAL_DIAGONAL:
        w = rho_post.coh.conjugate() * rho.coh
        if mode is UpdateMode.QUANTUM_DUAL_COUPLING and cfg.eps2 != 0.0:
            w = w * np.exp(-1j * cfg.eps2 * xs)
        probs = probs + 2.0 * np.real(w) * np.sqrt(pu * pd) / norm
    return np.clip(probs, 0.0, 1.0)


def _merge(batches: list[tuple[int, float, float]], n_total: int) -> McEstimate:
    """Fold per-batch (count, sum, sumsq) in index order."""
    n_acc = 0
    total = 0.0
    total_sq = 0.0
    for count, s, ss in batches:
        n_acc += count
        total += s
        total_sq += ss
    if n_acc == 0:
        return McEstimate(math.nan, math.nan, 0, n_total, 0.0)
    mean = total / n_acc
    if n_acc > 1:
        var = max(total_sq - n_acc * mean * mean, 0.0) / (n_acc - 1)
        std_err = math.sqrt(var / n_acc)
    else:
        std_err = math.nan
    return McEstimate(mean, std_err, n_acc, n_total, n_acc / n_total)


def run_gaussian_pps(
    rho: QubitDensityMatrix,
    post: PureQubitState,
    meter: MeterConfig,
    mc: McConfig,
) -> McEstimate:
    """Sample the post-selected mean outcome of the Gaussian meter."""
    if not isinstance(mc.mode, UpdateMode):
        raise ValueError(f"Gaussian sampler needs an UpdateMode, got {mc.mode!r}")
    rho_post = density_of(post)
    sqrt_d = math.sqrt(meter.D)
    batches: list[tuple[int, float, float]] = []
    for start in range(0, mc.n_trials, mc.batch_size):
        n = min(mc.batch_size, mc.n_trials - start)
        u = _trial_uniforms(mc.seed, start, n)
        centers = np.where(u[:, 0] < rho.p_up, meter.x0, -meter.x0)
        xs = centers + sqrt_d * ndtri(np.maximum(u[:, 1], _U_FLOOR))
        accepted = u[:, 2] < _gaussian_accept_probs(rho, rho_post, meter, xs, mc.mode)
        kept = xs[accepted]
        batches.append((kept.size, float(kept.sum()), float((kept * kept).sum())))
    return _merge(batches, mc.n_trials)


def run_coin_toss(
    cfg: CoinTossConfig, rule: PostSelectionRule, mc: McConfig
) -> McEstimate:
    """Sample the post-selected mean of the coin-toss outcome s."""
    batches: list[tuple[int, float, float]] = []
    for start in range(0, mc.n_trials, mc.batch_size):
        n = min(mc.batch_size, mc.n_trials - start)
        u = _trial_uniforms(mc.seed, start, n)
        sigma = np.where(u[:, 0] < cfg.p_up, 1.0, -1.0)
        s = np.where(u[:, 1] < (1.0 + sigma * cfg.lam) / 2.0, 1.0, -1.0)
        if isinstance(rule, SDependent):
            accept_p = 1.0 - cfg.delta / (1.0 + s * sigma * cfg.lam)
        elif isinstance(rule, SIndependent):
            accept_p = np.where(sigma > 0.0, rule.q_up, rule.q_down)
        else:
            raise TypeError(f"unknown post-selection rule {rule!r}")
        kept = s[u[:, 2] < accept_p]
        batches.append((kept.size, float(kept.sum()), float((kept * kept).sum())))
    return _merge(batches, mc.n_trials)
