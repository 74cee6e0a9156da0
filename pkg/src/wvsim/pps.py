"""Closed-form post-selected conditional averages and their quadrature oracle.

The conditional mean of the meter outcome given successful post-selection
is ``M1 / M2`` with

    M1 = p_phi_up p_up xbar_up + p_phi_down p_down xbar_down + 2 Re(w E1)
    M2 = p_phi_up p_up + p_phi_down p_down + 2 Re(w E0)

where ``w = conj(rho_post.coh) * rho.coh`` and ``E0``, ``E1`` are the
zeroth and first moments of ``sqrt(P_up P_down) e^{-i eps2 x}`` over the
outcome axis.  For the plain coupling (eps2 = 0, centers +-x0) this
reduces to the familiar two-term Gaussian-overlap result, and for pure
selection states to the compact weak-value form

    <x> / x0 = Re(A_w) / (1 + G (|A_w|^2 - 1)),   G = (1 - e^{-2g}) / 2.

With the position coupling switched on the same algebra gives the exact
dual form

    <x> = [x0 Re(A_w) + eps2 D E Im(A_w)] / (1 + G_E (|A_w|^2 - 1)),

with ``E = e^{-2g - eps2^2 D / 2}`` and ``G_E = (1 - E)/2``; the
imaginary part of the weak value becomes observable with an effective
gain ``eps2 * D * E`` that tends to ``eps2 * D`` in the weak limit.

Every closed form here is checked against :func:`quadrature_pps_oracle`,
which integrates the joint density built directly from the Bayesian
update and knows nothing about the algebra above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .bayes import UpdateMode, bayes_update, outcome_density, selection_prob
from .errors import (
    NonDiagonalInput,
    OverlapTooSmall,
    QuadratureNotConverged,
    ZeroPpsProbability,
)
from .meter import MeterConfig
from .qubit import (
    OVERLAP_FLOOR,
    PureQubitState,
    QubitDensityMatrix,
    braket,
    density_of,
)

#: Underflow guard on M2, far below any physical post-selection
#: probability (disturbance keeps M2 > 0 whenever g > 0).
M2_FLOOR = 1e-300


@dataclass(frozen=True)
class PpsResult:
    """One post-selected configuration: numerator ``m1`` (length units),
    acceptance probability ``m2``, conditional average ``avg = m1/m2``,
    the AAV weak value (None when selection is orthogonal), and the
    strength parameters of the meter."""

    m1: float
    m2: float
    avg: float
    aav: complex | None
    g: float
    big_g: float
    classical: bool = False


def _cross_moments(cfg: MeterConfig) -> tuple[complex, complex]:
    """Moments E0 = int sqrt(P_up P_down) e^{-i eps2 x} dx and
    E1 = int x sqrt(P_up P_down) e^{-i eps2 x} dx.

    Written for general branch centers (xu, xd); with the symmetric
    +-x0 centers the midpoint c vanishes and E0 is real.
    """
    xu, xd = cfg.xbar_up, cfg.xbar_down
    c = 0.5 * (xu + xd)
    half_gap = 0.5 * (xu - xd)
    damp = math.exp(-(half_gap**2) / (2.0 * cfg.D))  # = e^{-2g}
    e0 = damp * math.exp(-(cfg.eps2**2) * cfg.D / 2.0) * complex(
        math.cos(cfg.eps2 * c), -math.sin(cfg.eps2 * c)
    )
    e1 = (c - 1j * cfg.eps2 * cfg.D) * e0
    return e0, e1


def _aav_trace(
    rho: QubitDensityMatrix, rho_post: QubitDensityMatrix
) -> complex | None:
    """Weak value in trace form, Tr[sigma_z rho rho_post] / Tr[rho rho_post].

    Returns None when the denominator is below the overlap floor.
    """
    w = rho_post.coh.conjugate() * rho.coh
    denom = rho_post.p_up * rho.p_up + rho_post.p_down * rho.p_down + 2.0 * w.real
    if denom <= OVERLAP_FLOOR:
        return None
    numer = (
        rho_post.p_up * rho.p_up
        - rho_post.p_down * rho.p_down
        + 2j * w.imag
    )
    return numer / denom


def _closed_m1_m2(
    rho: QubitDensityMatrix, rho_post: QubitDensityMatrix, cfg: MeterConfig
) -> tuple[float, float]:
    e0, e1 = _cross_moments(cfg)
    w = rho_post.coh.conjugate() * rho.coh
    diag_up = rho_post.p_up * rho.p_up
    diag_down = rho_post.p_down * rho.p_down
    m1 = diag_up * cfg.xbar_up + diag_down * cfg.xbar_down + 2.0 * (w * e1).real
    m2 = diag_up + diag_down + 2.0 * (w * e0).real
    return m1, m2


def pps_average_closed(
    rho: QubitDensityMatrix,
    rho_post: QubitDensityMatrix,
    cfg: MeterConfig,
    m2_floor: float = M2_FLOOR,
) -> PpsResult:
    """Exact conditional average from the density-matrix elements.

    Honors ``cfg.eps2`` (dual coupling) transparently; with eps2 = 0 it
    is the plain finite-strength result.
    """
    m1, m2 = _closed_m1_m2(rho, rho_post, cfg)
    if m2 <= m2_floor:
        raise ZeroPpsProbability(f"M2 = {m2!r} below floor {m2_floor!r}")
    return PpsResult(
        m1=m1,
        m2=m2,
        avg=m1 / m2,
        aav=_aav_trace(rho, rho_post),
        g=cfg.g,
        big_g=cfg.big_g,
    )


def _compact_core(
    pre: PureQubitState,
    post: PureQubitState,
    cfg: MeterConfig,
    overlap_floor: float,
) -> PpsResult:
    u = braket(post, pre)
    v = post.up.conjugate() * pre.up - post.down.conjugate() * pre.down
    overlap_sq = abs(u) ** 2
    e_damp = math.exp(-2.0 * cfg.g - cfg.eps2**2 * cfg.D / 2.0)
    g_eff = (1.0 - e_damp) / 2.0
    if overlap_sq <= overlap_floor:
        # Orthogonal selection: the weak-value route is an indeterminate
        # inf/inf form, but the closed M1/M2 route stays finite as long
        # as the measurement disturbs the state (e_damp < 1).
        if e_damp >= 1.0:
            raise OverlapTooSmall(
                "orthogonal selection with zero measurement strength"
            )
        res = pps_average_closed(density_of(pre), density_of(post), cfg)
        return PpsResult(
            m1=res.m1, m2=res.m2, avg=res.avg, aav=None, g=res.g, big_g=res.big_g
        )
    # avg = [x0 Re(A_w) + eps2 D E Im(A_w)] / (1 + G_E (|A_w|^2 - 1)) with
    # A_w = v/u, evaluated with numerator and denominator multiplied by
    # |u|^2 so that near-orthogonal selection does not amplify round-off
    # through the divergent |A_w|^2 intermediate.
    cross = v * u.conjugate()  # = |u|^2 A_w
    m1 = cfg.x0 * cross.real + cfg.eps2 * cfg.D * e_damp * cross.imag
    m2 = overlap_sq * (1.0 - g_eff) + abs(v) ** 2 * g_eff
    return PpsResult(
        m1=m1, m2=m2, avg=m1 / m2, aav=v / u, g=cfg.g, big_g=cfg.big_g
    )


def pps_average_compact(
    pre: PureQubitState,
    post: PureQubitState,
    cfg: MeterConfig,
    overlap_floor: float = OVERLAP_FLOOR,
) -> PpsResult:
    """Compact weak-value form for pure selection states (plain coupling).

    ``avg / x0 = Re(A_w) / (1 + G (|A_w|^2 - 1))``; agrees with
    :func:`pps_average_closed` on the same inputs.  Orthogonal selection
    falls back to the closed route and yields avg = 0 whenever g > 0.
    """
    if cfg.eps2 != 0.0:
        raise ValueError("compact form assumes eps2 = 0; use pps_average_dual")
    return _compact_core(pre, post, cfg, overlap_floor)


def pps_average_dual(
    pre: PureQubitState,
    post: PureQubitState,
    cfg: MeterConfig,
    overlap_floor: float = OVERLAP_FLOOR,
) -> PpsResult:
    """Dual-coupling conditional average, exact at finite strength.

    ``avg = [eps1 Re(A_w) + eps2 D E Im(A_w)] / (1 + G_E (|A_w|^2 - 1))``
    with ``eps1 = x0``, ``E = e^{-2g - eps2^2 D/2}``, ``G_E = (1-E)/2``.
    Reduces to :func:`pps_average_compact` at eps2 = 0 and to the
    leading-order numerator ``eps1 Re(A_w) + eps2 D Im(A_w)`` in the
    weak limit.
    """
    return _compact_core(pre, post, cfg, overlap_floor)


def delta_m2(
    rho: QubitDensityMatrix, rho_post: QubitDensityMatrix, cfg: MeterConfig
) -> float:
    """Disturbance correction to the post-selection probability.

    ``delta M2 = 2 Re(conj(rho_post.coh) rho.coh) (e^{-2g} - 1)``; for
    pure states ``M2 = |<post|pre>|^2 + delta_m2`` exactly.
    """
    w = rho_post.coh.conjugate() * rho.coh
    return 2.0 * w.real * math.expm1(-2.0 * cfg.g)


def pps_average_classical(
    rho_diag: QubitDensityMatrix,
    rho_post_diag: QubitDensityMatrix,
    cfg: MeterConfig,
    m2_floor: float = M2_FLOOR,
) -> PpsResult:
    """Classical (coherence-free) counterpart of the conditional average.

    Requires both inputs diagonal; the result is a weighted mean of the
    branch centers, so ``|avg| <= x0`` always.
    """
    if not (rho_diag.is_diagonal and rho_post_diag.is_diagonal):
        raise NonDiagonalInput("classical average requires diagonal inputs")
    diag_up = rho_post_diag.p_up * rho_diag.p_up
    diag_down = rho_post_diag.p_down * rho_diag.p_down
    m2 = diag_up + diag_down
    if m2 <= m2_floor:
        raise ZeroPpsProbability("both branch products vanish")
    m1 = (diag_up - diag_down) * cfg.x0
    return PpsResult(
        m1=m1,
        m2=m2,
        avg=m1 / m2,
        aav=_aav_trace(rho_diag, rho_post_diag),
        g=cfg.g,
        big_g=cfg.big_g,
        classical=True,
    )


def quadrature_pps_oracle(
    rho: QubitDensityMatrix,
    rho_post: QubitDensityMatrix,
    cfg: MeterConfig,
    mode: UpdateMode = UpdateMode.QUANTUM,
    rel_tol: float = 1e-10,
    m2_floor: float = M2_FLOOR,
) -> float:
    """Conditional average by direct numerical integration.

    Integrates ``x -> N(x) * Tr[rho_post rho_tilde(x)]`` with the joint
    density assembled from :func:`~wvsim.bayes.bayes_update`, i.e. with
    no reference to any closed form above.  Serves as the independent
    oracle for all of them.
    """

    def joint(x: float) -> float:
        return outcome_density(rho, cfg, x) * selection_prob(
            bayes_update(rho, cfg, x, mode), rho_post
        )

    half_width = cfg.x0 + 12.0 * math.sqrt(cfg.D)
    breaks = [cfg.xbar_down, 0.0, cfg.xbar_up]
    with warnings.catch_warnings():
        # convergence is judged by the explicit abserr checks below
        warnings.simplefilter("ignore", IntegrationWarning)
        m2, m2_err = quad(
            joint, -half_width, half_width,
            epsabs=1e-16, epsrel=rel_tol / 10.0, limit=200, points=breaks,
        )
        m1, m1_err = quad(
            lambda x: x * joint(x), -half_width, half_width,
            epsabs=1e-16, epsrel=rel_tol / 10.0, limit=200, points=breaks,
        )
    if m2 <= m2_floor:
        raise ZeroPpsProbability(f"quadrature M2 = {m2!r}")
    if m2_err > max(1e-13, abs(m2) * rel_tol) or m1_err > max(
        1e-13, abs(m1) * rel_tol, abs(m2) * rel_tol
    ):
        raise QuadratureNotConverged(
            f"estimated errors m1 {m1_err!r}, m2 {m2_err!r} exceed tolerance"
        )
    return m1 / m2
