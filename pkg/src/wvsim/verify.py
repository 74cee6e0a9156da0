"""Self-contained oracle suite behind ``wv verify``.

Each check re-derives one closed-form claim by an independent route
(direct complex arithmetic, adaptive quadrature over the Bayesian joint
density, brute-force sums, or Monte Carlo) and reports the measured
error against a fixed tolerance.  ``fast=True`` shrinks the sample
counts and skips the Monte Carlo checks so the suite stays under a few
seconds.

``g_perturbation`` is a fault-injection hook: it biases the suppression
factor G used on the compact-formula side of the equivalence check, so
a nonzero value must make that check fail (used to prove the suite can
detect a broken formula).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .bayes import UpdateMode, bayes_update, outcome_density
from .cointoss import (
    CoinTossConfig,
    SDependent,
    SIndependent,
    coin_m1_m2,
    coin_pps_average,
    s_dependent_average_closed,
)
from .mc import COIN_TOSS, McConfig, run_coin_toss, run_gaussian_pps
from .meter import (
    MeterConfig,
    aav_approx_amplitude,
    coarse_grain,
    exact_meter_amplitude,
)
from .pps import (
    delta_m2,
    pps_average_classical,
    pps_average_closed,
    pps_average_compact,
    pps_average_dual,
    quadrature_pps_oracle,
)
from .qubit import (
    PureQubitState,
    QubitDensityMatrix,
    aav_weak_value,
    braket,
    density_of,
    make_state,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    error: float
    tolerance: float
    detail: str = ""


def _random_state(
    rng: np.random.Generator, pole_margin: float = 0.0
) -> PureQubitState:
    theta = rng.uniform(pole_margin, math.pi - pole_margin)
    phi = rng.uniform(-math.pi, math.pi)
    return make_state(theta, phi)


def _random_meter(rng: np.random.Generator, eps2: float = 0.0) -> MeterConfig:
    return MeterConfig(
        x0=rng.uniform(0.05, 1.5), D=rng.uniform(0.2, 4.0), eps2=eps2
    )


def _biased_g_config(cfg: MeterConfig, g_perturbation: float) -> MeterConfig:
    """Config whose G equals cfg.big_g + g_perturbation (fault injection)."""
    if g_perturbation == 0.0:
        return cfg
    g_target = min(max(cfg.big_g + g_perturbation, 0.0), 0.5 - 1e-9)
    g_equiv = -0.5 * math.log(1.0 - 2.0 * g_target)
    return MeterConfig(
        x0=2.0 * math.sqrt(g_equiv * cfg.D), D=cfg.D, eps2=cfg.eps2
    )


def _check_closed_vs_compact(rng, n, g_perturbation) -> CheckResult:
    # Pole margin 0.1: right at the Bloch poles the 1 - p_up element
    # representation cannot support a 1e-12 cross-route comparison.
    worst = 0.0
    for _ in range(n):
        pre = _random_state(rng, pole_margin=0.1)
        post = _random_state(rng, pole_margin=0.1)
        g = 10.0 ** rng.uniform(-6, 1)
        d = rng.uniform(0.2, 4.0)
        cfg = MeterConfig(x0=2.0 * math.sqrt(g * d), D=d)
        closed = pps_average_closed(density_of(pre), density_of(post), cfg)
        compact = pps_average_compact(pre, post, _biased_g_config(cfg, g_perturbation))
        scale = max(1.0, abs(closed.avg))
        worst = max(worst, abs(closed.avg - compact.avg) / scale)
    return CheckResult("closed_vs_compact_equivalence", worst <= 1e-12, worst, 1e-12)


def _check_quad(rng, n, which) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        pre, post = _random_state(rng), _random_state(rng)
        if which == "dual":
            cfg = _random_meter(rng, eps2=rng.uniform(-1.0, 1.0))
            value = pps_average_dual(pre, post, cfg).avg
            mode = UpdateMode.QUANTUM_DUAL_COUPLING
            rho, rho_post = density_of(pre), density_of(post)
        elif which == "classical":
            cfg = _random_meter(rng)
            rho = QubitDensityMatrix(rng.uniform(0.05, 0.95))
            rho_post = QubitDensityMatrix(rng.uniform(0.05, 0.95))
            value = pps_average_classical(rho, rho_post, cfg).avg
            mode = UpdateMode.CLASSICAL_DIAGONAL
        else:
            cfg = _random_meter(rng)
            rho, rho_post = density_of(pre), density_of(post)
            value = pps_average_closed(rho, rho_post, cfg).avg
            mode = UpdateMode.QUANTUM
        oracle = quadrature_pps_oracle(rho, rho_post, cfg, mode)
        worst = max(worst, abs(value - oracle) / max(1.0, abs(value)))
    return CheckResult(f"quadrature_vs_{which}", worst <= 1e-9, worst, 1e-9)


def _check_aav_trace(rng, n) -> CheckResult:
    # Overlap kept above 1e-3 and the difference scaled by max(1, |A_w|):
    # the trace denominator Tr[rho rho_post] is assembled from O(1)
    # matrix entries, so its round-off grows like 1/overlap^2 toward
    # orthogonality and a 1e-12 comparison loses meaning there.
    worst = 0.0
    for _ in range(n):
        pre, post = _random_state(rng), _random_state(rng)
        if abs(braket(post, pre)) ** 2 < 1e-3:
            continue
        aw = aav_weak_value(pre, post)
        r, f = density_of(pre).as_matrix(), density_of(post).as_matrix()
        sz = np.diag([1.0, -1.0]).astype(complex)
        trace_form = np.trace(sz @ r @ f) / np.trace(r @ f)
        worst = max(worst, abs(aw - trace_form) / max(1.0, abs(aw)))
    return CheckResult("aav_statevector_vs_trace", worst <= 1e-12, worst, 1e-12)


def _check_real_pair_identity(rng, n) -> CheckResult:
    # m1 = <post|sz|pre><pre|post>, m2 = |<post|pre>|^2; for real
    # coefficients these collapse to (a al)^2 - (b be)^2 and (a al + b be)^2.
    worst = 0.0
    for _ in range(n):
        t1, t2 = rng.uniform(0.0, math.pi, 2)
        pre = PureQubitState(math.cos(t1 / 2), math.sin(t1 / 2))
        post = PureQubitState(math.cos(t2 / 2), math.sin(t2 / 2))
        al, be = pre.up.real, pre.down.real
        a, b = post.up.real, post.down.real
        u = braket(post, pre)
        v = post.up.conjugate() * pre.up - post.down.conjugate() * pre.down
        m1 = v * u.conjugate()
        worst = max(worst, abs(m1.real - ((a * al) ** 2 - (b * be) ** 2)))
        worst = max(worst, abs(abs(u) ** 2 - (a * al + b * be) ** 2))
    return CheckResult("real_pair_m1_m2_identity", worst <= 1e-12, worst, 1e-12)


def _random_pure_density(rng: np.random.Generator) -> QubitDensityMatrix:
    """Pure density matrix built directly in (p, coh) form, so that the
    purity identity holds at full precision even at the poles."""
    p = rng.uniform(0.0, 1.0)
    phase = rng.uniform(-math.pi, math.pi)
    mag = math.sqrt(p * (1.0 - p))
    return QubitDensityMatrix(p, mag * complex(math.cos(phase), math.sin(phase)))


def _check_bayes_invariants(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        rho = _random_pure_density(rng)
        cfg = _random_meter(rng)
        x = rng.uniform(-3.0 * cfg.x0 - 3.0, 3.0 * cfg.x0 + 3.0)
        upd = bayes_update(rho, cfg, x)
        worst = max(worst, abs(upd.p_up + upd.p_down - 1.0))
        worst = max(worst, abs(abs(upd.coh) ** 2 - upd.p_up * upd.p_down))
        cls = bayes_update(rho, cfg, x, UpdateMode.CLASSICAL_DIAGONAL)
        worst = max(worst, abs(cls.p_up - upd.p_up))
    return CheckResult("bayes_trace_purity_diagonals", worst <= 1e-12, worst, 1e-12)


def _check_bayes_marginalization(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        rho = density_of(_random_state(rng))
        cfg = _random_meter(rng)
        lim = cfg.x0 + 12.0 * math.sqrt(cfg.D)

        def weighted(x, pick):
            upd = bayes_update(rho, cfg, x)
            return pick(upd) * outcome_density(rho, cfg, x)

        p_up_m = quad(lambda x: weighted(x, lambda u: u.p_up), -lim, lim,
                      epsabs=1e-13, epsrel=1e-11, limit=200)[0]
        coh_m = quad(lambda x: weighted(x, lambda u: u.coh.real), -lim, lim,
                     epsabs=1e-13, epsrel=1e-11, limit=200)[0]
        worst = max(worst, abs(p_up_m - rho.p_up))
        expected_coh = rho.coh.real * math.exp(-2.0 * cfg.g)
        worst = max(worst, abs(coh_m - expected_coh))
    return CheckResult("bayes_total_probability", worst <= 1e-9, worst, 1e-9)


def _check_delta_m2(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        pre, post = _random_state(rng), _random_state(rng)
        cfg = _random_meter(rng)
        res = pps_average_closed(density_of(pre), density_of(post), cfg)
        ident = abs(braket(post, pre)) ** 2 + delta_m2(
            density_of(pre), density_of(post), cfg
        )
        worst = max(worst, abs(res.m2 - ident))
    return CheckResult("delta_m2_identity", worst <= 1e-12, worst, 1e-12)


def _check_vanishing_wv(rng) -> CheckResult:
    # Bloch angles away from the poles: at the poles the derived
    # 1 - p_up representation loses the precision this check asserts.
    worst = 0.0
    ok = True
    for g in (0.01, 0.1, 1.0):
        for _ in range(20):
            t = rng.uniform(0.3, math.pi - 0.3)
            pre = PureQubitState(math.cos(t / 2), math.sin(t / 2))
            post = PureQubitState(math.sin(t / 2), -math.cos(t / 2))
            cfg = MeterConfig(x0=2.0 * math.sqrt(g), D=1.0)
            res = pps_average_compact(pre, post, cfg)
            worst = max(worst, abs(res.avg))
            ok = ok and res.m2 > 0.0
            ok = ok and abs(res.m2 - delta_m2(density_of(pre), density_of(post), cfg)) <= 1e-12
    return CheckResult("vanishing_wv_orthogonal", ok and worst <= 1e-12, worst, 1e-12)


def _cot_fixture(target: float = 20.0) -> tuple[PureQubitState, PureQubitState]:
    """Equal superposition pre-state and a rotated post-state with
    weak value exactly ``target`` (real)."""
    s2 = 1.0 / math.sqrt(2.0)
    chi = math.pi / 4.0 - math.atan(1.0 / target)
    return PureQubitState(s2, s2), PureQubitState(math.cos(chi), -math.sin(chi))


def _check_anomaly_window() -> CheckResult:
    pre, post = _cot_fixture(20.0)
    cfg = MeterConfig(x0=2.0 * math.sqrt(1e-4), D=1.0)
    ratio = pps_average_compact(pre, post, cfg).avg / cfg.x0
    return CheckResult(
        "anomaly_window_exists", ratio > 1.0, ratio, 1.0,
        detail=f"avg/x0 = {ratio:.6g} at g = 1e-4",
    )


def _check_classical_bound(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        cfg = _random_meter(rng)
        rho = QubitDensityMatrix(rng.uniform(0.0, 1.0))
        rho_post = QubitDensityMatrix(rng.uniform(0.0, 1.0))
        try:
            res = pps_average_classical(rho, rho_post, cfg)
        except ValueError:
            continue
        worst = max(worst, abs(res.avg) - cfg.x0)
    return CheckResult("classical_gaussian_bound", worst <= 1e-12, worst, 1e-12)


def _check_cointoss_closed(n_side) -> CheckResult:
    worst = 0.0
    for lam in np.linspace(0.01, 0.9, n_side):
        for delta in np.linspace(0.0, 0.95 * (1.0 - lam), n_side):
            for p_up in (0.0, 0.25, 0.5, 0.75, 1.0):
                cfg = CoinTossConfig(lam=lam, delta=delta, p_up=p_up)
                got = coin_pps_average(cfg, SDependent())
                want = s_dependent_average_closed(cfg)
                worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return CheckResult("cointoss_closed_form", worst <= 1e-14, worst, 1e-14)


def _check_cointoss_m1_m2(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        lam = rng.uniform(0.01, 0.95)
        cfg = CoinTossConfig(
            lam=lam, delta=rng.uniform(0.0, 1.0 - lam), p_up=rng.uniform(0.0, 1.0)
        )
        m1, m2 = coin_m1_m2(cfg, SDependent())
        worst = max(worst, abs(m2 - (1.0 - cfg.delta)))
        worst = max(worst, abs(m1 - cfg.lam * cfg.a_bar))
    return CheckResult("cointoss_m1_m2_identities", worst <= 1e-14, worst, 1e-14)


def _check_sindependent_bound(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        lam = rng.uniform(0.01, 0.95)
        cfg = CoinTossConfig(lam=lam, p_up=rng.uniform(0.0, 1.0))
        rule = SIndependent(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0))
        try:
            scaled = coin_pps_average(cfg, rule) / lam
        except ValueError:
            continue
        worst = max(worst, abs(scaled) - 1.0)
    return CheckResult("cointoss_sindependent_bound", worst <= 1e-12, worst, 1e-12)


def _check_coarse_grain_mean(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        cfg = _random_meter(rng)
        p_up = rng.uniform(0.0, 1.0)
        sbar = sum(
            s * (p_up * coarse_grain(cfg, +1, s) + (1 - p_up) * coarse_grain(cfg, -1, s))
            for s in (+1, -1)
        )
        worst = max(worst, abs(sbar - cfg.lambda_eff * (2 * p_up - 1)))
    return CheckResult("coarse_grain_mean_identity", worst <= 1e-14, worst, 1e-14)


def _check_meter_norm(rng, n) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        pre, post = _random_state(rng), _random_state(rng)
        cfg = _random_meter(rng)
        lim = cfg.x0 + 12.0 * math.sqrt(cfg.D)
        norm_sq = quad(
            lambda x: abs(exact_meter_amplitude(cfg, pre, post, x)) ** 2,
            -lim, lim, epsabs=1e-14, epsrel=1e-11, limit=200,
        )[0]
        m2 = pps_average_closed(density_of(pre), density_of(post), cfg).m2
        worst = max(worst, abs(norm_sq - m2) / max(1.0, m2))
    return CheckResult("meter_amplitude_norm_is_m2", worst <= 1e-9, worst, 1e-9)


def _check_approx_scaling() -> CheckResult:
    pre = PureQubitState(1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))
    post = PureQubitState(math.cos(math.pi / 8), -math.sin(math.pi / 8))

    def l2_err(x0):
        cfg = MeterConfig(x0=x0, D=1.0)
        lim = 25.0 * x0 + 14.0
        return math.sqrt(quad(
            lambda x: abs(
                exact_meter_amplitude(cfg, pre, post, x)
                - aav_approx_amplitude(cfg, pre, post, x)
            ) ** 2,
            -lim, lim, epsabs=1e-17, epsrel=1e-12, limit=300,
        )[0])

    coarse, fine = l2_err(0.1), l2_err(0.01)
    ratio = coarse / fine
    return CheckResult(
        "aav_approx_error_scaling", ratio >= 5.0, ratio, 5.0,
        detail=f"L2 error {coarse:.3g} -> {fine:.3g} when x0 shrinks 10x",
    )


def _check_weak_limit() -> CheckResult:
    pre, post = _cot_fixture(20.0)
    aw = aav_weak_value(pre, post).real

    def err(g):
        cfg = MeterConfig(x0=2.0 * math.sqrt(g), D=1.0)
        return abs(pps_average_compact(pre, post, cfg).avg / cfg.x0 - aw)

    shrink = err(1e-5) / err(1e-6)
    unit_err = abs(
        pps_average_compact(
            make_state(math.pi / 2, 0.0), make_state(0.0, 0.0), MeterConfig(2e-3, 1.0)
        ).avg / 2e-3 - 1.0
    )
    passed = shrink >= 8.0 and unit_err <= 1e-3
    return CheckResult(
        "weak_limit_recovers_aav", passed, unit_err, 1e-3,
        detail=f"error shrinks {shrink:.2f}x from g=1e-5 to 1e-6",
    )


def _check_big_g_shape() -> CheckResult:
    # Strict monotonicity below the float64 saturation point (g ~ 19),
    # saturation to 1/2 beyond it.
    gs = np.geomspace(1e-8, 15.0, 200)
    vals = np.array([MeterConfig(2.0 * math.sqrt(g), 1.0).big_g for g in gs])
    tail = MeterConfig(2.0 * math.sqrt(50.0), 1.0).big_g
    ok = (
        MeterConfig(0.0, 1.0).big_g == 0.0
        and np.all(np.diff(vals) > 0.0)
        and np.all((vals >= 0.0) & (vals < 0.5))
        and abs(tail - 0.5) < 1e-12
    )
    return CheckResult("suppression_factor_shape", bool(ok), float(abs(tail - 0.5)), 1e-12)


def _check_mc_gaussian(seed) -> CheckResult:
    pre, post = _cot_fixture(20.0)
    cfg = MeterConfig(x0=2.0 * math.sqrt(1e-2), D=1.0)
    analytic = pps_average_compact(pre, post, cfg)
    est = run_gaussian_pps(
        density_of(pre), post, cfg, McConfig(seed=seed, n_trials=400_000)
    )
    z = abs(est.mean - analytic.avg) / est.std_err
    band = 4.0 * math.sqrt(analytic.m2 * (1 - analytic.m2) / est.n_total)
    rate_ok = abs(est.accept_rate - analytic.m2) <= band
    return CheckResult(
        "mc_gaussian_consistency", z <= 4.0 and rate_ok, z, 4.0,
        detail=f"mean {est.mean:.6g} vs analytic {analytic.avg:.6g}",
    )


def _check_mc_cointoss(seed) -> CheckResult:
    cfg = CoinTossConfig(lam=0.2, delta=0.5, p_up=1.0)
    est = run_coin_toss(
        cfg, SDependent(), McConfig(seed=seed, n_trials=400_000, mode=COIN_TOSS)
    )
    want = s_dependent_average_closed(cfg)
    z = abs(est.mean - want) / est.std_err
    band = 4.0 * math.sqrt(cfg.delta * (1 - cfg.delta) / est.n_total)
    rate_ok = abs(est.accept_rate - (1 - cfg.delta)) <= band
    return CheckResult(
        "mc_cointoss_consistency", z <= 4.0 and rate_ok, z, 4.0,
        detail=f"mean {est.mean:.6g} vs closed {want:.6g}",
    )


def run_checks(
    fast: bool = False,
    g_perturbation: float = 0.0,
    seed: int = 20210907,
) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    n_pairs = 2000 if fast else 10_000
    n_quad = 20 if fast else 100
    n_small = 200 if fast else 1000
    checks = [
        _check_closed_vs_compact(rng, n_pairs, g_perturbation),
        _check_quad(rng, n_quad, "closed"),
        _check_quad(rng, n_quad, "dual"),
        _check_quad(rng, n_quad, "classical"),
        _check_aav_trace(rng, n_small),
        _check_real_pair_identity(rng, n_small),
        _check_bayes_invariants(rng, n_pairs),
        _check_bayes_marginalization(rng, 2 if fast else 5),
        _check_delta_m2(rng, n_small),
        _check_vanishing_wv(rng),
        _check_anomaly_window(),
        _check_classical_bound(rng, n_pairs),
        _check_cointoss_closed(10 if fast else 20),
        _check_cointoss_m1_m2(rng, n_small),
        _check_sindependent_bound(rng, n_pairs),
        _check_coarse_grain_mean(rng, n_small),
        _check_meter_norm(rng, 3 if fast else 10),
        _check_approx_scaling(),
        _check_weak_limit(),
        _check_big_g_shape(),
    ]
    if not fast:
        checks.append(_check_mc_gaussian(seed))
        checks.append(_check_mc_cointoss(seed))
    return checks
