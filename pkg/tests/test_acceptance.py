"""Acceptance criteria, one test each, at the stated tolerances."""

import math
import time
import warnings

import numpy as np
from scipy import integrate

from bergman_dual.batteries import embedding_battery, l1_battery, predual_battery, smooth_battery
from bergman_dual.conformal import DISK, HALFPLANE
from bergman_dual.fncore import Const, evaluate, shift_power
from bergman_dual.opsemi import (
    KINDS,
    apply_group,
    cayley_weighted,
    embedding_T,
    fit_embedding_scalar,
    generator_fd,
    l1_group,
    predual_group,
)
from bergman_dual.spaces import bloch_seminorm, l1_norm, l1_norm_disk, pairing, pulled_back
from bergman_dual.spectral import (
    DEFAULT_PROBES,
    ResolventQuery,
    eigen_candidate_check,
    resolvent_closed,
    resolvent_identity_residual,
    resolvent_laplace,
    resolvent_norm_probe,
    spectral_circle_check,
)
from bergman_dual.suites import SuiteConfig, embedding_probes, run_suite

LAMBDAS = (2, 1 + 1j, -2)
RESOLVENT_BATTERY = (shift_power(1j, -2), shift_power(2j, -2), shift_power(1 + 1j, -3), shift_power(0.5j, -1.5))


def test_criterion_01_bloch_transport(q, criterion):
    start = time.perf_counter()
    worst = 0.0
    for f in predual_battery():
        up = bloch_seminorm(f, HALFPLANE, q).value
        down = bloch_seminorm(pulled_back(f), DISK, q).value
        worst = max(worst, abs(up - 0.5 * down) / (1e-6 * (1 + up)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1 and elapsed < 30
    criterion(1, ok, f"worst error / tolerance = {worst:.3g}, {elapsed:.1f} s")
    assert ok


def _halfplane_l1_oracle(f, alpha):
    """Direct adaptive quadrature over the half-plane, no Cayley map involved."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = integrate.dblquad(lambda x, y: abs(evaluate(f, complex(x, y))) * y ** alpha,
                                0, np.inf, -np.inf, np.inf, epsabs=1e-12, epsrel=1e-10)[0]
    return val / math.pi


def test_criterion_02_l1_transport(q, criterion):
    worst = worst_oracle = 0.0
    for alpha in (0, 0.5, 1):
        for f in l1_battery():
            up = l1_norm(f, alpha, q).value
            down = l1_norm_disk(cayley_weighted(f, alpha), alpha, q).value
            oracle = _halfplane_l1_oracle(f, alpha)
            worst = max(worst, abs(up - 2.0 ** -alpha * down) / up)
            worst_oracle = max(worst_oracle, abs(oracle - 2.0 ** -alpha * down) / oracle)
    ok = worst <= 1e-6 and worst_oracle <= 1e-6
    criterion(2, ok, f"max relative error {worst:.3g}, against direct half-plane oracle {worst_oracle:.3g}")
    assert ok


def test_criterion_03_closed_form_norm(q, criterion):
    oracle = integrate.dblquad(lambda x, y: (x * x + (y + 1) ** 2) ** -2, 0, np.inf, -np.inf, np.inf,
                               epsabs=1e-12, epsrel=1e-12)[0] / math.pi
    value = l1_norm(shift_power(1j, -4), 0, q).value
    ok = abs(oracle - 0.25) <= 1e-6 and abs(value - 0.25) <= 1e-6
    criterion(3, ok, f"norm {value:.12f}, dense oracle {oracle:.12f}")
    assert ok


def test_criterion_04_isometry(q, criterion):
    worst = 0.0
    for g in predual_battery():
        base = bloch_seminorm(g, HALFPLANE, q).value
        for kind in KINDS:
            for t in (1, -1, 0.5, -0.5, 0.1, -0.1):
                moved = bloch_seminorm(apply_group(predual_group(kind, t), g), HALFPLANE, q).value
                worst = max(worst, abs(moved - base) / base)
    ok = worst <= 1e-6
    criterion(4, ok, f"max relative deviation {worst:.3g} over 120 cases")
    assert ok


def test_criterion_05_adjoint(q, criterion):
    worst = 0.0
    alpha = 0.0
    for kind in KINDS:
        for t in (0.5, 1.0):
            for f in l1_battery():
                for g in smooth_battery():
                    base = abs(pairing(g, f, alpha, q))
                    lhs = pairing(g, apply_group(l1_group(kind, t, alpha), f), alpha, q)
                    rhs = pairing(apply_group(predual_group(kind, t), g), f, alpha, q)
                    worst = max(worst, abs(lhs - rhs) / (1e-5 * (1 + base)))
    ok = worst <= 1
    criterion(5, ok, f"worst error / tolerance = {worst:.3g}")
    assert ok


def test_criterion_06_generator(q, criterion):
    orders = []
    for kind in KINDS:
        for g in smooth_battery():
            probe = generator_fd(predual_group(kind, 0), g, q=q)
            orders.append(probe.order)
    ok = all(0.9 <= o <= 1.1 for o in orders)
    criterion(6, ok, f"fitted orders in [{min(orders):.4f}, {max(orders):.4f}]")
    assert ok


def test_criterion_07_resolvent_identity(q, criterion):
    worst = max(resolvent_identity_residual(ResolventQuery(lam, h, DEFAULT_PROBES, q))
                for lam in LAMBDAS for h in RESOLVENT_BATTERY)
    ok = worst <= 1e-5
    criterion(7, ok, f"max residual {worst:.3g}")
    assert ok


def test_criterion_08_resolvent_cross_oracle(q, criterion):
    pts = np.array(DEFAULT_PROBES)
    worst = 0.0
    for lam in LAMBDAS:
        for h in RESOLVENT_BATTERY:
            closed = resolvent_closed(ResolventQuery(lam, h, DEFAULT_PROBES, q))
            worst = max(worst, float(np.max(np.abs(closed - resolvent_laplace(h, lam, pts, q)))))
    ok = worst <= 1e-8
    criterion(8, ok, f"max disagreement {worst:.3g}")
    assert ok


def test_criterion_09_spectral_circle(criterion):
    r = np.random.default_rng(9).normal(scale=20, size=1000)
    worst = max(spectral_circle_check(lam, r) for lam in (1, 2 + 3j, -0.5 + 1j))
    ok = worst <= 1e-12
    criterion(9, ok, f"max deviation {worst:.3g}")
    assert ok


def test_criterion_10_resolvent_norm_bound(q, criterion):
    details, ok = [], True
    for lam in LAMBDAS:
        rep = resolvent_norm_probe(lam, predual_battery(), q)
        ok &= rep.max_ratio <= rep.norm_bound + 1e-4
        details.append(f"lambda={lam}: max ratio {rep.max_ratio:.6f} <= {rep.norm_bound:g}")
    criterion(10, ok, "; ".join(details))
    assert ok


def test_criterion_11_eigen_rejection(q, criterion):
    rng = np.random.default_rng(11)
    rejected = 0
    worst = 0.0
    for _ in range(20):
        lam = complex(rng.choice([-1, 1]) * rng.uniform(0.2, 2), rng.uniform(-2, 2))
        c = complex(*rng.normal(size=2))
        resid, verdict = eigen_candidate_check(lam, c, q)
        worst = max(worst, resid / abs(c))
        rejected += not verdict.in_space
    ok = rejected == 20 and worst <= 1e-10
    criterion(11, ok, f"{rejected}/20 rejected, max eigen residual {worst:.3g}")
    assert ok


def test_criterion_12_embedding(q, criterion):
    spreads, gaps, consts = [], [], []
    probes = embedding_probes()
    for alpha in (0, 0.5):
        for t in (0.5, 1.0):
            consts.append(abs(embedding_T(Const(1), t, alpha, q)(np.array([0j]))[0] - 1 / (alpha + 1)))
            for f in embedding_battery():
                fit = fit_embedding_scalar(f, t, alpha, probes, q)
                spreads.append(fit.spread)
                gaps.append(abs(fit.c_star - fit.claimed) / fit.claimed)
    ok = max(spreads) <= 1e-2 and max(consts) <= 1e-6
    criterion(12, ok, f"max spread {max(spreads):.3g}, c* vs alpha+t+1 within {max(gaps):.3g}, "
                      f"T(1)(0) error {max(consts):.3g}")
    assert ok


def test_criterion_13_determinism(criterion):
    same = True
    for suite in ("transport", "membership", "growth", "embedding"):
        texts = [run_suite(SuiteConfig(suite, seed=3)).to_json() for _ in range(2)]
        same &= texts[0] == texts[1]
    criterion(13, same, "repeated runs byte-identical" if same else "reports differ between runs")
    assert same
