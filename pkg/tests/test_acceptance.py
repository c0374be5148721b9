"""Acceptance suite: every exit criterion, at its stated tolerance.

Each test prints one `[PASS]`/`[FAIL]` line (straight to the terminal,
bypassing capture), so a plain `pytest tests/test_acceptance.py` shows the
scoreboard.  Expected values marked as derived were recomputed from
independent oracles (full-chain enumeration, quadrature, Monte Carlo)
before being frozen here.
"""

import math
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from oracles import conditional_moment_bruteforce, stationary_moments_bruteforce
from twoisland.beta import BetaParams, beta_moment, beta_params_from_chain
from twoisland.bounds import (
    polynomial_h_norms,
    sb_beta_bound,
    sb_ti_bound,
    stein_factors,
    wf_beta_bound,
    wf_ti_bound,
)
from twoisland.chains import ChainParams, ModelKind
from twoisland.diffusion import (
    TIParams,
    limit_moments_large_c,
    map_chain_to_ti,
    ti_stationary_moments,
)
from twoisland.dual import (
    IntegralKind,
    UrnRates,
    simulate_dual_absorption,
    urn_integral_closed_form,
    urn_integral_quadrature,
)
from twoisland.moments import (
    exact_stationary_moments,
    leading_order_exy2,
    moment_basis,
    transfer_matrix,
)
from twoisland.regimes import ScalingRegime

# dominance comparisons allow double-precision roundoff in exactly-tight cases
DOM_ATOL = 1e-13


def _report(capsys, label: str, ok: bool, detail: str):
    with capsys.disabled():
        print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


def _dominated(dist: float, total: float) -> bool:
    return dist <= total * (1 + 1e-12) + DOM_ATOL


def test_criterion_1_enumeration_oracle(capsys):
    """Transfer rows and stationary moments vs full-chain enumeration."""
    started = time.time()
    worst_row = 0.0
    worst_moment = 0.0
    for (N, M, c), kind in product(((3, 2, 1), (4, 3, 1)),
                                   (ModelKind.TWO_ISLAND_WF, ModelKind.SEED_BANK)):
        if kind is ModelKind.TWO_ISLAND_WF:
            params = ChainParams(N=N, M=M, c=c, p1=0.05, p2=0.08, q1=0.03, q2=0.06,
                                 kind=kind)
        else:
            params = ChainParams(N=N, M=M, c=c, p1=0.05, p2=0.08, kind=kind)
        transfer = transfer_matrix(params, 3)
        for (n, m) in moment_basis(3):
            row = transfer.rows[(n, m)]
            for i in range(N + 1):
                for j in range(M + 1):
                    got = row.evaluate(i / N, j / M)
                    ref = conditional_moment_bruteforce(params, i, j, n, m)
                    worst_row = max(worst_row, abs(got - ref))
        exact = exact_stationary_moments(params, 3)
        ref_moments = stationary_moments_bruteforce(params, 3)
        for idx, v in ref_moments.items():
            worst_moment = max(worst_moment, abs(exact[idx] - v))
    elapsed = time.time() - started
    ok = worst_row <= 1e-12 and worst_moment <= 1e-12 and elapsed < 1.0
    _report(capsys, "criterion 1 (enumeration oracle)", ok,
            f"max row err {worst_row:.2e}, max moment err {worst_moment:.2e}, "
            f"{elapsed:.2f}s")


def test_criterion_2_integral_certification(capsys):
    """Closed-form occupancy integrals vs quadrature; one-island identities."""
    started = time.time()
    rng = np.random.default_rng(20250809)
    worst = 0.0
    for _ in range(50):
        rates = UrnRates(*rng.uniform(0.1, 3.0, 4))
        for kind in IntegralKind:
            closed = urn_integral_closed_form(kind, rates)
            quad = urn_integral_quadrature(kind, rates, tol=1e-10)
            worst = max(worst, abs(closed - quad) / abs(closed))
    identities_exact = True
    a = Fraction(7, 4)
    rates = UrnRates(a, a, Fraction(0), Fraction(0))
    for n in (1, 2, 3, 4, 6):
        f = stein_factors(n, 0, rates)
        identities_exact &= f.dx == Fraction(n) / a
        identities_exact &= f.dxx == Fraction(n * (n - 1)) / (2 * a)
        identities_exact &= f.dxxx == Fraction(n * (n - 1) * (n - 2)) / (3 * a)
    elapsed = time.time() - started
    ok = worst <= 1e-8 and identities_exact and elapsed < 10.0
    _report(capsys, "criterion 2 (integral certification)", ok,
            f"50 draws x {len(IntegralKind)} kinds, max rel err {worst:.2e}, "
            f"one-island identities exact: {identities_exact}, {elapsed:.2f}s")


def test_criterion_3_duality_vs_solver(capsys):
    """Dual-absorption Monte Carlo vs the moment solver; Beta reduction."""
    started = time.time()
    rng = np.random.default_rng(777)
    reps = 1_000_000
    worst_z = 0.0
    for _ in range(5):
        raw = rng.uniform(0.2, 2.0, 6)
        alpha, beta = rng.uniform(0.5, 2.0, 2)
        ti = TIParams(*raw, alpha=alpha, beta=beta)
        table = ti_stationary_moments(ti, 2)
        for (n, m) in ((1, 0), (0, 1), (1, 1), (2, 0)):
            est = simulate_dual_absorption(n, m, ti, reps, rng)
            worst_z = max(worst_z, abs(est.estimate - table[(n, m)]) / est.std_error)
    # decoupled islands: X-marginal is Beta(2 a1/alpha, 2 a2/alpha)
    worst_beta = 0.0
    for alpha, a1, a2 in ((2.0, 1.3, 0.7), (1.5, 0.9, 1.8)):
        ti = TIParams(a1=a1, a2=a2, b1=1.0, b2=1.0, c1=0.0, c2=0.0,
                      alpha=alpha, beta=2.0)
        table = ti_stationary_moments(ti, 6)
        ref = BetaParams(2 * a1 / alpha, 2 * a2 / alpha)
        for k in range(7):
            worst_beta = max(worst_beta, abs(table[(k, 0)] - beta_moment(ref, k)))
    elapsed = time.time() - started
    ok = worst_z <= 3.0 and worst_beta <= 1e-12 and elapsed < 60.0
    _report(capsys, "criterion 3 (duality Monte Carlo)", ok,
            f"5 param sets x 4 monomials x 1e6 reps, worst |z| {worst_z:.2f}, "
            f"Beta reduction err {worst_beta:.1e}, {elapsed:.1f}s")


def _dominance_grid(kind: ModelKind):
    hats = (1.0, 2.0)
    for N in (20, 50, 100, 200):
        for M in (N, N // 2):
            for c in (1, 2, 5):
                if kind is ModelKind.TWO_ISLAND_WF:
                    for p1h, p2h, q1h, q2h in product(hats, repeat=4):
                        yield ChainParams(N=N, M=M, c=c, p1=p1h / N, p2=p2h / N,
                                          q1=q1h / N, q2=q2h / N, kind=kind)
                else:
                    for p1h, p2h in product(hats, repeat=2):
                        yield ChainParams(N=N, M=M, c=c, p1=p1h / N, p2=p2h / N,
                                          kind=kind)


def test_criterion_4_ti_bound_dominance(capsys):
    """Exact moment distance to the diffusion never exceeds the bound."""
    started = time.time()
    test_fns = ((1, 0), (0, 1), (1, 1), (2, 0))
    checked = 0
    violations = 0
    worst_margin = math.inf
    for kind in (ModelKind.TWO_ISLAND_WF, ModelKind.SEED_BANK):
        bound_fn = wf_ti_bound if kind is ModelKind.TWO_ISLAND_WF else sb_ti_bound
        for params in _dominance_grid(kind):
            table = exact_stationary_moments(params, 2)
            ti, _ = map_chain_to_ti(params)
            ti_table = ti_stationary_moments(ti, 2)
            for (n, m) in test_fns:
                dist = abs(table[(n, m)] - ti_table[(n, m)])
                total = bound_fn(params, n, m).total
                checked += 1
                if not _dominated(dist, total):
                    violations += 1
                worst_margin = min(worst_margin, total - dist)
    elapsed = time.time() - started
    ok = violations == 0 and elapsed < 30.0
    _report(capsys, "criterion 4 (diffusion-bound dominance)", ok,
            f"{checked} checks, {violations} violations, smallest margin "
            f"{worst_margin:.3e}, {elapsed:.1f}s")


def test_criterion_5_beta_bound_dominance(capsys):
    """Weighted-average distance to the beta law never exceeds the bound."""
    started = time.time()
    checked = 0
    violations = 0
    worst_margin = math.inf
    for kind in (ModelKind.TWO_ISLAND_WF, ModelKind.SEED_BANK):
        bound_fn = wf_beta_bound if kind is ModelKind.TWO_ISLAND_WF else sb_beta_bound
        for params in _dominance_grid(kind):
            table = exact_stationary_moments(params, 4)
            bp = beta_params_from_chain(params)
            exy2 = table.exy2()
            N, M = params.N, params.M
            for k in (1, 2, 3, 4):
                avg = sum(math.comb(k, j) * N**j * M**(k - j) * table[(j, k - j)]
                          for j in range(k + 1)) / (N + M) ** k
                dist = abs(avg - beta_moment(bp, k))
                total = bound_fn(params, polynomial_h_norms(k), exy2).total
                checked += 1
                if not _dominated(dist, total):
                    violations += 1
                worst_margin = min(worst_margin, total - dist)
    elapsed = time.time() - started
    ok = violations == 0 and elapsed < 30.0
    _report(capsys, "criterion 5 (beta-bound dominance)", ok,
            f"{checked} checks, {violations} violations, smallest margin "
            f"{worst_margin:.3e}, {elapsed:.1f}s")


# Rate-recovery configuration, frozen after the analysis in the README notes:
# hatted rates small enough that the third-order terms (the only ones decaying
# at the generic rate) dominate the pinned N window, c_hat chosen so realized
# integer c stays close to c_hat * N^eps, and c_hat < 1 at eps = 1 so the
# mapped diffusion keeps positive mutation rates.
CHAT = {0.0: 0.5, 0.25: math.sqrt(2), 0.5: math.sqrt(2), 1.0: 0.5}
WF_REGIME = dict(ratio_m=1.0, p1_hat=0.05, p2_hat=0.05, q1_hat=0.2, q2_hat=0.2,
                 kind=ModelKind.TWO_ISLAND_WF)
SB_REGIME = dict(ratio_m=8.0, p1_hat=0.1, p2_hat=0.1, kind=ModelKind.SEED_BANK)
WF_TI_FN = (3, 0)
SB_TI_FN = (16, 0)
BETA_FN = 2
N_GRID = (10**3, 10**4, 10**5, 10**6)
EXACT_NS = (1000, 2000)


def test_criterion_6_rate_recovery(capsys):
    """Fitted log-log slopes match the claimed orders; exact distances dominated."""
    started = time.time()
    failures = []
    violations = 0
    for kind, base, (ti_n, ti_m) in (
        (ModelKind.TWO_ISLAND_WF, WF_REGIME, WF_TI_FN),
        (ModelKind.SEED_BANK, SB_REGIME, SB_TI_FN),
    ):
        ti_bound = wf_ti_bound if kind is ModelKind.TWO_ISLAND_WF else sb_ti_bound
        beta_bound = wf_beta_bound if kind is ModelKind.TWO_ISLAND_WF else sb_beta_bound
        for eps in (0.0, 0.25, 0.5, 1.0):
            regime = ScalingRegime(c_hat=CHAT[eps], eps=eps, **base)
            ti_totals, beta_totals = [], []
            for N in N_GRID:
                params = regime.instantiate(N)
                ti_totals.append(ti_bound(params, ti_n, ti_m).total)
                exy2 = exact_stationary_moments(params, 2).exy2()
                beta_totals.append(
                    beta_bound(params, polynomial_h_norms(BETA_FN), exy2).total)
            ti_slope = float(np.polyfit(np.log(N_GRID), np.log(ti_totals), 1)[0])
            beta_slope = float(np.polyfit(np.log(N_GRID), np.log(beta_totals), 1)[0])
            ti_theory = max(2 * eps - 1, -0.5)
            beta_theory = -eps / 2
            if abs(ti_slope - ti_theory) > 0.05:
                failures.append(f"{kind.value} eps={eps} ti {ti_slope:+.3f} vs {ti_theory:+.2f}")
            if abs(beta_slope - beta_theory) > 0.05:
                failures.append(f"{kind.value} eps={eps} beta {beta_slope:+.3f} vs {beta_theory:+.2f}")
            # exact distances at desk scale never exceed the bounds
            for N in EXACT_NS:
                params = regime.instantiate(N)
                deg = max(ti_n + ti_m, BETA_FN, 2)
                table = exact_stationary_moments(params, deg)
                ti_obj, _ = map_chain_to_ti(params)
                ti_table = ti_stationary_moments(ti_obj, ti_n + ti_m)
                dist = abs(table[(ti_n, ti_m)] - ti_table[(ti_n, ti_m)])
                if not _dominated(dist, ti_bound(params, ti_n, ti_m).total):
                    violations += 1
                bp = beta_params_from_chain(params)
                avg = sum(math.comb(BETA_FN, j) * params.N**j
                          * params.M ** (BETA_FN - j) * table[(j, BETA_FN - j)]
                          for j in range(BETA_FN + 1)) / (params.N + params.M) ** BETA_FN
                dist_b = abs(avg - beta_moment(bp, BETA_FN))
                if not _dominated(dist_b, beta_bound(
                        params, polynomial_h_norms(BETA_FN), table.exy2()).total):
                    violations += 1
    elapsed = time.time() - started
    ok = not failures and violations == 0 and elapsed < 300.0
    _report(capsys, "criterion 6 (rate recovery)", ok,
            f"16 slope fits within +-0.05, {violations} dominance violations, "
            f"{elapsed:.1f}s" + ("; " + "; ".join(failures) if failures else ""))


def test_criterion_7_exy2_leading_order(capsys):
    """N^eps E(X-Y)^2 approaches 1/9 (two-island) and 1/18 (seed bank).

    Tested at eps = 0.5; the printed leading term describes the strong-
    migration regime (at eps = 0 the exact limit differs: 1/19 for the
    symmetric two-island family).
    """
    started = time.time()
    eps = 0.5
    N = 100_000
    results = {}
    for kind, extra, target in (
        (ModelKind.TWO_ISLAND_WF, dict(q1_hat=1.0, q2_hat=1.0), 1 / 9),
        (ModelKind.SEED_BANK, {}, 1 / 18),
    ):
        regime = ScalingRegime(ratio_m=1.0, p1_hat=1.0, p2_hat=1.0, c_hat=1.0,
                               eps=eps, kind=kind, **extra)
        assert leading_order_exy2(regime) == pytest.approx(target, rel=1e-12)
        params = regime.instantiate(N)
        scaled = N**eps * exact_stationary_moments(params, 2).exy2()
        results[kind.value] = (scaled, abs(scaled - target) / target)
    elapsed = time.time() - started
    ok = all(rel <= 0.02 for _, rel in results.values()) and elapsed < 10.0
    detail = ", ".join(
        f"{k}: N^eps*E(X-Y)^2 = {v:.6f} (rel err {r:.2%})"
        for k, (v, r) in results.items()
    )
    _report(capsys, "criterion 7 (E(X-Y)^2 leading order)", ok,
            detail + f", {elapsed:.1f}s")


def test_criterion_8_large_migration_limit(capsys):
    """E(X-Y)^2 decreases to ~0 along growing migration; printed limits hit."""
    started = time.time()
    a1, a2, b1, b2, gamma, alpha, beta = 1.0, 2.0, 0.5, 1.5, 2.0, 2.0, 1.0
    lim = limit_moments_large_c(a1, a2, b1, b2, gamma, alpha, beta)
    exy2_path = []
    for c in (10.0, 100.0, 1e3, 1e4, 1e5, 1e6):
        table = ti_stationary_moments(
            TIParams(a1, a2, b1, b2, c, gamma * c, alpha, beta), 2)
        exy2_path.append(table.exy2())
    monotone = all(b < a for a, b in zip(exy2_path, exy2_path[1:]))
    final = ti_stationary_moments(
        TIParams(a1, a2, b1, b2, 1e6, gamma * 1e6, alpha, beta), 2)
    rel_errors = [abs(final[(1, 0)] - lim.mean) / lim.mean,
                  abs(final[(0, 1)] - lim.mean) / lim.mean]
    rel_errors += [abs(final[idx] - lim.second_moment) / lim.second_moment
                   for idx in ((2, 0), (1, 1), (0, 2))]
    elapsed = time.time() - started
    ok = (monotone and exy2_path[-1] < 1e-5 and max(rel_errors) <= 1e-3
          and elapsed < 5.0)
    _report(capsys, "criterion 8 (large-migration limit)", ok,
            f"E(X-Y)^2 monotone to {exy2_path[-1]:.2e}, worst limit rel err "
            f"{max(rel_errors):.2e}, {elapsed:.1f}s")
