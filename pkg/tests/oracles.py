"""Independent oracles used by the tests.

Everything here is built from first principles (pmf enumeration, dense
transition matrices, numerical quadrature) and deliberately avoids the
package's own moment-transfer or generator machinery, so agreement between
the two routes is meaningful.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

import numpy as np
from scipy import integrate

from twoisland.chains import ChainParams, ModelKind


def binomial_pmf(n: int, p, k: int):
    return math.comb(n, k) * p**k * (1 - p) ** (n - k)


def hypergeometric_pmf(pool: int, good: int, draws: int, k: int):
    if k < 0 or k > good or draws - k > pool - good or k > draws:
        return 0 * (good - good)  # zero of the right arithmetic type
    if isinstance(good, int):
        return Fraction(math.comb(good, k) * math.comb(pool - good, draws - k),
                        math.comb(pool, draws))
    return math.comb(good, k) * math.comb(pool - good, draws - k) / math.comb(pool, draws)


def offspring_outcomes(params: ChainParams, i: int, j: int):
    """All ((i', j'), probability) pairs for one step from state (i, j)."""
    N, M, c = params.N, params.M, params.c
    if isinstance(params.p1, Fraction):
        x, y = Fraction(i, N), Fraction(j, M)
    else:
        x, y = i / N, j / M
    pp = params.p1 + (1 - params.p1 - params.p2) * x
    out: Dict[Tuple[int, int], object] = {}
    if params.kind is ModelKind.TWO_ISLAND_WF:
        qq = params.q1 + (1 - params.q1 - params.q2) * y
        for a in range(N - c + 1):
            wa = binomial_pmf(N - c, pp, a)
            for b in range(c + 1):
                wb = binomial_pmf(c, pp, b)
                for cc in range(c + 1):
                    wc = binomial_pmf(c, qq, cc)
                    for d in range(M - c + 1):
                        w = wa * wb * wc * binomial_pmf(M - c, qq, d)
                        key = (a + cc, b + d)
                        out[key] = out.get(key, 0) + w
    else:
        for a in range(N - c + 1):
            wa = binomial_pmf(N - c, pp, a)
            for b in range(c + 1):
                wb = binomial_pmf(c, pp, b)
                for cc in range(min(c, j) + 1):
                    wh = hypergeometric_pmf(M, j, c, cc)
                    if wh == 0:
                        continue
                    d = j - cc
                    key = (a + cc, b + d)
                    out[key] = out.get(key, 0) + wa * wb * wh
    return out


def conditional_moment_bruteforce(params: ChainParams, i: int, j: int,
                                  n: int, m: int):
    """E[(X')^n (Y')^m | state (i, j)] by full outcome enumeration."""
    N, M = params.N, params.M
    exact = isinstance(params.p1, Fraction)
    total = 0
    for (i2, j2), w in offspring_outcomes(params, i, j).items():
        if exact:
            total += w * Fraction(i2, N) ** n * Fraction(j2, M) ** m
        else:
            total += w * (i2 / N) ** n * (j2 / M) ** m
    return total


def full_transition_matrix(params: ChainParams) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    N, M = params.N, params.M
    states = [(i, j) for i in range(N + 1) for j in range(M + 1)]
    pos = {s: k for k, s in enumerate(states)}
    P = np.zeros((len(states), len(states)))
    for (i, j) in states:
        for key, w in offspring_outcomes(params, i, j).items():
            P[pos[(i, j)], pos[key]] += float(w)
    return P, states


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Stationary row vector of an irreducible stochastic matrix."""
    size = P.shape[0]
    A = P.T - np.eye(size)
    A[-1, :] = 1.0
    b = np.zeros(size)
    b[-1] = 1.0
    return np.linalg.solve(A, b)


def stationary_moments_bruteforce(params: ChainParams, max_degree: int) -> Dict[Tuple[int, int], float]:
    P, states = full_transition_matrix(params)
    pi = stationary_distribution(P)
    N, M = params.N, params.M
    out = {}
    for d in range(max_degree + 1):
        for n in range(d, -1, -1):
            m = d - n
            out[(n, m)] = float(sum(
                pi[k] * (i / N) ** n * (j / M) ** m
                for k, (i, j) in enumerate(states)
            ))
    return out


def beta_moment_quadrature(a1: float, a2: float, k: int, tol: float = 1e-12) -> float:
    log_norm = math.lgamma(a1 + a2) - math.lgamma(a1) - math.lgamma(a2)

    def density(x):
        return math.exp(log_norm + (a1 - 1) * math.log(x) + (a2 - 1) * math.log1p(-x))

    value, _ = integrate.quad(lambda x: x**k * density(x), 0.0, 1.0,
                              epsabs=tol, epsrel=tol, limit=200)
    return value


def enumerate_central_moment(pmf: Iterable[Tuple[int, object]], order: int):
    """Central moment from an explicit (value, probability) support."""
    support = list(pmf)
    mean = sum(v * w for v, w in support)
    return sum((v - mean) ** order * w for v, w in support)
