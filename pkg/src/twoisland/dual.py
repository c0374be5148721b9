"""Dual jump process, auxiliary two-urn chain, and occupancy integrals.

The diffusion's stationary moment E[X^n Y^m] equals the probability that a
jump process on exponent pairs, started at (n, m), is absorbed at (0, 0)
rather than killed.  Bounding that process by a two-urn chain with linear
rates reduces everything to the occupancy probabilities of a single ball,
a 2-state-plus-death CTMC solved in closed form.  Time integrals of
products of those occupancy probabilities have printed closed forms; an
adaptive quadrature of the same products certifies them independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import integrate

from .diffusion import TIParams
from .errors import (
    DegenerateDenominatorError,
    NonAbsorbingError,
    NonConvergentError,
)


@dataclass(frozen=True)
class UrnRates:
    """Two-urn chain: per-ball death rates a, b and move rates c1 (1->2), c2 (2->1)."""

    a: float
    b: float
    c1: float
    c2: float

    @classmethod
    def from_ti(cls, ti: TIParams) -> "UrnRates":
        return cls(a=ti.a, b=ti.b, c1=ti.c1, c2=ti.c2)

    def denominator(self) -> float:
        return self.a * self.b + self.a * self.c2 + self.b * self.c1


# ---------------------------------------------------------------------------
# single-ball occupancy probabilities
# ---------------------------------------------------------------------------

def _eigen_pair(rates: UrnRates) -> Tuple[float, float]:
    """Eigenvalues of [[-(a+c1), c1], [c2, -(b+c2)]]; both real, <= 0."""
    trace = -(rates.a + rates.c1 + rates.b + rates.c2)
    # discriminant = (a+c1-b-c2)^2 + 4 c1 c2 >= 0
    disc = (rates.a + rates.c1 - rates.b - rates.c2) ** 2 + 4 * rates.c1 * rates.c2
    root = math.sqrt(disc)
    return (trace + root) / 2, (trace - root) / 2


def occupancy_probabilities(t, rates: UrnRates):
    """P(ball started in urn i occupies urn j at time t) for i, j in {1, 2}.

    Returns (p11, p12, p21, p22); ``t`` may be a scalar or an array.
    Closed-form 2x2 eigendecomposition, with the repeated-eigenvalue series
    branch when the two eigenvalues nearly coincide.
    """
    t = np.asarray(t, dtype=float)
    lam1, lam2 = _eigen_pair(rates)
    q11, q12 = -(rates.a + rates.c1), rates.c1
    q21, q22 = rates.c2, -(rates.b + rates.c2)
    if abs(lam1 - lam2) < 1e-9 * (abs(lam1) + abs(lam2)):
        # exp(tQ) = e^(lam t) (I + t (Q - lam I)) for a (near-)repeated root
        lam = (lam1 + lam2) / 2
        decay = np.exp(lam * t)
        p11 = decay * (1 + t * (q11 - lam))
        p12 = decay * (t * q12)
        p21 = decay * (t * q21)
        p22 = decay * (1 + t * (q22 - lam))
    else:
        e1, e2 = np.exp(lam1 * t), np.exp(lam2 * t)
        gap = lam1 - lam2
        # exp(tQ) = e1 (Q - lam2 I)/gap - e2 (Q - lam1 I)/gap
        p11 = (e1 * (q11 - lam2) - e2 * (q11 - lam1)) / gap
        p12 = (e1 - e2) * q12 / gap
        p21 = (e1 - e2) * q21 / gap
        p22 = (e1 * (q22 - lam2) - e2 * (q22 - lam1)) / gap
    return p11, p12, p21, p22


# ---------------------------------------------------------------------------
# occupancy integrals: closed forms and quadrature oracle
# ---------------------------------------------------------------------------

class IntegralKind(Enum):
    """Time integrals of products of expected urn occupancies.

    N10/N01 = expected count in urn 1 for a ball started in urn 1 / urn 2;
    M10/M01 likewise for urn 2.  The member name spells the integrand, e.g.
    N10_SQ_N01 is the integral of (E N10)^2 * (E N01).
    """

    N10 = "N10"
    N01 = "N01"
    M10 = "M10"
    M01 = "M01"
    N10_SQ = "N10_SQ"
    N01_SQ = "N01_SQ"
    N10_N01 = "N10_N01"
    M10_N10 = "M10_N10"
    M01_N01 = "M01_N01"
    CROSS_PAIR_SUM = "CROSS_PAIR_SUM"
    N10_CUBE = "N10_CUBE"
    N10_SQ_N01 = "N10_SQ_N01"
    N10_N01_SQ = "N10_N01_SQ"
    N01_CUBE = "N01_CUBE"
    M10_N10_SQ = "M10_N10_SQ"
    M10_N10_N01 = "M10_N10_N01"
    M10_N01_SQ = "M10_N01_SQ"
    M01_N10_SQ = "M01_N10_SQ"
    M01_N10_N01 = "M01_N10_N01"
    M01_N01_SQ = "M01_N01_SQ"


# integrand exponents (p11, p12, p21, p22) per product term
_INTEGRANDS: Dict[IntegralKind, List[Tuple[int, int, int, int]]] = {
    IntegralKind.N10: [(1, 0, 0, 0)],
    IntegralKind.N01: [(0, 0, 1, 0)],
    IntegralKind.M10: [(0, 1, 0, 0)],
    IntegralKind.M01: [(0, 0, 0, 1)],
    IntegralKind.N10_SQ: [(2, 0, 0, 0)],
    IntegralKind.N01_SQ: [(0, 0, 2, 0)],
    IntegralKind.N10_N01: [(1, 0, 1, 0)],
    IntegralKind.M10_N10: [(1, 1, 0, 0)],
    IntegralKind.M01_N01: [(0, 0, 1, 1)],
    IntegralKind.CROSS_PAIR_SUM: [(1, 0, 0, 1), (0, 1, 1, 0)],
    IntegralKind.N10_CUBE: [(3, 0, 0, 0)],
    IntegralKind.N10_SQ_N01: [(2, 0, 1, 0)],
    IntegralKind.N10_N01_SQ: [(1, 0, 2, 0)],
    IntegralKind.N01_CUBE: [(0, 0, 3, 0)],
    IntegralKind.M10_N10_SQ: [(2, 1, 0, 0)],
    IntegralKind.M10_N10_N01: [(1, 1, 1, 0)],
    IntegralKind.M10_N01_SQ: [(0, 1, 2, 0)],
    IntegralKind.M01_N10_SQ: [(2, 0, 0, 1)],
    IntegralKind.M01_N10_N01: [(1, 0, 1, 1)],
    IntegralKind.M01_N01_SQ: [(0, 0, 2, 1)],
}


def urn_integral_closed_form(kind: IntegralKind, rates: UrnRates):
    """Printed closed form of the occupancy integral ``kind``.

    Works with exact Fraction rates as well as floats (pure rational
    arithmetic throughout).
    """
    a, b, c1, c2 = rates.a, rates.b, rates.c1, rates.c2
    s = a * b + a * c2 + b * c1
    if s <= 0:
        raise DegenerateDenominatorError("need a*b + a*c2 + b*c1 > 0")
    t = a + b + c1 + c2
    u = 2 * t * t + s
    first = {
        IntegralKind.N10: (b + c2),
        IntegralKind.N01: c2,
        IntegralKind.M10: c1,
        IntegralKind.M01: (a + c1),
    }
    if kind in first:
        return first[kind] / s
    second = {
        IntegralKind.N10_SQ: b * t + c2 * (a + b + c2),
        IntegralKind.N01_SQ: c2 * c2,
        IntegralKind.N10_N01: c2 * (b + c2),
        IntegralKind.M10_N10: c1 * (b + c2),
        IntegralKind.M01_N01: c2 * (a + c1),
        IntegralKind.CROSS_PAIR_SUM: 2 * (a + c1) * (b + c2),
    }
    if kind in second:
        return second[kind] / (2 * t * s)
    third = {
        IntegralKind.N10_CUBE: (
            b * (2 * t * t + a * b + b * c1 + c1 * c2)
            + c2 * (2 * (a + b + c2) ** 2 + a * (2 * b + 2 * c1 + c2))
        ),
        IntegralKind.N10_SQ_N01: c2 * (s + 2 * (b + c2) ** 2),
        IntegralKind.N10_N01_SQ: 2 * c2**2 * (b + c2),
        IntegralKind.N01_CUBE: 2 * c2**3,
        IntegralKind.M10_N10_SQ: c1 * (s + 2 * (b + c2) ** 2),
        IntegralKind.M10_N10_N01: 2 * c1 * c2 * (b + c2),
        IntegralKind.M10_N01_SQ: 2 * c1 * c2**2,
        IntegralKind.M01_N10_SQ: (
            3 * b * (a + c1) * (a + 2 * b + c1)
            + (3 * a**2 + 8 * b * c1 + 3 * a * (4 * b + c1)) * c2
            + 2 * (3 * a + c1) * c2**2
        ),
        IntegralKind.M01_N10_N01: c2 * (3 * a * (b + c2) + c1 * (3 * b + 2 * c2)),
        IntegralKind.M01_N01_SQ: 2 * (a + c1) * c2**2,
    }
    if kind in third:
        return third[kind] / (3 * s * u)
    raise ValueError(f"unsupported integral kind: {kind}")


def urn_integral_quadrature(kind: IntegralKind, rates: UrnRates, tol: float = 1e-10) -> float:
    """Adaptive quadrature of the occupancy-probability product over [0, inf).

    The integrand decays at least like exp(lam1 * t), so truncating at T with
    exp(lam1 * T) <= tol/10 certifies the tail before handing [0, T] to the
    adaptive routine.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if float(rates.denominator()) <= 0:
        raise DegenerateDenominatorError("need a*b + a*c2 + b*c1 > 0")
    frates = UrnRates(*(float(v) for v in (rates.a, rates.b, rates.c1, rates.c2)))
    lam1, _ = _eigen_pair(frates)
    decay = -lam1
    horizon = math.log(10.0 / tol) / decay
    terms = _INTEGRANDS[kind]

    def integrand(time: float) -> float:
        probs = occupancy_probabilities(time, frates)
        total = 0.0
        for exps in terms:
            prod = 1.0
            for p, e in zip(probs, exps):
                if e:
                    prod *= float(p) ** e
            total += prod
        return total

    value, err = integrate.quad(integrand, 0.0, horizon,
                                epsabs=tol / 10, epsrel=tol / 10, limit=200)
    if err > tol * max(1.0, abs(value)):
        raise NonConvergentError(
            f"quadrature error {err:.3e} above tolerance for {kind}"
        )
    return value


# ---------------------------------------------------------------------------
# dual jump process Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualAbsorptionEstimate:
    estimate: float
    std_error: float
    reps: int


def dual_transition_rates(n, m, ti: TIParams):
    """Jump rates out of exponent state (n, m): four moves plus killing."""
    return {
        "down_x": ti.alpha / 2 * n * (n - 1) + n * ti.a1,     # -> (n-1, m)
        "move_xy": ti.c1 * n,                                  # -> (n-1, m+1)
        "down_y": ti.beta / 2 * m * (m - 1) + m * ti.b1,       # -> (n, m-1)
        "move_yx": ti.c2 * m,                                  # -> (n+1, m-1)
        "kill": n * ti.a2 + m * ti.b2,
    }


def simulate_dual_absorption(
    n: int,
    m: int,
    ti: TIParams,
    reps: int,
    rng: np.random.Generator,
    max_steps: int = 100_000,
) -> DualAbsorptionEstimate:
    """Estimate E[X^n Y^m] as the fraction of dual paths absorbed at (0, 0).

    Simulates the embedded jump chain for all replicates in lock-step numpy
    arrays (holding times are irrelevant to the absorption probability).
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    ns = np.full(reps, n, dtype=np.int64)
    ms = np.full(reps, m, dtype=np.int64)
    successes = 0
    for _ in range(max_steps):
        at_origin = (ns == 0) & (ms == 0)
        if at_origin.any():
            successes += int(at_origin.sum())
            keep = ~at_origin
            ns, ms = ns[keep], ms[keep]
        if ns.size == 0:
            break
        nf = ns.astype(float)
        mf = ms.astype(float)
        r_down_x = ti.alpha / 2 * nf * (nf - 1) + ti.a1 * nf
        r_move_xy = ti.c1 * nf
        r_down_y = ti.beta / 2 * mf * (mf - 1) + ti.b1 * mf
        r_move_yx = ti.c2 * mf
        r_kill = ti.a2 * nf + ti.b2 * mf
        total = r_down_x + r_move_xy + r_down_y + r_move_yx + r_kill
        if np.any(total <= 0):
            raise NonAbsorbingError("a live state has no outgoing rate")
        draw = rng.random(ns.size) * total
        edge1 = r_down_x
        edge2 = edge1 + r_move_xy
        edge3 = edge2 + r_down_y
        edge4 = edge3 + r_move_yx
        take_down_x = (draw < edge1).astype(np.int64)
        take_move_xy = ((draw >= edge1) & (draw < edge2)).astype(np.int64)
        take_down_y = ((draw >= edge2) & (draw < edge3)).astype(np.int64)
        take_move_yx = ((draw >= edge3) & (draw < edge4)).astype(np.int64)
        killed = draw >= edge4
        ns = ns - take_down_x - take_move_xy + take_move_yx
        ms = ms + take_move_xy - take_down_y - take_move_yx
        keep = ~killed
        ns, ms = ns[keep], ms[keep]
        if ns.size == 0:
            break
    else:
        raise NonAbsorbingError(f"{ns.size} paths alive after {max_steps} steps")
    p_hat = successes / reps
    se = math.sqrt(max(p_hat * (1 - p_hat), 1e-300) / reps)
    return DualAbsorptionEstimate(estimate=p_hat, std_error=se, reps=reps)


# ---------------------------------------------------------------------------
# urn chain Monte Carlo (aggregate Gillespie, for the superposition check)
# ---------------------------------------------------------------------------

def simulate_urn_expected_counts(
    n: int,
    m: int,
    rates: UrnRates,
    times: Sequence[float],
    reps: int,
    rng: np.random.Generator,
) -> Dict[str, np.ndarray]:
    """Monte Carlo mean ball counts per urn at the requested times.

    Simulates the aggregate chain (rates proportional to current counts),
    not per-ball, so agreement with n*p11 + m*p21 exercises the linear
    superposition property rather than assuming it.

    Returns means and standard errors, arrays indexed like ``times``.
    """
    times = np.asarray(sorted(times), dtype=float)
    urn1 = np.zeros((reps, times.size))
    urn2 = np.zeros((reps, times.size))
    for r in range(reps):
        cur_n, cur_m, now = n, m, 0.0
        pointer = 0
        while pointer < times.size:
            total = rates.a * cur_n + rates.b * cur_m + rates.c1 * cur_n + rates.c2 * cur_m
            wait = rng.exponential(1.0 / total) if total > 0 else math.inf
            while pointer < times.size and now + wait > times[pointer]:
                urn1[r, pointer] = cur_n
                urn2[r, pointer] = cur_m
                pointer += 1
            if pointer >= times.size:
                break
            now += wait
            draw = rng.random() * total
            if draw < rates.a * cur_n:
                cur_n -= 1
            elif draw < rates.a * cur_n + rates.b * cur_m:
                cur_m -= 1
            elif draw < rates.a * cur_n + rates.b * cur_m + rates.c1 * cur_n:
                cur_n -= 1
                cur_m += 1
            else:
                cur_n += 1
                cur_m -= 1
    return {
        "urn1_mean": urn1.mean(axis=0),
        "urn1_se": urn1.std(axis=0, ddof=1) / math.sqrt(reps),
        "urn2_mean": urn2.mean(axis=0),
        "urn2_se": urn2.std(axis=0, ddof=1) / math.sqrt(reps),
        "times": times,
    }
