"""Explicit approximation bounds: derivative factors and discrepancy terms.

The distance between a chain's stationary moments and the diffusion (or
beta) target is bounded by an inner product sum(D_* x A_*): the D factors
bound partial derivatives of the solution of the characterizing equation
(computed from the urn occupancy integrals), while the A terms measure how
far one chain step is from the diffusion's drift and noise.  Everything
here is a pure formula evaluator in the printed parameters; nothing is
estimated.  Formulas are evaluated as written even when the resulting
bound is vacuous (> 1); callers flag that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Union

from .chains import ChainParams, ModelKind
from .diffusion import TIParams, map_chain_to_ti
from .dual import UrnRates
from .errors import DegenerateDenominatorError, MTooSmallError


@dataclass(frozen=True)
class SteinFactors:
    """Supremum bounds on the first three derivative blocks of the solution."""

    dx: float
    dy: float
    dxx: float
    dyy: float
    dxy: float
    dxxx: float
    dxxy: float
    dxyy: float
    dyyy: float

    def as_dict(self) -> Dict[str, float]:
        return {
            "Dx": self.dx, "Dy": self.dy,
            "Dxx": self.dxx, "Dyy": self.dyy, "Dxy": self.dxy,
            "Dxxx": self.dxxx, "Dxxy": self.dxxy,
            "Dxyy": self.dxyy, "Dyyy": self.dyyy,
        }


def _x_side_factors(n, m, a, b, c1, c2):
    """Dx, Dxx, Dxy, Dxxx, Dxxy for total rates (a, b) and moves (c1, c2).

    The y-side factors are the island-exchange images (swap a<->b, c1<->c2,
    n<->m), which keeps the factor set exactly symmetric.
    """
    s = a * b + a * c2 + b * c1
    t = a + b + c1 + c2
    u = 2 * t * t + s
    dx = (n * (b + c2) + m * c2) / s
    dxx = (
        n * (n - 1) * (b * t + c2 * (a + b + c2))
        + m * (m - 1) * c2 * c2
        + 2 * m * n * c2 * (b + c2)
    ) / (2 * t * s)
    dxy = (
        n * (n - 1) * c1 * (b + c2)
        + m * (m - 1) * c2 * (a + c1)
        + 2 * m * n * (a + c1) * (b + c2)
    ) / (2 * t * s)
    dxxx = (
        n * (n - 1) * (n - 2) * (
            b * (2 * t * t + a * b + b * c1 + c1 * c2)
            + c2 * (2 * (a + b + c2) ** 2 + a * (2 * b + 2 * c1 + c2))
        )
        + 3 * m * n * (n - 1) * c2 * (s + 2 * (b + c2) ** 2)
        + 6 * n * m * (m - 1) * c2**2 * (b + c2)
        + 2 * m * (m - 1) * (m - 2) * c2**3
    ) / (3 * s * u)
    dxxy = (
        n * (n - 1) * (n - 2) * c1 * (s + 2 * (b + c2) ** 2)
        + 4 * m * n * (n - 1) * c1 * c2 * (b + c2)
        + 2 * n * m * (m - 1) * c1 * c2**2
        + m * n * (n - 1) * (
            3 * b * (a + c1) * (a + 2 * b + c1)
            + (3 * a**2 + 8 * b * c1 + 3 * a * (4 * b + c1)) * c2
            + 2 * (3 * a + c1) * c2**2
        )
        + 2 * n * m * (m - 1) * c2 * (3 * a * (b + c2) + c1 * (3 * b + 2 * c2))
        + 2 * m * (m - 1) * (m - 2) * (a + c1) * c2**2
    ) / (3 * s * u)
    return dx, dxx, dxy, dxxx, dxxy


def stein_factors(n: int, m: int, params: Union[TIParams, UrnRates]) -> SteinFactors:
    """All nine derivative-bound factors for the monomial x^n y^m.

    ``params`` may be diffusion parameters (total mutation rates a1+a2 and
    b1+b2 are used) or urn rates directly.
    """
    if isinstance(params, TIParams):
        rates = UrnRates.from_ti(params)
    else:
        rates = params
    a, b, c1, c2 = rates.a, rates.b, rates.c1, rates.c2
    if a * b + a * c2 + b * c1 <= 0:
        raise DegenerateDenominatorError("need a*b + a*c2 + b*c1 > 0")
    dx, dxx, dxy, dxxx, dxxy = _x_side_factors(n, m, a, b, c1, c2)
    dy, dyy, _, dyyy, dxyy = _x_side_factors(m, n, b, a, c2, c1)
    return SteinFactors(
        dx=dx, dy=dy, dxx=dxx, dyy=dyy, dxy=dxy,
        dxxx=dxxx, dxxy=dxxy, dxyy=dxyy, dyyy=dyyy,
    )


def assemble_total(factors: SteinFactors, a_terms: Mapping[str, float]) -> float:
    """Inner product sum of D_* times the matching A_* (missing keys = 0)."""
    pairs = (
        ("Ax", factors.dx), ("Ay", factors.dy),
        ("Axx", factors.dxx), ("Ayy", factors.dyy), ("Axy", factors.dxy),
        ("Axxx", factors.dxxx), ("Axxy", factors.dxxy),
        ("Axyy", factors.dxyy), ("Ayyy", factors.dyyy),
    )
    return sum(d * a_terms.get(key, 0.0) for key, d in pairs)


@dataclass
class BoundBreakdown:
    """A bound total with its named components.

    ``terms`` are the summands (D_* x A_* products, or the weighted beta
    terms); ``a_terms`` the raw discrepancy values; ``epsilons`` auxiliary
    printed quantities.  ``total`` is exactly the sum of ``terms``.
    """

    terms: Dict[str, float]
    a_terms: Dict[str, float]
    epsilons: Dict[str, float]
    lam: float
    total: float = field(init=False)

    def __post_init__(self):
        self.total = float(sum(self.terms.values()))

    @property
    def is_vacuous(self) -> bool:
        """True when the bound exceeds the trivial distance bound of 1."""
        return self.total > 1.0


def wf_ti_bound(params: ChainParams, n: int, m: int) -> BoundBreakdown:
    """Bound on |E X^n Y^m (chain) - E X^n Y^m (diffusion)|, two-island WF."""
    if params.kind is not ModelKind.TWO_ISLAND_WF:
        raise ValueError("wf_ti_bound applies to the two-island WF chain")
    N, M, c = params.N, params.M, params.c
    p1, p2, q1, q2 = params.p1, params.p2, params.q1, params.q2
    ti, lam = map_chain_to_ti(params)
    factors = stein_factors(n, m, ti)
    eps_x = (p1 + p2) + c / N * (1 + q1 + q2)
    eps_y = (q1 + q2) + c / M * (1 + p1 + p2)
    bracket_x = (4 * N**2 + 4 * c**2 + 6 * c * N) ** 0.25 / N + eps_x
    bracket_y = (4 * M**2 + 4 * c**2 + 6 * c * M) ** 0.25 / M + eps_y
    a_terms = {
        "Ax": 2 * c * (q1 + q2),
        "Ay": 2 * c * N / M * (p1 + p2),
        "Axx": (
            N * (p1 + p2) ** 2
            + (4 * c + 1 + 2 * N * p1 + 2 * c * q1) * (p1 + p2)
            + p1 + N * p1**2 + 2 * c * p1 * (q1 + q2)
            + 2 * c**2 * (1 + p1 + q1) / N
        ),
        "Ayy": N / M * (
            M * (q1 + q2) ** 2
            + (4 * c + 1 + 2 * M * q1 + 2 * c * p1) * (q1 + q2)
            + q1 + M * q1**2 + 2 * c * q1 * (p1 + p2)
            + 2 * c**2 * (1 + p1 + q1) / M
        ),
        "Axy": 2 * N * eps_x * eps_y,
        "Axxx": bracket_x**2 * (2 * math.sqrt(N) + 2 * N * eps_x) / 6,
        "Axxy": bracket_x**2 * (2 * N / math.sqrt(M) + 2 * N * eps_y) / 2,
        "Axyy": bracket_y**2 * (2 * math.sqrt(N) + 2 * N * eps_x) / 2,
        "Ayyy": bracket_y**2 * (2 * N / math.sqrt(M) + 2 * N * eps_y) / 6,
    }
    factor_map = {
        "Ax": factors.dx, "Ay": factors.dy, "Axx": factors.dxx,
        "Ayy": factors.dyy, "Axy": factors.dxy, "Axxx": factors.dxxx,
        "Axxy": factors.dxxy, "Axyy": factors.dxyy, "Ayyy": factors.dyyy,
    }
    terms = {f"D{key[1:]}*{key}": factor_map[key] * val for key, val in a_terms.items()}
    return BoundBreakdown(
        terms=terms, a_terms=a_terms,
        epsilons={"eps_x": eps_x, "eps_y": eps_y}, lam=lam,
    )


def sb_ti_bound(params: ChainParams, n: int, m: int) -> BoundBreakdown:
    """Bound on |E X^n Y^m (chain) - E X^n Y^m (diffusion)|, seed bank.

    The drift of the active island matches the diffusion exactly, so there
    is no Dx*Ax term.  Needs M >= 4 for the hypergeometric fourth-moment
    remainder.
    """
    if params.kind is not ModelKind.SEED_BANK:
        raise ValueError("sb_ti_bound applies to the seed-bank chain")
    N, M, c = params.N, params.M, params.c
    if M < 4:
        raise MTooSmallError(f"seed-bank bound needs M >= 4, got M={M}")
    p1, p2 = params.p1, params.p2
    ti, lam = map_chain_to_ti(params)
    factors = stein_factors(n, m, ti)
    eps_mc = c * M / (4 * (M - 1) * (M - 2) * (M - 3)) * (
        M**2 * (1 + c) + M * (1 + 6 * c + c**2) + 6 * c**2
    )
    bracket_x = (4 * N**2 + 2 * c * N + eps_mc) ** 0.25 / N + (p1 + p2) + c / N
    bracket_y = (6 * c**2 + eps_mc) ** 0.25 / M + c / M * (1 + p1 + p2)
    growth_x = math.sqrt(N) + N * (p1 + p2) + c
    growth_y = math.sqrt(5 * c * N**2 / (4 * M**2)) + c * N / M * (1 + p1 + p2)
    a_terms = {
        "Ay": 2 * c * N / M * (p1 + p2),
        "Axx": (
            N * (p1 + p2) ** 2 + N * p1**2
            + (4 * c + 3 + (4 * c + 2 + 2 * N) * p1) * (p1 + p2)
            + (2 * c + 3) * p1
            + (3 * c**2 + 2 * c**2 * p1 + c * p2) / N
        ),
        "Ayy": 4 * c**2 * N * (1 + p1) / (M * (M - 1)),
        "Axy": 2 / M * (
            (2 * c * N + c * N * p1) * (p1 + p2)
            + (2 * c**2 + 2 * c * N) * p1
            + 3 * c**2 + c * N * p1**2 + c**2 * M / (M - 1)
        ),
        "Axxx": bracket_x**2 * growth_x / 6,
        "Axxy": bracket_x**2 * growth_y / 2,
        "Axyy": bracket_y**2 * growth_x / 2,
        "Ayyy": bracket_y**2 * growth_y / 6,
    }
    factor_map = {
        "Ay": factors.dy, "Axx": factors.dxx, "Ayy": factors.dyy,
        "Axy": factors.dxy, "Axxx": factors.dxxx, "Axxy": factors.dxxy,
        "Axyy": factors.dxyy, "Ayyy": factors.dyyy,
    }
    terms = {f"D{key[1:]}*{key}": factor_map[key] * val for key, val in a_terms.items()}
    return BoundBreakdown(
        terms=terms, a_terms=a_terms,
        epsilons={"eps_Mc": eps_mc}, lam=lam,
    )


@dataclass(frozen=True)
class HNorms:
    """Derivative sup-norms of a scalar test function on [0, 1]."""

    h1: float
    h2: float
    h21: float


def polynomial_h_norms(k: int) -> HNorms:
    """Norms of h(x) = x^k on [0, 1]: sup |h'|, sup |h''|, Lipschitz of h''."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return HNorms(h1=float(k), h2=float(k * (k - 1)), h21=float(k * (k - 1) * (k - 2)))


def wf_beta_bound(params: ChainParams, norms: HNorms, exy2: float) -> BoundBreakdown:
    """Bound on |E h(weighted island average) - E h(Beta)|, two-island WF.

    ``exy2`` must be the exact stationary E(X-Y)^2 of the chain.
    """
    if params.kind is not ModelKind.TWO_ISLAND_WF:
        raise ValueError("wf_beta_bound applies to the two-island WF chain")
    N, M = params.N, params.M
    p1, p2, q1, q2 = params.p1, params.p2, params.q1, params.q2
    a1 = 2 * (N * p1 + M * q1)
    a2 = 2 * (N * p2 + M * q2)
    mut_sum = p1 + p2 + q1 + q2
    # A1 carries 1/lambda = 2(N+M), one power of N+M more than the printed
    # prefactor; the seed-bank analogue and the N^(-eps/2) rate both need it.
    a_terms = {
        "A1": 2 * N * M / (N + M) * abs((q1 + q2) - (p1 + p2)) * math.sqrt(exy2),
        "A2": (
            ((N * (2 * p1 + p2) + M * (2 * q1 + q2)) ** 2
             + 3 * N * (2 * p1 + p2) + 3 * M * (2 * q1 + q2)) / (N + M)
            + N * M / (N + M) ** 2 * exy2
        ),
        "A3": (
            ((4 * N**2 + 6 * N * M + 4 * M**2) ** 0.25 + mut_sum) ** 2
            * (math.sqrt(N + M) + mut_sum) / (N + M) ** 2
        ),
    }
    return _beta_breakdown(a1, a2, norms, a_terms, exy2, lam=1 / (2 * (N + M)))


def sb_beta_bound(params: ChainParams, norms: HNorms, exy2: float) -> BoundBreakdown:
    """Bound on |E h(weighted island average) - E h(Beta)|, seed bank."""
    if params.kind is not ModelKind.SEED_BANK:
        raise ValueError("sb_beta_bound applies to the seed-bank chain")
    N, M = params.N, params.M
    p1, p2 = params.p1, params.p2
    a1 = 2 * (N + M) * p1
    a2 = 2 * (N + M) * p2
    a_terms = {
        "A1": 2 * M * (p1 + p2) * math.sqrt(exy2),
        "A2": N * (p1 + p2) ** 2 + (p1 + p2) + M / (N + M) * math.sqrt(exy2),
        "A3": (
            2 / (N * (N + M))
            * (math.sqrt(2 * N) + N * (p1 + p2)) ** 2
            * (math.sqrt(N) + N * (p1 + p2))
        ),
    }
    return _beta_breakdown(a1, a2, norms, a_terms, exy2, lam=N / (2 * (N + M) ** 2))


def _beta_breakdown(a1, a2, norms: HNorms, a_terms, exy2, lam) -> BoundBreakdown:
    terms = {
        "h1*A1": norms.h1 * a_terms["A1"] / (a1 + a2),
        "h2*A2": norms.h2 * a_terms["A2"] / (2 * (a1 + a2 + 1)),
        "h21*A3": norms.h21 * a_terms["A3"] / (18 * (a1 + a2 + 2)),
    }
    return BoundBreakdown(
        terms=terms, a_terms=dict(a_terms),
        epsilons={"beta_a1": a1, "beta_a2": a2, "exy2": exy2}, lam=lam,
    )
