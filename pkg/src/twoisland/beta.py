"""Beta reference distribution: moments and chain-matched parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .chains import ChainParams, ModelKind


@dataclass(frozen=True)
class BetaParams:
    a1: float
    a2: float

    def __post_init__(self):
        if self.a1 <= 0 or self.a2 <= 0:
            raise ValueError("beta parameters must be positive")


def beta_moment(params: BetaParams, k: int):
    """E[Z^k] for Z ~ Beta(a1, a2): prod_{i<k} (a1+i)/(a1+a2+i)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = 1.0 if isinstance(params.a1, float) else 1
    for i in range(k):
        out = out * (params.a1 + i) / (params.a1 + params.a2 + i)
    return out


def beta_params_from_chain(params: ChainParams) -> BetaParams:
    """Beta law matched to the stationary weighted island average.

    Two-island WF: (2(N p1 + M q1), 2(N p2 + M q2)); seed bank uses the
    total population with the active-island rates: (2(N+M) p1, 2(N+M) p2).
    """
    N, M = params.N, params.M
    if params.kind is ModelKind.TWO_ISLAND_WF:
        return BetaParams(
            a1=2 * (N * params.p1 + M * params.q1),
            a2=2 * (N * params.p2 + M * params.q2),
        )
    return BetaParams(a1=2 * (N + M) * params.p1, a2=2 * (N + M) * params.p2)


def beta_poly_expectation(params: BetaParams, coeffs: Sequence[float]):
    """E[h(Z)] for h(x) = sum_k coeffs[k] x^k."""
    return sum(c * beta_moment(params, k) for k, c in enumerate(coeffs) if c != 0)
