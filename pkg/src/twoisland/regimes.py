"""Asymptotic parameter families: weak mutation, migration of order N^eps.

A regime fixes the island-size ratio m = M/N, hatted mutation rates (so
p_i = p_hat_i / N) and a migration exponent eps with c = c_hat * N^eps.
Instantiating at a finite N rounds M and c to integers and clamps c into
[1, min(M, N)]; downstream reports always record the realized values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .chains import ChainParams, ModelKind


@dataclass(frozen=True)
class ScalingRegime:
    ratio_m: float
    p1_hat: float
    p2_hat: float
    c_hat: float
    eps: float
    kind: "ModelKind"
    q1_hat: Optional[float] = None
    q2_hat: Optional[float] = None

    def __post_init__(self):
        if not (0 <= self.eps <= 1):
            raise ValueError(f"eps={self.eps} must lie in [0, 1]")
        if self.ratio_m <= 0 or self.c_hat <= 0:
            raise ValueError("ratio_m and c_hat must be positive")

    def instantiate(self, N: int) -> "ChainParams":
        """Finite-N parameters with rounded M and clamped integer c."""
        from .chains import ChainParams, ModelKind

        M = max(1, round(self.ratio_m * N))
        c = max(1, round(self.c_hat * N**self.eps))
        c = min(c, M, N)
        if self.kind is ModelKind.TWO_ISLAND_WF:
            if self.q1_hat is None or self.q2_hat is None:
                raise ValueError("two-island regime requires q1_hat and q2_hat")
            return ChainParams(
                N=N, M=M, c=c,
                p1=self.p1_hat / N, p2=self.p2_hat / N,
                q1=self.q1_hat / N, q2=self.q2_hat / N,
                kind=self.kind,
            )
        return ChainParams(
            N=N, M=M, c=c,
            p1=self.p1_hat / N, p2=self.p2_hat / N,
            kind=self.kind,
        )

    def ti_bound_slope(self) -> float:
        """Theoretical log-log slope of the diffusion-target bound total."""
        return max(2 * self.eps - 1, -0.5)

    def beta_bound_slope(self) -> float:
        """Theoretical log-log slope of the beta-target bound total."""
        return -self.eps / 2
