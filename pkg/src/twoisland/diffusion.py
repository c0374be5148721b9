"""Two-island diffusion: generator action on monomials and stationary moments.

The stationary law of the diffusion is known only through its moments.
Applying the generator to x^n y^m gives a linear combination of nearby
monomials; setting its expectation to zero for every (n, m) yields, degree
by degree, small square systems whose solutions are the stationary moments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .chains import ChainParams, ModelKind
from .errors import DegenerateDenominatorError, SingularSystemError
from .moments import MomentTable

Index = Tuple[int, int]


@dataclass(frozen=True)
class TIParams:
    """Diffusion parameters: mutation a*/b*, migration c*, noise alpha/beta."""

    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float
    alpha: float
    beta: float

    @property
    def a(self) -> float:
        return self.a1 + self.a2

    @property
    def b(self) -> float:
        return self.b1 + self.b2

    def moment_denominator(self) -> float:
        """a*b + a*c2 + b*c1; positive iff the moment systems are solvable."""
        return self.a * self.b + self.a * self.c2 + self.b * self.c1

    def swapped(self) -> "TIParams":
        """Island-exchange image (x <-> y)."""
        return TIParams(
            a1=self.b1, a2=self.b2, b1=self.a1, b2=self.a2,
            c1=self.c2, c2=self.c1, alpha=self.beta, beta=self.alpha,
        )


def map_chain_to_ti(params: ChainParams) -> Tuple[TIParams, float]:
    """Diffusion parameters matched to one chain generation, plus the time scale.

    One generation corresponds to lambda = 1/(2N) units of diffusion time.
    The seed-bank chain maps to the degenerate case with no island-2
    mutation or noise (b1 = b2 = beta = 0).
    """
    N, M, c = params.N, params.M, params.c
    a1 = 2 * params.p1 * (N - c)
    a2 = 2 * params.p2 * (N - c)
    if params.kind is ModelKind.TWO_ISLAND_WF:
        b1 = 2 * N * (M - c) * params.q1 / M
        b2 = 2 * N * (M - c) * params.q2 / M
        beta = 2 * N / M
    else:
        b1 = b2 = beta = 0.0
    ti = TIParams(
        a1=a1, a2=a2, b1=b1, b2=b2,
        c1=2 * c, c2=2 * c * N / M,
        alpha=2.0, beta=beta,
    )
    return ti, 1.0 / (2 * N)


def generator_apply(n: int, m: int, ti: TIParams) -> Dict[Index, float]:
    """Coefficients of the generator applied to x^n y^m.

    Non-zero entries appear only at (n-1,m), (n-1,m+1), (n,m-1), (n+1,m-1)
    and (n,m); the coefficients sum to -(n*a2 + m*b2), the killing rate.
    """
    if n + m < 1:
        raise ValueError("generator action is defined for n + m >= 1")
    row: Dict[Index, float] = {}
    down_x = ti.alpha / 2 * n * (n - 1) + n * ti.a1
    move_xy = n * ti.c1
    down_y = ti.beta / 2 * m * (m - 1) + m * ti.b1
    move_yx = m * ti.c2
    kill = n * ti.a2 + m * ti.b2
    if down_x:
        row[(n - 1, m)] = down_x
    if move_xy:
        row[(n - 1, m + 1)] = move_xy
    if down_y:
        row[(n, m - 1)] = down_y
    if move_yx:
        row[(n + 1, m - 1)] = move_yx
    row[(n, m)] = -(down_x + move_xy + down_y + move_yx + kill)
    return row


def ti_stationary_moments(ti: TIParams, max_degree: int) -> MomentTable:
    """Stationary moments up to ``max_degree`` from the generator identities.

    For each total degree d the identities E[A x^n y^m] = 0 with n+m = d are
    d+1 linear equations in the d+1 degree-d moments (lower degrees enter
    the right-hand side).  Raises SingularSystemError if a block fails to
    solve or a residual exceeds 1e-10 relative.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if ti.moment_denominator() <= 0:
        raise SingularSystemError(
            "moment systems need a*b + a*c2 + b*c1 > 0 "
            f"(got {ti.moment_denominator()})"
        )
    mu: Dict[Index, float] = {(0, 0): 1.0}
    for d in range(1, max_degree + 1):
        unknowns = [(n, d - n) for n in range(d, -1, -1)]
        pos = {idx: k for k, idx in enumerate(unknowns)}
        mat = np.zeros((d + 1, d + 1))
        rhs = np.zeros(d + 1)
        for r, target in enumerate(unknowns):
            for idx, coeff in generator_apply(*target, ti).items():
                if idx in pos:
                    mat[r, pos[idx]] += coeff
                else:
                    rhs[r] -= coeff * mu[idx]
        try:
            sol = np.linalg.solve(mat, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(f"degree-{d} block singular: {exc}") from exc
        mu.update({idx: float(v) for idx, v in zip(unknowns, sol)})
    _check_generator_residuals(ti, mu, max_degree)
    return MomentTable(values=mu, tag="ti")


def _check_generator_residuals(ti: TIParams, mu: Dict[Index, float], max_degree: int,
                               rel_tol: float = 1e-10) -> None:
    for d in range(1, max_degree + 1):
        for n in range(d, -1, -1):
            row = generator_apply(n, d - n, ti)
            terms = [coeff * mu[idx] for idx, coeff in row.items()]
            residual = abs(sum(terms))
            scale = max(abs(t) for t in terms)
            if scale > 0 and residual > rel_tol * scale:
                raise SingularSystemError(
                    f"generator identity ({n},{d - n}) residual {residual:.3e} "
                    f"exceeds {rel_tol:.0e} relative"
                )


@dataclass(frozen=True)
class LargeMigrationLimit:
    """Limits as both migration rates grow with fixed ratio gamma.

    ``second_moment`` is the common limit of E[X^2], E[Y^2] and E[XY]; the
    derived variance and covariance therefore coincide and E(X-Y)^2 -> 0.
    """

    mean: float
    second_moment: float

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2

    @property
    def covariance(self) -> float:
        return self.variance


def limit_moments_large_c(a1, a2, b1, b2, gamma, alpha, beta) -> LargeMigrationLimit:
    """Limiting mean and common second moment for c1 = c, c2 = gamma*c, c -> inf."""
    mean_den = gamma * (a1 + a2) + b1 + b2
    if mean_den <= 0:
        raise DegenerateDenominatorError(
            f"gamma*(a1+a2) + b1 + b2 = {mean_den} must be positive"
        )
    mean = (gamma * a1 + b1) / mean_den
    noise = gamma**2 * alpha + beta
    num = 2 * (1 + gamma) * (gamma * a1 + b1) + noise
    den = 2 * (1 + gamma) * mean_den + noise
    return LargeMigrationLimit(mean=mean, second_moment=mean * num / den)
