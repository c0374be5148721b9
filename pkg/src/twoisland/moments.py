"""Exact stationary moments of the finite chains via a moment-transfer system.

Writing mu[n,m] = E[X^n Y^m] under the stationary law, one chain step gives
mu[n,m] = E[ E[(X')^n (Y')^m | X,Y] ], and the inner conditional expectation
is an explicit polynomial of total degree <= n+m in (X, Y) built from
factorial moments of the binomial / hypergeometric offspring blocks.  The
fixed-point system (T - I) mu = 0 with mu[0,0] = 1 is block-triangular by
total degree, so it is solved one small dense block at a time.

All constructions accept ``fractions.Fraction`` probabilities, in which case
every moment is computed in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from .chains import ChainParams, ModelKind, validate_params
from .errors import DegreeOverflowError, SingularSystemError
from .polynomials import Poly2
from .regimes import ScalingRegime

Index = Tuple[int, int]


# ---------------------------------------------------------------------------
# combinatorial helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    if n == k:
        return 1
    if k <= 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def falling(x, k: int):
    """Falling factorial x (x-1) ... (x-k+1); x may be any number type."""
    out = 1
    for step in range(k):
        out = out * (x - step)
    return out


def falling_poly_y(scale: int, k: int) -> Poly2:
    """(scale*y)(scale*y - 1)...(scale*y - k + 1) as a polynomial in y."""
    out = Poly2.constant(1)
    for step in range(k):
        out = out * Poly2.affine_y(-step, scale)
    return out


# ---------------------------------------------------------------------------
# offspring component laws and their factorial moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentLaw:
    """One offspring block of a chain step.

    ``family`` is "binomial" (trials, success prob affine in x or y) or
    "hypergeometric_pair" (the migrant/stayer split of the seed bank, where
    the two counts are jointly sampled without replacement).
    """

    family: str
    trials: int
    var: str = "x"            # binomial only: which frequency drives p
    intercept: object = 0     # binomial only: p = intercept + slope * var
    slope: object = 0
    pool: int = 0             # hypergeometric only: seed-bank size M
    draws: int = 0            # hypergeometric only: migrant draws c


def chain_component_laws(params: ChainParams) -> Dict[str, ComponentLaw]:
    """The A/B/C/D offspring blocks of one step of ``params``."""
    N, M, c = params.N, params.M, params.c
    p1, p2 = params.p1, params.p2
    one = 1 if isinstance(p1, Fraction) else 1.0
    px = (p1, one - p1 - p2)
    laws = {
        "A": ComponentLaw("binomial", N - c, "x", *px),
        "B": ComponentLaw("binomial", c, "x", *px),
    }
    if params.kind is ModelKind.TWO_ISLAND_WF:
        qy = (params.q1, one - params.q1 - params.q2)
        laws["C"] = ComponentLaw("binomial", c, "y", *qy)
        laws["D"] = ComponentLaw("binomial", M - c, "y", *qy)
    else:
        laws["C"] = ComponentLaw("hypergeometric_pair", 0, pool=M, draws=c)
        laws["D"] = laws["C"]
    return laws


def _binomial_power_poly(law: ComponentLaw, power: int) -> Poly2:
    """E[W^power | frequency] for a binomial block, as a polynomial."""
    if law.var == "x":
        p_poly = Poly2.affine_x(law.intercept, law.slope)
    else:
        p_poly = Poly2.affine_y(law.intercept, law.slope)
    out = Poly2.constant(0)
    for k in range(power + 1):
        coeff = stirling2(power, k) * falling(law.trials, k)
        if coeff:
            out = out + p_poly.pow(k).scale(coeff)
    return out


def _hypergeometric_pair_power_poly(law: ComponentLaw, pow_c: int, pow_d: int) -> Poly2:
    """E[C^pow_c D^pow_d | Y] for the seed-bank migrant/stayer split.

    Joint factorial moments: E[C^(r) D^(s)] = c^(r) (M-c)^(s) (MY)^(r+s) / M^(r+s),
    with the (MY)^(r+s) falling factorial expanded as a polynomial in Y.
    """
    M, c = law.pool, law.draws
    out = Poly2.constant(0)
    for r in range(pow_c + 1):
        for s in range(pow_d + 1):
            weight = stirling2(pow_c, r) * stirling2(pow_d, s)
            if not weight:
                continue
            numer = falling(c, r) * falling(M - c, s)
            if not numer:
                continue
            denom = falling(M, r + s)
            out = out + falling_poly_y(M, r + s).scale(
                Fraction(weight * numer, denom)
            )
    return out


def joint_factorial_moments(law: ComponentLaw, orders: Tuple[int, int]) -> Poly2:
    """E[W1^(j) W2^(k) | X,Y] as a bivariate polynomial.

    For binomial blocks the law is univariate, so ``orders`` must be (j, 0):
    E[W^(j)] = trials^(j) p^j.  For the hypergeometric pair, ``orders``
    addresses (migrants, stayers) jointly.
    """
    j, k = orders
    if j < 0 or k < 0:
        raise DegreeOverflowError("factorial-moment orders must be non-negative")
    if law.family == "binomial":
        if k != 0:
            raise DegreeOverflowError("binomial block has a single count; use orders=(j, 0)")
        if law.var == "x":
            p_poly = Poly2.affine_x(law.intercept, law.slope)
        else:
            p_poly = Poly2.affine_y(law.intercept, law.slope)
        return p_poly.pow(j).scale(falling(law.trials, j))
    numer = falling(law.draws, j) * falling(law.pool - law.draws, k)
    return falling_poly_y(law.pool, j + k).scale(
        Fraction(numer, falling(law.pool, j + k))
    )


# ---------------------------------------------------------------------------
# moment-transfer matrix
# ---------------------------------------------------------------------------

def moment_basis(max_degree: int) -> List[Index]:
    """Monomial exponent pairs ordered by total degree, then by x-exponent."""
    return [
        (n, d - n)
        for d in range(max_degree + 1)
        for n in range(d, -1, -1)
    ]


@dataclass
class MomentTransfer:
    """Rows (n, m) -> polynomial E[(X')^n (Y')^m | X=x, Y=y]."""

    max_degree: int
    rows: Dict[Index, Poly2]

    def as_matrix(self) -> np.ndarray:
        basis = moment_basis(self.max_degree)
        pos = {idx: k for k, idx in enumerate(basis)}
        mat = np.zeros((len(basis), len(basis)))
        for row_idx, poly in self.rows.items():
            for col_idx, v in poly.terms.items():
                mat[pos[row_idx], pos[col_idx]] = float(v)
        return mat


def transfer_row(params: ChainParams, n: int, m: int) -> Poly2:
    """Exact polynomial E[(X')^n (Y')^m | X, Y] for one chain step."""
    N, M = params.N, params.M
    laws = chain_component_laws(params)
    if params.kind is ModelKind.TWO_ISLAND_WF:
        # island counts are conditionally independent: split the expectation.
        ac = Poly2.constant(0)
        for i in range(n + 1):
            ac = ac + (
                _binomial_power_poly(laws["A"], i)
                * _binomial_power_poly(laws["C"], n - i)
            ).scale(math.comb(n, i))
        bd = Poly2.constant(0)
        for j in range(m + 1):
            bd = bd + (
                _binomial_power_poly(laws["B"], j)
                * _binomial_power_poly(laws["D"], m - j)
            ).scale(math.comb(m, j))
        poly = ac * bd
    else:
        # C and D share the without-replacement draw, so expand jointly.
        poly = Poly2.constant(0)
        for i in range(n + 1):
            for j in range(m + 1):
                block = (
                    _binomial_power_poly(laws["A"], i)
                    * _binomial_power_poly(laws["B"], j)
                    * _hypergeometric_pair_power_poly(laws["C"], n - i, m - j)
                )
                poly = poly + block.scale(math.comb(n, i) * math.comb(m, j))
    exact = isinstance(params.p1, Fraction)
    scale = Fraction(1, N**n * M**m) if exact else 1.0 / (N**n * M**m)
    return poly.scale(scale)


def transfer_matrix(params: ChainParams, max_degree: int) -> MomentTransfer:
    """Moment-transfer rows for every exponent pair of total degree <= max_degree."""
    if max_degree < 1:
        raise DegreeOverflowError("max_degree must be >= 1")
    validate_params(params)
    rows = {idx: transfer_row(params, *idx) for idx in moment_basis(max_degree)}
    return MomentTransfer(max_degree=max_degree, rows=rows)


# ---------------------------------------------------------------------------
# stationary moments
# ---------------------------------------------------------------------------

@dataclass
class MomentTable:
    """Map (n, m) -> E[X^n Y^m] under one law, tagged with its provenance."""

    values: Dict[Index, float]
    tag: str

    def __getitem__(self, idx: Index):
        return self.values[idx]

    def __contains__(self, idx: Index) -> bool:
        return idx in self.values

    @property
    def max_degree(self) -> int:
        return max(n + m for n, m in self.values)

    def exy2(self):
        """E(X - Y)^2 from the degree-2 moments."""
        return self.values[(2, 0)] - 2 * self.values[(1, 1)] + self.values[(0, 2)]

    def check(self, tol: float = 1e-9) -> None:
        """Raise AssertionError if basic moment inequalities fail."""
        assert abs(self.values[(0, 0)] - 1) <= tol
        for (n, m), v in self.values.items():
            assert -tol <= v <= 1 + tol, f"moment ({n},{m})={v} outside [0,1]"
            if (n + 1, m) in self.values:
                assert self.values[(n + 1, m)] <= v + tol
        if self.max_degree >= 2:
            lhs = self.values[(1, 1)] ** 2
            rhs = self.values[(2, 0)] * self.values[(0, 2)]
            assert lhs <= rhs + tol, "Cauchy-Schwarz violated"


def _solve_block(matrix: List[List[object]], rhs: List[object]) -> List[object]:
    """Dense solve dispatching on coefficient type (exact Fractions or floats)."""
    exact = any(
        isinstance(v, Fraction) for row in matrix for v in row
    ) or any(isinstance(v, Fraction) for v in rhs)
    size = len(rhs)
    if not exact:
        a = np.array(matrix, dtype=float)
        b = np.array(rhs, dtype=float)
        try:
            sol = np.linalg.solve(a, b)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(str(exc)) from exc
        if not np.all(np.isfinite(sol)):
            raise SingularSystemError("non-finite solution")
        return [float(v) for v in sol]
    a = [[Fraction(v) for v in row] for row in matrix]
    b = [Fraction(v) for v in rhs]
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularSystemError("zero pivot in exact elimination")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = a[col][col]
        for r in range(size):
            if r == col or a[r][col] == 0:
                continue
            factor = a[r][col] / inv
            a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
            b[r] = b[r] - factor * b[col]
    return [b[r] / a[r][r] for r in range(size)]


def exact_stationary_moments(params: ChainParams, max_degree: int) -> MomentTable:
    """Stationary E[X^n Y^m] for all n+m <= max_degree, solved degree by degree.

    Each degree-d block is (d+1) linear equations in the (d+1) degree-d
    moments given all lower-degree ones.  Rational inputs give exact output.
    """
    transfer = transfer_matrix(params, max_degree)
    exact = isinstance(params.p1, Fraction)
    one = Fraction(1) if exact else 1.0
    mu: Dict[Index, object] = {(0, 0): one}
    for d in range(1, max_degree + 1):
        unknowns = [(n, d - n) for n in range(d, -1, -1)]
        matrix, rhs = [], []
        for target in unknowns:
            poly = transfer.rows[target]
            row = []
            for col in unknowns:
                coeff = poly.coeff(*col)
                if col == target:
                    coeff = coeff - 1
                row.append(coeff)
            low = sum(
                (v * mu[idx] for idx, v in poly.terms.items() if idx[0] + idx[1] < d),
                0 * one,
            )
            matrix.append(row)
            rhs.append(-low)
        sol = _solve_block(matrix, rhs)
        mu.update(dict(zip(unknowns, sol)))
    return MomentTable(values=mu, tag="chain-exact")


# ---------------------------------------------------------------------------
# leading-order E(X - Y)^2 and central-moment formulas
# ---------------------------------------------------------------------------

def leading_order_exy2(regime: ScalingRegime, kind: Optional[ModelKind] = None) -> float:
    """Coefficient K with E(X-Y)^2 = K * N^(-eps) + o(N^(-eps)) in ``regime``."""
    kind = kind if kind is not None else regime.kind
    m = regime.ratio_m
    if kind is ModelKind.TWO_ISLAND_WF:
        u = regime.p1_hat + m * regime.q1_hat
        v = regime.p2_hat + m * regime.q2_hat
        return (u * v) / (regime.c_hat * (u + v) * (1 + 2 * u + 2 * v))
    u = regime.p1_hat
    v = regime.p2_hat
    return (m * u * v) / (regime.c_hat * (u + v) * (1 + 2 * (m + 1) * (u + v)))


def binomial_central_moment(n: int, p, order: int):
    """Central moments of Bin(n, p) for order in {2, 4}."""
    s = n * p * (1 - p)
    if order == 2:
        return s
    if order == 4:
        return 3 * s**2 + s * (1 - 6 * p * (1 - p))
    raise ValueError("supported orders: 2, 4")


def hypergeometric_central_moment(pool: int, good: int, draws: int, order: int):
    """Central moments of Hg(pool, good, draws) for order in {2, 4}.

    Integer inputs give exact Fractions.
    """
    n, D, N = draws, good, pool
    base = n * D * (N - D) * (N - n)
    exact = all(isinstance(v, int) for v in (n, D, N))
    if order == 2:
        denom = N**2 * (N - 1)
        return Fraction(base, denom) if exact else base / denom
    if order == 4:
        bracket = (
            N**2 * (6 * n**2 + N - 6 * n * N + N**2)
            + 3 * D * (D - N) * (2 * N**2 + (n**2 - n * N) * (6 + N))
        )
        denom = N**4 * (N - 1) * (N - 2) * (N - 3)
        return Fraction(base * bracket, denom) if exact else base * bracket / denom
    raise ValueError("supported orders: 2, 4")
