"""Finite-population two-island Wright-Fisher and seed-bank Markov chains.

Both chains track the count of type-1 individuals on two islands of fixed
sizes N and M.  Each generation the counts are resampled:

* Two-island WF: every offspring picks a parent (c of them from the other
  island) and mutates with the island-specific probabilities, so all four
  offspring blocks are conditionally independent binomials.
* Seed bank: the second island neither reproduces nor mutates.  c of its
  members are drawn without replacement into the active island, the rest
  stay dormant, and c binomial offspring of the active island take their
  place.  Type-1 seed-bank mass is conserved: migrants + stayers = j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from .errors import CRangeError, KindMismatchError, ProbRangeError


class ModelKind(Enum):
    TWO_ISLAND_WF = "two_island_wf"
    SEED_BANK = "seed_bank"


@dataclass(frozen=True)
class ChainParams:
    """Model parameters; see :func:`validate_params` for the admissible set."""

    N: int
    M: int
    c: int
    p1: float
    p2: float
    q1: Optional[float] = None
    q2: Optional[float] = None
    kind: ModelKind = ModelKind.TWO_ISLAND_WF


@dataclass(frozen=True)
class ChainState:
    """Type-1 counts (i on island 1, j on island 2)."""

    i: int
    j: int

    def frequencies(self, params: ChainParams) -> Tuple[float, float]:
        return self.i / params.N, self.j / params.M


@dataclass(frozen=True)
class RngSeed:
    """Reproducible stream label: same (seed, stream) -> same trajectory."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.stream])


def _check_prob_pair(name1, v1, name2, v2):
    for name, v in ((name1, v1), (name2, v2)):
        if not (0 < v < 1):
            raise ProbRangeError(f"{name}={v} must lie in the open interval (0, 1)")
    if v1 + v2 >= 1:
        raise ProbRangeError(f"{name1}+{name2}={v1 + v2} must be < 1")


def validate_params(params: ChainParams) -> ChainParams:
    """Return ``params`` unchanged iff every invariant holds.

    Raises CRangeError, ProbRangeError or KindMismatchError otherwise.
    """
    if params.N < 1 or params.M < 1:
        raise CRangeError(f"population sizes must be positive, got N={params.N}, M={params.M}")
    if not (1 <= params.c <= min(params.M, params.N)):
        raise CRangeError(
            f"c={params.c} outside [1, min(M, N)]=[1, {min(params.M, params.N)}]"
        )
    _check_prob_pair("p1", params.p1, "p2", params.p2)
    if params.kind is ModelKind.TWO_ISLAND_WF:
        if params.q1 is None or params.q2 is None:
            raise KindMismatchError("two-island WF requires q1 and q2")
        _check_prob_pair("q1", params.q1, "q2", params.q2)
    else:
        for name, v in (("q1", params.q1), ("q2", params.q2)):
            if v not in (None, 0):
                raise KindMismatchError(
                    f"seed-bank model has no island-2 mutation; {name}={v} must be absent or 0"
                )
    return params


def type1_offspring_prob(p1, p2, x):
    """Probability an offspring of a parent pool at frequency x is type 1."""
    return p1 + (1 - p1 - p2) * x


def conditional_drift(state: ChainState, params: ChainParams) -> Tuple[float, float]:
    """One-step conditional means E[X'-X | X,Y] and E[Y'-Y | X,Y]."""
    N, M, c = params.N, params.M, params.c
    p1, p2 = params.p1, params.p2
    x, y = state.frequencies(params)
    if params.kind is ModelKind.TWO_ISLAND_WF:
        q1, q2 = params.q1, params.q2
        dx = (N - c) / N * (p1 - (p1 + p2) * x) + c / N * (y - x) \
            + c / N * (q1 - (q1 + q2) * y)
        dy = (M - c) / M * (q1 - (q1 + q2) * y) + c / M * (x - y) \
            + c / M * (p1 - (p1 + p2) * x)
    else:
        dx = (N - c) / N * (p1 - (p1 + p2) * x) + c / N * (y - x)
        dy = c / M * (x - y) + c / M * (p1 - (p1 + p2) * x)
    return dx, dy


def sample_steps(
    state: ChainState,
    params: ChainParams,
    rng: np.random.Generator,
    reps: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """Draw ``reps`` independent one-step successors of ``state``.

    Returns integer arrays (i', j') of shape (reps,).  Sampling is exact
    (numpy's binomial/hypergeometric generators, no normal approximation).
    """
    N, M, c = params.N, params.M, params.c
    x, y = state.frequencies(params)
    pp = type1_offspring_prob(params.p1, params.p2, x)
    a = rng.binomial(N - c, pp, size=reps)
    b = rng.binomial(c, pp, size=reps)
    if params.kind is ModelKind.TWO_ISLAND_WF:
        qq = type1_offspring_prob(params.q1, params.q2, y)
        cc = rng.binomial(c, qq, size=reps)
        dd = rng.binomial(M - c, qq, size=reps)
    else:
        # c draws without replacement from the seed bank; stayers keep the rest.
        cc = rng.hypergeometric(state.j, M - state.j, c, size=reps)
        dd = state.j - cc
    return a + cc, b + dd


def step(state: ChainState, params: ChainParams, rng: np.random.Generator) -> ChainState:
    """Advance the chain one generation."""
    i_new, j_new = sample_steps(state, params, rng, reps=1)
    return ChainState(int(i_new[0]), int(j_new[0]))


def initial_state(params: ChainParams) -> ChainState:
    """Deterministic midpoint start used by all chain runs."""
    return ChainState(params.N // 2, params.M // 2)


def iterate_chain(
    params: ChainParams,
    rng: np.random.Generator,
    start: Optional[ChainState] = None,
) -> Iterator[ChainState]:
    """Endless stream of successive states (the start state is not yielded)."""
    state = start if start is not None else initial_state(params)
    while True:
        state = step(state, params, rng)
        yield state


@dataclass
class MomentAccumulator:
    """Streaming raw moments E[X^n Y^m] for n+m <= max_degree.

    Samples are split into contiguous batches; the spread of the batch
    means gives a standard error that tolerates autocorrelation once
    batches are much longer than the mixing time.
    """

    max_degree: int
    _indices: Tuple[Tuple[int, int], ...] = field(init=False)
    _sums: Dict[Tuple[int, int], float] = field(init=False)
    _batch_sums: Dict[Tuple[int, int], list] = field(init=False)
    _batch_counts: list = field(init=False)
    count: int = field(init=False, default=0)

    def __post_init__(self):
        self._indices = tuple(
            (n, m)
            for d in range(self.max_degree + 1)
            for n in range(d, -1, -1)
            for m in (d - n,)
        )
        self._sums = {k: 0.0 for k in self._indices}
        self._batch_sums = {k: [0.0] for k in self._indices}
        self._batch_counts = [0]

    def start_batch(self):
        for k in self._indices:
            self._batch_sums[k].append(0.0)
        self._batch_counts.append(0)

    def update(self, x: float, y: float):
        self.count += 1
        self._batch_counts[-1] += 1
        for (n, m) in self._indices:
            v = x**n * y**m
            self._sums[(n, m)] += v
            self._batch_sums[(n, m)][-1] += v

    def mean(self, n: int, m: int) -> float:
        return self._sums[(n, m)] / self.count

    def means(self) -> Dict[Tuple[int, int], float]:
        return {k: self._sums[k] / self.count for k in self._indices}

    def standard_error(self, n: int, m: int) -> float:
        means = [
            s / c
            for s, c in zip(self._batch_sums[(n, m)], self._batch_counts)
            if c > 0
        ]
        if len(means) < 2:
            return float("nan")
        return float(np.std(means, ddof=1) / math.sqrt(len(means)))


@dataclass
class ChainRunSummary:
    """Result of :func:`run_chain`."""

    params: ChainParams
    moments: Dict[Tuple[int, int], float]
    standard_errors: Dict[Tuple[int, int], float]
    n_samples: int
    steps_executed: int
    final_state: ChainState


def run_chain(
    params: ChainParams,
    burn_in: int,
    n_samples: int,
    thin: int,
    seed: RngSeed,
    max_degree: int = 2,
    n_batches: int = 32,
) -> ChainRunSummary:
    """Run the chain and accumulate stationary raw moments.

    Executes ``burn_in`` steps from the deterministic midpoint start, then
    records a state every ``thin`` steps, ``n_samples`` times in total
    (burn_in + n_samples*thin steps overall).
    """
    if burn_in < 1 or n_samples < 1 or thin < 1:
        raise ValueError("burn_in, n_samples and thin must all be >= 1")
    validate_params(params)
    rng = seed.generator()
    state = initial_state(params)
    steps = 0
    for _ in range(burn_in):
        state = step(state, params, rng)
        steps += 1
    acc = MomentAccumulator(max_degree=max_degree)
    per_batch = max(1, n_samples // n_batches)
    for k in range(n_samples):
        for _ in range(thin):
            state = step(state, params, rng)
            steps += 1
        if k > 0 and k % per_batch == 0:
            acc.start_batch()
        acc.update(*state.frequencies(params))
    ses = {
        idx: acc.standard_error(*idx)
        for idx in acc.means()
    }
    return ChainRunSummary(
        params=params,
        moments=acc.means(),
        standard_errors=ses,
        n_samples=n_samples,
        steps_executed=steps,
        final_state=state,
    )
