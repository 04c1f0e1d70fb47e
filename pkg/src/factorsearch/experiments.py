"""Seeded reproduction harness: comparison table, Grover sweep, noise sweep.

Every stochastic trial draws from its own generator seeded by
``(seed, trial_index)``, so results do not depend on execution order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .algorithms import (
    NoiseModel,
    factorized_search,
    factorized_search_with_noise,
    grover_iteration_count,
    grover_search,
    grover_success_probability,
)
from .classical import SortedDatabase, expected_unsorted_queries, sorted_search
from .errors import InvalidArgumentError, RetryExhaustedError
from .oracles import QueryCounter, global_diffusion, global_oracle
from .statevec import (
    ALPHABET,
    DEFAULT_MAX_LETTERS,
    LabelString,
    as_label,
    check_capacity,
    uniform_superposition,
)

ALGORITHMS = (
    "grover",
    "factorized",
    "noisy",
    "assembly",
    "classical",
    "compare",
    "grover-sweep",
    "noise-sweep",
)

Z95 = 1.959963984540054


@dataclass
class ExperimentConfig:
    algorithm: str
    n: int | list[int] = 1
    target: str = "random"
    seed: int = 0
    noise_p: float | list[float] = 0.0
    order: str = "default"
    trials: int = 1
    output: str = "json"
    max_n: int = DEFAULT_MAX_LETTERS
    iterations: int | None = None
    trace: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidArgumentError(f"unknown algorithm {self.algorithm!r}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.trials < 1:
            raise InvalidArgumentError(f"trials must be >= 1, got {self.trials}")

    def to_dict(self) -> dict:
        return asdict(self)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def random_label(n: int, rng: np.random.Generator) -> LabelString:
    return LabelString(tuple(int(v) for v in rng.integers(ALPHABET, size=n)))


def resolve_target(target, n: int, rng: np.random.Generator) -> LabelString:
    if target is None or target == "random":
        return random_label(n, rng)
    return as_label(target, n)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    N: int
    quantum_factorized_queries: int
    classical_sorted_queries: int
    classical_unsorted_expected: float
    grover_queries: int
    sorting_cost_formula: float
    ratio_sorted_over_quantum: float
    target: str

    def to_dict(self) -> dict:
        return asdict(self)


def run_comparison(
    n_values: Iterable[int],
    seed: int = 0,
    *,
    max_n: int = DEFAULT_MAX_LETTERS,
) -> list[ComparisonRow]:
    """One row per ``n``: executed query counts for the factorized, sorted and
    Grover searches; the unsorted mean and sorting cost are closed forms."""
    n_values = list(n_values)
    for n in n_values:
        check_capacity(n, max_n)
    rows = []
    for n in n_values:
        rng = trial_rng(seed, n)
        target = random_label(n, rng)
        N = ALPHABET**n

        quantum = factorized_search(n, target, max_n=max_n)
        assert quantum.success and quantum.queries.letter_quantum == n
        assert quantum.queries.global_quantum == 0 and quantum.queries.classical == 0

        counter = QueryCounter()
        pos, sorted_queries = sorted_search(SortedDatabase(2 * n), target.index, counter)
        assert pos == target.index and counter.classical == sorted_queries

        grover = grover_search(n, target, rng=rng, max_n=max_n)
        assert grover.queries.global_quantum == grover_iteration_count(N)

        q = quantum.queries.letter_quantum
        rows.append(
            ComparisonRow(
                n=n,
                N=N,
                quantum_factorized_queries=q,
                classical_sorted_queries=counter.classical,
                classical_unsorted_expected=expected_unsorted_queries(N),
                grover_queries=grover.queries.global_quantum,
                sorting_cost_formula=N * math.log2(N),
                ratio_sorted_over_quantum=counter.classical / q,
                target=str(target),
            )
        )
    return rows


@dataclass(frozen=True)
class GroverSweepPoint:
    k: int
    measured: float
    analytic: float

    def to_dict(self) -> dict:
        return asdict(self)


def sweep_grover(n: int, k_max: int | None = None, target=None, *, max_n: int = 6) -> list[GroverSweepPoint]:
    """Target probability after each of ``k = 0..k_max`` Grover iterations,
    read from the amplitudes (no sampling) next to the closed form."""
    check_capacity(n, max_n)
    N = ALPHABET**n
    if k_max is None:
        k_max = 2 * grover_iteration_count(N)
    target = as_label(target if target is not None else "0" * n, n)
    state = uniform_superposition(n, max_n)
    counter = QueryCounter()
    points = []
    for k in range(k_max + 1):
        if k:
            global_oracle(state, target, counter)
            global_diffusion(state)
        measured = float(abs(state.amplitudes[target.index]) ** 2)
        points.append(GroverSweepPoint(k, measured, grover_success_probability(N, k)))
    return points


@dataclass(frozen=True)
class NoiseAggregate:
    p: float
    n: int
    trials: int
    successes: int
    failures: int
    success_rate: float
    mean_quantum_queries: float
    ci95_half_width: float
    expected_quantum_queries: float
    mean_restarts: float
    mean_classical_queries: float

    def to_dict(self) -> dict:
        return asdict(self)


def _mean_ci(values: Sequence[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return math.nan, math.nan
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, 0.0
    return mean, float(Z95 * arr.std(ddof=1) / math.sqrt(arr.size))


def noise_sweep(
    n: int,
    p_values: Iterable[float],
    trials: int,
    seed: int = 0,
    target=None,
    *,
    max_retries: int = 1000,
    max_n: int = DEFAULT_MAX_LETTERS,
) -> list[NoiseAggregate]:
    """Aggregate the noisy search over ``trials`` seeded runs per noise level.

    Targets are drawn per trial unless ``target`` is given. A run that hits the
    retry ceiling is counted as a failure and excluded from the query means.
    """
    check_capacity(n, max_n)
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    p_values = [float(p) for p in p_values]
    for p in p_values:
        if not 0.0 <= p <= 0.9:
            raise InvalidArgumentError(f"noise probability must be in [0, 0.9], got {p}")
    out = []
    for p in p_values:
        noise = NoiseModel(p)
        queries, restarts, classical = [], [], []
        failures = 0
        for t in range(trials):
            rng = trial_rng(seed, t)
            label = resolve_target(target, n, rng)
            try:
                res = factorized_search_with_noise(
                    n, label, noise, rng, max_retries=max_retries, max_n=max_n
                )
            except RetryExhaustedError:
                failures += 1
                continue
            if not res.success:
                failures += 1
                continue
            queries.append(res.queries.letter_quantum)
            restarts.append(res.restarts)
            classical.append(res.queries.classical)
        mean_q, half = _mean_ci(queries)
        successes = trials - failures
        out.append(
            NoiseAggregate(
                p=p,
                n=n,
                trials=trials,
                successes=successes,
                failures=failures,
                success_rate=successes / trials,
                mean_quantum_queries=mean_q,
                ci95_half_width=half,
                expected_quantum_queries=n / (1 - p),
                mean_restarts=float(np.mean(restarts)) if restarts else math.nan,
                mean_classical_queries=float(np.mean(classical)) if classical else math.nan,
            )
        )
    return out
