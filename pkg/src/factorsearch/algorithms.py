"""Search drivers: Grover, factorized letter-by-letter search, its noisy
variant with restart recovery, and letter-at-a-time assembly."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgumentError, RetryExhaustedError
from .oracles import (
    QueryCounter,
    global_diffusion,
    global_oracle,
    letter_diffusion,
    letter_oracle,
    project_letter,
)
from .statevec import (
    ALPHABET,
    DEFAULT_MAX_LETTERS,
    LabelString,
    StateVector,
    as_label,
    check_capacity,
    measure_letter,
    prefix_fixed_superposition,
    uniform_superposition,
)

DEFAULT_MAX_RETRIES = 1000
NOISE_MODEL_DESCRIPTION = (
    "each step's letter oracle is corrupted with probability p, marking a uniformly "
    "random wrong letter; one classical query per measured letter detects a mismatch "
    "and the failed position is retried from the superposition over the letters fixed "
    "so far (model defined by this tool)"
)


@dataclass(frozen=True)
class StepTrace:
    position: int
    measured: int
    nonzero_count: int
    max_amplitude: float
    was_restart: bool = False
    register_size: int = 0
    amplitudes: tuple[complex, ...] | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("amplitudes")
        return out


@dataclass
class SearchOutcome:
    found: LabelString
    target: LabelString
    queries: QueryCounter
    steps: list[StepTrace] = field(default_factory=list)
    restarts: int = 0
    # Target probability just before the final measurement (Grover only).
    target_probability: float | None = None

    @property
    def success(self) -> bool:
        return self.found == self.target


@dataclass(frozen=True)
class NoiseModel:
    """Each step's oracle letter is swapped, with probability ``p``, for a
    uniformly random wrong letter."""

    p: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise InvalidArgumentError(f"noise probability must be in [0, 1), got {self.p}")



def grover_iteration_count(N: int) -> int:
    """Iteration count that maximizes the single-target success probability."""
    if N < 4:
        raise InvalidArgumentError(f"database size must be >= 4, got {N}")
    return int(round(math.pi / (4 * math.asin(1 / math.sqrt(N))) - 0.5))


def grover_success_probability(N: int, k: int) -> float:
    """Closed form ``sin^2((2k+1) asin(1/sqrt N))`` for one marked item."""
    if N < 4 or k < 0:
        raise InvalidArgumentError(f"need N >= 4 and k >= 0, got N={N}, k={k}")
    return math.sin((2 * k + 1) * math.asin(1 / math.sqrt(N))) ** 2


def _trace(state: StateVector, position: int, measured: int, *, restart: bool = False,
           keep_amplitudes: bool = False) -> StepTrace:
    probs = state.probabilities()
    return StepTrace(
        position=position,
        measured=measured,
        nonzero_count=int(np.count_nonzero(probs)),
        max_amplitude=float(np.sqrt(probs.max())),
        was_restart=restart,
        register_size=state.dim,
        amplitudes=tuple(state.amplitudes.tolist()) if keep_amplitudes else None,
    )


def _check_order(order: Sequence[int] | None, n: int) -> list[int]:
    if order is None:
        return list(range(1, n + 1))
    order = [int(p) for p in order]
    if sorted(order) != list(range(1, n + 1)):
        raise InvalidArgumentError(f"order {order} is not a permutation of 1..{n}")
    return order


def grover_search(
    n: int,
    target,
    k: int | None = None,
    rng: np.random.Generator | None = None,
    *,
    max_n: int = DEFAULT_MAX_LETTERS,
    keep_amplitudes: bool = False,
) -> SearchOutcome:
    """Global amplitude amplification followed by a letter-by-letter readout."""
    check_capacity(n, max_n)
    target = as_label(target, n)
    N = ALPHABET**n
    if k is None:
        k = grover_iteration_count(N)
    if k < 0:
        raise InvalidArgumentError(f"iteration count must be >= 0, got {k}")
    if rng is None:
        rng = np.random.default_rng()
    counter = QueryCounter()
    state = uniform_superposition(n, max_n)
    for _ in range(k):
        global_oracle(state, target, counter)
        global_diffusion(state)
    p_target = float(abs(state.amplitudes[target.index]) ** 2)
    steps = []
    for position in range(1, n + 1):
        letter, _ = measure_letter(state, position, rng)
        steps.append(_trace(state, position, letter, keep_amplitudes=keep_amplitudes))
    found = LabelString(tuple(state.fixed[p] for p in range(1, n + 1)))
    return SearchOutcome(found, target, counter.snapshot(), steps, target_probability=p_target)


def factorized_search(
    n: int,
    target,
    order: Sequence[int] | None = None,
    *,
    max_n: int = DEFAULT_MAX_LETTERS,
    keep_amplitudes: bool = False,
    observer: Callable[[int, StateVector], None] | None = None,
) -> SearchOutcome:
    """Oracle, diffusion and projection on one letter at a time.

    Each step doubles the surviving amplitudes, so after step ``j`` exactly
    ``4**(n-j)`` labels remain, each with amplitude ``2**(j-n)``.
    Deterministic: no randomness is consumed. ``observer(j, state)`` is
    called after every step and must not modify the state.
    """
    check_capacity(n, max_n)
    target = as_label(target, n)
    order = _check_order(order, n)
    counter = QueryCounter()
    state = uniform_superposition(n, max_n)
    steps = []
    for position in order:
        letter = target.letter(position)
        letter_oracle(state, position, letter, counter)
        letter_diffusion(state, position)
        project_letter(state, position, letter)
        steps.append(_trace(state, position, letter, keep_amplitudes=keep_amplitudes))
        if observer is not None:
            observer(len(steps), state)
    found = LabelString(tuple(state.fixed[p] for p in range(1, n + 1)))
    return SearchOutcome(found, target, counter.snapshot(), steps)


def factorized_search_with_noise(
    n: int,
    target,
    noise: NoiseModel,
    rng: np.random.Generator,
    order: Sequence[int] | None = None,
    *,
    max_retries: int = DEFAULT_MAX_RETRIES,
    max_n: int = DEFAULT_MAX_LETTERS,
    keep_amplitudes: bool = False,
) -> SearchOutcome:
    """Factorized search with per-step oracle corruption and restart recovery.

    After every measurement one classical query checks the letter. On a
    mismatch the register is rebuilt as a uniform superposition over labels
    sharing the letters fixed so far, and the same position is tried again.
    """
    check_capacity(n, max_n)
    target = as_label(target, n)
    order = _check_order(order, n)
    counter = QueryCounter()
    state = uniform_superposition(n, max_n)
    fixed: dict[int, int] = {}
    steps: list[StepTrace] = []
    restarts = 0
    for position in order:
        wanted = target.letter(position)
        retry = False
        while True:
            marked = wanted
            if rng.random() < noise.p:
                marked = (wanted + 1 + int(rng.integers(ALPHABET - 1))) % ALPHABET
            letter_oracle(state, position, marked, counter)
            letter_diffusion(state, position)
            measured, _ = measure_letter(state, position, rng)
            steps.append(_trace(state, position, measured, restart=retry,
                                keep_amplitudes=keep_amplitudes))
            counter.classical += 1
            if measured == wanted:
                fixed[position] = measured
                break
            restarts += 1
            if restarts > max_retries:
                raise RetryExhaustedError(restarts)
            state = prefix_fixed_superposition(fixed, n, max_n)
            retry = True
    found = LabelString(tuple(fixed[p] for p in range(1, n + 1)))
    return SearchOutcome(found, target, counter.snapshot(), steps, restarts)


def assembly(target, *, keep_amplitudes: bool = False) -> SearchOutcome:
    """Build ``target`` one letter at a time, each from a fresh 4-amplitude register."""
    target = as_label(target)
    counter = QueryCounter()
    letters = []
    steps = []
    for position, wanted in enumerate(target.letters, start=1):
        register = uniform_superposition(1)
        letter_oracle(register, 1, wanted, counter)
        letter_diffusion(register, 1)
        letter, _ = measure_letter(register, 1)
        letters.append(letter)
        steps.append(_trace(register, position, letter, keep_amplitudes=keep_amplitudes))
    return SearchOutcome(LabelString(tuple(letters)), target, counter.snapshot(), steps)
