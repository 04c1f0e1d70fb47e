"""Search oracles, reflections and projections, with query accounting.

Only oracle calls count as queries. Diffusions, Hadamards, projections and
measurements are free.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidArgumentError, ProjectionMismatchError
from .statevec import (
    ALPHABET,
    CERTAINTY_TOL,
    Gate4,
    LabelString,
    StateVector,
    apply_letter_gate,
    as_label,
    check_letter,
    check_position,
    collapse_letter,
)


@dataclass
class QueryCounter:
    global_quantum: int = 0
    letter_quantum: int = 0
    classical: int = 0

    def snapshot(self) -> "QueryCounter":
        return QueryCounter(self.global_quantum, self.letter_quantum, self.classical)

    def to_dict(self) -> dict[str, int]:
        return asdict(self)

    @property
    def quantum(self) -> int:
        return self.global_quantum + self.letter_quantum


HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
HADAMARD_PAIR = Gate4(np.kron(HADAMARD, HADAMARD))
ZERO_FLIP = Gate4(np.diag([-1, 1, 1, 1]))

# Reflection about the mean of a letter's four amplitudes: 1/2 J - I.
DIFFUSION_BLOCK = Gate4(0.5 * np.ones((ALPHABET, ALPHABET)) - np.eye(ALPHABET))
_HALVES = np.full(ALPHABET, 0.5)


def letter_oracle_block(target_letter: int) -> Gate4:
    """``diag(+-1)`` with -1 on ``target_letter``."""
    diag = np.ones(ALPHABET)
    diag[check_letter(target_letter)] = -1
    return Gate4(np.diag(diag))


def letter_diffusion_via_hadamard() -> Gate4:
    """``(H x H) F0 (H x H)`` built from the qubit Hadamard.

    Equals ``DIFFUSION_BLOCK`` times -1, i.e. the same operator up to global phase.
    """
    return HADAMARD_PAIR @ ZERO_FLIP @ HADAMARD_PAIR


def _check_dims(state: StateVector, target: LabelString) -> None:
    if target.n != state.n:
        raise InvalidArgumentError(
            f"target {target} has {target.n} letters but the register has {state.n}"
        )


def global_oracle(state: StateVector, target, counter: QueryCounter) -> StateVector:
    """Flip the sign of the target amplitude (one global query)."""
    target = as_label(target)
    _check_dims(state, target)
    state.amplitudes[target.index] *= -1
    counter.global_quantum += 1
    return state


def letter_oracle(
    state: StateVector, position: int, target_letter: int, counter: QueryCounter
) -> StateVector:
    """Flip the sign of every basis state whose letter at ``position`` matches."""
    view = state.letter_view(position)
    view[:, check_letter(target_letter), :] *= -1
    counter.letter_quantum += 1
    return state


def global_diffusion(state: StateVector) -> StateVector:
    """Reflect every amplitude about the mean: ``a -> 2 mean(a) - a``."""
    amps = state.amplitudes
    mean = amps.mean()
    np.subtract(2 * mean, amps, out=amps)
    return state


def letter_diffusion(state: StateVector, position: int) -> StateVector:
    """Apply ``DIFFUSION_BLOCK`` at ``position``.

    Computed as ``a -> sum/2 - a`` over each group of four amplitudes that
    share all other letters, which is what the block does row by row.
    """
    view = state.letter_view(position)
    half_sum = np.matmul(_HALVES, view)
    np.subtract(half_sum[:, None, :], view, out=view)
    return state


def project_letter(state: StateVector, position: int, letter: int) -> StateVector:
    """Fix ``letter`` at ``position``, discarding the (zero-amplitude) rest.

    Raises :class:`ProjectionMismatchError` unless the letter is already certain;
    the error carries the measured letter distribution.
    """
    check_position(position, state.n)
    letter = check_letter(letter)
    probs = state.letter_probabilities(position)
    total = probs.sum()
    if total <= 0 or probs[letter] / total < 1.0 - CERTAINTY_TOL:
        dist = probs / total if total > 0 else probs
        raise ProjectionMismatchError(position, letter, dist)
    return collapse_letter(state, position, letter, float(probs[letter]))
