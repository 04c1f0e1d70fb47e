"""Qudit state vectors over base-4 letters.

A register of ``n`` letters holds ``4**n`` complex amplitudes. Basis state
indices follow dictionary order: letter position 1 is the most significant
base-4 digit, so the label ``"23"`` sits at index ``2*4 + 3 = 11``.

Single-letter gates are applied by viewing the flat amplitude array as a
``(4**(p-1), 4, 4**(n-p))`` block and contracting the middle axis, which
never materializes the full ``4**n x 4**n`` operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    InvalidArgumentError,
    InvalidStateError,
)

ALPHABET = 4
HARD_MAX_LETTERS = 13
DEFAULT_MAX_LETTERS = 10
CERTAINTY_TOL = 1e-9
UNITARY_TOL = 1e-12


def check_letter(value: int, base: int = ALPHABET) -> int:
    value = int(value)
    if not 0 <= value < base:
        raise InvalidArgumentError(f"letter {value} is outside 0..{base - 1}")
    return value


@dataclass(frozen=True)
class LabelString:
    """A fixed-length digit string; ``letters[0]`` is the most significant."""

    letters: tuple[int, ...]
    base: int = ALPHABET

    def __post_init__(self):
        if self.base < 2:
            raise InvalidArgumentError(f"base must be >= 2, got {self.base}")
        if len(self.letters) == 0:
            raise InvalidArgumentError("a label needs at least one letter")
        object.__setattr__(
            self, "letters", tuple(check_letter(v, self.base) for v in self.letters)
        )

    @classmethod
    def parse(cls, text: str, base: int = ALPHABET) -> "LabelString":
        """Parse a digit string such as ``"1023"``."""
        if not text:
            raise InvalidArgumentError("empty label string")
        letters = []
        for ch in text:
            if not ch.isdigit() or int(ch) >= base:
                raise InvalidArgumentError(
                    f"invalid character {ch!r} in label {text!r}: "
                    f"expected digits 0..{base - 1}"
                )
            letters.append(int(ch))
        return cls(tuple(letters), base)

    @classmethod
    def from_index(cls, index: int, n: int, base: int = ALPHABET) -> "LabelString":
        index = int(index)
        if n < 1:
            raise InvalidArgumentError(f"label length must be >= 1, got {n}")
        if not 0 <= index < base**n:
            raise InvalidArgumentError(f"index {index} is outside [0, {base}**{n})")
        letters = [0] * n
        for i in range(n - 1, -1, -1):
            index, letters[i] = divmod(index, base)
        return cls(tuple(letters), base)

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def index(self) -> int:
        value = 0
        for v in self.letters:
            value = value * self.base + v
        return value

    def letter(self, position: int) -> int:
        """Letter at 1-based ``position``."""
        return self.letters[check_position(position, self.n) - 1]

    def __str__(self) -> str:
        return "".join(str(v) for v in self.letters)

    def __len__(self) -> int:
        return len(self.letters)


def as_label(label: "LabelString | str | Sequence[int]", n: int | None = None) -> LabelString:
    """Coerce ``label`` to a base-4 :class:`LabelString`, checking its length."""
    if isinstance(label, LabelString):
        out = label
    elif isinstance(label, str):
        out = LabelString.parse(label)
    else:
        out = LabelString(tuple(label))
    if out.base != ALPHABET:
        raise InvalidArgumentError(f"expected a base-{ALPHABET} label, got base {out.base}")
    if n is not None and out.n != n:
        raise InvalidArgumentError(f"label {out} has length {out.n}, expected {n}")
    return out


def check_position(position: int, n: int) -> int:
    position = int(position)
    if not 1 <= position <= n:
        raise InvalidArgumentError(f"position {position} is outside 1..{n}")
    return position


def check_capacity(n: int, max_n: int = DEFAULT_MAX_LETTERS) -> int:
    if n < 1:
        raise InvalidArgumentError(f"letter count must be >= 1, got {n}")
    limit = min(max_n, HARD_MAX_LETTERS)
    if n > limit:
        raise CapacityError(n, limit)
    return n


class Gate4:
    """A 4x4 unitary acting on a single letter."""

    __slots__ = ("matrix",)

    def __init__(self, entries, tol: float = UNITARY_TOL):
        m = np.array(entries, dtype=np.complex128)
        if m.shape != (ALPHABET, ALPHABET):
            raise InvalidArgumentError(f"gate must be 4x4, got shape {m.shape}")
        err = np.max(np.abs(m.conj().T @ m - np.eye(ALPHABET)))
        if err > tol:
            raise InvalidArgumentError(f"gate is not unitary (max |G^H G - I| = {err:.3g})")
        m.setflags(write=False)
        self.matrix = m

    def __matmul__(self, other: "Gate4") -> "Gate4":
        return Gate4(self.matrix @ other.matrix)

    def __repr__(self) -> str:
        return f"Gate4({self.matrix.tolist()!r})"


@dataclass
class StateVector:
    """Amplitudes of an ``n``-letter register plus the letters fixed so far."""

    n: int
    amplitudes: np.ndarray
    fixed: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (ALPHABET**self.n,):
            raise InvalidArgumentError(
                f"expected {ALPHABET**self.n} amplitudes for n={self.n}, "
                f"got shape {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy(), dict(self.fixed))

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        amps = self.amplitudes
        return amps.real**2 + amps.imag**2

    def nonzero_count(self) -> int:
        amps = self.amplitudes
        return int(np.count_nonzero((amps.real != 0) | (amps.imag != 0)))

    def max_amplitude(self) -> float:
        return float(np.sqrt(np.max(self.probabilities())))

    def letter_view(self, position: int) -> np.ndarray:
        """Writable ``(left, 4, right)`` view with the letter at ``position`` in the middle."""
        check_position(position, self.n)
        left = ALPHABET ** (position - 1)
        right = ALPHABET ** (self.n - position)
        return self.amplitudes.reshape(left, ALPHABET, right)

    def letter_probabilities(self, position: int) -> np.ndarray:
        """Unnormalized probability mass of each letter value at ``position``."""
        check_position(position, self.n)
        pairs = self.amplitudes.view(np.float64).reshape(
            ALPHABET ** (position - 1), ALPHABET, -1
        )
        return np.einsum("lar,lar->a", pairs, pairs)


def new_basis_state(n: int, label, max_n: int = DEFAULT_MAX_LETTERS) -> StateVector:
    check_capacity(n, max_n)
    label = as_label(label, n)
    amps = np.zeros(ALPHABET**n, dtype=np.complex128)
    amps[label.index] = 1.0
    return StateVector(n, amps)


def uniform_superposition(n: int, max_n: int = DEFAULT_MAX_LETTERS) -> StateVector:
    """Equal superposition of all ``4**n`` labels (Walsh-Hadamard on the zero string)."""
    check_capacity(n, max_n)
    dim = ALPHABET**n
    return StateVector(n, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def prefix_fixed_superposition(
    fixed: Iterable[tuple[int, int]] | dict[int, int],
    n: int,
    max_n: int = DEFAULT_MAX_LETTERS,
) -> StateVector:
    """Uniform superposition over labels that agree with every ``(position, letter)`` pair.

    This is the restart state of the noisy search: correctly measured letters
    are kept and the remaining letters are put back into superposition.
    """
    check_capacity(n, max_n)
    pairs = list(fixed.items()) if isinstance(fixed, dict) else list(fixed)
    positions = [check_position(p, n) for p, _ in pairs]
    if len(set(positions)) != len(positions):
        raise InvalidArgumentError(f"duplicate fixed positions in {pairs}")
    index: list = [slice(None)] * n
    for position, letter in pairs:
        index[position - 1] = check_letter(letter)
    free = n - len(pairs)
    amps = np.zeros(ALPHABET**n, dtype=np.complex128)
    amps.reshape((ALPHABET,) * n)[tuple(index)] = ALPHABET ** (-free / 2)
    return StateVector(n, amps, {int(p): int(v) for p, v in pairs})


def apply_letter_gate(state: StateVector, position: int, gate: Gate4) -> StateVector:
    """Apply ``I x ... x gate x ... x I`` in place, ``gate`` acting at ``position``."""
    view = state.letter_view(position)
    view[...] = np.matmul(gate.matrix, view)
    return state


def apply_dense(state: StateVector, matrix) -> StateVector:
    """Plain matrix-vector product; a reference path for small registers only."""
    m = np.asarray(matrix, dtype=np.complex128)
    if state.n > 4:
        raise InvalidArgumentError(f"dense application is limited to n <= 4, got n={state.n}")
    if m.shape != (state.dim, state.dim):
        raise InvalidArgumentError(
            f"matrix shape {m.shape} does not match state dimension {state.dim}"
        )
    state.amplitudes[...] = m @ state.amplitudes
    return state


def collapse_letter(state: StateVector, position: int, letter: int, probability: float) -> StateVector:
    """Zero every amplitude whose letter at ``position`` differs, then renormalize."""
    scale = np.zeros((ALPHABET, 1))
    scale[letter] = 1.0 / np.sqrt(probability)
    view = state.letter_view(position)
    view *= scale
    state.fixed[position] = letter
    return state


def measure_letter(
    state: StateVector,
    position: int,
    rng: np.random.Generator | None = None,
) -> tuple[int, StateVector]:
    """Measure one letter with the Born rule and collapse ``state`` in place.

    A letter whose probability is within ``CERTAINTY_TOL`` of 1 is returned
    without touching ``rng``.
    """
    raw = state.letter_probabilities(position)
    total = raw.sum()
    if total <= 0:
        raise InvalidStateError("cannot measure an all-zero state")
    probs = raw / total
    best = int(np.argmax(probs))
    if probs[best] >= 1.0 - CERTAINTY_TOL:
        letter = best
    else:
        if rng is None:
            raise InvalidArgumentError("measurement outcome is random but no rng was given")
        letter = int(rng.choice(ALPHABET, p=probs))
    collapse_letter(state, position, letter, float(raw[letter]))
    return letter, state
