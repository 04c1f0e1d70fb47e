"""Classical baselines: digitisation, sorted bit-by-bit search, unsorted scan
with memory, and classical assembly.

Databases are complete padded label spaces; item payloads never affect
query counts, so only labels are modeled.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, NotFoundError
from .oracles import QueryCounter
from .statevec import ALPHABET, LabelString, as_label


def digitize(index: int, n: int, base: int = 2) -> LabelString:
    """Most-significant-first digit string of ``index`` with ``n`` digits."""
    if base not in (2, 4):
        raise InvalidArgumentError(f"base must be 2 or 4, got {base}")
    return LabelString.from_index(index, n, base)


def factor(x_bit: int, target_bit: int) -> int:
    """One factor of the product oracle: ``x`` if the target bit is 1 else ``1 - x``."""
    return x_bit if target_bit else 1 - x_bit


def product_oracle(x: Sequence[int], target: Sequence[int]) -> int:
    """1 when every bit of ``x`` matches ``target``, 0 otherwise."""
    if len(x) != len(target):
        raise InvalidArgumentError("label lengths differ")
    out = 1
    for xi, ti in zip(x, target):
        out *= factor(xi, ti)
    return out


class FactorizedOracle:
    """Answers one bit of the hidden label per query.

    ``query(i, bit)`` evaluates the i-th factor at ``bit`` (1-based ``i``).
    """

    def __init__(self, target_bits: Sequence[int], counter: QueryCounter):
        self._bits = tuple(int(b) for b in target_bits)
        self.counter = counter

    def query(self, i: int, bit: int) -> int:
        self.counter.classical += 1
        return factor(bit, self._bits[i - 1])


@dataclass(frozen=True)
class SortedDatabase:
    """All ``2**n_bits`` labels in ascending order, or a sorted subset of them."""

    n_bits: int
    items: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_bits < 1:
            raise InvalidArgumentError(f"n_bits must be >= 1, got {self.n_bits}")
        if self.items is not None:
            items = tuple(int(v) for v in self.items)
            size = len(items)
            if size == 0 or size & (size - 1):
                raise InvalidArgumentError(f"database size must be a power of 2, got {size}")
            if any(b <= a for a, b in zip(items, items[1:])):
                raise InvalidArgumentError("items must be strictly increasing")
            if items[0] < 0 or items[-1] >= 2**self.n_bits:
                raise InvalidArgumentError(f"items must be labels in [0, 2**{self.n_bits})")
            object.__setattr__(self, "items", items)

    @property
    def size(self) -> int:
        return 2**self.n_bits if self.items is None else len(self.items)

    def label_at(self, i: int) -> int:
        return i if self.items is None else self.items[i]

    def bisect(self, value: int) -> int:
        """First position whose label is >= ``value``."""
        if self.items is None:
            return min(max(value, 0), self.size)
        return bisect.bisect_left(self.items, value)


def sorted_search(db: SortedDatabase, target: int, counter: QueryCounter) -> tuple[int, int]:
    """Locate ``target`` by asking for one label bit per query, MSB first.

    Each answer halves the label interval, and sorted storage keeps the
    candidates contiguous. Returns ``(position, queries)``.
    """
    target = int(target)
    if not 0 <= target < 2**db.n_bits:
        raise InvalidArgumentError(f"target {target} is outside the label space")
    oracle = FactorizedOracle(digitize(target, db.n_bits, 2).letters, counter)
    start = counter.classical
    lo, width = 0, 2**db.n_bits
    for i in range(1, db.n_bits + 1):
        width //= 2
        if oracle.query(i, 1):
            lo += width
    queries = counter.classical - start
    pos = db.bisect(lo)
    if pos >= db.size or db.label_at(pos) != lo:
        raise NotFoundError(f"label {target} is not in the database ({queries} queries)")
    return pos, queries


@dataclass
class UnsortedDatabase:
    """Labels ``0..N-1`` stored in a shuffled order."""

    permutation: np.ndarray

    def __post_init__(self):
        self.permutation = np.asarray(self.permutation, dtype=np.int64)
        N = len(self.permutation)
        if N == 0 or not np.array_equal(np.sort(self.permutation), np.arange(N)):
            raise InvalidArgumentError("permutation must be a bijection on [0, N)")

    @classmethod
    def shuffled(cls, N: int, rng: np.random.Generator) -> "UnsortedDatabase":
        return cls(rng.permutation(N))

    @property
    def size(self) -> int:
        return len(self.permutation)


def unsorted_scan(db: UnsortedDatabase, target: int, counter: QueryCounter) -> tuple[int, int]:
    """Inspect items in storage order, never revisiting one, until the global
    oracle matches. The matching inspection counts as a query.

    Returns ``(position, queries)`` with ``queries == position + 1``.
    """
    seen: set[int] = set()
    for pos, label in enumerate(db.permutation.tolist()):
        if label in seen:
            raise AssertionError(f"label {label} inspected twice")
        seen.add(label)
        counter.classical += 1
        if label == target:
            return pos, pos + 1
    raise NotFoundError(f"label {target} is not in the database")


def expected_unsorted_queries(N: int) -> float:
    """Mean queries of a memoryful scan for a uniformly placed target."""
    return (N + 1) / 2


def classical_assembly(target, counter: QueryCounter) -> int:
    """Identify each base-4 letter with two binary factor queries."""
    target = as_label(target)
    start = counter.classical
    bits_per_letter = (ALPHABET - 1).bit_length()
    for letter in target.letters:
        oracle = FactorizedOracle(digitize(letter, bits_per_letter, 2).letters, counter)
        value = 0
        for i in range(1, bits_per_letter + 1):
            value = 2 * value + oracle.query(i, 1)
        assert value == letter
    return counter.classical - start
