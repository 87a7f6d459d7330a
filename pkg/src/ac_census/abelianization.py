"""
Abelianization of balanced presentations.

The abelianization G/[G,G] of a presented group is Z^n modulo the row space of
the exponent-sum matrix of its relators. Its canonical invariants are the
diagonal of the Smith normal form, computed here by integer row and column
operations with pivoting on the smallest nonzero absolute value.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .presentation import Presentation
from .word import exponent_sum

logger = logging.getLogger(__name__)


@dataclass
class IntMatrix:
    """Integer matrix backed by an int64 numpy array."""
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.array(self.entries, dtype=np.int64)
        if self.entries.ndim != 2:
            raise ValueError(f"expected a 2-dimensional grid, got shape {self.entries.shape}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(np.array(rows, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def tolist(self) -> List[List[int]]:
        return self.entries.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.array_equal(self.entries, other.entries))


def relation_matrix(p: Presentation) -> IntMatrix:
    """Exponent sums: entry (i, g) is the exponent sum of generator g in relator i."""
    return IntMatrix.from_rows(
        [[exponent_sum(w, g) for g in range(1, p.rank + 1)] for w in p.relators]
    )


def _smallest_pivot(a: np.ndarray, s: int) -> Optional[Tuple[int, int]]:
    best = None
    best_value = 0
    for i in range(s, a.shape[0]):
        for j in range(s, a.shape[1]):
            value = abs(int(a[i, j]))
            if value and (best is None or value < best_value):
                best, best_value = (i, j), value
    return best


def _non_divisible(a: np.ndarray, s: int) -> Optional[int]:
    pivot = int(a[s, s])
    for i in range(s + 1, a.shape[0]):
        for j in range(s + 1, a.shape[1]):
            if int(a[i, j]) % pivot:
                return i
    return None


def smith_normal_form(m: IntMatrix) -> Tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of ``m``, zeros trailing.

    Returns min(rows, cols) nonnegative integers.
    """
    a = m.entries.copy()
    rows, cols = a.shape
    s = 0
    while s < min(rows, cols):
        pivot = _smallest_pivot(a, s)
        if pivot is None:
            break
        i, j = pivot
        a[[s, i]] = a[[i, s]]
        a[:, [s, j]] = a[:, [j, s]]

        for r in range(s + 1, rows):
            if a[r, s]:
                a[r] -= (a[r, s] // a[s, s]) * a[s]
        for c in range(s + 1, cols):
            if a[s, c]:
                a[:, c] -= (a[s, c] // a[s, s]) * a[:, s]

        if np.count_nonzero(a[s, s + 1:]) or np.count_nonzero(a[s + 1:, s]):
            continue
        offender = _non_divisible(a, s)
        if offender is not None:
            a[s] += a[offender]
            continue
        s += 1

    diagonal = [abs(int(a[k, k])) for k in range(min(rows, cols))]
    nonzero = [d for d in diagonal if d]
    return tuple(nonzero + [0] * (len(diagonal) - len(nonzero)))


def determinant_2x2(m: IntMatrix) -> int:
    (a, b), (c, d) = m.tolist()
    return a * d - b * c


def invariant_factors_2x2(m: IntMatrix) -> Tuple[int, int]:
    """Closed form for 2x2: d1 = gcd of entries, d2 = |det| / d1."""
    (a, b), (c, d) = m.tolist()
    d1 = gcd(gcd(a, b), gcd(c, d))
    if d1 == 0:
        return (0, 0)
    return (d1, abs(a * d - b * c) // d1)


def invariant_factors(p: Presentation) -> Tuple[int, ...]:
    matrix = relation_matrix(p)
    if p.rank == 2:
        return invariant_factors_2x2(matrix)
    return smith_normal_form(matrix)


def has_trivial_abelianization(p: Presentation) -> bool:
    """True iff every invariant factor is 1 (|det| = 1 for a square matrix)."""
    matrix = relation_matrix(p)
    if p.rank == 2:
        return abs(determinant_2x2(matrix)) == 1
    return all(d == 1 for d in smith_normal_form(matrix))


__all__ = [
    "IntMatrix",
    "relation_matrix",
    "smith_normal_form",
    "determinant_2x2",
    "invariant_factors_2x2",
    "invariant_factors",
    "has_trivial_abelianization",
]
