"""
Todd-Coxeter coset enumeration over the trivial subgroup.

Relator-based (HLT) strategy: every relator is scanned at every live coset,
gaps are filled with new definitions, and coincidences are processed to a
fixed point through a union-find structure with a merge queue before the scan
continues. The order of the group is the number of live cosets once the
table closes.

Cosets are numbered from 1 (coset 1 is the subgroup); 0 marks an undefined
entry. Column ``c`` holds the action of the letter with code ``c``, so the
inverse column is ``c ^ 1``.
"""

import logging
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, List, Optional, Sequence

from .error_handling import PreconditionError
from .presentation import Presentation

logger = logging.getLogger(__name__)

UNDEFINED = 0
DEFAULT_MAX_COSETS = 50_000
# Total definitions allowed per unit of the live-coset budget.
DEFINITION_FACTOR = 64


class EnumerationOutcome(str, Enum):
    FINITE = "finite"
    EXCEEDED = "exceeded"


@dataclass(frozen=True)
class EnumerationResult:
    """Outcome of one enumeration."""
    outcome: EnumerationOutcome
    order: Optional[int]
    budget: int
    cosets_defined: int
    wall_time: float

    @property
    def is_finite(self) -> bool:
        return self.outcome == EnumerationOutcome.FINITE

    def __str__(self) -> str:
        if self.is_finite:
            return str(self.order)
        return f"exceeded({self.budget})"


class _BudgetExceeded(Exception):
    pass


class CosetTable:
    """Partial coset table with coincidence handling."""

    def __init__(self, rank: int, max_cosets: int):
        if max_cosets < 1:
            raise PreconditionError("max_cosets must be >= 1", operation="enumerate_cosets")
        self.rank = rank
        self.columns = 2 * rank
        self.max_cosets = max_cosets
        self.max_definitions = max_cosets * DEFINITION_FACTOR
        # Row 0 is a placeholder so that coset numbers are 1-based.
        self.table: List[List[int]] = [[UNDEFINED] * self.columns, [UNDEFINED] * self.columns]
        self.parent: List[int] = [0, 1]
        self.live = 1
        self.defined = 1

    @property
    def size(self) -> int:
        """Number of cosets ever created, live or dead."""
        return len(self.table) - 1

    def is_live(self, coset: int) -> bool:
        return self.parent[coset] == coset

    def live_cosets(self) -> List[int]:
        return [c for c in range(1, len(self.table)) if self.parent[c] == c]

    def define(self, coset: int, column: int) -> int:
        if self.live >= self.max_cosets or self.defined >= self.max_definitions:
            raise _BudgetExceeded()
        new = len(self.table)
        self.table.append([UNDEFINED] * self.columns)
        self.parent.append(new)
        self.table[coset][column] = new
        self.table[new][column ^ 1] = coset
        self.live += 1
        self.defined += 1
        return new

    def rep(self, coset: int) -> int:
        """Representative of the class of ``coset``, compressing the path."""
        root = coset
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[coset] != root:
            self.parent[coset], coset = root, self.parent[coset]
        return root

    def merge(self, first: int, second: int, queue: Deque[int]) -> None:
        phi, psi = self.rep(first), self.rep(second)
        if phi == psi:
            return
        keep, drop = min(phi, psi), max(phi, psi)
        self.parent[drop] = keep
        self.live -= 1
        queue.append(drop)

    def coincidence(self, alpha: int, beta: int) -> None:
        """Identify alpha and beta and every consequence of doing so."""
        table = self.table
        queue: Deque[int] = deque()
        self.merge(alpha, beta, queue)
        while queue:
            gamma = queue.popleft()
            for column in range(self.columns):
                delta = table[gamma][column]
                if delta == UNDEFINED:
                    continue
                inverse = column ^ 1
                table[delta][inverse] = UNDEFINED
                mu, nu = self.rep(gamma), self.rep(delta)
                if table[mu][column] != UNDEFINED:
                    self.merge(nu, table[mu][column], queue)
                elif table[nu][inverse] != UNDEFINED:
                    self.merge(mu, table[nu][inverse], queue)
                else:
                    table[mu][column] = nu
                    table[nu][inverse] = mu

    def scan_and_fill(self, alpha: int, word: Sequence[int]) -> None:
        """Scan ``word`` at ``alpha`` from both ends, defining cosets to close gaps."""
        table = self.table
        forward, i = alpha, 0
        backward, j = alpha, len(word) - 1
        while True:
            while i <= j and table[forward][word[i]] != UNDEFINED:
                forward = table[forward][word[i]]
                i += 1
            if i > j:
                if forward != backward:
                    self.coincidence(forward, backward)
                return
            while j >= i and table[backward][word[j] ^ 1] != UNDEFINED:
                backward = table[backward][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(forward, backward)
                return
            if i == j:
                # deduction
                table[forward][word[i]] = backward
                table[backward][word[i] ^ 1] = forward
                return
            self.define(forward, word[i])

    def is_complete(self) -> bool:
        return all(
            UNDEFINED not in self.table[c] for c in range(1, len(self.table)) if self.parent[c] == c
        )

    def compressed(self) -> List[List[int]]:
        """Live rows renumbered 0..n-1, entries mapped through ``rep``."""
        live = self.live_cosets()
        index = {c: k for k, c in enumerate(live)}
        return [[index[self.rep(entry)] for entry in self.table[c]] for c in live]

    def columns_are_permutations(self) -> bool:
        rows = self.compressed()
        n = len(rows)
        for column in range(self.columns):
            image = [row[column] for row in rows]
            if sorted(image) != list(range(n)):
                return False
            for k in range(n):
                if rows[image[k]][column ^ 1] != k:
                    return False
        return True

    def run(self, relators: Sequence[Sequence[int]]) -> None:
        """HLT main loop; raises the internal budget signal on overflow."""
        relators = [r for r in relators if r]
        alpha = 1
        while alpha < len(self.table):
            if self.is_live(alpha):
                for relator in relators:
                    self.scan_and_fill(alpha, relator)
                    if not self.is_live(alpha):
                        break
                if self.is_live(alpha):
                    for column in range(self.columns):
                        if self.table[alpha][column] == UNDEFINED:
                            self.define(alpha, column)
            alpha += 1


def run_enumeration(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> Optional[CosetTable]:
    """Closed coset table of ``p``, or None when the budget runs out."""
    table = CosetTable(p.rank, max_cosets)
    try:
        table.run([w.letters for w in p.relators])
    except _BudgetExceeded:
        return None
    return table


def enumerate_cosets(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> EnumerationResult:
    """Order of the group presented by ``p``, or Exceeded once more than
    ``max_cosets`` cosets would be live at once."""
    table = CosetTable(p.rank, max_cosets)
    start = time.perf_counter()
    try:
        table.run([w.letters for w in p.relators])
    except _BudgetExceeded:
        elapsed = time.perf_counter() - start
        logger.warning(f"coset enumeration of {p} exceeded {max_cosets} cosets")
        return EnumerationResult(EnumerationOutcome.EXCEEDED, None, max_cosets, table.defined, elapsed)
    elapsed = time.perf_counter() - start
    logger.debug(f"{p}: order {table.live} after {table.defined} definitions")
    return EnumerationResult(EnumerationOutcome.FINITE, table.live, max_cosets, table.defined, elapsed)


__all__ = [
    "EnumerationOutcome",
    "EnumerationResult",
    "CosetTable",
    "run_enumeration",
    "enumerate_cosets",
    "DEFAULT_MAX_COSETS",
]
