"""
Whitehead automorphisms of the rank-2 free group and primitivity.

A word is primitive when some automorphism maps it to a basis element. Greedy
descent over Whitehead automorphisms reaches the minimal cyclic length of the
automorphism orbit, so a word is primitive iff the descent ends at length 1.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import permutations, product
from math import gcd
from typing import FrozenSet, List, Optional, Tuple

from .error_handling import PreconditionError, RankMismatchError
from .word import Word, cyclic_reduce, format_word

logger = logging.getLogger(__name__)

SUPPORTED_RANK = 2


class AutKind(str, Enum):
    TYPE_I = "type_i"
    TYPE_II = "type_ii"


@dataclass(frozen=True)
class WhiteheadAut:
    """An automorphism given by the images of the generators.

    ``multiplier`` is the letter code a of a Type II automorphism, which fixes
    a and sends every other generator g to one of g, ga, a^-1 g, a^-1 g a.
    """
    kind: AutKind
    images: Tuple[Word, ...]
    multiplier: Optional[int] = None

    @property
    def rank(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return all(img.letters == (2 * g,) for g, img in enumerate(self.images))

    def __str__(self) -> str:
        names = [format_word(Word.generator(g + 1, self.rank)) for g in range(self.rank)]
        mapping = ", ".join(f"{n}->{format_word(img)}" for n, img in zip(names, self.images))
        return f"{self.kind.value}({mapping})"


def _type_one(rank: int) -> List[WhiteheadAut]:
    auts = []
    for perm in permutations(range(rank)):
        for signs in product((0, 1), repeat=rank):
            images = tuple(Word((2 * perm[g] + signs[g],), rank) for g in range(rank))
            auts.append(WhiteheadAut(AutKind.TYPE_I, images))
    # identity first
    auts.sort(key=lambda a: not a.is_identity)
    return auts


def _type_two(rank: int) -> List[WhiteheadAut]:
    auts = []
    for a in range(2 * rank):
        fixed = a >> 1
        others = [g for g in range(rank) if g != fixed]
        for choices in product(range(4), repeat=len(others)):
            if not any(choices):
                continue
            images = [Word((2 * g,), rank) for g in range(rank)]
            for g, choice in zip(others, choices):
                letter = 2 * g
                codes = {
                    1: (letter, a),
                    2: (a ^ 1, letter),
                    3: (a ^ 1, letter, a),
                }[choice]
                images[g] = Word.from_codes(codes, rank)
            auts.append(WhiteheadAut(AutKind.TYPE_II, tuple(images), multiplier=a))
    return auts


@lru_cache(maxsize=4)
def _auts(rank: int) -> Tuple[WhiteheadAut, ...]:
    return tuple(_type_one(rank) + _type_two(rank))


def generate_whitehead_auts(rank: int = SUPPORTED_RANK) -> List[WhiteheadAut]:
    """All Type I automorphisms (identity first) followed by the non-identity Type II ones."""
    if rank != SUPPORTED_RANK:
        raise PreconditionError(
            f"Whitehead automorphisms are only generated for rank {SUPPORTED_RANK}, got {rank}",
            operation="generate_whitehead_auts",
        )
    return list(_auts(rank))


def apply_aut(aut: WhiteheadAut, w: Word) -> Word:
    """Image of ``w``, freely reduced."""
    if aut.rank != w.rank:
        raise RankMismatchError(aut.rank, w.rank)
    codes: List[int] = []
    for code in w.letters:
        image = aut.images[code >> 1].letters
        if code & 1:
            codes.extend(c ^ 1 for c in reversed(image))
        else:
            codes.extend(image)
    return Word.from_codes(codes, w.rank)


def _cyclic_image(aut: WhiteheadAut, core: Word) -> Word:
    return cyclic_reduce(apply_aut(aut, core))[0]


def minimize_cyclic_length(w: Word) -> Tuple[Word, List[WhiteheadAut]]:
    """Greedy descent on the cyclic core of ``w``.

    Takes the first strictly reducing automorphism in generation order until
    none reduces; returns the final core and the automorphisms applied.
    """
    auts = generate_whitehead_auts(w.rank)
    core = cyclic_reduce(w)[0]
    applied: List[WhiteheadAut] = []
    improved = True
    while improved and len(core) > 1:
        improved = False
        for aut in auts:
            image = _cyclic_image(aut, core)
            if len(image) < len(core):
                core = image
                applied.append(aut)
                improved = True
                break
    return core, applied


@lru_cache(maxsize=None)
def is_primitive(w: Word) -> bool:
    """True iff ``w`` is part of a basis of the free group."""
    if w.rank != SUPPORTED_RANK:
        raise PreconditionError(f"primitivity is decided for rank {SUPPORTED_RANK} only", operation="is_primitive")
    if w.is_empty:
        return False
    if gcd(*w.exponents) != 1:
        return False
    return len(minimize_cyclic_length(w)[0]) == 1


def _cyclic_class(w: Word) -> Word:
    return cyclic_reduce(w)[0].min_rotation()


def primitive_orbit_oracle(max_length: int, rank: int = SUPPORTED_RANK) -> FrozenSet[Word]:
    """Least rotations of every primitive cyclic word of length <= max_length.

    Closes the basis letters under all Whitehead automorphisms while keeping
    cyclic lengths within the bound. Complete because a non-minimal primitive
    word always admits a strictly length-reducing Whitehead automorphism.
    """
    auts = generate_whitehead_auts(rank)
    start = {Word((code,), rank) for code in range(2 * rank)}
    seen = set(start)
    queue = deque(sorted(start, key=lambda w: w.letters))
    while queue:
        current = queue.popleft()
        for aut in auts:
            image = _cyclic_class(apply_aut(aut, current))
            if len(image) <= max_length and image not in seen:
                seen.add(image)
                queue.append(image)
    logger.debug(f"primitive orbit oracle: {len(seen)} cyclic words up to length {max_length}")
    return frozenset(seen)


def is_primitive_by_oracle(w: Word, oracle: FrozenSet[Word]) -> bool:
    """Membership of the cyclic class of ``w`` in a precomputed oracle set."""
    if w.is_empty:
        return False
    return _cyclic_class(w) in oracle


__all__ = [
    "AutKind",
    "WhiteheadAut",
    "generate_whitehead_auts",
    "apply_aut",
    "minimize_cyclic_length",
    "is_primitive",
    "primitive_orbit_oracle",
    "is_primitive_by_oracle",
]
