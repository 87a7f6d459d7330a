"""
Free group words.

Words are immutable, freely reduced sequences of letters over a ranked basis
x_1, ..., x_n. Letters are packed as small integers: generator g (1-based)
has code 2*(g-1) and its inverse has code 2*(g-1)+1, so inversion is
``code ^ 1`` and the natural integer order is x < X < y < Y.

Text format: for rank <= 2 the alphabet is ``x y`` (generators) and ``X Y``
(inverses); for any rank the indexed form ``x1 X1 x2 ...`` is accepted and is
the output form above rank 2. The token ``1`` denotes the empty word.
"""

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, List, Sequence, Tuple

from .error_handling import RankMismatchError, WordParseError

EMPTY_WORD_TOKEN = "1"
SHORT_ALPHABET = "xy"

_TOKEN = re.compile(r"([xX])(\d+)|([xyXY])")


def inverse_code(code: int) -> int:
    """Code of the inverse letter."""
    return code ^ 1


def free_reduce(codes: Sequence[int]) -> Tuple[int, ...]:
    """Freely reduce a sequence of letter codes."""
    stack: List[int] = []
    for code in codes:
        if stack and stack[-1] == code ^ 1:
            stack.pop()
        else:
            stack.append(code)
    return tuple(stack)


@dataclass(frozen=True)
class Letter:
    """A generator or its inverse."""
    generator_index: int
    sign: int

    def __post_init__(self):
        if self.generator_index < 1:
            raise WordParseError(f"generator index must be positive, got {self.generator_index}")
        if self.sign not in (1, -1):
            raise WordParseError(f"letter sign must be +1 or -1, got {self.sign}")

    @property
    def code(self) -> int:
        return 2 * (self.generator_index - 1) + (0 if self.sign > 0 else 1)

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(code // 2 + 1, -1 if code & 1 else 1)

    def inverse(self) -> "Letter":
        return Letter(self.generator_index, -self.sign)


@dataclass(frozen=True)
class Word:
    """A freely reduced word of a free group of the given rank."""
    letters: Tuple[int, ...]
    rank: int = 2

    def __post_init__(self):
        if self.rank < 1:
            raise WordParseError(f"rank must be positive, got {self.rank}")
        bound = 2 * self.rank
        previous = -1
        for code in self.letters:
            if not 0 <= code < bound:
                raise WordParseError(f"letter code {code} outside rank {self.rank}")
            if code == previous ^ 1:
                raise WordParseError("word is not freely reduced")
            previous = code

    @classmethod
    def from_codes(cls, codes: Sequence[int], rank: int = 2) -> "Word":
        """Build a word from arbitrary codes, freely reducing them."""
        return cls(free_reduce(codes), rank)

    @classmethod
    def identity(cls, rank: int = 2) -> "Word":
        return cls((), rank)

    @classmethod
    def generator(cls, index: int, rank: int = 2, sign: int = 1) -> "Word":
        if not 1 <= index <= rank:
            raise WordParseError(f"generator index {index} exceeds rank {rank}")
        return cls((Letter(index, sign).code,), rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, rank={self.rank})"

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    @property
    def is_empty(self) -> bool:
        return not self.letters

    @property
    def is_cyclically_reduced(self) -> bool:
        letters = self.letters
        return len(letters) < 2 or letters[0] != letters[-1] ^ 1

    @cached_property
    def exponents(self) -> Tuple[int, ...]:
        """Exponent sum of every generator, in generator order."""
        sums = [0] * self.rank
        for code in self.letters:
            sums[code >> 1] += -1 if code & 1 else 1
        return tuple(sums)

    def letter_list(self) -> List[Letter]:
        return [Letter.from_code(code) for code in self.letters]

    def rotations(self) -> Iterator["Word"]:
        """All cyclic rotations; only meaningful for cyclically reduced words."""
        letters = self.letters
        for shift in range(max(len(letters), 1)):
            yield Word(letters[shift:] + letters[:shift], self.rank)

    def min_rotation(self) -> "Word":
        """Least rotation in letter order. Requires a cyclically reduced word."""
        letters = self.letters
        if not letters:
            return self
        best = min(letters[i:] + letters[:i] for i in range(len(letters)))
        return Word(best, self.rank)

    def shortlex_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Length first, then letters in x < X < y < Y order."""
        return (len(self.letters), self.letters)


def _require_same_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise RankMismatchError(u.rank, v.rank)


def parse_word(text: str, rank: int = 2) -> Word:
    """Parse a word, freely reducing it.

    Accepts ``1`` (or the empty string) for the identity, the short alphabet
    ``xyXY`` and the indexed form ``x1X2``.
    """
    stripped = text.strip()
    if stripped in ("", EMPTY_WORD_TOKEN):
        return Word.identity(rank)
    codes: List[int] = []
    position = 0
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if match is None:
            raise WordParseError(
                f"unknown character {stripped[position]!r} at position {position} in {text!r}",
                text=text, position=position,
            )
        if match.group(1):
            index = int(match.group(2))
            inverse = match.group(1) == "X"
        else:
            char = match.group(3)
            index = SHORT_ALPHABET.index(char.lower()) + 1
            inverse = char.isupper()
        if not 1 <= index <= rank:
            raise WordParseError(
                f"generator index {index} exceeds rank {rank} in {text!r}",
                text=text, position=position,
            )
        codes.append(2 * (index - 1) + (1 if inverse else 0))
        position = match.end()
    return Word.from_codes(codes, rank)


def format_word(word: Word) -> str:
    """Inverse of :func:`parse_word` on reduced words."""
    if not word.letters:
        return EMPTY_WORD_TOKEN
    if word.rank <= len(SHORT_ALPHABET):
        return "".join(
            SHORT_ALPHABET[code >> 1].upper() if code & 1 else SHORT_ALPHABET[code >> 1]
            for code in word.letters
        )
    return "".join(f"{'X' if code & 1 else 'x'}{(code >> 1) + 1}" for code in word.letters)


def multiply(u: Word, v: Word) -> Word:
    """Freely reduced product u*v."""
    _require_same_rank(u, v)
    left, right = u.letters, v.letters
    k = 0
    limit = min(len(left), len(right))
    while k < limit and left[-1 - k] == right[k] ^ 1:
        k += 1
    return Word(left[:len(left) - k] + right[k:], u.rank)


def invert(u: Word) -> Word:
    """Formal inverse: reversed letters with signs flipped."""
    return Word(tuple(code ^ 1 for code in reversed(u.letters)), u.rank)


def conjugate(u: Word, f: Word) -> Word:
    """Freely reduced f*u*f^-1."""
    _require_same_rank(u, f)
    return multiply(multiply(f, u), invert(f))


def cyclic_reduce(u: Word) -> Tuple[Word, Word]:
    """Split u as conjugator * core * conjugator^-1 with a cyclically reduced core."""
    letters = u.letters
    k = 0
    n = len(letters)
    while 2 * k + 1 < n and letters[k] == letters[n - 1 - k] ^ 1:
        k += 1
    return Word(letters[k:n - k], u.rank), Word(letters[:k], u.rank)


def exponent_sum(u: Word, g: int) -> int:
    """Signed count of occurrences of generator g (1-based)."""
    if not 1 <= g <= u.rank:
        raise WordParseError(f"generator index {g} exceeds rank {u.rank}")
    return u.exponents[g - 1]


def cyclic_hamming(u: Word, v: Word) -> int:
    """Hamming distance between cyclic words.

    The length difference plus the fewest positionwise mismatches between the
    shorter word and any rotation of the longer one, aligned at offset 0.
    """
    _require_same_rank(u, v)
    short, long_ = (u.letters, v.letters) if len(u) <= len(v) else (v.letters, u.letters)
    penalty = len(long_) - len(short)
    if not short or not long_:
        return penalty
    n = len(long_)
    best = len(short)
    for shift in range(n):
        mismatches = 0
        for i, code in enumerate(short):
            if code != long_[(i + shift) % n]:
                mismatches += 1
                if mismatches >= best:
                    break
        if mismatches < best:
            best = mismatches
            if best == 0:
                break
    return penalty + best


def enumerate_reduced_words(length: int, rank: int = 2, cyclically_reduced: bool = False) -> Iterator[Word]:
    """All freely reduced words of exactly ``length`` letters, in letter order."""
    if length == 0:
        yield Word.identity(rank)
        return
    for first in range(2 * rank):
        yield from _extend((first,), length, rank, cyclically_reduced)


def _extend(prefix: Tuple[int, ...], length: int, rank: int, cyclically_reduced: bool) -> Iterator[Word]:
    if len(prefix) == length:
        if cyclically_reduced and length > 1 and prefix[0] == prefix[-1] ^ 1:
            return
        yield Word(prefix, rank)
        return
    last = prefix[-1]
    for code in range(2 * rank):
        if code != last ^ 1:
            yield from _extend(prefix + (code,), length, rank, cyclically_reduced)


def all_words_up_to(max_length: int, rank: int = 2, min_length: int = 1) -> List[Word]:
    """Every freely reduced word with min_length <= length <= max_length, shortlex order."""
    words: List[Word] = []
    for length in range(min_length, max_length + 1):
        words.extend(enumerate_reduced_words(length, rank))
    return words


def words_from_letters(letters: Sequence[Letter], rank: int = 2) -> Word:
    """Build and reduce a word from Letter values."""
    return Word.from_codes([letter.code for letter in letters], rank)


__all__ = [
    "Letter",
    "Word",
    "inverse_code",
    "free_reduce",
    "parse_word",
    "format_word",
    "multiply",
    "invert",
    "conjugate",
    "cyclic_reduce",
    "exponent_sum",
    "cyclic_hamming",
    "enumerate_reduced_words",
    "all_words_up_to",
    "words_from_letters",
]
