"""
Balanced presentations and Andrews-Curtis moves.

A presentation here is the ordered tuple of relators (w_1, ..., w_n) over the
generators x_1, ..., x_n. The three elementary moves replace one relator and
leave the others fixed:

    mul i j    w_i <- w_i w_j   (j != i)
    inv i      w_i <- w_i^-1
    conj i f   w_i <- f w_i f^-1

Certificates are replayable move sequences; their text form is

    base: <presentation line>
    target: <presentation line>
    <one move per line>
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import permutations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .error_handling import (
    CertificateFormatError,
    MoveIndexError,
    PreconditionError,
    PresentationFormatError,
    RankMismatchError,
    WordParseError,
)
from .word import Word, all_words_up_to, conjugate, format_word, invert, multiply, parse_word

logger = logging.getLogger(__name__)


class MoveKind(str, Enum):
    """Elementary AC-transformations."""
    MUL = "mul"
    INV = "inv"
    CONJ = "conj"


@dataclass(frozen=True)
class ACMove:
    """One elementary AC-transformation with 1-based relator indices."""
    kind: MoveKind
    i: int
    j: Optional[int] = None
    conjugator: Optional[Word] = None

    def __post_init__(self):
        if self.kind == MoveKind.MUL and self.j is None:
            raise MoveIndexError("mul move needs a second index", move=self.kind.value)
        if self.kind == MoveKind.CONJ and self.conjugator is None:
            raise MoveIndexError("conj move needs a conjugator", move=self.kind.value)

    @classmethod
    def mul(cls, i: int, j: int) -> "ACMove":
        return cls(MoveKind.MUL, i, j)

    @classmethod
    def inv(cls, i: int) -> "ACMove":
        return cls(MoveKind.INV, i)

    @classmethod
    def conj(cls, i: int, f: Word) -> "ACMove":
        return cls(MoveKind.CONJ, i, conjugator=f)

    def to_text(self) -> str:
        if self.kind == MoveKind.MUL:
            return f"mul {self.i} {self.j}"
        if self.kind == MoveKind.INV:
            return f"inv {self.i}"
        return f"conj {self.i} {format_word(self.conjugator)}"

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class Presentation:
    """A balanced presentation: exactly ``rank`` relators of that rank."""
    rank: int
    relators: Tuple[Word, ...]

    def __post_init__(self):
        if len(self.relators) != self.rank:
            raise PresentationFormatError(
                f"presentation of rank {self.rank} needs {self.rank} relators, got {len(self.relators)}"
            )
        for relator in self.relators:
            if relator.rank != self.rank:
                raise RankMismatchError(self.rank, relator.rank)

    @classmethod
    def of(cls, *relators: Union[Word, str], rank: Optional[int] = None) -> "Presentation":
        """Build from words or word texts; rank defaults to the number of relators."""
        rank = rank or len(relators)
        words = tuple(r if isinstance(r, Word) else parse_word(r, rank) for r in relators)
        return cls(rank, words)

    def __str__(self) -> str:
        return format_presentation(self)

    def __repr__(self) -> str:
        return f"Presentation({format_presentation(self)!r})"

    def replace(self, index: int, relator: Word) -> "Presentation":
        """Copy with relator ``index`` (1-based) replaced."""
        relators = list(self.relators)
        relators[index - 1] = relator
        return Presentation(self.rank, tuple(relators))


@dataclass(frozen=True)
class Certificate:
    """A replayable sequence of AC-moves from ``base`` to ``claimed_target``."""
    base: Presentation
    moves: Tuple[ACMove, ...]
    claimed_target: Presentation
    metadata: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)


def standard_presentation(rank: int = 2) -> Presentation:
    """The standard presentation (x_1, ..., x_n)."""
    return Presentation(rank, tuple(Word.generator(g, rank) for g in range(1, rank + 1)))


def parse_presentation(line: str, rank: Optional[int] = None) -> Presentation:
    """Parse a presentation line: relator words separated by whitespace."""
    tokens = line.split()
    if not tokens:
        raise PresentationFormatError("empty presentation line", line=line)
    rank = rank or len(tokens)
    if len(tokens) != rank:
        raise PresentationFormatError(
            f"expected {rank} relators, got {len(tokens)} in {line!r}", line=line
        )
    return Presentation(rank, tuple(parse_word(token, rank) for token in tokens))


def format_presentation(p: Presentation) -> str:
    return " ".join(format_word(w) for w in p.relators)


def total_length(p: Presentation) -> int:
    """Sum of relator lengths."""
    return sum(len(w) for w in p.relators)


def validate_move(p: Presentation, m: ACMove) -> None:
    """Raise MoveIndexError unless ``m`` can be applied to ``p``."""
    if not 1 <= m.i <= p.rank:
        raise MoveIndexError(f"relator index {m.i} outside 1..{p.rank}", move=m.to_text())
    if m.kind == MoveKind.MUL:
        if not 1 <= m.j <= p.rank:
            raise MoveIndexError(f"relator index {m.j} outside 1..{p.rank}", move=m.to_text())
        if m.i == m.j:
            raise MoveIndexError("mul needs two distinct relators", move=m.to_text())
    if m.kind == MoveKind.CONJ and m.conjugator.rank != p.rank:
        raise RankMismatchError(p.rank, m.conjugator.rank)


def apply_move(p: Presentation, m: ACMove) -> Presentation:
    """Apply one elementary AC-transformation."""
    validate_move(p, m)
    w = p.relators[m.i - 1]
    if m.kind == MoveKind.MUL:
        new = multiply(w, p.relators[m.j - 1])
    elif m.kind == MoveKind.INV:
        new = invert(w)
    else:
        new = conjugate(w, m.conjugator)
    return p.replace(m.i, new)


def replay(base: Presentation, moves: Iterable[ACMove]) -> Presentation:
    """Fold apply_move over ``moves``."""
    current = base
    for move in moves:
        current = apply_move(current, move)
    return current


@lru_cache(maxsize=32)
def conjugator_words(bound: int, rank: int) -> Tuple[Word, ...]:
    """All freely reduced words of length 1..bound."""
    return tuple(all_words_up_to(bound, rank))


def enumerate_moves(rank: int, conjugator_bound: int) -> List[ACMove]:
    """Every move of the bounded one-step neighbourhood, in a fixed order."""
    moves: List[ACMove] = []
    for i in range(1, rank + 1):
        for j in range(1, rank + 1):
            if i != j:
                moves.append(ACMove.mul(i, j))
    for i in range(1, rank + 1):
        moves.append(ACMove.inv(i))
    if conjugator_bound > 0:
        for i in range(1, rank + 1):
            for f in conjugator_words(conjugator_bound, rank):
                moves.append(ACMove.conj(i, f))
    return moves


def enumerate_neighbors(p: Presentation, conjugator_bound: int) -> List[Tuple[ACMove, Presentation]]:
    """All one-move neighbours, deduplicated by resulting tuple (first move wins)."""
    if conjugator_bound < 0:
        raise PreconditionError("conjugator_bound must be >= 0", operation="enumerate_neighbors")
    seen = set()
    neighbors: List[Tuple[ACMove, Presentation]] = []
    for move in enumerate_moves(p.rank, conjugator_bound):
        result = apply_move(p, move)
        if result.relators in seen:
            continue
        seen.add(result.relators)
        neighbors.append((move, result))
    return neighbors


def is_local_min(p: Presentation) -> bool:
    """True iff no single elementary move decreases the total length.

    Inversion never changes length, and some conjugation shortens a relator
    exactly when that relator is not cyclically reduced, so only the Mul
    moves need to be tried.
    """
    if not all(w.is_cyclically_reduced for w in p.relators):
        return False
    for i in range(p.rank):
        wi = p.relators[i]
        for j in range(p.rank):
            if i != j and len(multiply(wi, p.relators[j])) < len(wi):
                return False
    return True


def canonical_form(p: Presentation) -> Presentation:
    """Least representative over relator rotations and relator orderings."""
    for w in p.relators:
        if not w.is_cyclically_reduced:
            raise PreconditionError(
                f"relator {format_word(w)} is not cyclically reduced", operation="canonical_key"
            )
    rotated = [w.min_rotation() for w in p.relators]
    best = min(permutations(rotated), key=lambda order: tuple(w.shortlex_key() for w in order))
    return Presentation(p.rank, tuple(best))


def _append_varint(key: bytearray, value: int) -> None:
    # unsigned LEB128; values below 128 take one byte
    while value >= 0x80:
        key.append((value & 0x7F) | 0x80)
        value >>= 7
    key.append(value)


def canonical_key(p: Presentation) -> bytes:
    """Byte key identifying ``p`` up to relator rotation and relator order.

    Rank, relator lengths and letter codes are written as unsigned varints,
    so the key stays unambiguous for relators of any length.
    """
    form = canonical_form(p)
    key = bytearray()
    _append_varint(key, form.rank)
    for w in form.relators:
        _append_varint(key, len(w))
        for code in w.letters:
            _append_varint(key, code)
    return bytes(key)


def relabel(p: Presentation, images: Sequence[int]) -> Presentation:
    """Rename generator g to generator images[g-1] (a permutation of 1..rank)."""
    if sorted(images) != list(range(1, p.rank + 1)):
        raise PreconditionError(f"{list(images)} is not a permutation", operation="relabel")
    relators = []
    for w in p.relators:
        codes = [2 * (images[code >> 1] - 1) + (code & 1) for code in w.letters]
        relators.append(Word(tuple(codes), p.rank))
    return Presentation(p.rank, tuple(relators))


def inverse_moves(m: ACMove) -> List[ACMove]:
    """Moves undoing ``m``."""
    if m.kind == MoveKind.INV:
        return [m]
    if m.kind == MoveKind.CONJ:
        return [ACMove.conj(m.i, invert(m.conjugator))]
    return [ACMove.inv(m.j), ACMove.mul(m.i, m.j), ACMove.inv(m.j)]


def swap_moves(i: int, j: int) -> List[ACMove]:
    """Six moves exchanging relators i and j: (u, v) -> (v, u)."""
    return [
        ACMove.inv(j), ACMove.mul(i, j), ACMove.inv(i),
        ACMove.mul(j, i), ACMove.inv(j), ACMove.mul(i, j),
    ]


def rotation_move(p: Presentation, i: int, shift: int) -> Optional[ACMove]:
    """Conjugation turning relator i = a b (|a| = shift) into b a."""
    w = p.relators[i - 1]
    if not w.is_cyclically_reduced:
        raise PreconditionError("rotation needs a cyclically reduced relator", operation="rotation_move")
    shift %= max(len(w), 1)
    if shift == 0:
        return None
    return ACMove.conj(i, invert(Word(w.letters[:shift], p.rank)))


def verify_certificate(c: Certificate) -> bool:
    """Replay ``c.moves`` from ``c.base`` and compare with ``c.claimed_target`` exactly.

    Malformed moves raise MoveIndexError instead of returning False.
    """
    if c.base.rank != c.claimed_target.rank:
        raise RankMismatchError(c.base.rank, c.claimed_target.rank)
    reached = replay(c.base, c.moves)
    if reached.relators != c.claimed_target.relators:
        logger.debug(f"certificate replay reached {reached}, claimed {c.claimed_target}")
        return False
    return True


def parse_move(line: str, rank: int) -> ACMove:
    """Parse one certificate move line."""
    parts = line.split()
    if not parts:
        raise CertificateFormatError("empty move line")
    name = parts[0].lower()
    try:
        if name == MoveKind.INV.value and len(parts) == 2:
            return ACMove.inv(int(parts[1]))
        if name == MoveKind.MUL.value and len(parts) == 3:
            return ACMove.mul(int(parts[1]), int(parts[2]))
        if name == MoveKind.CONJ.value and len(parts) == 3:
            return ACMove.conj(int(parts[1]), parse_word(parts[2], rank))
    except ValueError as e:
        raise CertificateFormatError(f"bad move {line!r}: {e}") from e
    raise CertificateFormatError(f"unrecognised move {line!r}")


def format_certificate(c: Certificate) -> str:
    lines = [f"base: {format_presentation(c.base)}", f"target: {format_presentation(c.claimed_target)}"]
    lines.extend(m.to_text() for m in c.moves)
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    """Parse the certificate text format."""
    numbered = [(number, line.strip()) for number, line in enumerate(text.splitlines(), start=1)]
    numbered = [(number, line) for number, line in numbered if line and not line.startswith("#")]
    lines = [line for _, line in numbered]
    if len(lines) < 2 or not lines[0].startswith("base:") or not lines[1].startswith("target:"):
        raise CertificateFormatError("certificate must start with 'base:' and 'target:' lines")
    try:
        base = parse_presentation(lines[0][len("base:"):])
        target = parse_presentation(lines[1][len("target:"):])
    except (PresentationFormatError, WordParseError) as e:
        raise CertificateFormatError(f"bad presentation line: {e}") from e
    moves = []
    for number, line in numbered[2:]:
        try:
            moves.append(parse_move(line, base.rank))
        except WordParseError as e:
            raise CertificateFormatError(f"bad conjugator on line {number}: {e}", line_number=number) from e
        except CertificateFormatError as e:
            e.line_number = number
            raise
    return Certificate(base, tuple(moves), target)


def read_certificate(path: Path) -> Certificate:
    return parse_certificate(Path(path).read_text(encoding="utf-8"))


def write_certificate(path: Path, c: Certificate) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_certificate(c), encoding="utf-8")


__all__ = [
    "MoveKind",
    "ACMove",
    "Presentation",
    "Certificate",
    "standard_presentation",
    "parse_presentation",
    "format_presentation",
    "total_length",
    "validate_move",
    "apply_move",
    "replay",
    "conjugator_words",
    "enumerate_moves",
    "enumerate_neighbors",
    "is_local_min",
    "canonical_form",
    "canonical_key",
    "relabel",
    "inverse_moves",
    "swap_moves",
    "rotation_move",
    "verify_certificate",
    "parse_move",
    "format_certificate",
    "parse_certificate",
    "read_certificate",
    "write_certificate",
]
