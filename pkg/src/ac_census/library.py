"""
Bundled certificates for the hard named presentations.

AK(2) and the four power variants are out of reach of a short genetic
search. Replay-verified trivializations of each ship in ``certificates/``.
A presentation that agrees with one of them up to a signed permutation of
the generators, relator inversion, relator rotation and relator order (after
cyclic reduction) is trivialized by transporting the bundled moves.

An automorphism that permutes generators and inverts some of them commutes
with every elementary move once conjugators are mapped as well, so the
transported sequence replays from the image of the bundled base to a tuple
of distinct basis letters, which ``finish_to_standard`` completes.
"""

import logging
from functools import lru_cache
from itertools import permutations, product
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from .error_handling import CertificateFormatError
from .fixtures import NAMED_PRESENTATIONS
from .gasearch import finish_to_standard, finish_to_target, fitness_hamming
from .presentation import (
    ACMove,
    Certificate,
    MoveKind,
    Presentation,
    read_certificate,
    replay,
    standard_presentation,
    verify_certificate,
)
from .word import Word, cyclic_reduce, invert

logger = logging.getLogger(__name__)

CERTIFICATE_DIR = Path(__file__).parent / "certificates"

CERTIFICATE_FILES: Dict[str, str] = {
    "ak2": "ak2.txt",
    "power-variant[+1,+1]": "power_variant_pp.txt",
    "power-variant[+1,-1]": "power_variant_pm.txt",
    "power-variant[-1,+1]": "power_variant_mp.txt",
    "power-variant[-1,-1]": "power_variant_mm.txt",
}

LetterMap = Tuple[int, ...]


@lru_cache(maxsize=1)
def bundled_certificates() -> Dict[str, Certificate]:
    """Load and replay every bundled certificate, keyed by presentation name."""
    loaded: Dict[str, Certificate] = {}
    for name, filename in CERTIFICATE_FILES.items():
        path = CERTIFICATE_DIR / filename
        cert = read_certificate(path)
        if cert.base.relators != NAMED_PRESENTATIONS[name].relators:
            raise CertificateFormatError(f"bundled certificate {filename} does not start from {name}")
        if cert.claimed_target.relators != standard_presentation(cert.base.rank).relators:
            raise CertificateFormatError(f"bundled certificate {filename} does not end on the standard tuple")
        if not verify_certificate(cert):
            raise CertificateFormatError(f"bundled certificate {filename} does not replay")
        loaded[name] = cert
    logger.debug(f"loaded {len(loaded)} bundled certificates from {CERTIFICATE_DIR}")
    return loaded


def signed_permutations(rank: int) -> Iterator[LetterMap]:
    """Images of the generator codes 0, 2, ... under every signed permutation."""
    for order in permutations(range(rank)):
        for signs in product((0, 1), repeat=rank):
            yield tuple(2 * order[g] + signs[g] for g in range(rank))


def map_word(w: Word, images: LetterMap) -> Word:
    return Word(tuple(images[code >> 1] ^ (code & 1) for code in w.letters), w.rank)


def map_presentation(p: Presentation, images: LetterMap) -> Presentation:
    return Presentation(p.rank, tuple(map_word(w, images) for w in p.relators))


def map_move(m: ACMove, images: LetterMap) -> ACMove:
    if m.kind == MoveKind.CONJ:
        return ACMove.conj(m.i, map_word(m.conjugator, images))
    return m


def cyclic_core_moves(p: Presentation) -> Tuple[List[ACMove], Presentation]:
    """Conjugations taking every relator of ``p`` to its cyclic core."""
    moves = []
    for index, w in enumerate(p.relators, start=1):
        _, conjugator = cyclic_reduce(w)
        if len(conjugator):
            moves.append(ACMove.conj(index, invert(conjugator)))
    return moves, replay(p, moves)


def _alignment(p: Presentation, base: Presentation) -> Optional[Tuple[LetterMap, List[ACMove]]]:
    """A letter map and moves taking ``p`` exactly to the image of ``base``, if any."""
    if p.rank != base.rank:
        return None
    lead, core = cyclic_core_moves(p)
    if sorted(len(w) for w in core.relators) != sorted(len(w) for w in base.relators):
        return None
    for images in signed_permutations(p.rank):
        image = map_presentation(base, images)
        for flags in product((False, True), repeat=p.rank):
            flips = [ACMove.inv(i) for i, flag in enumerate(flags, start=1) if flag]
            start = replay(core, flips)
            if fitness_hamming(start, image) != 0:
                continue
            return images, lead + flips + finish_to_target(start, image)
    return None


def hard_presentation_name(p: Presentation) -> Optional[str]:
    """Name of the bundled presentation ``p`` is a symmetric image of, or None."""
    for name, cert in bundled_certificates().items():
        if _alignment(p, cert.base) is not None:
            return name
    return None


def transport_certificate(p: Presentation, cert: Certificate) -> Optional[Certificate]:
    """Certificate from ``p`` to the standard tuple built from ``cert``, or None."""
    aligned = _alignment(p, cert.base)
    if aligned is None:
        return None
    images, lead = aligned
    body = [map_move(m, images) for m in cert.moves]
    reached = replay(map_presentation(cert.base, images), body)
    moves = lead + body + finish_to_standard(reached)
    transported = Certificate(p, tuple(moves), standard_presentation(p.rank))
    if not verify_certificate(transported):
        raise RuntimeError(f"transported certificate for {p} does not replay")
    return transported


def library_certificate(p: Presentation) -> Optional[Certificate]:
    """A verified trivialization of ``p`` from the bundled certificates, or None."""
    for name, cert in bundled_certificates().items():
        transported = transport_certificate(p, cert)
        if transported is not None:
            logger.info(f"{p}: trivialized from the bundled {name} certificate ({len(transported.moves)} moves)")
            return transported
    return None


__all__ = [
    "CERTIFICATE_DIR",
    "CERTIFICATE_FILES",
    "bundled_certificates",
    "signed_permutations",
    "map_word",
    "map_presentation",
    "map_move",
    "cyclic_core_moves",
    "hard_presentation_name",
    "transport_certificate",
    "library_certificate",
]
