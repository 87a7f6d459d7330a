"""
Named presentations.

Group relations u = v are stored as relators u v^-1, freely reduced.
"""

from typing import Dict, List, Tuple

from .error_handling import PreconditionError
from .presentation import Presentation
from .word import Word, invert, multiply, parse_word


def relator_from_equation(left: str, right: str, rank: int = 2) -> Word:
    """The relator u v^-1 of the relation u = v."""
    return multiply(parse_word(left, rank), invert(parse_word(right, rank)))


def from_equations(*equations: Tuple[str, str], rank: int = 2) -> Presentation:
    return Presentation(rank, tuple(relator_from_equation(u, v, rank) for u, v in equations))


def ak(n: int) -> Presentation:
    """AK(n) = <x, y | x^n = y^(n+1), xyx = yxy>, n >= 2."""
    if n < 2:
        raise PreconditionError(f"AK(n) is defined for n >= 2, got {n}", operation="ak")
    return from_equations(("x" * n, "y" * (n + 1)), ("xyx", "yxy"))


# <x, y | x^-1 y^2 x = y^3, y^-1 x^2 y = x^3>
CONJUGATE_POWERS = from_equations(("Xyyx", "yyy"), ("Yxxy", "xxx"))

# <x, y, z | y^-1 x y = x^2, z^-1 y z = y^2, x^-1 z x = z^2>
RANK_THREE_CYCLE = from_equations(
    ("X2x1x2", "x1x1"), ("X3x2x3", "x2x2"), ("X1x3x1", "x3x3"), rank=3
)

AK3 = ak(3)

# <x, y | x^2 = y^3, xyx = yxy>, trivialized by certificates/ak2.txt
AK2 = ak(2)

# <x, y | yxy = x^2, xyx = y^4>
ORDER_120 = from_equations(("yxy", "xx"), ("xyx", "yyyy"))


def power_variant(epsilon: int, delta: int) -> Presentation:
    """<x, y | x^-1 y^2 x = y^3, x^2 = y^epsilon x y^delta>, epsilon, delta in {1, -1}."""
    if epsilon not in (1, -1) or delta not in (1, -1):
        raise PreconditionError("epsilon and delta must be +1 or -1", operation="power_variant")
    power = {1: "y", -1: "Y"}
    return from_equations(("Xyyx", "yyy"), ("xx", power[epsilon] + "x" + power[delta]))


POWER_VARIANTS: List[Presentation] = [
    power_variant(epsilon, delta) for epsilon in (1, -1) for delta in (1, -1)
]


NAMED_PRESENTATIONS: Dict[str, Presentation] = {
    "conjugate-powers": CONJUGATE_POWERS,
    "rank3-cycle": RANK_THREE_CYCLE,
    "ak3": AK3,
    "ak2": AK2,
    "order120": ORDER_120,
    **{f"power-variant[{e:+d},{d:+d}]": power_variant(e, d) for e in (1, -1) for d in (1, -1)},
}


__all__ = [
    "relator_from_equation",
    "from_equations",
    "ak",
    "CONJUGATE_POWERS",
    "RANK_THREE_CYCLE",
    "AK3",
    "AK2",
    "ORDER_120",
    "power_variant",
    "POWER_VARIANTS",
    "NAMED_PRESENTATIONS",
]
