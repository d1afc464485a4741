"""Fixed matrices of G_5 used by the verification checks."""

from __future__ import annotations

from typing import List, Tuple

from .group import GroupElement, gen_T
from .ring import hecke_ring

Q = 5


def _lam():
    return hecke_ring(Q).lam


def witness_factor() -> GroupElement:
    """[[3L+2, -2L-3], [4L+3, -4L-2]]; T^-2 times this is the level-(L+2) witness."""
    L = _lam()
    return GroupElement((3 * L + 2, -2 * L - 3, 4 * L + 3, -4 * L - 2), Q)


def witness_expected() -> GroupElement:
    L = _lam()
    return GroupElement((-11 * L - 6, 10 * L + 5, 4 * L + 3, -4 * L - 2), Q)


def witness() -> GroupElement:
    """The element a = T^-2 [[3L+2, -2L-3], [4L+3, -4L-2]], trivial mod L+2 but not mod 5."""
    return gen_T(Q) ** -2 * witness_factor()


def power5_pairings() -> List[GroupElement]:
    """The five recorded side pairings of the index-5 normal subgroup of G_5, in listed order."""
    L = _lam()
    rows = [
        (0, 1, -1, 0),
        (L, -1, L + 2, -L),
        (2 * L + 1, -2 * L - 2, L + 2, -2 * L - 1),
        (2 * L + 1, -L - 2, 2 * L + 2, -2 * L - 1),
        (L, -L - 2, 1, -L),
    ]
    return [GroupElement(r, Q) for r in rows]


#: offsets U with x = I + (L+2) U (mod 5) for the generators a, b = S a S^-1, c = J a J^-1
DELTA_OFFSETS: dict = {
    "a": ((4, 0), (4, 1)),
    "b": ((1, 1), (0, 4)),
    "c": ((1, 4), (0, 4)),
}

#: offsets for r = (ac)(ab), s = (ac)(ab)^-1, t = bc
RST_OFFSETS: dict = {
    "r": ((0, 0), (3, 0)),
    "s": ((0, 3), (0, 0)),
    "t": ((-3, 0), (0, 3)),
}

#: X^B = B X B^-1 for X in {r, s, t} and B in {S, T, J}, as products of powers of r, s, t
RST_CONJUGATION: Tuple[Tuple[str, str, Tuple[Tuple[str, int], ...]], ...] = (
    ("r", "S", (("s", -1),)),
    ("r", "T", (("r", 1), ("s", -1), ("t", 2))),
    ("r", "J", (("s", 1),)),
    ("s", "S", (("r", -1),)),
    ("s", "T", (("s", 1),)),
    ("s", "J", (("r", 1),)),
    ("t", "S", (("t", -1),)),
    ("t", "T", (("s", 1), ("t", 1))),
    ("t", "J", (("t", -1),)),
)
