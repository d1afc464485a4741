"""Exact computation in Hecke groups G_q, their Farey symbols and congruence quotients."""

__version__ = "0.1.0"

from .group import GroupElement, decompose, eval_word, gen_S, gen_T
from .ring import FiniteRing, RingElement, hecke_ring, min_poly, quotient_ring

__all__ = [
    "FiniteRing", "GroupElement", "RingElement", "decompose", "eval_word", "gen_S", "gen_T",
    "hecke_ring", "min_poly", "quotient_ring",
]
