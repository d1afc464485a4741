"""Finite quotients of G_5 modulo principal ideals and the non-congruence argument.

Residue matrices are handled as packed integer codes (see ``_accel``); a
``FiniteMatrixGroup`` is a closed set of such codes with its residue ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _accel
from .data import DELTA_OFFSETS, Q, RST_CONJUGATION, RST_OFFSETS, power5_pairings, witness
from .group import GroupElement, decompose, gen_S, gen_T
from .ring import FiniteRing, RingElement, hecke_ring, quotient_ring


def _as_element(alpha, q: int = Q) -> RingElement:
    return hecke_ring(q).coerce(alpha) if not isinstance(alpha, RingElement) else alpha


@lru_cache(maxsize=None)
def _ring_for(coeffs: Tuple[int, ...], q: int) -> FiniteRing:
    return quotient_ring(hecke_ring(q).element(coeffs))


def finite_ring(alpha, q: int = Q) -> FiniteRing:
    """Cached quotient ring Z[lambda_q]/(alpha)."""
    alpha = _as_element(alpha, q)
    return _ring_for(alpha.coeffs, alpha.ring.q)


# -- residue matrices -------------------------------------------------------------

def entries_code(entries: Sequence, R: FiniteRing) -> int:
    """Canonical projective code of a matrix given by four ring entries (no determinant check)."""
    _, _, neg = R.tables()
    a, b, c, d = (R.reduce_code(x) for x in entries)
    code = _accel.encode4(a, b, c, d, R.cardinality)
    return int(_accel.canonical(code, neg, R.cardinality))


def offset_code(U, R: FiniteRing, pi: Optional[RingElement] = None) -> int:
    """Code of I + pi*U, with pi = lambda + 2 by default."""
    ring = R.ring
    pi = ring.lam + 2 if pi is None else pi
    (u11, u12), (u21, u22) = U
    return entries_code((1 + pi * u11, pi * u12, pi * u21, 1 + pi * u22), R)


@dataclass(frozen=True)
class ProjectiveResidueMatrix:
    """A residue matrix up to sign, stored as its canonical code."""

    ring: FiniteRing
    code: int

    @property
    def entries(self) -> Tuple[Tuple[int, ...], ...]:
        a, b, c, d = (int(x) for x in _accel.decode4(self.code, self.ring.cardinality))
        return tuple(self.ring.decode(x) for x in (a, b, c, d))

    def lifted(self) -> Tuple[RingElement, ...]:
        return tuple(self.ring.lift(r) for r in self.entries)

    def __str__(self):
        a, b, c, d = (str(x) for x in self.lifted())
        return f"[[{a},{b}],[{c},{d}]] mod ({self.ring.alpha})"


def reduce_matrix(g: GroupElement, R: FiniteRing) -> ProjectiveResidueMatrix:
    return ProjectiveResidueMatrix(R, entries_code(g.entries, R))


def identity_code(R: FiniteRing) -> int:
    return entries_code((1, 0, 0, 1), R)


def is_congruence_member(g: GroupElement, alpha) -> bool:
    """True iff g is +-I entrywise modulo (alpha)."""
    R = finite_ring(alpha, g.q)
    return entries_code(g.entries, R) == identity_code(R)


# -- finite matrix groups --------------------------------------------------------------

@dataclass
class FiniteMatrixGroup:
    """A subgroup of PSL2 over a finite residue ring, as canonical codes in BFS order."""

    ring: FiniteRing
    codes: np.ndarray
    generators: Tuple[int, ...] = ()
    _sorted: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.codes = np.asarray(self.codes, dtype=np.int64)
        self._sorted = np.sort(self.codes)

    @property
    def order(self) -> int:
        return int(self.codes.size)

    def __len__(self):
        return self.order

    @property
    def identity(self) -> int:
        return identity_code(self.ring)

    def _tables(self):
        add, mul, neg = self.ring.tables()
        return add, mul, neg, self.ring.cardinality

    def mul(self, x, y):
        add, mul, neg, card = self._tables()
        return _accel.matmul(x, y, add, mul, neg, card)

    def inv(self, x):
        _, _, neg, card = self._tables()
        return _accel.inverse(x, neg, card)

    def conj(self, x, h):
        """h x h^-1 (elementwise over arrays)."""
        return self.mul(self.mul(h, x), self.inv(h))

    def twist(self, x):
        """J x J^-1 with J = [[0,1],[1,0]]: (a, b, c, d) -> (d, c, b, a)."""
        _, _, neg, card = self._tables()
        a, b, c, d = _accel.decode4(x, card)
        return _accel.canonical(_accel.encode4(d, c, b, a, card), neg, card)

    def power(self, x, n: int):
        out = np.full(np.shape(x), self.identity, dtype=np.int64)
        base = np.asarray(x, dtype=np.int64)
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        pos = np.searchsorted(self._sorted, x)
        pos = np.minimum(pos, self._sorted.size - 1)
        return self._sorted[pos] == x

    def issubset(self, other: "FiniteMatrixGroup") -> bool:
        return bool(other.contains(self.codes).all())

    def same_set(self, other: "FiniteMatrixGroup") -> bool:
        return self.order == other.order and np.array_equal(self._sorted, other._sorted)

    def subgroup(self, gens: Iterable[int], cap: Optional[int] = None) -> "FiniteMatrixGroup":
        return closure(self.ring, gens, cap)

    def element(self, code: int) -> ProjectiveResidueMatrix:
        return ProjectiveResidueMatrix(self.ring, int(code))


def closure(R: FiniteRing, gens: Iterable[int], cap: Optional[int] = None) -> FiniteMatrixGroup:
    """BFS closure of generator codes; in a finite group this is the generated subgroup."""
    gens = tuple(int(g) for g in gens)
    add, mul, neg = R.tables()
    ident = identity_code(R)
    # inverses are included so the discovery order matches a symmetric generating set
    gset: List[int] = []
    for g in gens:
        for h in (g, int(_accel.inverse(g, neg, R.cardinality))):
            if h not in gset:
                gset.append(h)
    codes = _accel.closure(np.array(gset or [ident], dtype=np.int64), ident, add, mul, neg,
                           R.cardinality, cap)
    return FiniteMatrixGroup(R, codes, gens)


def image_group(generators: Sequence[GroupElement], alpha, cap: Optional[int] = None) -> FiniteMatrixGroup:
    """Image of the subgroup generated by ``generators`` in PSL2(Z[lambda]/(alpha))."""
    q = generators[0].q if generators else Q
    R = finite_ring(alpha, q)
    return closure(R, (entries_code(g.entries, R) for g in generators), cap)


# -- the quotients of G_5 used below ---------------------------------------------------

@lru_cache(maxsize=None)
def q5() -> FiniteMatrixGroup:
    """G_5 / G(5,5)."""
    return image_group([gen_S(Q), gen_T(Q)], 5)


@lru_cache(maxsize=None)
def q_pi() -> FiniteMatrixGroup:
    """G_5 / G(5, lambda+2)."""
    return image_group([gen_S(Q), gen_T(Q)], hecke_ring(Q).lam + 2)


def residue_map(src: FiniteRing, dst: FiniteRing) -> np.ndarray:
    """Induced map on residue codes when the ideal of ``src`` lies inside that of ``dst``."""
    if not dst.alpha.divides(src.alpha):
        raise ValueError(f"({src.alpha}) is not contained in ({dst.alpha})")
    return np.array([dst.reduce_code(src.lift(src.decode(c))) for c in range(src.cardinality)],
                    dtype=np.int64)


def project(G: FiniteMatrixGroup, dst: FiniteRing, codes=None) -> np.ndarray:
    """Images of codes of G (all by default) under the reduction to ``dst``."""
    codes = G.codes if codes is None else np.asarray(codes, dtype=np.int64)
    m = residue_map(G.ring, dst)
    _, _, neg = dst.tables()
    a, b, c, d = _accel.decode4(codes, G.ring.cardinality)
    return _accel.canonical(_accel.encode4(m[a], m[b], m[c], m[d], dst.cardinality), neg,
                            dst.cardinality)


def group_code(G: FiniteMatrixGroup, g: GroupElement) -> int:
    return entries_code(g.entries, G.ring)


def delta_codes(G: FiniteMatrixGroup) -> Dict[str, int]:
    """Codes of a, b = S a S^-1 and c = J a J^-1 in the mod-5 quotient."""
    a = group_code(G, witness())
    S = group_code(G, gen_S(Q))
    b = int(G.conj(a, S))
    c = int(G.twist(a))
    return {"a": a, "b": b, "c": c}


def rst_codes(G: FiniteMatrixGroup) -> Dict[str, int]:
    d = delta_codes(G)
    ac = G.mul(d["a"], d["c"])
    ab = G.mul(d["a"], d["b"])
    return {
        "r": int(G.mul(ac, ab)),
        "s": int(G.mul(ac, G.inv(ab))),
        "t": int(G.mul(d["b"], d["c"])),
    }


@dataclass
class KernelReport:
    order: int
    abelian: bool
    exponent: int
    generated_by_delta: bool
    quotient_orders: Tuple[int, int]

    @property
    def ok(self) -> bool:
        return (self.order == 125 and self.abelian and self.exponent == 5
                and self.generated_by_delta and self.quotient_orders[0] == self.quotient_orders[1] * 125)

    def to_json(self) -> dict:
        return {"order": self.order, "abelian": self.abelian, "exponent": self.exponent,
                "generatedByDelta": self.generated_by_delta,
                "quotientOrders": {"mod5": self.quotient_orders[0], "modPi": self.quotient_orders[1]}}


def kernel_codes(Q5: FiniteMatrixGroup, Qpi: FiniteMatrixGroup) -> np.ndarray:
    """Elements of Q5 mapping to the identity of Qpi, in Q5's BFS order."""
    img = project(Q5, Qpi.ring)
    return Q5.codes[img == Qpi.identity]


def element_order(G: FiniteMatrixGroup, x: int, limit: int = 10_000) -> int:
    y, n = x, 1
    while y != G.identity:
        y = int(G.mul(y, x))
        n += 1
        if n > limit:
            raise RuntimeError("element order search exceeded limit")
    return n


def kernel_structure(Q5: Optional[FiniteMatrixGroup] = None,
                     Qpi: Optional[FiniteMatrixGroup] = None) -> KernelReport:
    Q5 = q5() if Q5 is None else Q5
    Qpi = q_pi() if Qpi is None else Qpi
    K = kernel_codes(Q5, Qpi)
    xs = np.repeat(K, K.size)
    ys = np.tile(K, K.size)
    abelian = bool(np.array_equal(Q5.mul(xs, ys), Q5.mul(ys, xs)))
    fifth = Q5.power(K, 5)
    exponent = 1
    if K.size > 1:
        exponent = 0 if not (fifth == Q5.identity).all() else 5
        # exponent is 5 only if every element has order dividing 5; 5 is prime
    d = delta_codes(Q5)
    sub = Q5.subgroup(d.values())
    kernel_group = FiniteMatrixGroup(Q5.ring, K)
    return KernelReport(int(K.size), abelian, exponent, sub.same_set(kernel_group),
                        (Q5.order, Qpi.order))


# -- r, s, t conjugation table --------------------------------------------------------------

def _coordinates(G: FiniteMatrixGroup, basis: Sequence[int], p: int = 5) -> Dict[int, Tuple[int, ...]]:
    """Map x1^i1 x2^i2 ... -> (i1, i2, ...) over exponents mod p; requires distinct products."""
    powers = [[G.identity] for _ in basis]
    for k, b in enumerate(basis):
        for _ in range(p - 1):
            powers[k].append(int(G.mul(powers[k][-1], b)))
    out: Dict[int, Tuple[int, ...]] = {}
    for exps in itertools.product(range(p), repeat=len(basis)):
        x = G.identity
        for k, e in enumerate(exps):
            x = int(G.mul(x, powers[k][e]))
        out.setdefault(x, exps)
    return out


@dataclass
class IdentityCheck:
    name: str
    holds: bool
    lhs: Tuple[int, ...]
    rhs: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"identity": self.name, "holds": self.holds, "lhs": list(self.lhs), "rhs": list(self.rhs)}


@dataclass
class RSTReport:
    forms: Dict[str, bool]
    identities: List[IdentityCheck]
    same_span: bool
    shortcut_holds: bool

    @property
    def ok(self) -> bool:
        return all(self.forms.values()) and all(i.holds for i in self.identities) \
            and self.same_span and self.shortcut_holds

    def to_json(self) -> dict:
        return {"forms": self.forms, "identities": [i.to_json() for i in self.identities],
                "sameSpan": self.same_span, "additiveShortcut": self.shortcut_holds}


def _conjugator(G: FiniteMatrixGroup, name: str):
    if name == "J":
        return G.twist
    h = group_code(G, {"S": gen_S(Q), "T": gen_T(Q)}[name])
    return lambda x: G.conj(x, h)


def rst_relations(Q5: Optional[FiniteMatrixGroup] = None) -> RSTReport:
    G = q5() if Q5 is None else Q5
    R = G.ring
    rst = rst_codes(G)
    forms = {k: rst[k] == offset_code(RST_OFFSETS[k], R) for k in "rst"}
    coords = _coordinates(G, [rst["r"], rst["s"], rst["t"]])
    idents = []
    for x, b, rhs in RST_CONJUGATION:
        lhs = int(_conjugator(G, b)(rst[x]))
        want = G.identity
        for letter, e in rhs:
            want = int(G.mul(want, G.power(rst[letter], e % 5)))
        idents.append(IdentityCheck(f"{x}^{b}", lhs == want, coords.get(lhs, ()), coords.get(want, ())))
    span_rst = G.subgroup(rst.values())
    span_delta = G.subgroup(delta_codes(G).values())
    same = span_rst.same_set(span_delta) and len(coords) == 125
    # (I + pi U)(I + pi V) = I + pi (U + V) for the Delta offsets
    shortcut = True
    for u, v in itertools.product(DELTA_OFFSETS.values(), repeat=2):
        w = tuple(tuple(p + r for p, r in zip(ru, rv)) for ru, rv in zip(u, v))
        shortcut &= int(G.mul(offset_code(u, R), offset_code(v, R))) == offset_code(w, R)
    return RSTReport(forms, idents, same, shortcut)


# -- subgroups of the kernel invariant under S, T, J -----------------------------------------

def _span_mod_p(vectors: Iterable[Tuple[int, ...]], p: int) -> frozenset:
    span = {tuple(0 for _ in range(3))}
    for v in vectors:
        span = {tuple((x + k * y) % p for x, y in zip(w, v)) for w in span for k in range(p)}
    return frozenset(span)


def subgroups_f5_cubed(p: int = 5) -> List[frozenset]:
    """All subgroups of (Z/p)^3 as sets of coordinate vectors.

    Lines come from nonzero vectors up to scalars; planes are kernels of nonzero
    functionals up to scalars.
    """
    def normalized(v):
        lead = next(x for x in v if x)
        inv = pow(lead, -1, p)
        return tuple((x * inv) % p for x in v)

    proj = sorted({normalized(v) for v in itertools.product(range(p), repeat=3) if any(v)})
    every = list(itertools.product(range(p), repeat=3))
    lines = [_span_mod_p([v], p) for v in proj]
    planes = [frozenset(w for w in every if sum(a * b for a, b in zip(f, w)) % p == 0) for f in proj]
    return [frozenset({(0, 0, 0)})] + lines + planes + [frozenset(every)]


def subgroups_naive(table: Sequence[Sequence[int]], identity: int) -> List[frozenset]:
    """All subgroups of a finite group given by its Cayley table, by repeated one-element
    extension of known subgroups starting from the trivial one.  Quadratic, for cross-checks."""

    def close(gens):
        seen = {identity, *gens}
        frontier = list(seen)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = table[x][g]
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return frozenset(seen)

    n = len(table)
    found = {frozenset({identity}): ()}
    queue = [frozenset({identity})]
    while queue:
        H = queue.pop()
        gens = found[H]
        for x in range(n):
            if x not in H:
                K = close(gens + (x,))
                if K not in found:
                    found[K] = gens + (x,)
                    queue.append(K)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass
class ScanReport:
    candidates: int
    invariant: List[int]  # orders of the invariant subgroups
    table: List[dict]
    st_plane_invariant: bool
    naive_candidates: int
    naive_agrees: bool

    @property
    def ok(self) -> bool:
        return (self.candidates == 64 and sorted(self.invariant) == [1, 125]
                and not self.st_plane_invariant and self.naive_candidates == 64 and self.naive_agrees)

    def to_json(self) -> dict:
        return {"candidates": self.candidates, "invariantOrders": self.invariant,
                "stPlaneInvariant": self.st_plane_invariant,
                "naiveCandidates": self.naive_candidates, "naiveAgrees": self.naive_agrees, "table": self.table}


def _is_invariant(G: FiniteMatrixGroup, codes: np.ndarray, actions) -> Tuple[bool, Dict[str, bool]]:
    sub = FiniteMatrixGroup(G.ring, codes)
    per = {name: bool(sub.contains(act(codes)).all()) for name, act in actions}
    return all(per.values()), per


def invariant_subgroup_scan(Q5: Optional[FiniteMatrixGroup] = None,
                            S_code: Optional[int] = None, T_code: Optional[int] = None) -> ScanReport:
    """Test every subgroup of the kernel for invariance under S, T and the J twist.

    ``S_code``/``T_code`` allow substituting other representatives of S and T.
    """
    G = q5() if Q5 is None else Q5
    rst = rst_codes(G)
    coords = _coordinates(G, [rst["r"], rst["s"], rst["t"]])
    back = {v: k for k, v in coords.items()}
    S = group_code(G, gen_S(Q)) if S_code is None else S_code
    T = group_code(G, gen_T(Q)) if T_code is None else T_code
    actions = [("S", lambda x: G.conj(x, S)), ("T", lambda x: G.conj(x, T)), ("J", G.twist)]
    table = []
    invariant = []
    for sub in subgroups_f5_cubed():
        codes = np.array(sorted(back[v] for v in sub), dtype=np.int64)
        inv_all, per = _is_invariant(G, codes, actions)
        if inv_all:
            invariant.append(len(sub))
        table.append({"order": len(sub), "invariant": inv_all, **per})
    st = G.subgroup([rst["s"], rst["t"]]).codes
    st_inv, _ = _is_invariant(G, st, actions)
    # naive oracle on the Cayley table of the kernel
    kernel = np.array(sorted(coords), dtype=np.int64)
    prod = G.mul(np.repeat(kernel, kernel.size), np.tile(kernel, kernel.size))
    cayley = np.searchsorted(kernel, prod).reshape(kernel.size, kernel.size).tolist()
    naive = subgroups_naive(cayley, int(np.searchsorted(kernel, G.identity)))
    structured = {frozenset(int(np.searchsorted(kernel, back[v])) for v in sub) for sub in subgroups_f5_cubed()}
    return ScanReport(len(table), invariant, table, st_inv, len(naive), set(naive) == structured)


# -- abelianization of a finite matrix group -------------------------------------------------

def normal_closure(G: FiniteMatrixGroup, seeds: Iterable[int], conjugators: Sequence[int]) -> FiniteMatrixGroup:
    """Smallest subgroup containing ``seeds`` and stable under conjugation by ``conjugators``."""
    gens = sorted({int(s) for s in seeds} - {G.identity})
    while True:
        H = G.subgroup(gens) if gens else FiniteMatrixGroup(G.ring, [G.identity])
        extra = set()
        for h in conjugators:
            for g in gens:
                y = int(G.conj(g, h))
                if not H.contains(y):
                    extra.add(y)
        if not extra:
            return H
        gens = sorted(set(gens) | extra)


def derived_subgroup(G: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """Normal closure of the commutators of the generators; that is the derived subgroup."""
    gens = list(G.generators) or [int(x) for x in G.codes[:1]]
    comms = [int(G.mul(G.mul(x, y), G.mul(G.inv(x), G.inv(y)))) for x in gens for y in gens]
    return normal_closure(G, comms, gens)


@dataclass
class AbelianizationReport:
    group_order: int
    derived_order: int

    @property
    def order(self) -> int:
        return self.group_order // self.derived_order

    def to_json(self) -> dict:
        return {"groupOrder": self.group_order, "derivedOrder": self.derived_order,
                "abelianizationOrder": self.order}


def abelianization(G: FiniteMatrixGroup) -> AbelianizationReport:
    D = derived_subgroup(G)
    return AbelianizationReport(G.order, D.order)


def no_normal_index5(G: Optional[FiniteMatrixGroup] = None) -> bool:
    """True iff G has no normal subgroup of index 5, i.e. 5 does not divide |G/G'|."""
    G = q5() if G is None else G
    return abelianization(G).order % 5 != 0


# -- the non-congruence pipeline ------------------------------------------------------------

@dataclass
class Leg:
    check: str
    status: str  # pass | fail | premise
    anchor: str
    details: dict

    def to_json(self) -> dict:
        return {"check": self.check, "anchor": self.anchor, "status": self.status, "details": self.details}


@dataclass
class PipelineResult:
    legs: List[Leg]
    verdict: str
    subjects: Tuple[str, ...] = ("G_5^5", "G_5'")

    def to_json(self) -> dict:
        return {"legs": [l.to_json() for l in self.legs], "subjects": list(self.subjects),
                "verdict": self.verdict}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def prop52_pipeline(pentagon_width: Optional[int] = None) -> PipelineResult:
    """Chain the checks showing that G_5^5 and G_5' contain no principal congruence subgroup.

    ``pentagon_width`` is the geometric width of the index-5 power subgroup; when
    omitted it is computed from the frozen pentagon symbol.
    """
    from . import farey, fpgroup

    legs: List[Leg] = []
    if pentagon_width is None:
        pentagon_width = farey.invariants(farey.power_q_symbol(Q)).geometric_width
    legs.append(Leg("width", _status(pentagon_width == 5),
                    "geometric width of the index-5 power subgroup",
                    {"geometricWidth": pentagon_width}))
    legs.append(Leg("premise", "premise",
                    "external theorem: a congruence subgroup of geometric width N contains G(5, N)",
                    {"statement": "if G_5^5 were congruence then G(5,5) would lie in G_5^5",
                     "verified": False}))
    G = q5()
    img = image_group(power5_pairings(), 5)
    words = [fpgroup.st_to_xy(decompose(g))
             for g in power5_pairings()]
    index = fpgroup.todd_coxeter(fpgroup.Presentation.hecke(Q), words).index
    no5 = no_normal_index5(G)
    full = img.order == G.order == 7500
    legs.append(Leg("closure", _status(full and index == 5 and no5),
                    "image of the power subgroup is the whole mod-5 quotient",
                    {"imageOrder": img.order, "quotientOrder": G.order, "index": index,
                     "noNormalIndex5": no5,
                     "argument": "containment of G(5,5) would make the index equal "
                                 "[Q5 : image] = 1, not 5"}))
    scan = invariant_subgroup_scan(G)
    legs.append(Leg("lemma-a1", _status(scan.ok),
                    "only trivial and full kernel subgroups are S, T, J invariant",
                    {"candidates": scan.candidates, "invariantOrders": scan.invariant}))
    ab = fpgroup.abelian_invariants(fpgroup.Presentation.hecke(Q))
    lows = fpgroup.low_index_subgroups(fpgroup.Presentation.hecke(Q), 5)
    normal5 = [t for t in lows if t.index == 5 and t.is_normal()]
    ab_order = int(np.prod(ab)) if ab else 1
    legs.append(Leg("commutator", _status(ab_order == 10 and len(normal5) == 1),
                    "abelianization of G_5 has order 10 and the index-5 normal subgroup is unique",
                    {"abelianInvariants": list(ab), "normalIndex5": len(normal5),
                     "argument": "G_5/G_5' has a unique index-5 subgroup, so G_5' lies in G_5^5; "
                                 "a congruence G_5' would make G_5^5 congruence"}))
    ok = all(l.status in ("pass", "premise") for l in legs)
    verdict = "not congruence" if ok else "undetermined"
    return PipelineResult(legs, verdict)
