"""Hecke-Farey symbols: text format, side pairings, cusps and invariants.

A symbol lists the vertices -oo, x_0, ..., x_n, oo of a special polygon and one
label per consecutive pair: ``even``, ``odd`` or a natural number naming a free
pair of sides.  The polygon is the ideal polygon with vertices oo, x_0, ..., x_n
(bounded by the vertical lines over x_0 and x_n), with one extra special triangle
hanging outside every odd side.

Side pairings use, for a side (u, v), the matrix M with M(oo) = u, M(0) = v and
det M = 1 built from the cusp representatives of u and v:

* even side: M S M^-1
* odd side:  M (ST)^-1 M^-1
* free pair (i, j): M_j S M_i^-1
"""

from __future__ import annotations

import math
import re
from functools import cmp_to_key
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import fpgroup
from .group import (GroupElement, NotInGroup, classify, decompose, elliptic_order,
                    gen_S, gen_T, lambda_multiple, nearest_multiple)
from .ring import RingElement, euclid_gcd, format_element, hecke_ring, parse_element, sign_of

NEG_INF = "-oo"
POS_INF = "oo"
CF_CAP = 10_000

Label = Union[str, int]
Cusp = Tuple[RingElement, RingElement]  # (numerator, denominator)


class HFSError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, token: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if token is not None:
            where.append(f"token {token!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.token = token


@dataclass(frozen=True)
class Vertex:
    """An interior vertex num/den as written in the file."""

    num: RingElement
    den: RingElement

    def __str__(self):
        if self.den == 1:
            return format_element(self.num)
        return f"{format_element(self.num)}/{format_element(self.den)}"


@dataclass(frozen=True)
class HeckeFareySymbol:
    q: int
    vertices: Tuple[Union[str, Vertex], ...]
    pairings: Tuple[Label, ...]

    @property
    def interior(self) -> Tuple[Vertex, ...]:
        return tuple(v for v in self.vertices[1:-1])  # type: ignore[misc]

    def count(self, kind: str) -> int:
        return sum(1 for p in self.pairings if p == kind)

    @property
    def free_pairs(self) -> List[Tuple[int, int]]:
        pos: Dict[int, List[int]] = {}
        for i, p in enumerate(self.pairings):
            if isinstance(p, int):
                pos.setdefault(p, []).append(i)
        return sorted((v[0], v[1]) for v in pos.values())


# -- parsing -------------------------------------------------------------------------

_STMT = re.compile(r"^\s*(q|vertices|pairings)\s*=\s*(.*?)\s*$", re.S)


def parse_hfs(text: str) -> HeckeFareySymbol:
    stmts: Dict[str, Tuple[str, int]] = {}
    line = 1
    for chunk in text.split(";"):
        lead = chunk[: len(chunk) - len(chunk.lstrip())]
        start_line = line + lead.count("\n")
        line += chunk.count("\n")
        if not chunk.strip():
            continue
        m = _STMT.match(chunk)
        if not m:
            raise HFSError("expected 'q=', 'vertices=' or 'pairings='", start_line, chunk.strip()[:20])
        key, body = m.group(1), m.group(2)
        if key in stmts:
            raise HFSError(f"duplicate '{key}' statement", start_line, key)
        stmts[key] = (body, start_line)
    for key in ("q", "vertices", "pairings"):
        if key not in stmts:
            raise HFSError(f"missing '{key}=' statement")
    qbody, qline = stmts["q"]
    try:
        q = int(qbody.replace(" ", ""))
    except ValueError:
        raise HFSError("q must be an integer", qline, qbody) from None
    if q < 3:
        raise HFSError("q must be at least 3", qline, qbody)

    vbody, vline = stmts["vertices"]
    vertices: List[Union[str, Vertex]] = []
    for tok in _split(vbody):
        t = tok.replace(" ", "").replace("\n", "")
        if t in (NEG_INF, POS_INF):
            vertices.append(t)
            continue
        try:
            if "/" in t:
                num_s, den_s = t.split("/")
                vertices.append(Vertex(parse_element(num_s, q), parse_element(den_s, q)))
            else:
                vertices.append(Vertex(parse_element(t, q), hecke_ring(q).one))
        except ValueError as exc:
            raise HFSError(f"bad vertex: {exc}", vline, t) from None

    pbody, pline = stmts["pairings"]
    pairings: List[Label] = []
    for tok in _split(pbody):
        t = tok.replace(" ", "").replace("\n", "")
        if t in ("even", "odd"):
            pairings.append(t)
        elif t.isdigit() and int(t) > 0:
            pairings.append(int(t))
        else:
            raise HFSError("pairing must be 'even', 'odd' or a positive integer", pline, t)

    sym = HeckeFareySymbol(q, tuple(vertices), tuple(pairings))
    validate(sym, vline=vline, pline=pline)
    return sym


def _split(body: str) -> List[str]:
    parts = [p.strip() for p in body.split(",")]
    if any(not p for p in parts):
        raise HFSError("empty list entry", None, body)
    return parts


def serialize_hfs(sym: HeckeFareySymbol) -> str:
    verts = ",".join(v if isinstance(v, str) else str(v) for v in sym.vertices)
    pairs = ",".join(str(p) for p in sym.pairings)
    return f"q={sym.q};\nvertices={verts};\npairings={pairs};\n"


def validate(sym: HeckeFareySymbol, vline: Optional[int] = None, pline: Optional[int] = None) -> None:
    v = sym.vertices
    if len(v) < 3 or v[0] != NEG_INF or v[-1] != POS_INF:
        raise HFSError("vertices must start with -oo, end with oo and have an interior vertex", vline)
    for x in v[1:-1]:
        if isinstance(x, str):
            raise HFSError("infinite vertex in the interior", vline, x)
        if sign_of(x.den) <= 0:
            raise HFSError("denominator must be positive", vline, str(x))
        if sym.q in (3, 5):
            g = euclid_gcd(x.num, x.den) if not x.num.is_zero() else x.den
            if not g.is_unit():
                raise HFSError("vertex is not in lowest terms", vline, str(x))
    for a, b in zip(v[1:-2], v[2:-1]):
        if sign_of(b.num * a.den - a.num * b.den) <= 0:
            raise HFSError("vertices must be strictly increasing", vline, str(b))
    if len(sym.pairings) != len(v) - 1:
        raise HFSError(f"pairing count must equal vertex gaps ({len(v) - 1}), got {len(sym.pairings)}", pline)
    counts: Dict[int, int] = {}
    for p in sym.pairings:
        if isinstance(p, int):
            counts[p] = counts.get(p, 0) + 1
    for lab, c in sorted(counts.items()):
        if c != 2:
            raise HFSError(f"free label must occur exactly twice, occurs {c} times", pline, str(lab))


# -- cusps ---------------------------------------------------------------------------

def cusp_equal(x: Cusp, y: Cusp) -> bool:
    return (x[0] * y[1] - x[1] * y[0]).is_zero()


def cusp_representative(num: RingElement, den: RingElement, cap: int = CF_CAP) -> Cusp:
    """First column (a, c) of some g in G_q with g(oo) = num/den, sign fixed so c > 0 (or c = 0, a = 1)."""
    ring = num.ring
    if den.is_zero():
        return (ring.one, ring.zero)
    a, c = num, den
    ks: List[int] = []
    while not c.is_zero():
        if len(ks) >= cap:
            raise HFSError(f"vertex {num}/{den} is not a cusp of G_{ring.q} (no termination)")
        k = nearest_multiple(a, c)
        a, c = c, -(a - k * ring.lam * c)
        ks.append(k)
    # g = T^{k1} S T^{k2} S ... T^{kn} S maps oo to num/den
    g = GroupElement.identity(ring.q)
    S, T = gen_S(ring.q), gen_T(ring.q)
    for k in ks:
        g = g * (T ** k) * S
    p, r = g.entries[0], g.entries[2]
    if sign_of(r) < 0:
        p, r = -p, -r
    if not cusp_equal((p, r), (num, den)):
        raise AssertionError("continued fraction reconstruction failed")
    return (p, r)


def _vertex_cusps(sym: HeckeFareySymbol) -> List[Cusp]:
    ring = hecke_ring(sym.q)
    out: List[Cusp] = [(-ring.one, ring.zero)]
    for x in sym.interior:
        out.append(cusp_representative(x.num, x.den))
    out.append((ring.one, ring.zero))
    return out


def _edge_matrix(u: Cusp, v: Cusp, q: int, edge: int) -> GroupElement:
    ent = (-u[0], v[0], -u[1], v[1])
    det = ent[0] * ent[3] - ent[1] * ent[2]
    if det != 1:
        raise HFSError(f"vertices of edge {edge} are not unimodularly adjacent (det {det})")
    return GroupElement(ent, q, check=False)


# -- side pairings ---------------------------------------------------------------------

@dataclass(frozen=True)
class SidePairing:
    generator: GroupElement
    kind: str  # even | odd | free
    edges: Tuple[int, ...]
    word: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "edges": list(self.edges), "matrix": str(self.generator), "word": self.word}


def side_pairing_generators(sym: HeckeFareySymbol) -> List[SidePairing]:
    """One generator per even/odd side and per free pair, in side order."""
    q = sym.q
    cusps = _vertex_cusps(sym)
    mats = [_edge_matrix(cusps[i], cusps[i + 1], q, i) for i in range(len(sym.pairings))]
    S, T = gen_S(q), gen_T(q)
    odd_core = (S * T).inv()
    partner = {i: j for i, j in sym.free_pairs}
    out: List[SidePairing] = []
    for i, lab in enumerate(sym.pairings):
        m = mats[i]
        if lab == "even":
            g, kind, edges = m * S * m.inv(), "even", (i,)
        elif lab == "odd":
            g, kind, edges = m * odd_core * m.inv(), "odd", (i,)
        elif i in partner:
            j = partner[i]
            g, kind, edges = mats[j] * S * m.inv(), "free", (i, j)
        else:
            continue
        try:
            word = decompose(g)
        except NotInGroup as exc:
            raise HFSError(f"side pairing of edge {i} is not in G_{q}: {exc}") from None
        out.append(SidePairing(g, kind, edges, word))
    return out


# -- cusp classes and widths ------------------------------------------------------------

@dataclass(frozen=True)
class CuspClasses:
    classes: Tuple[Tuple[int, ...], ...]  # vertex indices; 0 is -oo and the last is oo
    widths: Tuple[int, ...]
    geometric_width: int
    polygon_corners: Tuple[int, ...]  # q-gons of the convex part meeting each vertex


def _lambda_count(x: RingElement, what: str) -> int:
    k = lambda_multiple(x)
    if k is None or k < 0:
        raise HFSError(f"{what}: {x} is not a non-negative multiple of lambda")
    return k


def polygon_corners(sym: HeckeFareySymbol, cusps: Optional[List[Cusp]] = None) -> List[int]:
    """Number of ideal q-gons of the convex part incident to each vertex (oo counted at index 0)."""
    cusps = _vertex_cusps(sym) if cusps is None else cusps
    n = len(cusps)
    corners = [0] * n
    for i in range(1, n - 1):
        a, b = cusps[i - 1]
        e, f = cusps[i + 1]
        corners[i] = _lambda_count(b * e - a * f, f"corner at vertex {i}")
    left, right = cusps[1], cusps[-2]
    if left[1] != 1 or right[1] != 1:
        raise HFSError("outer vertices must be integral multiples of lambda")
    corners[0] = _lambda_count(right[0] - left[0], "strip at infinity")
    return corners


def cusp_classes(sym: HeckeFareySymbol, pairings: Optional[Sequence[SidePairing]] = None) -> CuspClasses:
    cusps = _vertex_cusps(sym)
    n = len(cusps)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    union(0, n - 1)
    if pairings is None:
        pairings = side_pairing_generators(sym)
    odd_ends = [0] * n
    for sp in pairings:
        i = sp.edges[0]
        if sp.kind in ("even", "odd"):
            # even swaps the endpoints, odd rotates v onto u
            _check_maps(sp.generator, cusps[i + 1], cusps[i], i)
            union(i, i + 1)
            if sp.kind == "odd":
                odd_ends[i] += 1
                odd_ends[i + 1] += 1
        else:
            j = sp.edges[1]
            _check_maps(sp.generator, cusps[i], cusps[j + 1], i)
            _check_maps(sp.generator, cusps[i + 1], cusps[j], i)
            union(i, j + 1)
            union(i + 1, j)
    corners = polygon_corners(sym, cusps)
    corners_at = list(corners)
    # oo appears twice in the vertex list; its polygon corners are stored at index 0
    groups: Dict[int, List[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    classes = tuple(tuple(vs) for _, vs in sorted(groups.items()))
    widths = []
    for vs in classes:
        ends = sum(odd_ends[v] for v in vs)
        widths.append(sum(corners_at[v] for v in vs) + ends // 2)
    geo = math.lcm(*widths) if widths else 1
    return CuspClasses(classes, tuple(widths), geo, tuple(corners))


def _check_maps(g: GroupElement, src: Cusp, dst: Cusp, edge: int) -> None:
    if not cusp_equal(g.apply(src), dst):
        raise HFSError(f"side pairing of edge {edge} does not map its vertices as required")


# -- invariants ------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantSet:
    d: int
    v2: int
    vq: int
    v_inf: int
    r: int
    g: int
    widths: Tuple[int, ...] = field(default=())
    geometric_width: int = 1

    def riemann_hurwitz_holds(self, q: int) -> bool:
        lhs = (q - 2) * self.d
        rhs = q * self.v2 + 2 * (q - 1) * self.vq + 4 * q * self.g + 2 * q * self.v_inf - 4 * q
        return lhs == rhs

    def to_json(self) -> dict:
        return {"d": self.d, "v2": self.v2, "vq": self.vq, "v_inf": self.v_inf, "r": self.r,
                "g": self.g, "cusp_widths": list(self.widths), "geometric_width": self.geometric_width}


def subgroup_table(sym: HeckeFareySymbol, pairings: Optional[Sequence[SidePairing]] = None) -> fpgroup.CosetTable:
    """Coset table of the subgroup generated by the side pairings."""
    pairings = side_pairing_generators(sym) if pairings is None else pairings
    words = [fpgroup.st_to_xy(sp.word) for sp in pairings]
    return fpgroup.todd_coxeter(fpgroup.Presentation.hecke(sym.q), words)


def invariants(sym: HeckeFareySymbol) -> InvariantSet:
    q = sym.q
    pairings = side_pairing_generators(sym)
    for sp in pairings:
        cls = classify(sp.generator)
        if sp.kind == "even" and not (cls.kind == "elliptic" and cls.order == 2):
            raise HFSError(f"even side {sp.edges[0]} gives {cls}, not an involution")
        if sp.kind == "odd" and not (cls.kind == "elliptic" and cls.order == q):
            raise HFSError(f"odd side {sp.edges[0]} gives {cls}, not of order {q}")
        if sp.kind == "free" and cls.kind not in ("parabolic", "hyperbolic"):
            raise HFSError(f"free pair {sp.edges} gives {cls}, not of infinite order")
    d = subgroup_table(sym, pairings).index
    cc = cusp_classes(sym, pairings)
    if sum(cc.widths) != d:
        raise HFSError(f"cusp widths {cc.widths} do not sum to the index {d}")
    v2, vq = sym.count("even"), sym.count("odd")
    r = len(sym.free_pairs)
    v_inf = len(cc.classes)
    num = (q - 2) * d - q * v2 - 2 * (q - 1) * vq - 2 * q * v_inf + 4 * q
    if num % (4 * q) or num < 0:
        raise HFSError(f"genus would be {num}/{4 * q}; the symbol or its pairings are inconsistent")
    inv = InvariantSet(d, v2, vq, v_inf, r, num // (4 * q), cc.widths, cc.geometric_width)
    assert inv.riemann_hurwitz_holds(q)
    return inv


# -- building the power-q symbol from its side pairings -------------------------------------

def vertex_chain_from_involutions(mats: Sequence[GroupElement]) -> List[Cusp]:
    """Order the sides of a polygon all of whose sides are even.

    Starting at oo, repeatedly apply the unused involution whose image of the
    current vertex is the smallest cusp to the right that is unimodularly
    adjacent to it, until the chain returns to oo.
    """
    q = mats[0].q
    ring = hecke_ring(q)
    cur: Cusp = (-ring.one, ring.zero)
    chain = [cur]
    unused = list(mats)
    while unused:
        best = None
        for g in unused:
            img = g.apply(cur)
            if cusp_equal(img, cur):
                continue
            img = _normalize_cusp(img)
            if not _adjacent(cur, img):
                continue
            if not _right_of(img, cur):
                continue
            if best is None or _right_of(best[1], img):
                best = (g, img)
        if best is None:
            raise ValueError(f"no involution continues the chain after {len(chain)} vertices")
        unused.remove(best[0])
        cur = best[1]
        chain.append(cur)
    if not chain[-1][1].is_zero():
        raise ValueError("the chain does not close at infinity")
    return chain


def _normalize_cusp(x: Cusp) -> Cusp:
    a, c = x
    if c.is_zero():
        return (a.ring.one, a.ring.zero)
    return cusp_representative(a, c)


def _adjacent(x: Cusp, y: Cusp) -> bool:
    det = x[0] * y[1] - x[1] * y[0]
    return det == 1 or det == -1


def _right_of(x: Cusp, y: Cusp) -> bool:
    """x > y on the real line, with oo largest and the starting -oo smallest."""
    if x[1].is_zero():
        return True
    if y[1].is_zero():
        return sign_of(y[0]) < 0
    return sign_of(x[0] * y[1] - y[0] * x[1]) > 0


def symbol_from_chain(chain: Sequence[Cusp], q: int) -> HeckeFareySymbol:
    verts: List[Union[str, Vertex]] = [NEG_INF]
    ring = hecke_ring(q)
    for num, den in chain[1:-1]:
        if den.is_unit():
            verts.append(Vertex(num * den.unit_inverse(), ring.one))
        else:
            verts.append(Vertex(num, den))
    verts.append(POS_INF)
    return HeckeFareySymbol(q, tuple(verts), tuple("even" for _ in range(len(chain) - 1)))


def full_group_symbol(q: int) -> HeckeFareySymbol:
    ring = hecke_ring(q)
    return HeckeFareySymbol(q, (NEG_INF, Vertex(ring.zero, ring.one), POS_INF), ("even", "odd"))


def index_two_symbol(q: int) -> HeckeFareySymbol:
    ring = hecke_ring(q)
    return HeckeFareySymbol(q, (NEG_INF, Vertex(ring.zero, ring.one), POS_INF), ("odd", "odd"))


def power_q_symbol(q: int) -> HeckeFareySymbol:
    """Symbol whose polygon is the ideal q-gon oo, U(oo), ..., U^(q-1)(oo), U = S T^-1, all sides even."""
    S, T = gen_S(q), gen_T(q)
    U = S * T.inv()
    ring = hecke_ring(q)
    pts = []
    g = U
    for _ in range(q - 1):
        pts.append(_normalize_cusp(g.apply((ring.one, ring.zero))))
        g = U * g
    pts.sort(key=cmp_to_key(lambda x, y: -1 if _right_of(y, x) else 1))
    chain = [(-ring.one, ring.zero)] + pts + [(ring.one, ring.zero)]
    return symbol_from_chain(chain, q)
