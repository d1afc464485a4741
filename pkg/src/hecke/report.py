"""Aggregated verification report.

Every check returns ``(ok, details)``; details must be deterministic so that two
runs serialize to identical JSON.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from . import __version__, catalog, congruence, farey, fpgroup
from .data import Q, power5_pairings, witness, witness_expected, witness_factor
from .group import classify, decompose, eval_word, free_reduce, gen_S, gen_T, twist_J, conjugate
from .ring import euclid_gcd, hecke_ring, min_poly, quotient_ring, sign_of

PASS, FAIL, PREMISE = "pass", "fail", "premise"


@dataclass
class CheckResult:
    check: str
    anchor: str
    status: str
    details: dict

    def to_json(self) -> dict:
        return {"check": self.check, "anchor": self.anchor, "status": self.status, "details": self.details}


@dataclass
class VerificationReport:
    toolVersion: str
    q: int
    checks: List[CheckResult] = field(default_factory=list)
    verdict: str = ""

    @property
    def failed(self) -> List[str]:
        return [c.check for c in self.checks if c.status == FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_json(self) -> dict:
        return {"toolVersion": self.toolVersion, "q": self.q,
                "checks": [c.to_json() for c in self.checks], "verdict": self.verdict}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "VerificationReport":
        return cls(data["toolVersion"], data["q"],
                   [CheckResult(c["check"], c["anchor"], c["status"], c["details"]) for c in data["checks"]],
                   data["verdict"])

    def text(self) -> str:
        width = max((len(c.check) for c in self.checks), default=0)
        lines = [f"{c.status.upper():8} {c.check:{width}}  {c.anchor}" for c in self.checks]
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


@dataclass
class Context:
    catalog_dir: Optional[Path] = None

    def symbol(self, name: str) -> farey.HeckeFareySymbol:
        return farey.parse_hfs(catalog.read_symbol_text(name, self.catalog_dir))

    def golden(self) -> dict:
        return catalog.golden(self.catalog_dir)


CheckFn = Callable[[Context], Tuple[bool, dict]]


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    fn: CheckFn
    status_on_pass: str = PASS


# -- individual checks ---------------------------------------------------------------

def _check_ring(ctx: Context):
    import mpmath
    roots = {}
    with mpmath.workdps(30):
        for q in range(3, 24):
            lam = 2 * mpmath.cos(mpmath.pi / q)
            roots[q] = abs(min_poly(q)(lam)) < mpmath.mpf("1e-9")
    R5 = hecke_ring(Q)
    L = R5.lam
    pi = L + 2
    cards = {}
    for alpha in (pi, R5(5), R5(7, 2), R5(3, -4), R5(11)):
        cards[str(alpha)] = [quotient_ring(alpha).cardinality, abs(alpha.norm())]
    g = euclid_gcd(R5(5), pi)
    details = {
        "minPolyRoots": all(roots.values()),
        "minPoly5": str(min_poly(5)),
        "piSquared": str(pi * pi),
        "piSquaredIsFiveLambdaSquared": pi * pi == 5 * L * L,
        "cardinalityVsNorm": cards,
        "gcd5Pi": str(g),
        "gcdAssociateOfPi": g.divides(pi) and pi.divides(g),
        "signs": [sign_of(L - 1), sign_of(1 - L)],
    }
    ok = (details["minPolyRoots"] and details["piSquaredIsFiveLambdaSquared"]
          and all(a == b for a, b in cards.values()) and details["gcdAssociateOfPi"]
          and details["signs"] == [1, -1])
    return ok, details


def _check_group_roundtrip(ctx: Context):
    rng = random.Random(20240501)
    bad = 0
    for q in (3, 5):
        for _ in range(60):
            w = free_reduce("".join(rng.choice("STt") for _ in range(rng.randint(0, 20))))
            if eval_word(decompose(eval_word(w, q)), q) != eval_word(w, q):
                bad += 1
    words = [decompose(g) for g in power5_pairings()]
    golden = ctx.golden()["example34Words"]
    details = {"randomWords": 120, "roundTripFailures": bad, "example34Words": words,
               "matchesGolden": words == golden,
               "ST^-1": str(classify(gen_S(Q) * gen_T(Q).inv()))}
    return bad == 0 and words == golden and details["ST^-1"] == "elliptic(order 5)", details


def _check_eq51(ctx: Context):
    a = witness()
    details = {
        "product": str(a),
        "expected": str(witness_expected()),
        "identityHolds": a == witness_expected() and gen_T(Q) ** -2 * witness_factor() == witness_expected(),
        "memberModPi": congruence.is_congruence_member(a, hecke_ring(Q).lam + 2),
        "memberMod5": congruence.is_congruence_member(a, 5),
    }
    return details["identityHolds"] and details["memberModPi"] and not details["memberMod5"], details


def _check_eq52(ctx: Context):
    from .data import DELTA_OFFSETS
    R = congruence.finite_ring(5)
    a = witness()
    mats = {"a": a, "b": conjugate(a, gen_S(Q)), "c": conjugate(a, twist_J(Q))}
    per = {}
    for k, g in mats.items():
        per[k] = {"residue": str(congruence.reduce_matrix(g, R)),
                  "matchesOffset": congruence.entries_code(g.entries, R) == congruence.offset_code(DELTA_OFFSETS[k], R)}
    return all(v["matchesOffset"] for v in per.values()), per


def _check_kernel(ctx: Context):
    k = congruence.kernel_structure()
    golden = ctx.golden()["quotientOrders"]
    lam = hecke_ring(Q).lam
    orders = {str(m): congruence.image_group([gen_S(Q), gen_T(Q)], m).order for m in (1, lam + 2, 5)}
    details = {**k.to_json(), "imageOrders": orders, "matchesGolden": orders == golden}
    return k.ok and orders == golden, details


def _check_a1_table(ctx: Context):
    r = congruence.rst_relations()
    details = r.to_json()
    details["failing"] = [i.name for i in r.identities if not i.holds]
    return r.ok, details


def _check_lemma_a1(ctx: Context):
    s = congruence.invariant_subgroup_scan()
    return s.ok, s.to_json()


def _check_no_index5(ctx: Context):
    G, A5 = congruence.q5(), congruence.q_pi()
    cyc = congruence.image_group([gen_T(Q)], 5)
    details = {"q5": congruence.abelianization(G).to_json(),
               "a5": congruence.abelianization(A5).to_json(),
               "cyclicControl": congruence.abelianization(cyc).to_json(),
               "noNormalIndex5": congruence.no_normal_index5(G),
               "cyclicControlFlagged": not congruence.no_normal_index5(cyc)}
    ok = (G.order == 7500 and details["noNormalIndex5"] and 2 % details["q5"]["abelianizationOrder"] == 0
          and details["a5"]["abelianizationOrder"] == 1 and details["cyclicControlFlagged"])
    return ok, details


def _symbol_check(name: str, expected: Tuple[int, int, int, int, int]):
    def run(ctx: Context):
        sym = ctx.symbol(name)
        inv = farey.invariants(sym)
        got = (inv.d, inv.v2, inv.vq, inv.v_inf, inv.g)
        roundtrip = farey.parse_hfs(farey.serialize_hfs(sym)) == sym
        details = {"symbol": farey.serialize_hfs(sym).replace("\n", " ").strip(),
                   "invariants": inv.to_json(), "riemannHurwitz": inv.riemann_hurwitz_holds(sym.q),
                   "roundTrip": roundtrip,
                   "generators": [sp.to_json() for sp in farey.side_pairing_generators(sym)]}
        ok = got == expected and details["riemannHurwitz"] and roundtrip
        ok &= inv.to_json() == ctx.golden()["invariants"][name]
        return ok, details
    return run


def _check_eq31(ctx: Context):
    ok, details = _symbol_check("eq31", (2, 0, 2, 1, 0))(ctx)
    gens = {sp.generator for sp in farey.side_pairing_generators(ctx.symbol("eq31"))}
    want = {gen_S(Q) * gen_T(Q).inv(), gen_T(Q).inv() * gen_S(Q)}
    details["generatorsAreSTinvAndTinvS"] = gens == want
    return ok and gens == want, details


def _check_pentagon(ctx: Context):
    ok, details = _symbol_check("pentagon", (5, 5, 0, 1, 0))(ctx)
    sym = ctx.symbol("pentagon")
    inv = details["invariants"]
    details["matchesDerivedChain"] = sym == farey.power_q_symbol(Q)
    details["firstGeneratorIsS"] = farey.side_pairing_generators(sym)[0].generator == gen_S(Q)
    return (ok and inv["geometric_width"] == 5 and details["matchesDerivedChain"]
            and details["firstGeneratorIsS"]), details


def _check_ex34(ctx: Context):
    mats = power5_pairings()
    pres = fpgroup.Presentation.hecke(Q)
    words = [decompose(g) for g in mats]
    index = fpgroup.todd_coxeter(pres, [fpgroup.st_to_xy(w) for w in words]).index
    img = congruence.image_group(mats, 5)
    sym = ctx.symbol("pentagon")
    gens = [sp.generator for sp in farey.side_pairing_generators(sym)]
    img_sym = congruence.image_group(gens, 5)
    sym_index = fpgroup.todd_coxeter(pres, [fpgroup.st_to_xy(decompose(g)) for g in gens]).index
    details = {
        "traces": [str(g.trace) for g in mats],
        "involutions": all(str(classify(g)) == "elliptic(order 2)" for g in mats),
        "words": words,
        "toddCoxeterIndex": index,
        "symbolIndex": sym_index,
        "imageOrder": img.order,
        "symbolImageOrder": img_sym.order,
        "sameImage": img.same_set(img_sym),
    }
    ok = (all(g.trace.is_zero() for g in mats) and details["involutions"] and index == 5
          and sym_index == 5 and img.order == 7500 and details["sameImage"])
    return ok, details


def _check_fp_index2(ctx: Context):
    pres = fpgroup.Presentation.hecke(Q)
    t = fpgroup.todd_coxeter(pres, ["y", "xyx"])
    whole = fpgroup.todd_coxeter(pres, ["x", "y"]).index
    return t.index == 2 and whole == 1, {"index": t.index, "wholeGroupIndex": whole,
                                         "relatorsHold": t.relators_hold()}


def _check_low_index(ctx: Context):
    p5 = fpgroup.low_index_subgroups(fpgroup.Presentation.hecke(5), 5)
    p3 = fpgroup.low_index_subgroups(fpgroup.Presentation.hecke(3), 7)
    idx5 = sorted({t.index for t in p5})
    normal5 = sum(1 for t in p5 if t.index == 5 and t.is_normal())
    counts3 = {str(n): sum(1 for t in p3 if t.index == n) for n in range(1, 8)}
    details = {"q5Indices": idx5, "q5NormalIndex5": normal5, "q3ClassesByIndex": counts3}
    ok = 3 not in idx5 and 4 not in idx5 and normal5 == 1 and all(counts3[str(n)] > 0 for n in range(2, 8))
    return ok, details


def _check_abelian(ctx: Context):
    cases = {"5,5": [5, 5], "2x5": [2] * 5, "2,5": [2, 5]}
    got = {k: fpgroup.abelianization_subgroup(v, 0).commutator_index for k, v in cases.items()}
    inv = fpgroup.abelian_invariants(fpgroup.Presentation.hecke(Q))
    details = {"commutatorIndex": got, "heckeAbelianInvariants": inv}
    return got == {"5,5": 25, "2x5": 32, "2,5": 10} and inv == [10], details


_PIPELINE: Dict[Optional[str], congruence.PipelineResult] = {}


def _pipeline(ctx: Context) -> congruence.PipelineResult:
    key = str(ctx.catalog_dir)
    if key not in _PIPELINE:
        width = farey.invariants(ctx.symbol("pentagon")).geometric_width
        _PIPELINE[key] = congruence.prop52_pipeline(width)
    return _PIPELINE[key]


def _check_prop52(ctx: Context):
    res = _pipeline(ctx)
    return res.verdict == "not congruence", res.to_json()


def _check_premise(ctx: Context):
    leg = next(l for l in _pipeline(ctx).legs if l.status == PREMISE)
    return True, leg.details


CHECKS: Tuple[Check, ...] = (
    Check("a1-table", "r, s, t forms and their conjugates under S, T, J in the mod-5 quotient", _check_a1_table),
    Check("abelian", "abelianization of free products of cyclic groups and of G_5", _check_abelian),
    Check("eq31", "index-2 symbol {-oo, 0, oo} with two odd sides", _check_eq31),
    Check("eq51", "T^-2 [[3L+2,-2L-3],[4L+3,-4L-2]] lies in G(5, L+2) but not G(5, 5)", _check_eq51),
    Check("eq52", "a, SaS^-1, JaJ^-1 are I + (L+2)U mod 5 for the recorded U", _check_eq52),
    Check("ex34", "the five recorded side pairings of the index-5 normal subgroup", _check_ex34),
    Check("fp-index2", "subgroup <y, xyx> of <x, y | x^2, y^5> has index 2", _check_fp_index2),
    Check("group-roundtrip", "decompose then evaluate is the identity on words", _check_group_roundtrip),
    Check("kernel", "G(5,L+2)/G(5,5) is elementary abelian of order 125, generated by a, b, c", _check_kernel),
    Check("lemma-a1", "only trivial and full kernel subgroups are S, T, J invariant", _check_lemma_a1),
    Check("low-index", "subgroups of small index in G_5 and G_3", _check_low_index),
    Check("no-index5", "G_5/G(5,5) has no normal subgroup of index 5", _check_no_index5),
    Check("pentagon", "ideal pentagon symbol of the index-5 power subgroup", _check_pentagon),
    Check("premise", "a congruence subgroup of geometric width N contains G(5, N) (cited, not checked)",
          _check_premise, status_on_pass=PREMISE),
    Check("prop52", "G_5^5 and G_5' contain no principal congruence subgroup", _check_prop52),
    Check("ring", "arithmetic in Z[L] and its quotients", _check_ring),
)

CHECK_NAMES = tuple(c.name for c in CHECKS)


def _find(name: str) -> Check:
    for c in CHECKS:
        if c.name == name:
            return c
    raise KeyError(f"unknown check {name!r}; known: {', '.join(CHECK_NAMES)}")


def run_check(check: Check, ctx: Context) -> CheckResult:
    try:
        ok, details = check.fn(ctx)
    except Exception as exc:  # a failing check must not stop the run
        return CheckResult(check.name, check.anchor, FAIL, {"error": f"{type(exc).__name__}: {exc}"})
    return CheckResult(check.name, check.anchor, check.status_on_pass if ok else FAIL, details)


def run_all(only: Optional[Iterable[str]] = None, catalog_dir: Optional[Path] = None) -> VerificationReport:
    ctx = Context(Path(catalog_dir) if catalog_dir is not None else None)
    names = sorted(set(only)) if only else list(CHECK_NAMES)
    report = VerificationReport(__version__, Q)
    for name in names:
        report.checks.append(run_check(_find(name), ctx))
    if report.failed:
        report.verdict = "undetermined: failing checks " + ", ".join(report.failed)
    elif "prop52" in names:
        report.verdict = _pipeline(ctx).verdict
    else:
        report.verdict = "not evaluated"
    return report


def explain(name: str, catalog_dir: Optional[Path] = None) -> str:
    check = _find(name)
    res = run_check(check, Context(Path(catalog_dir) if catalog_dir is not None else None))
    lines = [f"{res.check}: {res.status}", f"anchor: {res.anchor}"]
    if name == "lemma-a1" and "table" in res.details:
        d = res.details
        lines.append(f"candidates: {d['candidates']}, invariant: {len(d['invariantOrders'])} "
                     f"(orders {d['invariantOrders']})")
        lines.append("order  S      T      J      invariant")
        for row in d["table"]:
            lines.append(f"{row['order']:5}  {str(row['S']):6} {str(row['T']):6} {str(row['J']):6} {row['invariant']}")
    else:
        lines.append(json.dumps(res.details, indent=2, sort_keys=True))
    return "\n".join(lines)
