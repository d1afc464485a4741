"""Acceptance criteria 1-12.  Each test prints one PASS/FAIL line; arithmetic is exact."""

import random

import mpmath
import pytest

from hecke import congruence as C
from hecke import farey, fpgroup
from hecke.catalog import read_symbol_text
from hecke.data import DELTA_OFFSETS, power5_pairings, witness, witness_expected, witness_factor
from hecke.group import (
    classify, conjugate, decompose, eval_word, free_reduce, gen_S, gen_T, twist_J,
)
from hecke.ring import hecke_ring, min_poly, quotient_ring

L = hecke_ring(5).lam
PI = L + 2


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, note: str = ""):
        with capsys.disabled():
            extra = f" ({note})" if note else ""
            print(f"\ncriterion {number:2}: {'PASS' if ok else 'FAIL'}  {title}{extra}")
        assert ok, f"criterion {number} failed: {note}"
    return emit


def test_criterion_01_witness_identity(report):
    a = gen_T(5) ** -2 * witness_factor()
    exact = a == witness_expected()
    ok = exact and C.is_congruence_member(a, PI) and not C.is_congruence_member(a, 5)
    report(1, "T^-2 factor equals the witness; in G(5,L+2), not in G(5,5)", ok)


def test_criterion_02_delta_residues(report):
    R = C.finite_ring(5)
    a = witness()
    mats = {"a": a, "b": conjugate(a, gen_S(5)), "c": conjugate(a, twist_J(5))}
    ok = all(C.reduce_matrix(g, R).code == C.offset_code(DELTA_OFFSETS[k], R) for k, g in mats.items())
    report(2, "a, SaS^-1, JaJ^-1 reduce to I + (L+2)U mod 5", ok)


def test_criterion_03_quotient_orders(report):
    k = C.kernel_structure()
    orders = (C.q_pi().order, C.q5().order)
    ok = orders == (60, 7500) and (k.order, k.abelian, k.exponent, k.generated_by_delta) == (125, True, 5, True)
    report(3, "quotient orders 60 and 7500; kernel of order 125, abelian, exponent 5, generated by a, b, c", ok,
           f"orders {orders}, kernel {k.order}")


def test_criterion_04_conjugation_table(report):
    rep = C.rst_relations()
    failing = [i.name for i in rep.identities if not i.holds]
    note = f"{9 - len(failing)}/9 identities hold"
    if failing:
        note += "; failing: " + ", ".join(
            f"{i.name} computed r^{i.lhs[0]} s^{i.lhs[1]} t^{i.lhs[2]}, table says r^{i.rhs[0]} s^{i.rhs[1]} t^{i.rhs[2]}"
            for i in rep.identities if not i.holds)
    report(4, "r, s, t forms, nine conjugation identities, <r,s,t> = <a,b,c>", rep.ok, note)


def test_criterion_05_invariant_scan(report):
    rep = C.invariant_subgroup_scan()
    ok = rep.candidates == 64 and sorted(rep.invariant) == [1, 125] and rep.naive_agrees
    report(5, "64 kernel subgroups, exactly the trivial and full one S, T, J invariant", ok,
           f"{rep.candidates} candidates, invariant orders {rep.invariant}")


def test_criterion_06_no_normal_index5(report):
    ab = C.abelianization(C.q5())
    ok = ab.group_order == 7500 and ab.order % 5 != 0 and C.abelianization(C.q_pi()).order == 1
    report(6, "abelianization of the order-7500 quotient prime to 5; A5 perfect", ok,
           f"|Q5/Q5'| = {ab.order}")


def test_criterion_07_pipeline(report):
    res = C.prop52_pipeline()
    status = {l.check: l.status for l in res.legs}
    closure = next(l for l in res.legs if l.check == "closure")
    ok = (res.verdict == "not congruence" and status["premise"] == "premise"
          and all(v == "pass" for k, v in status.items() if k != "premise")
          and closure.details["imageOrder"] == 7500 and set(res.subjects) == {"G_5^5", "G_5'"})
    report(7, "pipeline verdict 'not congruence' for G_5^5 and G_5'; premise leg flagged", ok)


def test_criterion_08_hfs_invariants(report):
    def tup(name):
        sym = farey.parse_hfs(read_symbol_text(name))
        inv = farey.invariants(sym)
        return (inv.d, inv.v2, inv.vq, inv.v_inf, inv.g), inv.riemann_hurwitz_holds(5), inv.geometric_width

    e, e_rh, _ = tup("eq31")
    p, p_rh, width = tup("pentagon")
    ok = e == (2, 0, 2, 1, 0) and p == (5, 5, 0, 1, 0) and e_rh and p_rh and width == 5
    report(8, "index-2 symbol (2,0,2,1,0), pentagon (5,5,0,1,0), Riemann-Hurwitz, width 5", ok)


def test_criterion_09_recorded_pairings(report):
    mats = power5_pairings()
    ok = all(g.trace.is_zero() and str(classify(g)) == "elliptic(order 2)" for g in mats)
    ok &= all(x.entries[0] * x.entries[3] - x.entries[1] * x.entries[2] == 1 for x in mats)
    words = [decompose(g) for g in mats]
    ok &= all(eval_word(w, 5) == g for w, g in zip(words, mats))
    pres = fpgroup.Presentation.hecke(5)
    index = fpgroup.todd_coxeter(pres, [fpgroup.st_to_xy(w) for w in words]).index
    sym = farey.parse_hfs(read_symbol_text("pentagon"))
    ours = C.image_group([sp.generator for sp in farey.side_pairing_generators(sym)], 5)
    theirs = C.image_group(mats, 5)
    ok &= index == 5 and ours.order == 7500 and ours.same_set(theirs)
    report(9, "recorded pairings: trace 0, det 1, members, index 5, same mod-5 image as the symbol", ok,
           f"index {index}, image order {ours.order}")


def test_criterion_10_coset_enumeration(report):
    p5, p3 = fpgroup.Presentation.hecke(5), fpgroup.Presentation.hecke(3)
    idx2 = fpgroup.todd_coxeter(p5, ["y", "xyx"]).index
    low5 = fpgroup.low_index_subgroups(p5, 5)
    indices5 = {t.index for t in low5}
    normal5 = sum(1 for t in low5 if t.index == 5 and t.is_normal())
    low3 = {t.index for t in fpgroup.low_index_subgroups(p3, 7)}
    ok = idx2 == 2 and not indices5 & {3, 4} and normal5 == 1 and set(range(2, 8)) <= low3
    report(10, "index 2 for <y, xyx>; no index 3, 4 and one normal index 5 for q=5; all indices 2..7 for q=3", ok)


def test_criterion_11_abelianization_arithmetic(report):
    got = [fpgroup.abelianization_subgroup(o, 0).commutator_index for o in ([5, 5], [2] * 5, [2, 5])]
    report(11, "commutator indices 25, 32, 10", got == [25, 32, 10], f"got {got}")


def test_criterion_12_property_suites(report):
    rng = random.Random(12)
    notes = []
    # decompose o eval on 500 random words
    bad = 0
    for i in range(500):
        q = (3, 5)[i % 2]
        w = free_reduce("".join(rng.choice("STt") for _ in range(rng.randint(0, 40))))
        g = eval_word(w, q)
        bad += eval_word(decompose(g), q) != g
    notes.append(f"round trip failures {bad}/500")
    # reduce_matrix homomorphism on 1000 pairs
    hom_bad = 0
    for i in range(1000):
        alpha, G = (5, C.q5()) if i % 2 else (PI, C.q_pi())
        R = C.finite_ring(alpha)
        u = eval_word("".join(rng.choice("STt") for _ in range(rng.randint(0, 15))), 5)
        v = eval_word("".join(rng.choice("STt") for _ in range(rng.randint(0, 15))), 5)
        lhs = C.reduce_matrix(u * v, R).code
        hom_bad += lhs != int(G.mul(C.reduce_matrix(u, R).code, C.reduce_matrix(v, R).code))
    notes.append(f"homomorphism failures {hom_bad}/1000")
    # ring axioms and cardinality = |norm| for 20 moduli
    R5 = hecke_ring(5)
    moduli = 0
    card_bad = 0
    axioms_bad = 0
    while moduli < 20:
        alpha = R5(rng.randint(-60, 60), rng.randint(-60, 60))
        if alpha.is_zero() or abs(alpha.norm()) > 10_000:
            continue
        moduli += 1
        F = quotient_ring(alpha)
        card_bad += F.cardinality != abs(alpha.norm())
        card_bad += len({F.reduce(F.lift(r)) for r in F.elements()}) != F.cardinality
        for _ in range(10):
            x, y, z = (R5(rng.randint(-99, 99), rng.randint(-99, 99)) for _ in range(3))
            axioms_bad += (x + y) + z != x + (y + z) or x * (y + z) != x * y + x * z
            axioms_bad += F.reduce(x * y) != F.mul(F.reduce(x), F.reduce(y))
    notes.append(f"cardinality failures {card_bad}, axiom failures {axioms_bad}")
    # min_poly numeric roots
    with mpmath.workdps(40):
        roots_bad = sum(abs(min_poly(q)(2 * mpmath.cos(mpmath.pi / q))) >= 1e-9 for q in range(3, 24))
    notes.append(f"min_poly root failures {roots_bad}")
    ok = bad == 0 and hom_bad == 0 and card_bad == 0 and axioms_bad == 0 and roots_bad == 0
    report(12, "property suites: round trip, homomorphism, ring axioms and norms, minimal polynomials", ok,
           "; ".join(notes))
