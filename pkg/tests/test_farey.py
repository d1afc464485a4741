import pytest

from hecke import farey, fpgroup
from hecke.catalog import SYMBOLS, read_symbol_text
from hecke.data import power5_pairings
from hecke.group import classify, decompose, gen_S, gen_T

EQ31 = "q=5; vertices=-oo,0,oo; pairings=odd,odd"
GAMMA2 = "q=3; vertices=-oo,-1,0,1,oo; pairings=1,2,2,1"
GAMMA0_2 = "q=3; vertices=-oo,0,1,oo; pairings=even,1,1"


def inv_tuple(inv):
    return (inv.d, inv.v2, inv.vq, inv.v_inf, inv.g)


def test_parse_eq31():
    sym = farey.parse_hfs(EQ31)
    assert sym.q == 5 and sym.pairings == ("odd", "odd")
    assert sym.vertices[0] == farey.NEG_INF and sym.vertices[-1] == farey.POS_INF


def test_whitespace_insensitive():
    assert farey.parse_hfs("q = 5 ;\n vertices = -oo , 0 , oo ;\n pairings = odd , odd ;") == farey.parse_hfs(EQ31)


@pytest.mark.parametrize("text, line, token", [
    ("q=5; vertices=-oo,0,oo; pairings=odd", 1, None),
    ("q=5;\nvertices=-oo,1,0,oo;\npairings=odd,odd,odd", 2, "0"),
    ("q=5; vertices=-oo,0,oo; pairings=1,2", 1, "1"),
    ("q=5; vertices=-oo,0,oo; pairings=odd,bogus", 1, "bogus"),
])
def test_parse_errors_are_located(text, line, token):
    with pytest.raises(farey.HFSError) as exc:
        farey.parse_hfs(text)
    assert exc.value.line == line
    assert exc.value.token == token


def test_free_label_thrice_rejected():
    with pytest.raises(farey.HFSError, match="exactly twice"):
        farey.parse_hfs("q=3; vertices=-oo,-1,0,1,oo; pairings=1,1,1,even")


def test_non_adjacent_edge_reported():
    sym = farey.parse_hfs("q=5; vertices=-oo,0,1,oo; pairings=odd,1,1")
    with pytest.raises(farey.HFSError, match="edge 1"):
        farey.side_pairing_generators(sym)


def test_eq31_generators_and_invariants():
    sym = farey.parse_hfs(EQ31)
    gens = farey.side_pairing_generators(sym)
    S, T = gen_S(5), gen_T(5)
    assert {g.generator for g in gens} == {S * T.inv(), T.inv() * S}
    assert all(classify(g.generator).order == 5 for g in gens)
    assert inv_tuple(farey.invariants(sym)) == (2, 0, 2, 1, 0)
    cc = farey.cusp_classes(sym)
    assert len(cc.classes) == 1 and cc.widths == (2,)


def test_full_group_symbol():
    inv = farey.invariants(farey.full_group_symbol(5))
    assert inv.d == 1 and inv.widths == (1,)


def test_pentagon():
    sym = farey.parse_hfs(read_symbol_text("pentagon"))
    assert sym.pairings == ("even",) * 5
    gens = farey.side_pairing_generators(sym)
    assert gens[0].generator == gen_S(5)
    for g in gens:
        assert g.generator.trace.is_zero()
        assert (g.generator * g.generator).is_identity()
    inv = farey.invariants(sym)
    assert inv_tuple(inv) == (5, 5, 0, 1, 0)
    assert inv.geometric_width == 5 and inv.riemann_hurwitz_holds(5)
    # the frozen file is the chain derived from the recorded involutions
    assert sym == farey.power_q_symbol(5)


def test_pentagon_chain_swaps_edge_endpoints():
    chain = farey.vertex_chain_from_involutions(power5_pairings())
    assert len(chain) == 6
    for g in power5_pairings():
        hits = [i for i in range(5)
                if farey.cusp_equal(g.apply(chain[i]), chain[i + 1])
                and farey.cusp_equal(g.apply(chain[i + 1]), chain[i])]
        assert len(hits) == 1


def test_pentagon_same_subgroup_as_recorded():
    sym = farey.parse_hfs(read_symbol_text("pentagon"))
    pres = fpgroup.Presentation.hecke(5)
    ours = [fpgroup.st_to_xy(sp.word) for sp in farey.side_pairing_generators(sym)]
    theirs = [fpgroup.st_to_xy(decompose(g)) for g in power5_pairings()]
    assert fpgroup.todd_coxeter(pres, ours).index == 5
    # each generating set lies in the subgroup of the other
    assert fpgroup.todd_coxeter(pres, ours + theirs).index == 5


@pytest.mark.parametrize("text, expected, widths", [
    (GAMMA2, (6, 0, 0, 3, 0), (2, 2, 2)),
    (GAMMA0_2, (3, 1, 0, 2, 0), (2, 1)),
])
def test_modular_group_examples(text, expected, widths):
    sym = farey.parse_hfs(text)
    inv = farey.invariants(sym)
    assert inv_tuple(inv) == expected
    assert sorted(inv.widths) == sorted(widths)
    for sp in farey.side_pairing_generators(sym):
        if sp.kind == "free":
            assert classify(sp.generator).kind in ("parabolic", "hyperbolic")
            assert all(not (sp.generator ** k).is_identity() for k in range(1, 4 * sym.q + 1))


@pytest.mark.parametrize("name", SYMBOLS)
def test_catalog_properties(name):
    sym = farey.parse_hfs(read_symbol_text(name))
    assert farey.parse_hfs(farey.serialize_hfs(sym)) == sym
    inv = farey.invariants(sym)
    assert sum(inv.widths) == inv.d
    assert inv.riemann_hurwitz_holds(sym.q)
    pres = fpgroup.Presentation.hecke(sym.q)
    words = [fpgroup.st_to_xy(sp.word) for sp in farey.side_pairing_generators(sym)]
    table = fpgroup.todd_coxeter(pres, words)
    assert table.index == inv.d
    # widths agree with the cycle lengths of T on the cosets
    assert sorted(len(o) for o in table.orbits(fpgroup.st_to_xy("T"))) == sorted(inv.widths)
    for sp in farey.side_pairing_generators(sym):
        assert decompose(sp.generator) is not None
