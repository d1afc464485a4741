import math

import pytest
from hypothesis import given, settings, strategies as st

from hecke import fpgroup
from hecke.data import power5_pairings
from hecke.group import decompose, eval_word, free_reduce

P5 = fpgroup.Presentation.hecke(5)
P3 = fpgroup.Presentation.hecke(3)


def test_translation_is_homomorphic():
    assert fpgroup.st_to_xy("S") == "x"
    for w in ["T", "t", "STtS", "TTSt", "StSTS"]:
        back = fpgroup.xy_to_st(fpgroup.st_to_xy(w))
        assert eval_word(back, 5) == eval_word(w, 5)


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet="STt", max_size=20).map(free_reduce))
def test_translation_roundtrip_random(w):
    assert eval_word(fpgroup.xy_to_st(fpgroup.st_to_xy(w)), 5) == eval_word(w, 5)


def test_index_examples():
    t = fpgroup.todd_coxeter(P5, ["y", "xyx"])
    assert t.index == 2 and t.is_complete() and t.relators_hold()
    assert fpgroup.todd_coxeter(P5, ["x", "y"]).index == 1
    words = [fpgroup.st_to_xy(decompose(g)) for g in power5_pairings()]
    t5 = fpgroup.todd_coxeter(P5, words)
    assert t5.index == 5 and t5.is_normal()


def test_subgroup_words_fix_first_coset():
    words = [fpgroup.st_to_xy(decompose(g)) for g in power5_pairings()]
    t = fpgroup.todd_coxeter(P5, words)
    assert all(t.act(0, w) == 0 for w in words)


def test_trivial_subgroup_gives_infinite_or_cap():
    with pytest.raises(fpgroup.CosetCapExceeded):
        fpgroup.todd_coxeter(P5, [], cap=2000)


def test_finite_group_full_enumeration():
    # <x, y | x^2, y^3, (xy)^3> is A4, the trivial subgroup has index 12
    pres = fpgroup.Presentation(("x", "y"), ("xx", "yyy", "xyxyxy"))
    assert fpgroup.todd_coxeter(pres, []).index == 12


def test_low_index_q5():
    tabs = fpgroup.low_index_subgroups(P5, 4)
    assert sorted({t.index for t in tabs}) == [1, 2]
    tabs5 = fpgroup.low_index_subgroups(P5, 5)
    assert sum(1 for t in tabs5 if t.index == 5 and t.is_normal()) == 1
    for t in tabs5:
        assert t.is_complete() and t.relators_hold()


def test_low_index_q3_counts():
    tabs = fpgroup.low_index_subgroups(P3, 7)
    counts = [sum(1 for t in tabs if t.index == n) for n in range(1, 8)]
    # conjugacy classes of subgroups of PSL(2, Z) by index
    assert counts == [1, 1, 2, 2, 1, 8, 6]


def test_low_index_duplicate_free():
    tabs = fpgroup.low_index_subgroups(P3, 6)
    for i, a in enumerate(tabs):
        for b in tabs[i + 1:]:
            assert not fpgroup.tables_conjugate(a, b)


def test_low_index_limit():
    with pytest.raises(ValueError):
        fpgroup.low_index_subgroups(P5, 13)


def test_abelian_invariants():
    assert fpgroup.abelian_invariants(P5) == [10]
    assert fpgroup.abelian_invariants(P3) == [6]


@pytest.mark.parametrize("orders, r, index", [
    ([5, 5], 0, 25), ([2] * 5, 0, 32), ([2, 5], 0, 10), ([2], 1, math.inf),
])
def test_abelianization_subgroup(orders, r, index):
    ab = fpgroup.abelianization_subgroup(orders, r)
    assert ab.commutator_index == index
    assert ab.invariants.count(0) == r
