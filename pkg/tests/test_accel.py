import numpy as np
import pytest

from hecke import _accel
from hecke import congruence as C
from hecke.group import gen_S, gen_T
from hecke.ring import hecke_ring


def _setup(alpha):
    R = C.finite_ring(alpha)
    add, mul, neg = R.tables()
    gens = [C.entries_code(g.entries, R) for g in (gen_S(5), gen_T(5))]
    gens += [int(_accel.inverse(g, neg, R.cardinality)) for g in gens]
    return R, add, mul, neg, np.array(gens, dtype=np.int64)


@pytest.mark.parametrize("alpha", [5, hecke_ring(5).lam + 2, 7])
def test_backends_agree(alpha):
    if not _accel.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    R, add, mul, neg, gens = _setup(alpha)
    ident = C.identity_code(R)
    a = _accel.closure_numpy(gens, ident, add, mul, neg, R.cardinality, 10 ** 7)
    b = _accel.closure_numba(gens, ident, add, mul, neg, R.cardinality, 10 ** 7)
    assert np.array_equal(a, b)


def test_sparse_path_matches_dense(monkeypatch):
    R, add, mul, neg, gens = _setup(5)
    ident = C.identity_code(R)
    dense = _accel.closure_numpy(gens, ident, add, mul, neg, R.cardinality, 10 ** 7)
    monkeypatch.setattr(_accel, "DENSE_LIMIT", 0)
    sparse = _accel.closure_numpy(gens, ident, add, mul, neg, R.cardinality, 10 ** 7)
    assert np.array_equal(dense, sparse)


@pytest.mark.parametrize("fn", ["closure_numpy", "closure_numba"])
def test_cap(fn):
    R, add, mul, neg, gens = _setup(5)
    with pytest.raises(_accel.ClosureCapExceeded):
        getattr(_accel, fn)(gens, C.identity_code(R), add, mul, neg, R.cardinality, 100)


def test_env_cap(monkeypatch):
    monkeypatch.setenv("HECKE_BFS_CAP", "50")
    assert _accel.bfs_cap() == 50
    with pytest.raises(_accel.ClosureCapExceeded):
        C.image_group([gen_S(5), gen_T(5)], 5)


def test_canonical_is_idempotent():
    R, add, mul, neg, gens = _setup(5)
    codes = np.arange(0, R.cardinality ** 4, 97, dtype=np.int64)
    once = _accel.canonical(codes, neg, R.cardinality)
    assert np.array_equal(once, _accel.canonical(once, neg, R.cardinality))


def test_matmul_matches_exact_product():
    R = C.finite_ring(5)
    add, mul, neg = R.tables()
    g, h = gen_S(5) * gen_T(5), gen_T(5) ** 3
    x, y = C.entries_code(g.entries, R), C.entries_code(h.entries, R)
    assert int(_accel.matmul(x, y, add, mul, neg, R.cardinality)) == C.entries_code((g * h).entries, R)
