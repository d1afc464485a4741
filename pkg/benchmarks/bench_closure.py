"""Time the BFS closure of <S, T> modulo an ideal with the numba and numpy backends.

    python3 benchmarks/bench_closure.py [--repeat N]
"""

import argparse
import time

import numpy as np

from hecke import _accel
from hecke import congruence as C
from hecke.group import gen_S, gen_T
from hecke.ring import hecke_ring


def setup(alpha):
    R = C.finite_ring(alpha)
    add, mul, neg = R.tables()
    gens = [C.entries_code(g.entries, R) for g in (gen_S(5), gen_T(5))]
    gens += [int(_accel.inverse(g, neg, R.cardinality)) for g in gens]
    return R, (np.array(gens, dtype=np.int64), C.identity_code(R), add, mul, neg, R.cardinality, 10 ** 8)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    lam = hecke_ring(5).lam
    cases = [("L+2", lam + 2), ("5", 5), ("7+2L", 7 + 2 * lam)]
    if _accel.HAVE_NUMBA:
        # compile outside the timed region
        _accel.closure_numba(*setup(5)[1])
    print(f"{'modulus':8} {'ring':>5} {'order':>8} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for name, alpha in cases:
        R, a = setup(alpha)
        t_np, out_np = best_of(_accel.closure_numpy, a, args.repeat)
        if _accel.HAVE_NUMBA:
            t_nb, out_nb = best_of(_accel.closure_numba, a, args.repeat)
            assert np.array_equal(out_np, out_nb)
            nb, sp = f"{t_nb:9.4f}", f"{t_np / t_nb:8.1f}"
        else:
            nb, sp = f"{'n/a':>9}", f"{'n/a':>8}"
        print(f"{name:8} {R.cardinality:5} {out_np.size:8} {t_np:9.4f} {nb} {sp}")


if __name__ == "__main__":
    main()
