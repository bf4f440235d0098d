"""Transfer-matrix kernels: numba vs pure numpy.

Times ``strip_sweep`` for bridges and strip walks on both kernel paths,
checks that they agree, and prints one row per case.

    python benchmarks/bench_tm.py [--repeat 3] [--quick]
"""
import argparse
import time

from compsaw import _accel
from compsaw.enumeration import strip_sweep

CASES = [
    # (label, h, n_max, start_row, end_row, prune)
    ("bridge h=4", 4, 24, 0, 4, True),
    ("bridge h=6", 6, 26, 0, 6, True),
    ("bridge h=9", 9, 30, 0, 9, True),
    ("strip walks h=3", 3, 22, 0, -1, False),
    ("strip walks h=5", 5, 22, 0, -1, False),
]
QUICK = [c for c in CASES if c[1] <= 4]


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()

    if not _accel.USE_NUMBA:
        print(f"numba disabled ({_accel.DISABLE_ENV} set or not installed); numpy only")
    print(f"{'case':<18}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  agree")
    for label, h, n, s, e, prune in (QUICK if args.quick else CASES):
        run = lambda nb: strip_sweep(h, n, s, e, prune=prune, use_numba=nb)  # noqa: E731
        t_np, ref = best_of(lambda: run(False), args.repeat)
        if _accel.USE_NUMBA:
            run(True)  # compile outside the timing
            t_nb, got = best_of(lambda: run(True), args.repeat)
            print(f"{label:<18}{t_nb:>10.3f}{t_np:>10.3f}{t_np / t_nb:>9.1f}  {got == ref}")
        else:
            print(f"{label:<18}{'-':>10}{t_np:>10.3f}{'-':>9}  -")


if __name__ == "__main__":
    main()
