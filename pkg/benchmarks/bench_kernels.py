"""Compare the numba and numpy prefix counters on a few points at q2.

    python benchmarks/bench_kernels.py [--length 28] [--repeat 5]

The numba column is skipped when numba is unavailable or QEXPAND_NO_NUMBA=1.
"""
import argparse
import time

from qexpand import Q2, to_decimal
from qexpand._kernels import HAVE_NUMBA, count_prefixes_numba, count_prefixes_numpy
from qexpand.words import parse_word, value

POINTS = ["0^3(10)^inf", "0^2(01)^3(10)^inf", "(1001)^inf", "01^2(01)(10)^inf"]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--length", type=int, default=28)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--cap", type=int, default=1 << 22)
    args = ap.parse_args()

    q = float(Q2.gen())
    if HAVE_NUMBA:
        count_prefixes_numba(0.5, q, 4, 10, 1e-7)  # compile outside the timing
    print(f"{'point':<22} {'count':>9} {'numpy s':>10} {'numba s':>10}")
    for text in POINTS:
        x = float(to_decimal(value(parse_word(text), Q2), 20))
        t_np, n_np = best_of(lambda: count_prefixes_numpy(x, q, args.length, args.cap), args.repeat)
        if HAVE_NUMBA:
            t_nb, n_nb = best_of(lambda: count_prefixes_numba(x, q, args.length, args.cap, 1e-7), args.repeat)
            if n_nb != n_np:
                raise SystemExit(f"backends disagree on {text}: {n_np} vs {n_nb}")
            nb = f"{t_nb:10.4f}"
        else:
            nb = f"{'-':>10}"
        print(f"{text:<22} {n_np:>9} {t_np:10.4f} {nb}")


if __name__ == "__main__":
    main()
