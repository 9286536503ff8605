"""Time the compiled and pure-Python normal-form kernels on the same words.

    python3 benchmarks/bench_garside.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import time

from braidmono.garside import KERNEL, compiled_normal_form, python_normal_form
from braidmono.verify import load_f222


def random_words(n: int, length: int, count: int, seed: int) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(length)) for _ in range(count)]


def workloads() -> dict[str, tuple[int, list[tuple[int, ...]]]]:
    local = load_f222().local[7]
    return {
        "random B_8, 200 letters x 50": (8, random_words(8, 200, 50, 1)),
        "random B_16, 400 letters x 10": (16, random_words(16, 400, 10, 2)),
        "six-point local product, B_12": (12, [local.product().letters]),
    }


def best_time(fn, n: int, words, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for w in words:
            fn(n, w)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"default kernel: {KERNEL}")
    if compiled_normal_form is None:
        print("compiled kernel not built; only the pure kernel is timed")
    print(f"{'workload':34} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, (n, words) in workloads().items():
        tp = best_time(python_normal_form, n, words, args.repeat)
        if compiled_normal_form is None:
            print(f"{name:34} {tp:10.4f} {'-':>10} {'-':>8}")
            continue
        for w in words:
            assert compiled_normal_form(n, w) == python_normal_form(n, w), "kernels disagree"
        tc = best_time(compiled_normal_form, n, words, args.repeat)
        print(f"{name:34} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
