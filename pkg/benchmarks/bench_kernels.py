"""Benchmark the pure and compiled kernels on random integer automata.

Usage: python benchmarks/bench_kernels.py [--states N] [--letters K]

Times one full Moore refinement, one transition-monoid closure and one
synchronous-product search per implementation.
"""

import argparse
import random
import time

from orbitaut._kernel import implementations


def random_dfa(rng, n, k):
    delta = tuple(rng.randrange(n) for _ in range(n * k))
    final = tuple(rng.randrange(2) for _ in range(n))
    return delta, final


def bench_refine(impl, n, k, delta, final):
    block = list(final)
    start = time.perf_counter()
    rounds = 0
    while True:
        new = impl.refine_round(n, k, delta, block)
        rounds += 1
        if new == block:
            break
        block = new
    return time.perf_counter() - start, rounds


def bench_closure(impl, n, k, delta, cap):
    start = time.perf_counter()
    rows, via, truncated = impl.close_transitions(n, k, delta, cap)
    return time.perf_counter() - start, len(rows), truncated


def bench_product(impl, n, k, d1, d2):
    # all-rejecting automata force a full exploration of the product
    f = tuple([0] * n)
    start = time.perf_counter()
    impl.product_witness(k, d1, f, 0, n, d2, f, 0, n)
    return time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--states", type=int, default=20000)
    ap.add_argument("--letters", type=int, default=4)
    ap.add_argument("--closure-states", type=int, default=60)
    ap.add_argument("--product-states", type=int, default=700)
    ap.add_argument("--cap", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    n, k = args.states, args.letters
    delta, final = random_dfa(rng, n, k)
    nc = args.closure_states
    cdelta, _ = random_dfa(rng, nc, k)
    np_ = args.product_states
    p1, _ = random_dfa(rng, np_, k)
    p2, _ = random_dfa(rng, np_, k)

    impls = implementations()
    if len(impls) == 1:
        print("compiled kernels not built; benchmarking the pure kernels only")
    results = {}
    for name, impl in impls:
        t_ref, rounds = bench_refine(impl, n, k, delta, final)
        t_clo, size, truncated = bench_closure(impl, nc, k, cdelta, args.cap)
        t_pro = bench_product(impl, np_, k, p1, p2)
        results[name] = (t_ref, t_clo, t_pro)
        print(
            f"{name:>9}: refine {t_ref * 1e3:8.1f} ms ({rounds} rounds, {n} states)   "
            f"closure {t_clo * 1e3:8.1f} ms ({size} elements"
            f"{', truncated' if truncated else ''})   "
            f"product {t_pro * 1e3:8.1f} ms ({np_}x{np_} pairs)"
        )
    if len(results) == 2:
        pure, comp = results["pure"], results["compiled"]
        for label, i in (("refine", 0), ("closure", 1), ("product", 2)):
            if comp[i] > 0:
                print(f"speedup {label}: {pure[i] / comp[i]:.1f}x")


if __name__ == "__main__":
    main()
