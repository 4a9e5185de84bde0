"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot kernels (``composition_count_avoiding`` and
``rewrite_span_size``) and the end-to-end colength series of the quadric
hypersurface, on both backends, and prints per-workload speedups.  Every
timed pair is also checked for equal results, so a run doubles as a
backend-agreement smoke test.

Usage::

    python3 benchmarks/bench_kernels.py            # default q = 64
    python3 benchmarks/bench_kernels.py --q 128 --repeats 5
"""

from __future__ import annotations

import argparse
import os
import time

from hkdensity.kernels import backend_name, composition_count_avoiding, rewrite_span_size
from hkdensity.rings import (
    BinomialRewriteRing,
    colength_series,
    maximal_ideal,
    nilpotency_index,
    total_colength,
)

QUADRIC = BinomialRewriteRing(4, (1, 0, 0, 1), (0, 1, 1, 0))
BACKENDS = ("numpy", "numba")


def best_of(repeats: int, fn) -> tuple[float, object]:
    """Call ``fn`` ``repeats`` times and return (best seconds, last result)."""
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_count_avoiding(q: int, repeats: int) -> dict[str, tuple[float, object]]:
    forbidden = [(q, 0, 0, q), (0, q, q, 0)] + [
        tuple(q if i == j else 0 for i in range(4)) for j in range(4)
    ]
    degrees = range(q, 2 * q, max(1, q // 8))

    def run(backend: str):
        return tuple(
            composition_count_avoiding(4, m, forbidden, backend=backend)
            for m in degrees
        )

    return {b: best_of(repeats, lambda b=b: run(b)) for b in BACKENDS}


def bench_span_size(q: int, repeats: int) -> dict[str, tuple[float, object]]:
    generators = [tuple(q if i == j else 0 for i in range(4)) for j in range(4)]
    degrees = range(q, 2 * q, max(1, q // 8))

    def run(backend: str):
        return tuple(
            rewrite_span_size(4, (1, 0, 0, 1), (0, 1, 1, 0), generators, m, backend=backend)
            for m in degrees
        )

    return {b: best_of(repeats, lambda b=b: run(b)) for b in BACKENDS}


def bench_total_colength(q: int, repeats: int) -> dict[str, tuple[float, object]]:
    ideal = maximal_ideal(QUADRIC)

    def run(backend: str):
        os.environ["HKD_KERNEL"] = backend
        colength_series.cache_clear()
        nilpotency_index.cache_clear()
        total = total_colength(QUADRIC, ideal, q)
        # Anchor the timed result to the quadric closed form so a workload
        # mistake cannot hide behind backend agreement.
        if 3 * total != 4 * q**3 - q:
            raise SystemExit(f"quadric total {total} != (4q^3 - q)/3 at q = {q}")
        return total

    return {b: best_of(repeats, lambda b=b: run(b)) for b in BACKENDS}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--q", type=int, default=64, help="Frobenius level (default 64)")
    parser.add_argument(
        "--series-q",
        type=int,
        default=64,
        help="Frobenius level for the end-to-end series workload (default 64)",
    )
    parser.add_argument("--repeats", type=int, default=3, help="best-of repeats (default 3)")
    args = parser.parse_args()

    if backend_name("numba") != "numba":
        raise SystemExit("numba is not importable; nothing to compare against")

    # One throwaway call per jitted kernel so compilation time never lands
    # in a timed region.
    composition_count_avoiding(4, 2, [(1, 0, 0, 1)], backend="numba")
    rewrite_span_size(4, (1, 0, 0, 1), (0, 1, 1, 0), [(2, 0, 0, 0)], 3, backend="numba")

    workloads = [
        ("count_avoiding", bench_count_avoiding, args.q),
        ("rewrite_span", bench_span_size, args.q),
        ("total_colength", bench_total_colength, args.series_q),
    ]

    print(
        f"quadric workloads, kernels at q = {args.q}, "
        f"series at q = {args.series_q}, best of {args.repeats}"
    )
    print(f"{'workload':<16} {'q':>4} {'numpy (s)':>10} {'numba (s)':>10} {'speedup':>8}")
    for name, bench, q in workloads:
        timed = bench(q, args.repeats)
        (t_np, r_np), (t_nb, r_nb) = timed["numpy"], timed["numba"]
        if r_np != r_nb:
            raise SystemExit(f"{name}: backends disagree ({r_np!r} vs {r_nb!r})")
        print(f"{name:<16} {q:>4} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
