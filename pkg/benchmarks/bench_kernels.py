"""Compare the numba and pure-numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each case runs once to warm up (numba compilation, caches), then the best
of ``--repeat`` timings is reported. Results from both backends are checked
for equality before timing is printed.
"""

from __future__ import annotations

import argparse
import os
import time
from contextlib import contextmanager

import numpy as np

from bnchain import kernels
from bnchain.chain_search import ChainSpec, search


@contextmanager
def backend(name: str):
    old = os.environ.get("BNCHAIN_PURE_NUMPY")
    os.environ["BNCHAIN_PURE_NUMPY"] = "1" if name == "numpy" else "0"
    try:
        yield
    finally:
        if old is None:
            os.environ.pop("BNCHAIN_PURE_NUMPY", None)
        else:
            os.environ["BNCHAIN_PURE_NUMPY"] = old


def best_of(fn, repeat: int) -> tuple[float, object]:
    result = fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def cases():
    seqs, comp = kernels.sequence_table(2, 24)
    rng = np.random.default_rng(0)
    mask = rng.random(seqs.shape[0]) < 0.05
    yield "bridge mask r=2 d=24 t=12 sufficient", lambda: kernels.bridge_left_mask(seqs, mask, 24, 12, kernels.SUFFICIENT)
    yield "bridge mask r=2 d=24 t=12 necessary", lambda: kernels.bridge_left_mask(seqs, mask, 24, 12, kernels.NECESSARY)
    yield "dominance r=2 d=24", lambda: kernels.dominance_mask(seqs, comp, mask)
    seqs3, comp3 = kernels.sequence_table(3, 16)
    mask3 = rng.random(seqs3.shape[0]) < 0.05
    yield "bridge mask r=3 d=16 t=7 sufficient", lambda: kernels.bridge_left_mask(seqs3, mask3, 16, 7, kernels.SUFFICIENT)
    yield "search g=34 r=2 d=24 t=13 crude necessary unreduced", lambda: search(
        ChainSpec.tcbe(16, 16, 13), 2, 24, "crude", "necessary", reduce=False
    ).status
    yield "search g=34 r=2 d=24 t=12 crude sufficient", lambda: search(
        ChainSpec.tcbe(16, 16, 12), 2, 24, "crude", "sufficient"
    ).to_dict()


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is available")
    print(f"{'case':<56} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, fn in cases():
        with backend("numba"):
            t_fast, r_fast = best_of(fn, args.repeat)
        with backend("numpy"):
            t_slow, r_slow = best_of(fn, args.repeat)
        same = np.array_equal(r_fast, r_slow) if isinstance(r_fast, np.ndarray) else r_fast == r_slow
        if not same:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<56} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
