"""Compare the numba and pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 200]

Times the lowered-system evaluation (residual plus Jacobian), the
characteristic polynomial, and a full multi-start solve on the figure-eight
braid. The numba timings exclude the first (compiling) call.
"""
import argparse
import time

import numpy as np

from kchaug import _kernels
from kchaug.augment import commutative_system, solve_augmentations
from kchaug.braid import BraidWord, ideal_generators


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), float(np.median(times))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is unavailable (or KCHAUG_DISABLE_NUMBA is set); only the numpy column is meaningful")

    braid = BraidWord(3, (1, -2, 1, -2))
    ideal = ideal_generators(braid)
    system = commutative_system(ideal)
    lowered = system.lower(0.8 + 0.5j)
    rng = np.random.default_rng(0)
    z = rng.normal(size=system.n_vars) + 1j * rng.normal(size=system.n_vars)
    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    cases = {
        "eval_system": lambda be: (lambda: lowered(z, be)),
        "charpoly 5x5": lambda be: (lambda: _kernels.charpoly(A, be)),
        "solve (40 starts)": lambda be: (lambda: solve_augmentations(ideal, 0.8 + 0.5j, attempts=40, backend=be)),
    }
    print(f"{'kernel':<20}" + "".join(f"{be + ' best':>14}{be + ' median':>16}" for be in backends))
    for name, make in cases.items():
        reps = max(3, args.repeat // 40) if name.startswith("solve") else args.repeat
        row = f"{name:<20}"
        for be in backends:
            best, med = best_of(make(be), reps)
            row += f"{best * 1e6:>12.1f}us{med * 1e6:>14.1f}us"
        print(row)


if __name__ == "__main__":
    main()
