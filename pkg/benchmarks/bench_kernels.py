"""Compare the compiled kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Prints best-of-5 wall
times and the maximum absolute difference between the two backends.
"""
import argparse
import timeit

import numpy as np

from echostats import _backend
from echostats.ising import QuenchSpec, mode_data
from echostats.oracle import enumerate_states
from echostats.sampling import quasi_uniform_times


def cases(n_times: int):
    md = mode_data(QuenchSpec(0.99, 1.01, 40))
    t = quasi_uniform_times(1e6, n_times, seed=0)
    ens = enumerate_states(mode_data(QuenchSpec(0.3, 1.4, 20)))
    rng = np.random.default_rng(0)
    om = np.sort(rng.uniform(0, 4, 200_000))
    om[1::7] = om[0::7][: om[1::7].shape[0]] + 1e-12
    om.sort()
    wt = rng.uniform(0, 1, om.shape[0])
    return {
        "log_echo": (lambda k: k.log_echo(md.alpha, md.lambda2, t)),
        "cos_sum": (lambda k: k.cos_sum(md.alpha, md.lambda2, t)),
        "brute_echo": (lambda k: k.brute_echo(ens.weights, ens.energies, t[:2000])),
        "merge_atoms": (lambda k: k.merge_atoms(om, wt, 1e-9)[1]),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--times", type=int, default=400_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    pure = _backend.get("pure")
    try:
        fast = _backend.get("cython")
    except ImportError:
        print("compiled extension not built; only the fallback is available")
        return
    print(f"{'kernel':<12}{'cython [s]':>12}{'pure [s]':>12}{'speedup':>10}{'max diff':>12}")
    for name, fn in cases(args.times).items():
        tc = min(timeit.repeat(lambda: fn(fast), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(pure), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(np.asarray(fn(fast)) - np.asarray(fn(pure)))))
        print(f"{name:<12}{tc:>12.4f}{tp:>12.4f}{tp / tc:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
