"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from fracent import _kernels as K


def cases(rng):
    for L in (256, 1250, 2000):
        modes = rng.normal(size=(3, L))
        dist = np.arange(0, 100)
        yield f"cosine_table     L={L:<5} D=100", K.cosine_table_numba, K.cosine_table_numpy, (modes, dist, L)
        w, om = rng.uniform(0.5, 2, L), rng.uniform(0, 3, L)
        t = np.linspace(0, 1000, 1001)
        yield f"otoc_sum         L={L:<5} T=1001", K.otoc_sum_numba, K.otoc_sum_numpy, (w, om, t, 25, L)
        v, s = rng.uniform(-1, 1, L), rng.uniform(0, 1, L)
        yield f"quasiparticle    L={L:<5} T=1001", K.quasiparticle_sum_numba, K.quasiparticle_sum_numpy, (v, s, t, 50, L)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<36}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}{'max diff':>11}")
    for name, fast, slow, arg in cases(rng):
        a, b = fast(*arg), slow(*arg)  # also compiles
        tf = min(timeit.repeat(lambda: fast(*arg), number=1, repeat=args.repeat))
        ts = min(timeit.repeat(lambda: slow(*arg), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(a - b)))
        print(f"{name:<36}{tf * 1e3:>10.2f}{ts * 1e3:>10.2f}{ts / tf:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
