"""Time the compiled kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are called explicitly, so PHOTONSIM_NO_NUMBA does not matter here.
The first numba call (compilation) is excluded from the timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np
from scipy.stats import unitary_group

from photonsim import kernels


def best_of(fn, repeat: int) -> float:
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    cases = []
    for modes, photons in [(4, 2), (6, 3), (8, 4), (8, 5), (10, 4)]:
        u = unitary_group.rvs(modes, random_state=rng)
        fast = kernels.sector_transform(u, photons, use_numba=True)
        slow = kernels.sector_transform(u, photons, use_numba=False)
        assert np.allclose(fast, slow, atol=1e-12)
        cases.append((
            f"sector_transform m={modes} n={photons} dim={fast.shape[0]}",
            lambda u=u, p=photons: kernels.sector_transform(u, p, use_numba=True),
            lambda u=u, p=photons: kernels.sector_transform(u, p, use_numba=False),
        ))
    draws = rng.random((1_000_000, 3))
    cases.append((
        "two_budget_game 1e6 trials",
        lambda: kernels.two_budget_game(draws, 2 / 3, use_numba=True),
        lambda: kernels.two_budget_game(draws, 2 / 3, use_numba=False),
    ))
    walk = rng.random((100_000, 50))
    cases.append((
        "fusion_walk 1e5 trials x 50 steps",
        lambda: kernels.fusion_walk(walk, 10, 4, use_numba=True),
        lambda: kernels.fusion_walk(walk, 10, 4, use_numba=False),
    ))

    print(f"{'kernel':44s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, fast, slow in cases:
        t_fast = best_of(fast, args.repeat)
        t_slow = best_of(slow, args.repeat)
        print(f"{name:44s} {1e3 * t_fast:11.3f} {1e3 * t_slow:11.3f} {t_slow / t_fast:8.1f}")


if __name__ == "__main__":
    main()
