"""Hot numerical kernels, each with a numba and a numpy implementation.

The dispatchers at the bottom pick the numba version unless it is disabled
through the environment (see ``_accel``).  Both versions are importable
directly so they can be benchmarked and cross-checked.
"""

from functools import lru_cache
from itertools import product

import numpy as np

from ._accel import numba_enabled
from numba import njit, prange


@lru_cache(maxsize=None)
def sector_basis(photons: int, modes: int) -> np.ndarray:
    """All occupation patterns with ``photons`` spread over ``modes``, lexicographically ascending."""
    if modes == 0:
        return np.zeros((1 if photons == 0 else 0, 0), dtype=np.int64)
    rows = [
        occ
        for occ in product(range(photons + 1), repeat=modes)
        if sum(occ) == photons
    ]
    return np.array(rows, dtype=np.int64).reshape(len(rows), modes)


@lru_cache(maxsize=None)
def _placement_table(photons: int, modes: int) -> np.ndarray:
    # table[k, r] = number of ways to put exactly k photons into r modes
    table = np.zeros((photons + 1, modes + 1), dtype=np.int64)
    table[0, 0] = 1
    for r in range(1, modes + 1):
        for k in range(photons + 1):
            table[k, r] = table[: k + 1, r - 1].sum()
    return table


def _factorial_roots(photons: int) -> np.ndarray:
    return np.sqrt(np.cumprod(np.concatenate(([1.0], np.arange(1, photons + 1, dtype=float)))))


@njit(cache=True)
def _rank(occ, table):
    modes = occ.shape[0]
    remaining = 0
    for i in range(modes):
        remaining += occ[i]
    index = 0
    for i in range(modes - 1):
        for v in range(occ[i]):
            index += table[remaining - v, modes - i - 1]
        remaining -= occ[i]
    return index


@lru_cache(maxsize=None)
def _raise_tables(photons: int, modes: int) -> tuple[np.ndarray, np.ndarray]:
    """Index of pattern + one photon in mode j, for every sector below ``photons``.

    Sectors 0..photons-1 are stacked row-wise; ``offsets[k]`` is where sector k starts.
    """
    blocks = []
    offsets = np.zeros(photons + 1, dtype=np.int64)
    for k in range(photons):
        lower = sector_basis(k, modes)
        upper = {tuple(row): i for i, row in enumerate(sector_basis(k + 1, modes))}
        block = np.empty((lower.shape[0], modes), dtype=np.int64)
        for i, row in enumerate(lower):
            for j in range(modes):
                bumped = list(row)
                bumped[j] += 1
                block[i, j] = upper[tuple(bumped)]
        blocks.append(block)
        offsets[k + 1] = offsets[k] + lower.shape[0]
    return np.vstack(blocks), offsets


@njit(cache=True, parallel=True)
def _sector_transform_numba(unitary, basis, raise_table, offsets, roots):
    dim, modes = basis.shape
    photons = offsets.shape[0] - 1
    out = np.zeros((dim, dim), dtype=np.complex128)
    for col in prange(dim):
        sources = np.empty(photons, dtype=np.int64)
        k = 0
        for i in range(modes):
            for _ in range(basis[col, i]):
                sources[k] = i
                k += 1
        # multiply in one creation operator at a time, tracking monomial coefficients
        cur = np.ones(1, dtype=np.complex128)
        for k in range(photons):
            size_next = offsets[k + 2] - offsets[k + 1] if k + 1 < photons else dim
            nxt = np.zeros(size_next, dtype=np.complex128)
            s = sources[k]
            base = offsets[k]
            for idx in range(cur.shape[0]):
                a = cur[idx]
                if a == 0:
                    continue
                for j in range(modes):
                    u = unitary[j, s]
                    if u != 0:
                        nxt[raise_table[base + idx, j]] += a * u
            cur = nxt
        norm_in = 1.0
        for i in range(modes):
            norm_in *= roots[basis[col, i]]
        for row in range(dim):
            norm_out = 1.0
            for i in range(modes):
                norm_out *= roots[basis[row, i]]
            out[row, col] = cur[row] * norm_out / norm_in
    return out


def _sector_transform_numpy(unitary, basis, raise_table, offsets, roots):
    dim, modes = basis.shape
    photons = offsets.size - 1
    # column c's k-th creation operator acts on mode sources[c, k]
    sources = np.array([np.repeat(np.arange(modes), row) for row in basis]).reshape(dim, photons)
    cur = np.ones((1, dim), dtype=np.complex128)
    for k in range(photons):
        block = raise_table[offsets[k] : offsets[k + 1]]
        size_next = offsets[k + 2] - offsets[k + 1] if k + 1 < photons else dim
        nxt = np.zeros((size_next, dim), dtype=np.complex128)
        weights = unitary[:, sources[:, k]]
        for j in range(modes):
            # adding a photon to a fixed mode is injective, so plain fancy indexing is safe
            nxt[block[:, j]] += cur * weights[j][None, :]
        cur = nxt
    norm = np.prod(roots[basis], axis=1)
    return cur * norm[:, None] / norm[None, :]


def sector_transform(unitary: np.ndarray, photons: int, use_numba: bool | None = None) -> np.ndarray:
    """Matrix of a linear-optical unitary restricted to the fixed-photon-number sector.

    Each creation operator is rewritten as a_i^dag -> sum_j U[j, i] a_j^dag and the
    product is expanded one photon at a time.  Rows and columns follow ``sector_basis``.
    """
    unitary = np.ascontiguousarray(unitary, dtype=np.complex128)
    modes = unitary.shape[0]
    basis = sector_basis(photons, modes)
    if use_numba is None:
        use_numba = numba_enabled()
    if photons == 0:
        return np.eye(basis.shape[0], dtype=np.complex128)
    raise_table, offsets = _raise_tables(photons, modes)
    roots = _factorial_roots(photons)
    if use_numba:
        return _sector_transform_numba(unitary, basis, raise_table, offsets, roots)
    return _sector_transform_numpy(unitary, basis, raise_table, offsets, roots)


def sector_rank(occ, modes: int) -> int:
    occ = np.asarray(occ, dtype=np.int64)
    return int(_rank(occ, _placement_table(int(occ.sum()), modes)))


@njit(cache=True)
def _two_budget_game_numba(draws, success_probability):
    # draws: (trials, 3) uniforms; a block needs two successes before two failures,
    # which is decided by the third draw only after exactly one early failure
    trials = draws.shape[0]
    wins = np.empty(trials, dtype=np.bool_)
    for t in range(trials):
        a = draws[t, 0] < success_probability
        b = draws[t, 1] < success_probability
        c = draws[t, 2] < success_probability
        wins[t] = (a and b) or ((a != b) and c)
    return wins


def _two_budget_game_numpy(draws, success_probability):
    hits = draws[:, :3] < success_probability
    first_two = hits[:, 0] & hits[:, 1]
    one_miss = hits[:, 0] ^ hits[:, 1]
    return first_two | (one_miss & hits[:, 2])


def two_budget_game(draws: np.ndarray, success_probability: float, use_numba: bool | None = None) -> np.ndarray:
    """Per-trial outcome of collecting two successes before a second failure."""
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba:
        return _two_budget_game_numba(np.ascontiguousarray(draws), success_probability)
    return _two_budget_game_numpy(draws, success_probability)


@njit(cache=True)
def _fusion_walk_numba(draws, start_a, start_b, max_steps):
    # repeated fusion of a growing code with fresh blocks of length start_b
    trials = draws.shape[0]
    lengths = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        m = start_a
        for step in range(max_steps):
            if m <= 1:
                break
            if draws[t, step] < 0.5:
                m = m + start_b - 2
            else:
                m = m - 1
        lengths[t] = m
    return lengths


def _fusion_walk_numpy(draws, start_a, start_b, max_steps):
    m = np.full(draws.shape[0], start_a, dtype=np.int64)
    for step in range(max_steps):
        alive = m > 1
        win = draws[:, step] < 0.5
        m = np.where(alive & win, m + start_b - 2, np.where(alive, m - 1, m))
    return m


def fusion_walk(draws: np.ndarray, start_a: int, start_b: int, use_numba: bool | None = None) -> np.ndarray:
    """Final code lengths after ``draws.shape[1]`` fusion attempts (a length-1 code is terminal)."""
    if use_numba is None:
        use_numba = numba_enabled()
    steps = draws.shape[1]
    if use_numba:
        return _fusion_walk_numba(np.ascontiguousarray(draws), start_a, start_b, steps)
    return _fusion_walk_numpy(draws, start_a, start_b, steps)
