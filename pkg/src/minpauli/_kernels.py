"""Hot loops of the closure search.

Every kernel has two implementations with identical results:

* a numba ``@njit`` version (default when numba imports), and
* a vectorised pure-numpy version.

Set ``MINPAULI_NO_NUMBA=1`` to force numpy, or call :func:`set_backend` at
runtime.  Packed vectors are int64 with the X-part in the low ``n`` bits.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


_BACKEND = "numba" if HAVE_NUMBA and os.environ.get("MINPAULI_NO_NUMBA", "") in ("", "0") else "numpy"

DIST_DTYPE = np.uint16


def get_backend() -> str:
    return _BACKEND


def set_backend(name: str) -> None:
    global _BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        warnings.warn("numba unavailable, staying on numpy")
        return
    _BACKEND = name


def lambda_swap(v: np.ndarray | int, n: int):
    """Swap X and Z halves so that ``parity(w & lambda_swap(v))`` is v^T Lambda w."""
    mask = (1 << n) - 1
    return ((v >> n) & mask) | ((v & mask) << n)


# --------------------------------------------------------------------- numba


@njit(cache=True)
def _parity(x):
    x ^= x >> 32
    x ^= x >> 16
    x ^= x >> 8
    x ^= x >> 4
    x ^= x >> 2
    x ^= x >> 1
    return x & 1


@njit(cache=True)
def _closure_dist_numba(gens, lams, n):
    size = 1 << (2 * n)
    dist = np.zeros(size, dtype=np.uint16)
    queue = np.empty(size, dtype=np.int64)
    head = 0
    tail = 0
    for g in gens:
        if g != 0 and dist[g] == 0:
            dist[g] = 1
            queue[tail] = g
            tail += 1
    m = gens.shape[0]
    while head < tail:
        w = queue[head]
        head += 1
        d = dist[w] + 1
        for k in range(m):
            if _parity(w & lams[k]):
                u = w ^ gens[k]
                if dist[u] == 0:
                    dist[u] = d
                    queue[tail] = u
                    tail += 1
    return dist


@njit(cache=True)
def _batch_universal_numba(gen_rows, n):
    b, m = gen_rows.shape
    size = 1 << (2 * n)
    mask = (1 << n) - 1
    out = np.zeros(b, dtype=np.bool_)
    seen = np.zeros(size, dtype=np.int64)
    queue = np.empty(size, dtype=np.int64)
    lams = np.empty(m, dtype=np.int64)
    for r in range(b):
        stamp = r + 1
        head = 0
        tail = 0
        for k in range(m):
            g = gen_rows[r, k]
            lams[k] = ((g >> n) & mask) | ((g & mask) << n)
            if g != 0 and seen[g] != stamp:
                seen[g] = stamp
                queue[tail] = g
                tail += 1
        while head < tail:
            w = queue[head]
            head += 1
            for k in range(m):
                if _parity(w & lams[k]):
                    u = w ^ gen_rows[r, k]
                    if seen[u] != stamp:
                        seen[u] = stamp
                        queue[tail] = u
                        tail += 1
        out[r] = tail == size - 1
    return out


# --------------------------------------------------------------------- numpy


def _parity_np(a: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(a) & 1).astype(bool)


def _closure_dist_numpy(gens: np.ndarray, lams: np.ndarray, n: int) -> np.ndarray:
    size = 1 << (2 * n)
    dist = np.zeros(size, dtype=DIST_DTYPE)
    seeds = np.unique(gens[gens != 0])
    dist[seeds] = 1
    frontier = seeds
    d = 1
    while frontier.size:
        d += 1
        found = []
        for g, lam in zip(gens, lams):
            hit = frontier[_parity_np(frontier & lam)] ^ g
            hit = hit[dist[hit] == 0]
            if hit.size:
                dist[hit] = d
                found.append(hit)
        frontier = np.unique(np.concatenate(found)) if found else np.empty(0, dtype=np.int64)
    return dist


def _batch_universal_numpy(gen_rows: np.ndarray, n: int) -> np.ndarray:
    b, m = gen_rows.shape
    size = 1 << (2 * n)
    lams = lambda_swap(gen_rows, n)
    reached = np.zeros((b, size), dtype=bool)
    rows = np.arange(b)
    for k in range(m):
        reached[rows, gen_rows[:, k]] = True
    reached[:, 0] = False
    vecs = np.arange(size, dtype=np.int64)
    while True:
        before = int(reached.sum())
        for k in range(m):
            lam = lams[:, k][:, None]
            active = reached & _parity_np(vecs[None, :] & lam)
            rr, cc = np.nonzero(active)
            reached[rr, cc ^ gen_rows[rr, k]] = True
        if int(reached.sum()) == before:
            break
    return reached[:, 1:].all(axis=1)


# ------------------------------------------------------------------- dispatch


def closure_dist(gens, n: int) -> np.ndarray:
    """Minimal nested-commutator length of every packed vector (0 = unreached)."""
    gens = np.asarray(gens, dtype=np.int64)
    lams = lambda_swap(gens, n)
    if _BACKEND == "numba":
        return _closure_dist_numba(gens, lams, n)
    return _closure_dist_numpy(gens, lams, n)


def batch_universal(gen_rows, n: int, chunk: int = 4096) -> np.ndarray:
    """Adjoint-universality verdict for each row of packed generator vectors."""
    gen_rows = np.ascontiguousarray(gen_rows, dtype=np.int64)
    if _BACKEND == "numba":
        return _batch_universal_numba(gen_rows, n)
    parts = [_batch_universal_numpy(gen_rows[i : i + chunk], n) for i in range(0, len(gen_rows), chunk)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=bool)
