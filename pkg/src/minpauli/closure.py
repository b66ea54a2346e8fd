"""Nested-commutator closure over F2^{2N} and minimality checks.

Working with f-vectors is lossless for universality questions: a nested
commutator of skew-Hermitian Pauli strings is either zero or a nonzero real
multiple of a skew-Hermitian Pauli string, and which one it is depends only
on the f-vectors involved.
"""

from __future__ import annotations

import io
import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .f2 import f2_rank
from .gensets import GeneratorSet
from .pauli import PauliString, SymplecticVector, symp

__all__ = [
    "DEFAULT_CLOSURE_CAP",
    "LENGTH_CONVENTION",
    "CapExceeded",
    "ClosureReport",
    "MinimalityReport",
    "PropertyVerdict",
    "bfs_sequence",
    "closure",
    "exhaustive_minimality_check",
    "is_product_universal",
    "theorem2_property_checks",
]

DEFAULT_CLOSURE_CAP = 13
LENGTH_CONVENTION = "length = number of generators in the nested sequence, seed included"


class CapExceeded(RuntimeError):
    pass


@dataclass
class ClosureReport:
    n: int
    dist: np.ndarray = field(repr=False)  # dist[v] = min_length, 0 if unreached
    gen_vectors: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.dist))

    @property
    def adjoint_universal(self) -> bool:
        return self.size == 4**self.n - 1

    @property
    def product_universal(self) -> bool:
        return f2_rank(self.gen_vectors) == 2 * self.n

    @property
    def max_length(self) -> int:
        return int(self.dist.max()) if self.dist.size else 0

    def min_length(self, v: int | SymplecticVector | PauliString) -> int:
        """Minimal sequence length for ``v``; 0 when unreachable."""
        if isinstance(v, PauliString):
            v = v.vector
        elif isinstance(v, SymplecticVector):
            v = v.bits
        return int(self.dist[v])

    @property
    def reached(self) -> dict[int, int]:
        idx = np.flatnonzero(self.dist)
        return dict(zip(idx.tolist(), self.dist[idx].tolist()))

    def histogram(self) -> np.ndarray:
        """``h[L]`` = number of vectors with minimal length exactly L."""
        return np.bincount(self.dist[self.dist > 0], minlength=self.max_length + 1)

    def sequence_to(self, v: int) -> list[int] | None:
        """Minimal generator-index sequence (G1..GL) reaching ``v``.

        At every layer the lowest generator index with a valid predecessor is
        taken, so the result depends only on ``dist``.
        """
        d = int(self.dist[v])
        if d == 0:
            return None
        seq = []
        gens = self.gen_vectors
        while d > 1:
            for idx, g in enumerate(gens):
                if symp(self.n, g, v) and self.dist[v ^ g] == d - 1:
                    seq.append(idx)
                    v ^= g
                    d -= 1
                    break
            else:  # pragma: no cover - dist is a BFS layering
                raise AssertionError("broken BFS layering")
        seq.append(gens.index(v))
        return seq

    def to_csv(self, fh=None) -> str:
        width = max(1, (2 * self.n + 3) // 4)
        out = fh if fh is not None else io.StringIO()
        out.write("vector_hex,min_length\n")
        idx = np.flatnonzero(self.dist)
        for v, d in zip(idx.tolist(), self.dist[idx].tolist()):
            out.write(f"{v:0{width}x},{d}\n")
        return out.getvalue() if fh is None else ""


def closure(gs: GeneratorSet | Sequence[int], n: int | None = None, cap: int = DEFAULT_CLOSURE_CAP) -> ClosureReport:
    """Breadth-first closure of the generators under ad-maps."""
    if isinstance(gs, GeneratorSet):
        n = gs.n
        vecs = gs.vectors
    else:
        vecs = [int(v) for v in gs]
        if n is None:
            raise ValueError("qubit count required for raw vectors")
    if not vecs:
        raise ValueError("empty generating set")
    if n > cap:
        raise CapExceeded(f"closure on {n} qubits exceeds cap {cap}")
    dist = _kernels.closure_dist(np.array(vecs, dtype=np.int64), n)
    return ClosureReport(n, dist, tuple(vecs))


def is_product_universal(gs: GeneratorSet) -> bool:
    return f2_rank(gs.vectors) == 2 * gs.n


def bfs_sequence(gs: GeneratorSet, target: PauliString, report: ClosureReport | None = None) -> list[int] | None:
    """Shortest index sequence whose nested commutator is proportional to ``target``."""
    if target.n != gs.n:
        raise ValueError(f"qubit-count mismatch: set {gs.n}, target {target.n}")
    if target.is_identity:
        return None
    if report is None:
        report = closure(gs)
    return report.sequence_to(target.vector)


@dataclass
class MinimalityReport:
    n: int
    mode: str
    checked: int
    counterexamples: list[tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def summary(self) -> str:
        bad = len(self.counterexamples)
        return f"N={self.n} {self.mode}: {self.checked - bad}/{self.checked} subsets non-universal"


def exhaustive_minimality_check(
    n: int,
    budget: int = 100_000,
    exhaustive: bool | None = None,
    seed: int = 0,
    batch: int = 20_000,
) -> MinimalityReport:
    """Check that no 2N-subset of nonzero F2^{2N} vectors is adjoint universal.

    N=2 enumerates all subsets.  Larger N samples ``budget`` random subsets
    unless ``exhaustive`` is forced.
    """
    size = 4**n - 1
    m = 2 * n
    if exhaustive is None:
        exhaustive = n == 2
    bad: list[tuple[int, ...]] = []
    checked = 0
    if exhaustive:
        it = itertools.combinations(range(1, size + 1), m)
        while True:
            rows = np.array(list(itertools.islice(it, batch)), dtype=np.int64)
            if rows.size == 0:
                break
            verdict = _kernels.batch_universal(rows, n)
            bad += [tuple(r) for r in rows[verdict].tolist()]
            checked += len(rows)
        expected = math.comb(size, m)
        assert checked == expected
        return MinimalityReport(n, "exhaustive", checked, bad)
    rng = np.random.default_rng(seed)
    while checked < budget:
        cnt = min(batch, budget - checked)
        # distinct nonzero vectors per row: argsort of random keys
        keys = rng.random((cnt, size))
        rows = np.argpartition(keys, m, axis=1)[:, :m].astype(np.int64) + 1
        rows.sort(axis=1)
        verdict = _kernels.batch_universal(rows, n)
        bad += [tuple(r) for r in rows[verdict].tolist()]
        checked += cnt
    return MinimalityReport(n, f"random(seed={seed})", checked, bad)


@dataclass
class PropertyVerdict:
    case: str  # "all-anticommuting" or "commuting-pair"
    checked: int
    violations: list[int]

    @property
    def ok(self) -> bool:
        return not self.violations


def theorem2_property_checks(basis: Sequence[PauliString]) -> PropertyVerdict:
    """Check the unreachable vectors predicted for a 2N-element basis.

    All pairs anticommuting: every sum of three distinct basis vectors is
    missing from the closure.  Some commuting pair: the sum of that pair is
    missing.
    """
    if not basis:
        raise ValueError("empty basis")
    n = basis[0].n
    vecs = [p.vector for p in basis]
    if len(vecs) != 2 * n or f2_rank(vecs) != 2 * n:
        raise ValueError("input is not a basis of F2^{2N} under f")
    rep = closure(vecs, n)
    violations = []
    checked = 0
    commuting = [(a, b) for a, b in itertools.combinations(vecs, 2) if not symp(n, a, b)]
    if not commuting:
        for a, b, c in itertools.combinations(vecs, 3):
            checked += 1
            if rep.dist[a ^ b ^ c]:
                violations.append(a ^ b ^ c)
        return PropertyVerdict("all-anticommuting", checked, violations)
    for a, b in commuting:
        checked += 1
        if rep.dist[a ^ b]:
            violations.append(a ^ b)
    return PropertyVerdict("commuting-pair", checked, violations)
