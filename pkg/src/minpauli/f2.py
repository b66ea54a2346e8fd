"""Linear algebra over F2 on int bitsets."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

__all__ = ["DependentBasisError", "F2Basis", "f2_decompose", "f2_independent", "f2_rank"]


class DependentBasisError(ValueError):
    pass


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


def f2_rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        v = int(v)
        while v:
            b = _lowbit(v)
            if b not in pivots:
                pivots[b] = v
                break
            v ^= pivots[b]
    return len(pivots)


def f2_independent(vectors: Iterable[int]) -> list[int]:
    """Indices of a maximal independent subset, greedy in input order."""
    pivots: dict[int, int] = {}
    keep = []
    for idx, v in enumerate(vectors):
        v = int(v)
        while v:
            b = _lowbit(v)
            if b not in pivots:
                pivots[b] = v
                keep.append(idx)
                break
            v ^= pivots[b]
    return keep


class F2Basis:
    """Echelon form of independent vectors, reusable across many decompositions.

    Rows are kept in insertion order; each row is reduced against the pivots
    of earlier rows and pivots on its lowest set bit.
    """

    def __init__(self, vectors: Sequence[int]):
        self.vectors = [int(v) for v in vectors]
        self._rows: list[tuple[int, int, int]] = []  # (pivot bit, reduced vector, index mask)
        pivot_of: dict[int, int] = {}
        for idx, v in enumerate(self.vectors):
            red, combo = v, 1 << idx
            for pb, rv, rc in self._rows:
                if (red >> pb) & 1:
                    red ^= rv
                    combo ^= rc
            if red == 0:
                raise DependentBasisError(f"vector {idx} is dependent on earlier vectors")
            pb = _lowbit(red)
            pivot_of[pb] = len(self._rows)
            self._rows.append((pb, red, combo))

    def __len__(self) -> int:
        return len(self.vectors)

    def decompose(self, target: int) -> list[int] | None:
        """Sorted indices whose vectors XOR to ``target``; None if outside span."""
        combo = 0
        t = int(target)
        for pb, rv, rc in self._rows:
            if (t >> pb) & 1:
                t ^= rv
                combo ^= rc
        if t:
            return None
        out = []
        while combo:
            b = _lowbit(combo)
            out.append(b)
            combo &= combo - 1
        return out


def f2_decompose(target: int, basis: Sequence[int]) -> list[int] | None:
    return F2Basis(basis).decompose(target)
