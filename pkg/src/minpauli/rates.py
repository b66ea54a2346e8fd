"""Coverage-versus-length curves and maximal minimal lengths per family."""

from __future__ import annotations

import csv
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .closure import DEFAULT_CLOSURE_CAP, closure
from .gensets import GeneratorSet, builtin_genset

__all__ = [
    "FAMILIES",
    "RateCurve",
    "coverage_curve",
    "family",
    "fit_residuals",
    "loglog_slope",
    "max_length_curve",
    "write_coverage_csv",
    "write_lmax_csv",
]

FAMILIES = ("example1", "example2", "example3", "standard")


@dataclass(frozen=True)
class RateCurve:
    label: str
    n: int
    points: tuple[tuple[int, float], ...]

    @property
    def final_fraction(self) -> float:
        return self.points[-1][1] if self.points else 0.0

    @property
    def max_length(self) -> int:
        return self.points[-1][0] if self.points else 0

    def is_monotone(self) -> bool:
        fr = [f for _, f in self.points]
        return all(a <= b for a, b in zip(fr, fr[1:]))


def coverage_curve(gs: GeneratorSet, cap: int = DEFAULT_CLOSURE_CAP, label: str | None = None) -> RateCurve:
    rep = closure(gs, cap=cap)
    hist = rep.histogram()
    total = 4**gs.n - 1
    cum = np.cumsum(hist)
    pts = tuple((int(L), float(cum[L]) / total) for L in range(1, len(hist)))
    return RateCurve(label or gs.label, gs.n, pts)


def family(name: str) -> Callable[[int], GeneratorSet]:
    """Constructor by qubit count; example3 is only defined when 3 divides N."""
    name = name.lower()
    if name not in FAMILIES and name != "prop1":
        raise ValueError(f"unknown family {name!r}")

    def build(n: int) -> GeneratorSet:
        return builtin_genset(name, n)

    build.__name__ = name
    return build


def _defined(name: str, n: int) -> bool:
    if name == "example3":
        return n % 3 == 0
    if name == "prop1":
        return n == 2
    return n >= (2 if name == "standard" else 3)


def max_length_curve(
    fam: str | Callable[[int], GeneratorSet],
    ns: Iterable[int],
    cap: int = DEFAULT_CLOSURE_CAP,
) -> list[tuple[int, int]]:
    """``(N, Lmax)`` per N, skipping N where the family has no member."""
    name = fam if isinstance(fam, str) else getattr(fam, "__name__", "")
    ctor = family(fam) if isinstance(fam, str) else fam
    out = []
    for n in ns:
        if name in FAMILIES and not _defined(name, n):
            continue
        out.append((n, closure(ctor(n), cap=cap).max_length))
    return out


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def fit_residuals(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Sum of squared residuals of the linear and quadratic least-squares fits."""
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    out = []
    for deg in (1, 2):
        coef = np.polyfit(xs, ys, deg)
        out.append(float(np.sum((np.polyval(coef, xs) - ys) ** 2)))
    return out[0], out[1]


def write_coverage_csv(curves: Iterable[RateCurve], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "N", "length", "fraction"])
        for c in curves:
            for L, f in c.points:
                w.writerow([c.label, c.n, L, repr(f)])


def write_lmax_csv(rows: Iterable[tuple[str, int, int]], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "N", "Lmax"])
        for label, n, lmax in rows:
            w.writerow([label, n, lmax])
