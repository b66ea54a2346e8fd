"""Generating sets of Pauli strings and the product construction.

Qubit indices in this module are 1-based.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .clifford import build_T, conjugate_pauli, period, power
from .f2 import f2_rank
from .pauli import PauliError, PauliString, parse_pauli, tensor, to_text

__all__ = [
    "GeneratorSet",
    "GensetError",
    "builtin_genset",
    "example1_parts",
    "example1_set",
    "example2_set",
    "example3_index_set",
    "example3_parts",
    "example3_set",
    "load_genset",
    "pad",
    "prop1_set",
    "save_genset",
    "split_theorem1",
    "standard_set",
    "theorem1_combine",
]


class GensetError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    gens: tuple[PauliString, ...]
    label: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        seen: dict[int, int] = {}
        for idx, g in enumerate(self.gens):
            if g.n != self.n:
                raise GensetError(f"generator {idx} acts on {g.n} qubits, expected {self.n}")
            if not g.is_skew_unit:
                raise GensetError(f"generator {idx} ({to_text(g)}) is not a skew-Hermitian unit Pauli")
            if g.vector in seen:
                raise GensetError(f"generators {seen[g.vector]} and {idx} are equal up to phase")
            seen[g.vector] = idx

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __getitem__(self, i: int) -> PauliString:
        return self.gens[i]

    @property
    def vectors(self) -> list[int]:
        return [g.vector for g in self.gens]

    def texts(self) -> list[str]:
        return [to_text(g) for g in self.gens]


def _skew(text: str, n: int) -> PauliString:
    return parse_pauli(text, n).times_i()


def _letters(n: int, sites: dict[int, str]) -> str:
    out = ["I"] * n
    for q, ch in sites.items():
        out[q - 1] = ch
    return "".join(out)


def pad(p: PauliString, n: int) -> PauliString:
    """Extend ``p`` with identities up to ``n`` qubits."""
    if n < p.n:
        raise GensetError("cannot pad to fewer qubits")
    if n == p.n:
        return p
    return tensor(p, PauliString.identity(n - p.n))


def prop1_set() -> GeneratorSet:
    texts = ["XI", "ZI", "IX", "IZ", "ZZ"]
    return GeneratorSet(2, [_skew(t, 2) for t in texts], "prop1")


def _y_chain(n: int, i: int, head: str, tail: str) -> str:
    sites = {2: head, i: tail}
    for j in range(3, i):
        sites[j] = "Y"
    return _letters(n, sites)


def example1_parts(n: int) -> tuple[GeneratorSet, list[tuple[PauliString, PauliString]]]:
    """Base set on 2 qubits and the (U_B, B) pairs of the Y-chain construction."""
    if n < 3:
        raise GensetError("example 1 needs N >= 3")
    base = prop1_set()
    pairs = []
    for i in range(3, n + 1):
        for head, tail in (("X", "Z"), ("Z", "X")):
            full = _y_chain(n, i, head, tail)
            pairs.append((parse_pauli(full[:2]), parse_pauli(full[2:]).times_i()))
    return base, pairs


def example1_set(n: int) -> GeneratorSet:
    base, pairs = example1_parts(n)
    out = theorem1_combine(base, pairs, check=False)
    return GeneratorSet(n, out.gens, f"example1(N={n})")


def example2_set(n: int) -> GeneratorSet:
    if n < 3:
        raise GensetError("example 2 needs N >= 3")
    gens = [pad(g, n) for g in prop1_set()]
    for i in range(2, n):
        gens.append(_skew(_letters(n, {i: "X", i + 1: "Z"}), n))
        gens.append(_skew(_letters(n, {i: "Z", i + 1: "X"}), n))
    return GeneratorSet(n, gens, f"example2(N={n})")


def standard_set(n: int) -> GeneratorSet:
    if n < 2:
        raise GensetError("standard set needs N >= 2")
    gens = []
    for i in range(1, n + 1):
        gens.append(_skew(_letters(n, {i: "X"}), n))
        gens.append(_skew(_letters(n, {i: "Z"}), n))
    for i in range(1, n):
        gens.append(_skew(_letters(n, {i: "Z", i + 1: "Z"}), n))
    return GeneratorSet(n, gens, f"standard(N={n})")


def example3_index_set(k: int) -> list[int]:
    """The exponent list {-1} + {4j, 4j+1, 4j+2, -4j-2, -4j-3, -4j-4}_j."""
    out = [-1]
    for j in range(k):
        out += [4 * j, 4 * j + 1, 4 * j + 2, -4 * j - 2, -4 * j - 3, -4 * j - 4]
    return out


def example3_set(k: int) -> GeneratorSet:
    """Conjugates of iZ_1 by powers of the H S CZ brickwork, every 4th site removed.

    The string for exponent l is T^{-l} Z_1 T^{l}; negative l wraps modulo
    the period of T.
    """
    if k < 1:
        raise GensetError("example 3 needs k >= 1")
    nq = 4 * k - 1
    t = build_T(nq)
    p = period(t)
    keep = [q for q in range(1, nq + 1) if q % 4 != 0]
    iz1 = PauliString.single(nq, 1, "Z", skew=True)
    gens = []
    for ell in example3_index_set(k):
        # conjugation by T^{-l}, i.e. by T^{(p - l) mod p}
        o = conjugate_pauli(power(t, (-ell) % p), iz1)
        gens.append(o.restrict(keep))
    return GeneratorSet(3 * k, gens, f"example3(k={k})")


def split_theorem1(gs: GeneratorSet, k: int) -> tuple[GeneratorSet, list[tuple[PauliString, PauliString]]]:
    """Split a set into generators on the first ``k`` qubits and (U_B, B) pairs.

    Generators acting trivially on qubits k+1..N form the base set; the rest
    are factored as ``U_B (x) B``.  The U_B factor is returned Hermitian and
    the skew phase is carried by ``B``.
    """
    n = gs.n
    if not 1 <= k <= n:
        raise GensetError(f"split point {k} outside 1..{n}")
    lo = list(range(1, k + 1))
    hi = list(range(k + 1, n + 1))
    base, pairs = [], []
    for g in gs:
        if k == n or g.restrict(hi).is_identity:
            base.append(g.restrict(lo))
        else:
            u = g.restrict(lo)
            u = PauliString(k, u.x, u.z, u.y_count)
            b = g.restrict(hi)
            # restore the skew phase lost by dropping U's sign
            diff = (g.phase - tensor(u, b).phase) % 4
            pairs.append((u, b.times_i(diff)))
    if not base:
        raise GensetError("no generator is supported on the first k qubits")
    return GeneratorSet(k, base, f"{gs.label}[1..{k}]"), pairs


def theorem1_combine(
    base: GeneratorSet,
    pairs: Sequence[tuple[PauliString, PauliString]],
    check: bool = True,
) -> GeneratorSet:
    """``{A (x) I} + {U_B (x) B}``; verifies the construction's hypotheses by default."""
    k = base.n
    if k < 2:
        raise GensetError("base set must act on at least 2 qubits")
    if not pairs:
        raise GensetError("no (U_B, B) pairs given")
    m = pairs[0][1].n
    for idx, (u, b) in enumerate(pairs):
        if u.n != k:
            raise GensetError(f"pair {idx}: U_B acts on {u.n} qubits, expected {k}")
        if b.n != m:
            raise GensetError(f"pair {idx}: B acts on {b.n} qubits, expected {m}")
        if u.is_identity:
            raise GensetError(f"pair {idx}: U_B is the identity")
        if b.is_identity:
            raise GensetError(f"pair {idx}: B is the identity")
    if check:
        rank = f2_rank(b.vector for _, b in pairs)
        if rank != 2 * m:
            raise GensetError(f"B components are not product universal: F2 rank {rank} < {2 * m}")
        from .closure import closure

        if not closure(base).adjoint_universal:
            raise GensetError("base set is not adjoint universal")
    n = k + m
    gens = [pad(a, n) for a in base]
    gens += [tensor(u, b) for u, b in pairs]
    return GeneratorSet(n, gens, f"product({base.label}, {len(pairs)} pairs)")


def builtin_genset(name: str, n: int | None = None, k: int | None = None) -> GeneratorSet:
    name = name.lower()
    if name == "prop1":
        return prop1_set()
    if name == "example3":
        if k is None:
            if n is None or n % 3:
                raise GensetError("example3 needs --k, or --n divisible by 3")
            k = n // 3
        return example3_set(k)
    if n is None:
        raise GensetError(f"builtin set {name!r} needs a qubit count")
    try:
        ctor = {"example1": example1_set, "example2": example2_set, "standard": standard_set}[name]
    except KeyError:
        raise GensetError(f"unknown builtin set {name!r}") from None
    return ctor(n)


def example3_parts(k: int) -> tuple[GeneratorSet, list[tuple[PauliString, PauliString]]]:
    return split_theorem1(example3_set(k), 3)


def save_genset(gs: GeneratorSet, path) -> None:
    lines = [f"# {gs.label}", f"n={gs.n}"] + gs.texts()
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_genset(path, label: str | None = None) -> GeneratorSet:
    n = None
    gens: list[PauliString] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise GensetError(f"line {lineno}: expected 'n=<N>' header, got {line!r}")
            try:
                n = int(line[2:])
            except ValueError:
                raise GensetError(f"line {lineno}: bad qubit count {line[2:]!r}") from None
            continue
        try:
            p = parse_pauli(line, n)
        except PauliError as exc:
            raise GensetError(f"line {lineno}: {exc}") from None
        if p.vector in seen:
            raise GensetError(f"line {lineno}: duplicates generator on line {seen[p.vector]}")
        seen[p.vector] = lineno
        if not p.is_skew_unit:
            p = p.times_i()
        gens.append(p)
    if n is None:
        raise GensetError("missing 'n=<N>' header")
    if not gens:
        raise GensetError("no generators in file")
    return GeneratorSet(n, gens, label or Path(path).stem)
