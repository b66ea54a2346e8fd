"""Phase-exact Pauli strings and their symplectic F2 images.

A Pauli string on ``n`` qubits is kept in standard form ``i^phase X^x Z^z``
where ``x`` and ``z`` are Python ints used as bitsets (bit ``j`` is qubit
``j + 1``).  Python ints are arbitrary precision, so the same code serves
3 qubits and 3000 qubits.

The symplectic image of a string is the integer ``x | (z << n)``; the first
``n`` bits hold the X-part and the next ``n`` bits the Z-part.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

__all__ = [
    "PauliError",
    "PauliString",
    "ScaledPauli",
    "SymplecticVector",
    "ad_exact",
    "ad_symplectic",
    "as_skew",
    "commutes",
    "f_vector",
    "multiply",
    "nested_ad",
    "parse_pauli",
    "symp",
    "tensor",
    "to_text",
]

_PREFIX_PHASE = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PHASE_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_TEXT_RE = re.compile(r"^([+-]?i?)(.*)$")


class PauliError(ValueError):
    """Malformed Pauli text or incompatible operands."""


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise PauliError(f"qubit count must be positive, got {self.n}")
        if self.x >> self.n or self.z >> self.n or self.x < 0 or self.z < 0:
            raise PauliError("bit strings longer than the qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> PauliString:
        return parse_pauli(text, n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, skew: bool = False) -> PauliString:
        """Single-site Pauli ``letter`` on 1-based ``qubit``."""
        letters = ["I"] * n
        letters[qubit - 1] = letter
        p = parse_pauli("".join(letters), n)
        return p.times_i() if skew else p

    @property
    def vector(self) -> int:
        return self.x | (self.z << self.n)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    @property
    def is_skew_unit(self) -> bool:
        """True for members of +-i times a non-identity Hermitian string."""
        return not self.is_identity and (self.phase - self.y_count) % 2 == 1

    @property
    def is_hermitian(self) -> bool:
        return (self.phase - self.y_count) % 2 == 0

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def letters(self) -> str:
        out = []
        for j in range(self.n):
            xb = (self.x >> j) & 1
            zb = (self.z >> j) & 1
            out.append("IXZY"[xb | (zb << 1)])
        return "".join(out)

    def times_i(self, power: int = 1) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase + power)

    def negate(self) -> PauliString:
        return self.times_i(2)

    def same_operator_up_to_phase(self, other: PauliString) -> bool:
        return self.n == other.n and self.x == other.x and self.z == other.z

    def restrict(self, qubits: Sequence[int]) -> PauliString:
        """Keep only the listed 1-based qubits, in the given order.

        The Hermitian sign is carried over; only the Y-phases of dropped sites
        are discarded.
        """
        herm = (self.phase - self.y_count) % 4
        x = z = 0
        for new, old in enumerate(qubits):
            x |= ((self.x >> (old - 1)) & 1) << new
            z |= ((self.z >> (old - 1)) & 1) << new
        out_y = (x & z).bit_count()
        return PauliString(len(qubits), x, z, herm + out_y)

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class SymplecticVector:
    """Element of F2^{2n}: ``bits`` packs the X-part low, Z-part high."""

    n: int
    bits: int

    def __add__(self, other: SymplecticVector) -> SymplecticVector:
        _check_len(self.n, other.n)
        return SymplecticVector(self.n, self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def dot(self, other: SymplecticVector) -> int:
        """Symplectic form v^T Lambda w."""
        _check_len(self.n, other.n)
        return symp(self.n, self.bits, other.bits)

    def as_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(2 * self.n)]

    def hex(self) -> str:
        width = max(1, (2 * self.n + 3) // 4)
        return format(self.bits, f"0{width}x")

    def to_pauli(self) -> PauliString:
        """Hermitian representative with + sign."""
        mask = (1 << self.n) - 1
        x, z = self.bits & mask, self.bits >> self.n
        return PauliString(self.n, x, z, (x & z).bit_count())


@dataclass(frozen=True)
class ScaledPauli:
    """``2**magnitude_exp * pauli``, or zero when ``is_zero`` is set."""

    pauli: PauliString | None
    magnitude_exp: int = 0
    is_zero: bool = False

    @classmethod
    def zero(cls) -> ScaledPauli:
        return cls(None, 0, True)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{2 ** self.magnitude_exp}*({to_text(self.pauli)})"


def _check_len(n1: int, n2: int) -> None:
    if n1 != n2:
        raise PauliError(f"qubit-count mismatch: {n1} vs {n2}")


def parse_pauli(text: str, n: int | None = None) -> PauliString:
    """Parse ``[+|-|+i|-i]?[IXYZ]{n}``; leftmost letter is qubit 1.

    Whitespace between letters is ignored so ``"X I"`` reads as ``"XI"``.
    """
    raw = "".join(text.split())
    m = _TEXT_RE.match(raw)
    prefix, body = m.group(1), m.group(2)
    if prefix not in _PREFIX_PHASE:
        raise PauliError(f"bad phase prefix {prefix!r} in {text!r}")
    if n is None:
        n = len(body)
    if len(body) != n:
        raise PauliError(f"expected {n} Pauli letters, got {len(body)} in {text!r}")
    if n == 0:
        raise PauliError("empty Pauli string")
    x = z = 0
    for j, ch in enumerate(body):
        if ch == "X":
            x |= 1 << j
        elif ch == "Z":
            z |= 1 << j
        elif ch == "Y":
            x |= 1 << j
            z |= 1 << j
        elif ch != "I":
            raise PauliError(f"invalid character {ch!r} at position {len(prefix) + j + 1} in {text!r}")
    phase = _PREFIX_PHASE[prefix] + (x & z).bit_count()
    return PauliString(n, x, z, phase)


def to_text(p: PauliString) -> str:
    herm = (p.phase - p.y_count) % 4
    return _PHASE_PREFIX[herm] + p.letters()


def f_vector(p: PauliString) -> SymplecticVector:
    return SymplecticVector(p.n, p.vector)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    _check_len(p.n, q.n)
    lam = (p.z & q.x).bit_count() & 1
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, p.phase + q.phase + 2 * lam)


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_len(p.n, q.n)
    return (((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1) == 0


def symp(n: int, v: int, w: int) -> int:
    """Symplectic product of two packed vectors on ``n`` qubits."""
    mask = (1 << n) - 1
    return (((v & mask) & (w >> n)).bit_count() + ((v >> n) & (w & mask)).bit_count()) & 1


def ad_symplectic(v: SymplecticVector, w: SymplecticVector) -> SymplecticVector:
    _check_len(v.n, w.n)
    if symp(v.n, v.bits, w.bits):
        return SymplecticVector(v.n, v.bits ^ w.bits)
    return SymplecticVector(v.n, 0)


def _require_skew(*ps: PauliString) -> None:
    for p in ps:
        if not p.is_skew_unit:
            raise PauliError(f"{to_text(p)} is not a skew-Hermitian unit Pauli")


def ad_exact(p: PauliString, q: PauliString) -> ScaledPauli:
    """Exact commutator ``[p, q]``; equals ``2 p q`` when the pair anticommutes."""
    _check_len(p.n, q.n)
    _require_skew(p, q)
    if commutes(p, q):
        return ScaledPauli.zero()
    return ScaledPauli(multiply(p, q), 1)


def nested_ad(seq: Sequence[PauliString]) -> ScaledPauli:
    """``ad_{G1} ... ad_{G_{L-1}}(G_L)`` evaluated exactly."""
    if not seq:
        raise PauliError("empty commutator sequence")
    _require_skew(*seq)
    n = seq[0].n
    value = seq[-1]
    for g in reversed(seq[:-1]):
        _check_len(n, g.n)
        if commutes(g, value):
            return ScaledPauli.zero()
        value = multiply(g, value)
    return ScaledPauli(value, len(seq) - 1)


def tensor(*parts: PauliString) -> PauliString:
    """Tensor product, first factor on the lowest qubits."""
    n = x = z = phase = 0
    for p in parts:
        x |= p.x << n
        z |= p.z << n
        phase += p.phase
        n += p.n
    return PauliString(n, x, z, phase)


def as_skew(p: PauliString) -> PauliString:
    """Return ``p`` if it is skew-Hermitian, otherwise ``i * p``."""
    if p.is_identity:
        raise PauliError("identity has no skew-Hermitian unit form")
    return p if p.is_skew_unit else p.times_i()


def parse_many(texts: Iterable[str], n: int | None = None) -> list[PauliString]:
    return [parse_pauli(t, n) for t in texts]
