"""Clifford tableaux for circuits built from H, S and CZ.

A tableau stores the images of the basis Paulis X_1..X_n, Z_1..Z_n under
``P -> C P C^dagger`` for the circuit unitary ``C``.  Images are full
PauliStrings, so phases are tracked exactly and conjugating any string is a
product of images.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, multiply

__all__ = [
    "CZ",
    "CliffordTableau",
    "Gate",
    "H",
    "S",
    "apply_gate",
    "build_T",
    "compose",
    "conjugate_pauli",
    "identity_tableau",
    "is_symplectic",
    "period",
    "power",
]


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]


def H(i: int) -> Gate:
    return Gate("H", (i,))


def S(i: int) -> Gate:
    return Gate("S", (i,))


def CZ(i: int, j: int) -> Gate:
    return Gate("CZ", (i, j))


@dataclass(frozen=True)
class CliffordTableau:
    n: int
    images: tuple[PauliString, ...]  # X_1..X_n then Z_1..Z_n

    @property
    def m(self) -> np.ndarray:
        """2n x 2n binary matrix; column j is the f-vector of image j."""
        n2 = 2 * self.n
        out = np.zeros((n2, n2), dtype=np.uint8)
        for col, img in enumerate(self.images):
            v = img.vector
            for row in range(n2):
                out[row, col] = (v >> row) & 1
        return out

    @property
    def s(self) -> np.ndarray:
        """Sign bit of each basis image (1 means the image carries a minus)."""
        return np.array([((p.phase - p.y_count) % 4) // 2 for p in self.images], dtype=np.uint8)

    def is_identity_action(self) -> bool:
        ident = identity_tableau(self.n)
        return self.images == ident.images

    def __matmul__(self, other: CliffordTableau) -> CliffordTableau:
        return compose(self, other)


def identity_tableau(n: int) -> CliffordTableau:
    if n < 1:
        raise ValueError("qubit count must be >= 1")
    xs = tuple(PauliString(n, 1 << j, 0, 0) for j in range(n))
    zs = tuple(PauliString(n, 0, 1 << j, 0) for j in range(n))
    return CliffordTableau(n, xs + zs)


def conjugate_pauli(t: CliffordTableau, p: PauliString) -> PauliString:
    """Image of ``p`` under the tableau's conjugation action, phase exact."""
    if p.n != t.n:
        raise ValueError(f"qubit-count mismatch: tableau {t.n}, Pauli {p.n}")
    out = PauliString(t.n, 0, 0, p.phase)
    # X^x Z^z: all X factors first, then the Z factors
    for j in range(t.n):
        if (p.x >> j) & 1:
            out = multiply(out, t.images[j])
    for j in range(t.n):
        if (p.z >> j) & 1:
            out = multiply(out, t.images[t.n + j])
    return out


def compose(a: CliffordTableau, b: CliffordTableau) -> CliffordTableau:
    """Tableau of the unitary product ``a b`` (``b`` acts first)."""
    if a.n != b.n:
        raise ValueError("qubit-count mismatch")
    return CliffordTableau(a.n, tuple(conjugate_pauli(a, img) for img in b.images))


def _gate_tableau(n: int, gate: Gate) -> CliffordTableau:
    for q in gate.qubits:
        if not 1 <= q <= n:
            raise ValueError(f"qubit index {q} out of range 1..{n}")
    imgs = list(identity_tableau(n).images)
    if gate.name == "H":
        j = gate.qubits[0] - 1
        imgs[j], imgs[n + j] = imgs[n + j], imgs[j]
    elif gate.name == "S":
        j = gate.qubits[0] - 1
        # X -> Y = i X Z
        imgs[j] = PauliString(n, 1 << j, 1 << j, 1)
    elif gate.name == "CZ":
        i, j = (q - 1 for q in gate.qubits)
        if i == j:
            raise ValueError("CZ needs two distinct qubits")
        imgs[i] = PauliString(n, 1 << i, 1 << j, 0)
        imgs[j] = PauliString(n, 1 << j, 1 << i, 0)
    else:
        raise ValueError(f"unknown gate {gate.name}")
    return CliffordTableau(n, tuple(imgs))


def apply_gate(t: CliffordTableau, gate: Gate) -> CliffordTableau:
    """Append ``gate`` after the circuit represented by ``t``."""
    return compose(_gate_tableau(t.n, gate), t)


def power(t: CliffordTableau, e: int) -> CliffordTableau:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    result = identity_tableau(t.n)
    base = t
    while e:
        if e & 1:
            result = compose(base, result)
        base = compose(base, base)
        e >>= 1
    return result


def period(t: CliffordTableau, cap: int = 10**6) -> int:
    """Smallest p >= 1 whose power acts as the identity on Paulis."""
    cur = t
    for p in range(1, cap + 1):
        if cur.is_identity_action():
            return p
        cur = compose(t, cur)
    raise RuntimeError(f"no period found below cap {cap}")


def build_T(nq: int) -> CliffordTableau:
    """Tableau of prod_i H_i S_i prod_i CZ_{i,i+1}; the CZ layer acts first."""
    t = identity_tableau(nq)
    for i in range(1, nq):
        t = apply_gate(t, CZ(i, i + 1))
    for i in range(1, nq + 1):
        t = apply_gate(t, S(i))
        t = apply_gate(t, H(i))
    return t


def is_symplectic(t: CliffordTableau) -> bool:
    n = t.n
    m = t.m.astype(np.int64)
    lam = np.zeros((2 * n, 2 * n), dtype=np.int64)
    lam[:n, n:] = np.eye(n, dtype=np.int64)
    lam[n:, :n] = np.eye(n, dtype=np.int64)
    return bool(np.array_equal((m.T @ lam @ m) % 2, lam))
