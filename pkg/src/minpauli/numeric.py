"""Dense-matrix ground truth and the conjugation-trick rotation circuits.

Qubit 1 is the leftmost Kronecker factor, matching the text form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .compiler import CompiledSequence, replay
from .pauli import PauliError, PauliString, as_skew, commutes, parse_pauli, to_text

__all__ = [
    "DEFAULT_DENSE_CAP",
    "DenseCapExceeded",
    "RotationCircuit",
    "emit_circuit",
    "exp_pauli",
    "load_circuit",
    "pauli_matrix",
    "verify_bch",
    "verify_circuit",
]

DEFAULT_DENSE_CAP = 6

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_XZ = _X @ _Z
_SITE = {(0, 0): _I2, (1, 0): _X, (0, 1): _Z, (1, 1): _XZ}


class DenseCapExceeded(RuntimeError):
    pass


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise DenseCapExceeded(f"dense evaluation on {n} qubits exceeds cap {cap}")


def pauli_matrix(p: PauliString, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    _check_cap(p.n, cap)
    factors = [_SITE[((p.x >> j) & 1, (p.z >> j) & 1)] for j in range(p.n)]
    return (1j**p.phase) * reduce(np.kron, factors)


def exp_pauli(p: PauliString, t: float, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """``e^{tP}`` for a skew-Hermitian unit P, via cos(t) I + sin(t) P."""
    if not p.is_skew_unit:
        raise PauliError(f"{to_text(p)} is not a skew-Hermitian unit Pauli")
    m = pauli_matrix(p, cap)
    return math.cos(t) * np.eye(m.shape[0], dtype=complex) + math.sin(t) * m


def verify_bch(a: PauliString, b: PauliString, t: float, cap: int = DEFAULT_DENSE_CAP) -> float:
    """Max deviation between e^{pi/4 A} e^{tB} e^{-pi/4 A} and e^{(t/2)[A,B]}."""
    if commutes(a, b):
        raise PauliError("verify_bch needs an anticommuting pair")
    # [A, B] / 2 = A B for anticommuting units
    lhs = exp_pauli(a, math.pi / 4, cap) @ exp_pauli(b, t, cap) @ exp_pauli(a, -math.pi / 4, cap)
    rhs = exp_pauli(a * b, t, cap)
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class RotationCircuit:
    steps: tuple[tuple[PauliString, float], ...]
    target: PauliString
    theta: float

    def to_text(self) -> str:
        lines = [f"{to_text(p)} {angle:.17g}" for p, angle in self.steps]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")


def emit_circuit(seq: CompiledSequence, theta: float) -> RotationCircuit:
    """Palindromic circuit realising e^{theta * target} from a compiled sequence."""
    # re-derive rather than trust the stored fields
    checked = replay(seq.genset, seq.gens, seq.target)
    if checked.alpha_sign != seq.alpha_sign or checked.result != seq.result:
        raise ValueError("compiled sequence does not replay to its recorded result")
    gens = seq.paulis()
    quarter = math.pi / 4
    head = [(g, quarter) for g in gens[:-1]]
    tail = [(g, -quarter) for g in reversed(gens[:-1])]
    steps = head + [(gens[-1], seq.alpha_sign * theta)] + tail
    return RotationCircuit(tuple(steps), seq.target, theta)


def verify_circuit(c: RotationCircuit, cap: int = DEFAULT_DENSE_CAP) -> float:
    _check_cap(c.target.n, cap)
    u = reduce(np.matmul, (exp_pauli(p, a, cap) for p, a in c.steps))
    ref = exp_pauli(as_skew(c.target), c.theta, cap)
    return float(np.max(np.abs(u - ref)))


def load_circuit(text: str, target: PauliString, theta: float) -> RotationCircuit:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            ptxt, atxt = line.split()
            steps.append((parse_pauli(ptxt, target.n), float(atxt)))
        except (ValueError, PauliError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return RotationCircuit(tuple(steps), target, theta)
