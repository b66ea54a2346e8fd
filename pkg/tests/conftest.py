"""Shared oracles and strategies.

The dense oracle builds matrices from the *text* of a Pauli string with the
textbook single-qubit matrices, independently of the bitset representation.
"""

from __future__ import annotations

import random
from functools import reduce

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from minpauli.pauli import PauliString, to_text

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PREFIX = {"": 1, "+": 1, "-": -1, "+i": 1j, "i": 1j, "-i": -1j}


def dense(p: PauliString | str) -> np.ndarray:
    text = to_text(p) if isinstance(p, PauliString) else p
    body = text.lstrip("+-i")
    coef = PREFIX[text[: len(text) - len(body)]]
    return coef * reduce(np.kron, [MATS[c] for c in body])


def random_pauli(rng: random.Random, n: int, skew: bool | None = None, nonidentity: bool = True) -> PauliString:
    while True:
        x, z = rng.getrandbits(n), rng.getrandbits(n)
        if nonidentity and not (x or z):
            continue
        p = PauliString(n, x, z, rng.randrange(4))
        if skew is True and not p.is_skew_unit or skew is False and p.is_skew_unit:
            p = p.times_i()
        return p


@st.composite
def paulis(draw, n=None, max_n=4, skew=False, nonidentity=False):
    n = n or draw(st.integers(1, max_n))
    x = draw(st.integers(0, 2**n - 1))
    z = draw(st.integers(0, 2**n - 1))
    if nonidentity and not (x or z):
        x = 1
    p = PauliString(n, x, z, draw(st.integers(0, 3)))
    if skew and (p.is_identity or not p.is_skew_unit):
        if p.is_identity:
            p = PauliString(n, 1, 0, 1)
        else:
            p = p.times_i()
    return p


@pytest.fixture
def rng():
    return random.Random(20240517)
