import random

import pytest

from minpauli.f2 import (
    DependentBasisError,
    F2Basis,
    f2_decompose,
    f2_independent,
    f2_rank,
)
from minpauli.pauli import parse_pauli


def vec(t):
    return parse_pauli(t).vector


def test_rank_single_qubit_basis():
    n = 5
    vs = []
    for j in range(n):
        vs.append(1 << j)
        vs.append(1 << (n + j))
    assert f2_rank(vs) == 2 * n


def test_rank_duplicates_and_empty():
    assert f2_rank([7, 7]) == 1
    assert f2_rank([]) == 0


def test_decompose_examples():
    basis = [vec("X"), vec("Z")]
    assert f2_decompose(basis[0], basis) == [0]
    assert f2_decompose(vec("Y"), basis) == [0, 1]
    assert f2_decompose(1, []) is None
    assert f2_decompose(0, []) == []


def test_dependent_rejected():
    with pytest.raises(DependentBasisError):
        F2Basis([3, 5, 6])


def test_random_decompositions():
    rng = random.Random(3)
    for _ in range(200):
        dim = rng.randint(1, 20)
        vs = [rng.getrandbits(dim) for _ in range(dim)]
        keep = [vs[i] for i in f2_independent(vs)]
        assert f2_rank(keep) == len(keep) == f2_rank(vs)
        b = F2Basis(keep)
        t = 0
        for i in rng.sample(range(len(keep)), rng.randint(0, len(keep))):
            t ^= keep[i]
        idx = b.decompose(t)
        acc = 0
        for i in idx:
            acc ^= keep[i]
        assert acc == t and idx == sorted(idx)
