import math
import random

import numpy as np
import pytest
from conftest import dense, random_pauli

from minpauli.compiler import example1_context, example3_context, pauli_compiler, replay
from minpauli.gensets import prop1_set
from minpauli.numeric import (
    DenseCapExceeded,
    emit_circuit,
    exp_pauli,
    load_circuit,
    pauli_matrix,
    verify_bch,
    verify_circuit,
)
from minpauli.pauli import PauliError, commutes, multiply, parse_pauli


def test_pauli_matrix_basics():
    assert np.array_equal(pauli_matrix(parse_pauli("X")), [[0, 1], [1, 0]])
    assert np.allclose(pauli_matrix(parse_pauli("Y")), [[0, -1j], [1j, 0]])
    rng = random.Random(1)
    for _ in range(50):
        p = random_pauli(rng, rng.randint(1, 4))
        assert abs(np.trace(pauli_matrix(p))) < 1e-12
        assert np.allclose(pauli_matrix(p), dense(p))


def test_pauli_matrix_cap():
    with pytest.raises(DenseCapExceeded):
        pauli_matrix(parse_pauli("X" * 7))
    assert pauli_matrix(parse_pauli("X" * 7), cap=7).shape == (128, 128)


class TestExp:
    def test_zero(self):
        assert np.allclose(exp_pauli(parse_pauli("iXZ"), 0.0), np.eye(4))

    def test_half_pi(self):
        assert np.allclose(exp_pauli(parse_pauli("iX"), math.pi / 2), dense("iX"))

    def test_unitary(self):
        rng = random.Random(2)
        for _ in range(100):
            p = random_pauli(rng, rng.randint(1, 4), skew=True)
            u = exp_pauli(p, rng.uniform(-4, 4))
            assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < 1e-12

    def test_additive(self):
        rng = random.Random(3)
        for _ in range(50):
            p = random_pauli(rng, 3, skew=True)
            s, t = rng.uniform(-2, 2), rng.uniform(-2, 2)
            assert np.max(np.abs(exp_pauli(p, s) @ exp_pauli(p, t) - exp_pauli(p, s + t))) < 1e-12

    def test_rejects_hermitian(self):
        with pytest.raises(PauliError):
            exp_pauli(parse_pauli("X"), 0.1)


class TestBCH:
    def test_x_z(self):
        a, b = parse_pauli("iX"), parse_pauli("iZ")
        assert verify_bch(a, b, 0.37) < 1e-10
        lhs = exp_pauli(a, math.pi / 4) @ exp_pauli(b, 0.37) @ exp_pauli(a, -math.pi / 4)
        # [iX, iZ]/2 = +iY by dense evaluation
        assert np.max(np.abs(lhs - exp_pauli(parse_pauli("iY"), 0.37))) < 1e-10

    def test_zero_angle(self):
        assert verify_bch(parse_pauli("iX"), parse_pauli("iZ"), 0.0) < 1e-15

    def test_commuting_rejected(self):
        with pytest.raises(PauliError):
            verify_bch(parse_pauli("iXI"), parse_pauli("iIX"), 0.1)

    def test_random_pairs(self):
        rng = random.Random(4)
        done = 0
        while done < 100:
            n = rng.randint(1, 4)
            a, b = random_pauli(rng, n, skew=True), random_pauli(rng, n, skew=True)
            if commutes(a, b):
                continue
            assert verify_bch(a, b, rng.uniform(-3, 3)) < 1e-10
            done += 1


class TestCircuits:
    def test_single_generator(self):
        gs = prop1_set()
        c = emit_circuit(replay(gs, [2], gs[2]), 0.4)
        assert len(c.steps) == 1 and c.steps[0][1] == 0.4
        assert verify_circuit(c) == 0.0

    def test_three_palindrome(self):
        gs = prop1_set()
        seq = replay(gs, [0, 2, 4], parse_pauli("YY"))
        c = emit_circuit(seq, 0.3)
        angles = [a for _, a in c.steps]
        assert len(angles) == 5
        assert angles[:2] == [math.pi / 4] * 2 and angles[3:] == [-math.pi / 4] * 2
        assert [p for p, _ in c.steps[:2]] == [p for p, _ in c.steps[3:]][::-1]
        assert verify_circuit(c) < 1e-12

    @pytest.mark.parametrize("theta", [0.1, math.pi / 8, 1.0])
    def test_example1_random(self, theta):
        ctx = example1_context(3)
        rng = random.Random(5)
        for _ in range(20):
            seq = pauli_compiler(ctx, random_pauli(rng, 3))
            assert verify_circuit(emit_circuit(seq, theta)) < 1e-9

    def test_example3_k1(self):
        ctx = example3_context(1)
        rng = random.Random(6)
        for _ in range(20):
            seq = pauli_compiler(ctx, random_pauli(rng, 3, skew=True))
            assert verify_circuit(emit_circuit(seq, 0.7)) < 1e-9

    def test_negative_alpha(self):
        ctx = example1_context(3)
        seqs = [pauli_compiler(ctx, s) for s in ("XYZ", "-iXYZ")]
        assert {s.alpha_sign for s in seqs} == {1, -1}
        for s in seqs:
            assert verify_circuit(emit_circuit(s, 0.9)) < 1e-9

    def test_tampered_sequence(self):
        ctx = example1_context(3)
        seq = pauli_compiler(ctx, "XYZ")
        bad = type(seq)(seq.genset, seq.gens, seq.target, seq.result, -seq.alpha_sign)
        with pytest.raises(ValueError):
            emit_circuit(bad, 0.2)

    def test_serialisation(self, tmp_path):
        ctx = example1_context(3)
        seq = pauli_compiler(ctx, "ZYX")
        c = emit_circuit(seq, 1 / 3)
        text = c.to_text()
        first = text.splitlines()[0].split()
        assert len(first) == 2 and float(first[1]) == math.pi / 4
        back = load_circuit(text, c.target, c.theta)
        assert back == c
        c.save(tmp_path / "c.txt")
        assert (tmp_path / "c.txt").read_text() == text

    def test_load_bad_line(self):
        with pytest.raises(ValueError, match="line 1"):
            load_circuit("+iXII\n", parse_pauli("XII"), 0.1)


def test_ad_exact_dense():
    # commutator of dense matrices equals twice the product for anticommuting units
    a, b = parse_pauli("iXZ"), parse_pauli("iZZ")
    ma, mb = pauli_matrix(a), pauli_matrix(b)
    assert np.allclose(ma @ mb - mb @ ma, 2 * pauli_matrix(multiply(a, b)))
