import random

import pytest
from conftest import random_pauli

from minpauli.closure import closure
from minpauli.compiler import (
    CompileError,
    build_context,
    example1_context,
    example2_compiler,
    example3_context,
    flatten_commutator,
    load_compiled,
    pauli_compiler,
    reorder_commutator,
    replay,
    subsystem_compiler,
    vmap_sequence,
)
from minpauli.gensets import GeneratorSet, GensetError, example1_parts, prop1_set
from minpauli.pauli import SymplecticVector, nested_ad, parse_pauli, symp


def apply_ads(n, vecs, seq, start):
    """Apply ad-maps in F2 from the innermost element outwards; None on a zero step."""
    v = start
    for i in reversed(seq):
        if not symp(n, vecs[i], v):
            return None
        v ^= vecs[i]
    return v


@pytest.fixture(scope="module")
def ctx5():
    return example1_context(5)


class TestTables:
    def test_base_table(self, ctx5):
        assert len(ctx5.base_table) == 15
        assert ctx5.base_constant <= 5
        A = ctx5.A
        for v, seq in ctx5.base_table.items():
            assert nested_ad([A[i] for i in seq]).pauli.vector == v

    def test_pair_table_identity(self, ctx5):
        x1 = parse_pauli("XI").vector
        assert ctx5.pair_table[(x1, x1)] == ()

    def test_pair_table_all(self, ctx5):
        av = ctx5.A.vectors
        assert len(ctx5.pair_table) == 15 * 15
        for (v, vp), seq in ctx5.pair_table.items():
            assert apply_ads(2, av, seq, vp) == v

    def test_y1_from_x1(self, ctx5):
        seq = vmap_sequence(ctx5, parse_pauli("YI"), parse_pauli("XI"))
        assert seq and apply_ads(2, ctx5.A.vectors, seq, parse_pauli("XI").vector) == parse_pauli("YI").vector

    def test_vmap_identity_rejected(self, ctx5):
        with pytest.raises(CompileError):
            vmap_sequence(ctx5, 0, 1)

    def test_table_constant(self, ctx5):
        assert ctx5.table_constant == 8
        assert ctx5.length_bound == 8 * 3 + 8

    def test_bad_base(self):
        base, pairs = example1_parts(4)
        with pytest.raises(GensetError, match="not adjoint universal"):
            build_context(GeneratorSet(2, list(base)[:4]), pairs)


class TestReorder:
    def test_cases(self):
        n = 2
        v = lambda t: parse_pauli(t).vector
        a, b = v("XI"), v("ZI")
        # (a+b) commutes with d: d goes outermost
        assert reorder_commutator(a, b, v("ZX"), v("IZ"), n) == (v("IZ"), v("ZX"), a, b)
        # otherwise c goes outermost
        assert reorder_commutator(a, b, v("IZ"), v("ZX"), n) == (v("IZ"), v("ZX"), a, b)

    def test_random(self):
        rng = random.Random(8)
        hits = {0: 0, 1: 0}
        while sum(hits.values()) < 400:
            n = rng.randint(1, 4)
            a, b, c, d = (rng.randrange(1, 4**n) for _ in range(4))
            if not (symp(n, a, b) and symp(n, c, d) and symp(n, a ^ b, c ^ d)):
                with pytest.raises(CompileError):
                    reorder_commutator(a, b, c, d, n)
                continue
            p, q, r, s = reorder_commutator(a, b, c, d, n)
            hits[int(p == c)] += 1
            vecs = [p, q, r, s]
            assert apply_ads(n, vecs, [0, 1, 2], s) == a ^ b ^ c ^ d
        assert min(hits.values()) > 0


class TestFlatten:
    def test_random_sequences(self, ctx5):
        rng = random.Random(9)
        n, vecs = ctx5.n, ctx5.combined.vectors
        done = 0
        while done < 200:
            xs = [rng.randrange(len(vecs)) for _ in range(rng.randint(1, 5))]
            ys = [rng.randrange(len(vecs)) for _ in range(rng.randint(1, 5))]
            xv = apply_ads(n, vecs, xs[:-1], vecs[xs[-1]])
            yv = apply_ads(n, vecs, ys[:-1], vecs[ys[-1]])
            if xv is None or yv is None or not symp(n, xv, yv):
                continue
            out = flatten_commutator(n, xs, ys, vecs)
            assert len(out) == len(xs) + len(ys)
            assert apply_ads(n, vecs, out[:-1], vecs[out[-1]]) == xv ^ yv
            done += 1


class TestSubsystem:
    def test_single_component(self, ctx5):
        _, b = ctx5.B_pairs[3]
        assert subsystem_compiler(ctx5, b) == [ctx5.combined.vectors.index(ctx5.combined[5 + 3].vector)]

    @pytest.mark.parametrize("strategy", ["optimal", "first-fit"])
    def test_every_w(self, strategy):
        ctx = example1_context(5)
        n, m, vecs = ctx.n, ctx.m, ctx.combined.vectors
        worst = 0
        for w in range(1, 4**m):
            frag = subsystem_compiler(ctx, w, strategy=strategy)
            v = apply_ads(n, vecs, frag[1:][::-1], vecs[frag[0]])
            assert v is not None
            head_x, head_z = v & 3, (v >> n) & 3
            assert head_x | head_z
            tail = ((v & ((1 << n) - 1)) >> 2) | ((v >> (n + 2)) << m)
            assert tail == w
            worst = max(worst, len(frag))
        # measured: one above the 4(N-k) bound, see the ledger
        assert worst <= 4 * m + 1

    def test_optimal_never_longer(self):
        ctx = example1_context(5)
        for w in range(1, 4**3):
            assert len(subsystem_compiler(ctx, w)) <= len(subsystem_compiler(ctx, w, "first-fit"))

    def test_identity_rejected(self, ctx5):
        with pytest.raises(CompileError):
            subsystem_compiler(ctx5, 0)

    def test_first_fit_needs_fallback(self):
        # no base element pair anticommutes with I(x)Z over the Prop-1 base
        ctx = example1_context(4)
        assert ctx._pair_helper(parse_pauli("IZ").vector) is None
        assert ctx._pair_helper(parse_pauli("IX").vector) is not None
        for w in range(1, 4**2):
            subsystem_compiler(ctx, w, strategy="first-fit")
        assert ctx.helper_fallbacks > 0

    def test_unknown_strategy(self, ctx5):
        with pytest.raises(ValueError):
            subsystem_compiler(ctx5, 1, strategy="greedy")


class TestPauliCompiler:
    def test_generator(self, ctx5):
        g = ctx5.combined[7]
        assert pauli_compiler(ctx5, g).gens == (7,)

    def test_base_branch(self, ctx5):
        seq = pauli_compiler(ctx5, "ZIIII")
        assert seq.length == 1 and seq.gens == (1,)
        seq = pauli_compiler(ctx5, "YYIII")
        assert seq.length == len(ctx5.base_table[parse_pauli("YY").vector])

    @pytest.mark.parametrize("n", range(3, 9))
    def test_all_y(self, n):
        ctx = example1_context(n)
        seq = pauli_compiler(ctx, "Y" * n)
        assert seq.result.pauli.vector == parse_pauli("Y" * n).vector
        assert seq.length <= ctx.length_bound

    def test_all_branches_exhaustive_n4(self):
        ctx = example1_context(4)
        rep = closure(ctx.combined)
        for v in range(1, 4**4):
            p = SymplecticVector(4, v).to_pauli()
            seq = pauli_compiler(ctx, p)
            assert seq.result.magnitude_exp == seq.length - 1
            assert seq.result.pauli == (seq.target if seq.alpha_sign == 1 else seq.target.negate())
            assert rep.min_length(v) <= seq.length <= ctx.length_bound

    def test_identity_rejected(self, ctx5):
        with pytest.raises(CompileError):
            pauli_compiler(ctx5, "IIIII")

    def test_wrong_size(self, ctx5):
        with pytest.raises(CompileError):
            pauli_compiler(ctx5, parse_pauli("XX"))

    def test_hermitian_and_skew_inputs_agree(self, ctx5):
        a = pauli_compiler(ctx5, "XYZXY")
        b = pauli_compiler(ctx5, "-iXYZXY")
        assert a.gens == b.gens and a.alpha_sign == -b.alpha_sign

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_example3(self, k, rng):
        ctx = example3_context(k)
        for _ in range(100):
            seq = pauli_compiler(ctx, random_pauli(rng, 3 * k))
            assert seq.length <= ctx.length_bound

    def test_prop1_base_only(self):
        ctx = build_context(prop1_set(), [])
        assert pauli_compiler(ctx, "YY").length == 3


class TestExample2:
    def test_random(self, rng):
        for n in (3, 4, 6):
            comp = example2_compiler(n)
            rep = closure(comp.genset)
            for _ in range(50):
                p = random_pauli(rng, n)
                seq = comp.compile(p)
                assert seq.genset is comp.genset
                assert seq.length >= rep.min_length(p)

    def test_bad_rewrite(self):
        ctx = example1_context(3)
        from minpauli.compiler import RewritingCompiler
        from minpauli.gensets import example2_set

        with pytest.raises(CompileError):
            RewritingCompiler(ctx, example2_set(3), [[0]] * 7)


class TestSerialisation:
    def test_round_trip(self, ctx5):
        seq = pauli_compiler(ctx5, "XZYIX")
        back = load_compiled(seq.to_text())
        assert back.length == seq.length and back.alpha_sign == seq.alpha_sign
        assert back.result == seq.result

    def test_tampered_header(self, ctx5):
        text = pauli_compiler(ctx5, "XZYIX").to_text().replace("alpha_sign=", "alpha_sign=-")
        text = text.replace("alpha_sign=--", "alpha_sign=")
        with pytest.raises(CompileError):
            load_compiled(text)

    def test_wrong_target(self, ctx5):
        text = pauli_compiler(ctx5, "XZYIX").to_text().replace("target=+iXZYIX", "target=+iXZYIZ")
        with pytest.raises(CompileError):
            load_compiled(text)

    def test_missing_field(self):
        with pytest.raises(CompileError, match="missing"):
            load_compiled("n=2\n0 +iXI\n")

    def test_replay_rejects_zero(self):
        gs = prop1_set()
        with pytest.raises(CompileError, match="vanishes"):
            replay(gs, [0, 2], parse_pauli("XX"))
