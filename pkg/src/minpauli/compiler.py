"""Compile Pauli strings into nested commutators of a product-construction set.

Sequences are written outermost first: ``(G1, ..., GL)`` stands for
``ad_{G1} ... ad_{G_{L-1}}(G_L)``.  The subsystem routine builds its
fragment seed first and the caller reverses it.

All bookkeeping runs on packed f-vectors (Python ints).  Exact phases are
recovered at the end by replaying the sequence with :func:`nested_ad`.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import reduce
from operator import xor

import numpy as np

from .closure import closure
from .f2 import F2Basis, f2_independent
from .gensets import (
    GeneratorSet,
    example1_parts,
    example2_set,
    example3_parts,
    theorem1_combine,
)
from .pauli import (
    PauliError,
    PauliString,
    ScaledPauli,
    as_skew,
    nested_ad,
    parse_pauli,
    symp,
    to_text,
)

__all__ = [
    "CompileError",
    "CompiledSequence",
    "CompilerContext",
    "RewritingCompiler",
    "build_context",
    "example1_context",
    "example2_compiler",
    "example3_context",
    "flatten_commutator",
    "load_compiled",
    "pauli_compiler",
    "reorder_commutator",
    "replay",
    "subsystem_compiler",
    "vmap_sequence",
]


class CompileError(RuntimeError):
    pass


_INF = 1 << 40


def _split(v: int, n: int, k: int) -> tuple[int, int]:
    """Packed N-qubit vector -> (first k qubits, last N-k qubits)."""
    mk = (1 << k) - 1
    x, z = v & ((1 << n) - 1), v >> n
    head = (x & mk) | ((z & mk) << k)
    tail = (x >> k) | ((z >> k) << (n - k))
    return head, tail


def _join(head: int, tail: int, k: int, m: int) -> int:
    mk = (1 << k) - 1
    x = (head & mk) | ((tail & ((1 << m) - 1)) << k)
    z = (head >> k) | ((tail >> m) << k)
    return x | (z << (k + m))


@dataclass
class CompilerContext:
    A: GeneratorSet
    B_pairs: list[tuple[PauliString, PauliString]]
    k: int
    combined: GeneratorSet
    base_table: dict[int, tuple[int, ...]]
    pair_table: dict[tuple[int, int], tuple[int, ...]]
    helper_fallbacks: int = 0
    _b_basis: F2Basis = field(default=None, repr=False)
    _b_index: list[int] = field(default_factory=list, repr=False)
    _vecs: list[int] = field(default_factory=list, repr=False)
    _a_vecs: list[int] = field(default_factory=list, repr=False)
    _u_vecs: list[int] = field(default_factory=list, repr=False)
    _helper2: dict = field(default_factory=dict, repr=False)
    _helper1: dict = field(default_factory=dict, repr=False)
    _dist: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.combined.n

    @property
    def m(self) -> int:
        return self.n - self.k

    @property
    def base_constant(self) -> int:
        return max(len(s) for s in self.base_table.values())

    @property
    def pair_constant(self) -> int:
        return max(len(s) for s in self.pair_table.values())

    @property
    def table_constant(self) -> int:
        """Realised constant s: the longest stored table sequence."""
        return max(self.base_constant, self.pair_constant)

    @property
    def length_bound(self) -> int:
        return 8 * self.m + self.table_constant

    # -- helper choices, memoised per (U, current head) -------------------------

    def _pair_helper(self, u: int) -> tuple[int, int] | None:
        if u not in self._helper2:
            k, av = self.k, self._a_vecs
            found = None
            for i1, a1 in enumerate(av):
                if not symp(k, a1, u):
                    continue
                for i2 in range(i1 + 1, len(av)):
                    a2 = av[i2]
                    if symp(k, a2, u) and not symp(k, a1, a2):
                        found = (i1, i2)
                        break
                if found:
                    break
            self._helper2[u] = found
        return self._helper2[u]

    def _single_helper(self, u: int, c: int) -> int | None:
        key = (u, c)
        if key not in self._helper1:
            k = self.k
            found = None
            for i, a in enumerate(self._a_vecs):
                if symp(k, a, c) and symp(k, a, u) and a != u ^ c:
                    found = i
                    break
            self._helper1[key] = found
        return self._helper1[key]

    def _fallback_path(self, u: int, c: int, parity: int) -> list[int]:
        """Shortest A-path from head ``c`` to a head c' != u with symp(u, c') == parity."""
        key = ("path", u, c, parity)
        if key not in self._helper1:
            k, av = self.k, self._a_vecs
            prev = {c: None}
            q = deque([c])
            goal = None
            while q:
                w = q.popleft()
                if w != c and w != u and symp(k, u, w) == parity:
                    goal = w
                    break
                for i, a in enumerate(av):
                    if symp(k, a, w):
                        nxt = w ^ a
                        if nxt not in prev:
                            prev[nxt] = (w, i)
                            q.append(nxt)
            if goal is None:
                raise CompileError(f"no helper path for U={u:x}, head={c:x}")
            path = []
            w = goal
            while prev[w] is not None:
                w, i = prev[w]
                path.append(i)
            self._helper1[key] = path[::-1]  # application order
        return self._helper1[key]


def _bfs_pair_table(k: int, a_vecs: Sequence[int]) -> dict[tuple[int, int], tuple[int, ...]]:
    nodes = range(1, 4**k)
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    for src in nodes:
        prev: dict[int, tuple[int, int] | None] = {src: None}
        q = deque([src])
        while q:
            w = q.popleft()
            for i, a in enumerate(a_vecs):
                if symp(k, a, w):
                    nxt = w ^ a
                    if nxt not in prev:
                        prev[nxt] = (w, i)
                        q.append(nxt)
        for dst in prev:
            path = []
            w = dst
            while prev[w] is not None:
                w, i = prev[w]
                path.append(i)
            # path collected from the last-applied step backwards: outermost first
            table[(dst, src)] = tuple(path)
    return table


def build_context(A: GeneratorSet, B_pairs, check: bool = True) -> CompilerContext:
    """Tables and precomputed bases for compiling against ``A' + B'``."""
    k = A.n
    combined = theorem1_combine(A, B_pairs, check=check) if B_pairs else A
    rep = closure(A)
    if not rep.adjoint_universal:
        raise CompileError("base set is not adjoint universal")
    base_table = {v: tuple(rep.sequence_to(v)) for v in range(1, 4**k)}
    a_vecs = A.vectors
    pair_table = _bfs_pair_table(k, a_vecs)
    if len(pair_table) != (4**k - 1) ** 2:
        raise CompileError("conjugation graph is not strongly connected")
    # independent B components, first-come order
    b_vecs = [b.vector for _, b in B_pairs]
    chosen = f2_independent(b_vecs)
    kept = [b_vecs[i] for i in chosen]
    if len(kept) != 2 * (combined.n - k):
        raise CompileError("B components are not product universal")
    ctx = CompilerContext(
        A=A,
        B_pairs=list(B_pairs),
        k=k,
        combined=combined,
        base_table=base_table,
        pair_table=pair_table,
        _b_basis=F2Basis(kept),
        _b_index=[len(A) + i for i in chosen],
        _vecs=combined.vectors,
        _a_vecs=a_vecs,
        _u_vecs=[u.vector for u, _ in B_pairs],
    )
    return ctx


def vmap_sequence(ctx: CompilerContext, V: PauliString | int, Vp: PauliString | int) -> list[int]:
    """A-indices (outermost first) whose nested ads carry ``Vp`` to ``V``."""
    v = V.vector if isinstance(V, PauliString) else V
    vp = Vp.vector if isinstance(Vp, PauliString) else Vp
    if v == 0 or vp == 0:
        raise CompileError("vmap endpoints must be non-identity")
    return list(ctx.pair_table[(v, vp)])


def reorder_commutator(a: int, b: int, c: int, d: int, n: int) -> tuple[int, int, int, int]:
    """Order (p, q, r, s) with ad_p ad_q ad_r (s) proportional to [[a, b], [c, d]]."""
    if not (symp(n, a, b) and symp(n, c, d) and symp(n, a ^ b, c ^ d)):
        raise CompileError("outer commutator is zero")
    if symp(n, a ^ b, d) == 0:
        return (d, c, a, b)
    return (c, d, a, b)


def flatten_commutator(n: int, xseq: Sequence[int], yseq: Sequence[int], vecs: Sequence[int]) -> list[int]:
    """Nested sequence proportional to ``[X, Y]`` for nested sequences X, Y.

    Peels the outermost element of Y one at a time with the four-term
    reordering rule; each step either folds the element into X or keeps it
    as an outer ad.
    """
    xs = deque(xseq)
    xval = reduce(xor, (vecs[i] for i in xseq), 0)
    suffix = [0] * (len(yseq) + 1)
    for i in range(len(yseq) - 1, -1, -1):
        suffix[i] = suffix[i + 1] ^ vecs[yseq[i]]
    if not symp(n, xval, suffix[0]):
        raise CompileError("commutator of the two sequences is zero")
    outer = []
    for i in range(len(yseq) - 1):
        c = yseq[i]
        if symp(n, xval, suffix[i + 1]) == 0:
            xs.appendleft(c)
            xval ^= vecs[c]
        else:
            outer.append(c)
    xs.appendleft(yseq[-1])
    return outer + list(xs)


def _head_distances(ctx: CompilerContext) -> np.ndarray:
    if ctx._dist is None:
        size = 4**ctx.k
        d = np.full((size, size), _INF, dtype=np.int64)
        for (dst, src), path in ctx.pair_table.items():
            d[src, dst] = len(path)
        ctx._dist = d
    return ctx._dist


def _factors(ctx: CompilerContext, w: int) -> list[int]:
    picks = ctx._b_basis.decompose(w)
    if picks is None:  # pragma: no cover - basis spans F2^{2m}
        raise CompileError("target outside the span of the B components")
    return [ctx._b_index[i] for i in picks]


def _fragment_optimal(ctx: CompilerContext, factors: list[int]) -> list[int]:
    """Fewest helper insertions for a fixed factor order (min-plus DP over heads)."""
    k, m = ctx.k, ctx.m
    size = 4**k
    na = len(ctx.A)
    dist = _head_distances(ctx)
    heads = np.arange(size)
    # the B-side parity each factor sees is fixed by the factors after it
    tails = [_split(ctx._vecs[g], ctx.n, k)[1] for g in factors]
    cost = np.full(size, _INF, dtype=np.int64)
    u_last = ctx._u_vecs[factors[-1] - na]
    cost[u_last] = 0
    back = []
    tail_cur = tails[-1]
    for i in range(len(factors) - 2, -1, -1):
        u = ctx._u_vecs[factors[i] - na]
        par = 1 ^ symp(m, tails[i], tail_cur)
        ok = np.array([c != u and c != 0 and symp(k, u, c) == par for c in range(size)])
        # total[c, c'] = cost[c] + dist(c -> c')
        total = cost[:, None] + dist
        src = np.argmin(total, axis=0)
        best = total[src, heads]
        best[~ok] = _INF
        new = np.full(size, _INF, dtype=np.int64)
        arrive = heads ^ u
        new[arrive] = best
        back.append((u, src))
        cost = new
        tail_cur ^= tails[i]
    # walk back from the cheapest final head
    c = int(np.argmin(cost))
    steps = []
    for u, src in reversed(back):
        cp = c ^ u
        prev = int(src[cp])
        steps.append((prev, cp))
        c = prev
    steps.reverse()
    seq = [factors[-1]]
    for (prev, cp), g in zip(steps, reversed(factors[:-1])):
        seq += list(reversed(ctx.pair_table[(cp, prev)]))
        seq.append(g)
    return seq


def _fragment_first_fit(ctx: CompilerContext, factors: list[int]) -> list[int]:
    k, n, m = ctx.k, ctx.n, ctx.m
    vecs = ctx._vecs
    na = len(ctx.A)
    seq = [factors[-1]]
    cur = vecs[factors[-1]]
    i = len(factors) - 2
    while i >= 0:
        g = factors[i]
        u = ctx._u_vecs[g - na]
        c = _split(cur, n, k)[0]
        par = 1 ^ symp(n, vecs[g] ^ _join(u, 0, k, m), cur)
        if u ^ c == 0:
            pair = ctx._pair_helper(u)
            if pair is None:
                ctx.helper_fallbacks += 1
                path = ctx._fallback_path(u, c, par)
            else:
                path = list(pair)
        elif not symp(n, vecs[g], cur):
            a = ctx._single_helper(u, c)
            if a is None:
                ctx.helper_fallbacks += 1
                path = ctx._fallback_path(u, c, par)
            else:
                path = [a]
        else:
            seq.append(g)
            cur ^= vecs[g]
            i -= 1
            continue
        for a in path:
            seq.append(a)
            cur ^= vecs[a]
    return seq


def subsystem_compiler(ctx: CompilerContext, W: PauliString | int, strategy: str = "optimal") -> list[int]:
    """Seed-first fragment (G1..G|G|) with ad_{G|G|}..ad_{G2}(G1) ~ V' (x) W.

    ``strategy="first-fit"`` inserts helpers by the first-fit rule (with a BFS
    fallback when no base element fits); ``"optimal"`` picks the helper
    paths that minimise the total for the same factor order.
    """
    w = W.vector if isinstance(W, PauliString) else W
    if w == 0:
        raise CompileError("subsystem target must be non-identity")
    factors = _factors(ctx, w)
    if strategy == "optimal":
        return _fragment_optimal(ctx, factors)
    if strategy == "first-fit":
        return _fragment_first_fit(ctx, factors)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class CompiledSequence:
    genset: GeneratorSet
    gens: tuple[int, ...]
    target: PauliString
    result: ScaledPauli
    alpha_sign: int

    @property
    def length(self) -> int:
        return len(self.gens)

    L = length

    def paulis(self) -> list[PauliString]:
        return [self.genset[i] for i in self.gens]

    def to_text(self) -> str:
        lines = [
            f"target={to_text(self.target)}",
            f"n={self.genset.n}",
            f"L={self.length}",
            f"alpha_sign={self.alpha_sign}",
        ]
        lines += [f"{i} {to_text(self.genset[i])}" for i in self.gens]
        return "\n".join(lines) + "\n"


def replay(genset: GeneratorSet, gens: Sequence[int], target: PauliString) -> CompiledSequence:
    """Evaluate a sequence exactly and relate it to ``target``."""
    target = as_skew(target)
    res = nested_ad([genset[i] for i in gens])
    if res.is_zero:
        raise CompileError("nested commutator vanishes")
    if res.pauli.vector != target.vector:
        raise CompileError(f"sequence yields {to_text(res.pauli)}, not {to_text(target)}")
    sign = 1 if res.pauli.phase == target.phase else -1
    return CompiledSequence(genset, tuple(gens), target, res, sign)


def load_compiled(text: str) -> CompiledSequence:
    """Parse the text written by :meth:`CompiledSequence.to_text` and re-verify it."""
    header: dict[str, str] = {}
    idxs: list[int] = []
    gens: dict[int, PauliString] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
            header[key.strip()] = val.strip()
            continue
        try:
            idx_s, ptxt = line.split()
            idx = int(idx_s)
            p = parse_pauli(ptxt, int(header["n"]))
        except (ValueError, KeyError, PauliError) as exc:
            raise CompileError(f"line {lineno}: {exc}") from None
        if idx in gens and gens[idx] != p:
            raise CompileError(f"line {lineno}: index {idx} reused for a different Pauli")
        gens[idx] = p
        idxs.append(idx)
    for key in ("target", "n", "L", "alpha_sign"):
        if key not in header:
            raise CompileError(f"missing header field {key!r}")
    n = int(header["n"])
    order = sorted(gens)
    local = {g: j for j, g in enumerate(order)}
    gs = GeneratorSet(n, [gens[g] for g in order], "file")
    seq = replay(gs, [local[i] for i in idxs], parse_pauli(header["target"], n))
    if seq.length != int(header["L"]) or seq.alpha_sign != int(header["alpha_sign"]):
        raise CompileError("header does not match the replayed sequence")
    return seq


def _compile_indices(ctx: CompilerContext, target: PauliString) -> list[int]:
    k, n = ctx.k, ctx.n
    v, w = _split(target.vector, n, k)
    if w == 0:
        return list(ctx.base_table[v])
    if v != 0:
        frag = subsystem_compiler(ctx, w)
        vprime = _split(reduce(xor, (ctx._vecs[g] for g in frag)), n, k)[0]
        return vmap_sequence(ctx, v, vprime) + frag[::-1]
    # V = I: split W into an anticommuting pair W1, W2 with W1 W2 ~ W
    m = ctx.m
    mask = (1 << m) - 1
    wx, wz = w & mask, w >> m
    site = ((wx | wz) & -(wx | wz)).bit_length() - 1
    bit = 1 << site
    # W1: single-site Pauli anticommuting with W at its first non-identity site
    w1 = (bit << m) if (wx & bit) else bit
    w2 = w1 ^ w
    frag1 = subsystem_compiler(ctx, w1)
    frag2 = subsystem_compiler(ctx, w2)
    vecs = ctx._vecs
    v1 = _split(reduce(xor, (vecs[g] for g in frag1)), n, k)[0]
    v2 = _split(reduce(xor, (vecs[g] for g in frag2)), n, k)[0]
    xseq = frag1[::-1]
    yseq = vmap_sequence(ctx, v1, v2) + frag2[::-1]
    return flatten_commutator(n, xseq, yseq, vecs)


def pauli_compiler(ctx: CompilerContext, P: PauliString | str) -> CompiledSequence:
    """Compile ``P`` (any non-identity Pauli; Hermitian input is read as iP)."""
    if isinstance(P, str):
        P = parse_pauli(P, ctx.n)
    if P.n != ctx.n:
        raise CompileError(f"target acts on {P.n} qubits, context on {ctx.n}")
    if P.is_identity:
        raise CompileError("identity target")
    return replay(ctx.combined, _compile_indices(ctx, P), P)


def example1_context(n: int) -> CompilerContext:
    return build_context(*example1_parts(n))


def example3_context(k: int) -> CompilerContext:
    base, pairs = example3_parts(k)
    return build_context(base, pairs)


class RewritingCompiler:
    """Compile for a set whose members generate a product-construction set.

    ``rewrites[j]`` is a nested sequence over ``genset`` proportional to
    generator ``j`` of ``ctx.combined``.  Compiled sequences are expanded and
    re-flattened into a single nested sequence over ``genset``.
    """

    def __init__(self, ctx: CompilerContext, genset: GeneratorSet, rewrites: Sequence[Sequence[int]]):
        if len(rewrites) != len(ctx.combined):
            raise CompileError("need one rewrite per generator")
        for j, seq in enumerate(rewrites):
            res = nested_ad([genset[i] for i in seq])
            if res.is_zero or res.pauli.vector != ctx.combined[j].vector:
                raise CompileError(f"rewrite {j} does not produce generator {j}")
        self.ctx = ctx
        self.genset = genset
        self.rewrites = [list(s) for s in rewrites]

    @property
    def n(self) -> int:
        return self.genset.n

    def compile(self, P: PauliString | str) -> CompiledSequence:
        if isinstance(P, str):
            P = parse_pauli(P, self.n)
        if P.is_identity:
            raise CompileError("identity target")
        outer = _compile_indices(self.ctx, P)
        vecs = self.genset.vectors
        z = list(self.rewrites[outer[-1]])
        for j in reversed(outer[:-1]):
            z = flatten_commutator(self.n, z, self.rewrites[j], vecs)
        return replay(self.genset, z, P)


def example2_compiler(n: int) -> RewritingCompiler:
    """Nearest-neighbour set compiled through its Y-chain rewriting."""
    ctx = example1_context(n)
    gs = example2_set(n)
    rewrites: list[list[int]] = [[j] for j in range(5)]
    for i in range(3, n + 1):
        # X_2 Y..Y Z_i ~ ad_{X2Z3} ... ad_{X_{i-2}Z_{i-1}} (X_{i-1} Z_i), likewise for Z/X
        rewrites.append([5 + 2 * (j - 2) for j in range(2, i)])
        rewrites.append([5 + 2 * (j - 2) + 1 for j in range(2, i)])
    return RewritingCompiler(ctx, gs, rewrites)
