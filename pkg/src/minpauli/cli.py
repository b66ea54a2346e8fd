"""Command-line entry point: ``minpauli <subcommand> ...``.

Exit codes: 0 ok, 2 usage error, 3 verification failure, 4 cap exceeded.
"""

from __future__ import annotations

import functools
import math
import sys
from pathlib import Path

import click

from .closure import (
    DEFAULT_CLOSURE_CAP,
    CapExceeded,
    bfs_sequence,
    exhaustive_minimality_check,
)
from .closure import closure as run_closure
from .compiler import (
    CompiledSequence,
    CompileError,
    RewritingCompiler,
    _compile_indices,
    build_context,
    example1_context,
    example2_compiler,
    example3_context,
    load_compiled,
    pauli_compiler,
    replay,
)
from .gensets import (
    GeneratorSet,
    GensetError,
    builtin_genset,
    load_genset,
    prop1_set,
    split_theorem1,
)
from .numeric import DEFAULT_DENSE_CAP, DenseCapExceeded, emit_circuit, verify_circuit
from .pauli import PauliError, parse_pauli, to_text
from .rates import (
    FAMILIES,
    coverage_curve,
    family,
    max_length_curve,
    write_coverage_csv,
    write_lmax_csv,
)

EXIT_VERIFY = 3
EXIT_CAP = 4
CIRCUIT_TOL = 1e-9
BUILTINS = ("prop1", "example1", "example2", "example3", "standard")


class CapError(click.ClickException):
    exit_code = EXIT_CAP


class VerifyError(click.ClickException):
    exit_code = EXIT_VERIFY


def _set_threads(threads: int | None) -> None:
    if not threads:
        return
    try:
        import numba

        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    except ImportError:  # pragma: no cover
        pass


def genset_options(fn):
    @click.option("--genset", "genset", default="prop1", show_default=True,
                  help=f"Builtin name ({'|'.join(BUILTINS)}) or path to a generator file.")
    @click.option("--n", "n", type=click.IntRange(min=1), default=None, help="Qubit count for builtin families.")
    @click.option("--k", "k", type=click.IntRange(min=1), default=None, help="Block count for example3.")
    @click.option("--cap-n", type=click.IntRange(min=1), default=DEFAULT_CLOSURE_CAP, show_default=True,
                  help="Largest N for which the closure is enumerated.")
    @click.option("--threads", type=click.IntRange(min=1), default=None, help="Thread count for compiled kernels.")
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        _set_threads(kwargs.get("threads"))
        return fn(*args, **kwargs)

    return wrapper


def _load(genset: str, n, k) -> GeneratorSet:
    try:
        if genset.lower() in BUILTINS:
            return builtin_genset(genset, n, k)
        path = Path(genset)
        if not path.exists():
            raise click.UsageError(f"{genset!r} is neither a builtin set nor an existing file")
        gs = load_genset(path)
        if n is not None and n != gs.n:
            raise click.UsageError(f"--n {n} disagrees with the file's n={gs.n}")
        return gs
    except GensetError as exc:
        raise click.UsageError(str(exc)) from None


def _target(text: str | None, n: int):
    if text is None:
        raise click.UsageError("--target is required")
    try:
        p = parse_pauli(text, n)
    except PauliError as exc:
        raise click.UsageError(f"bad target: {exc}") from None
    if p.is_identity:
        raise click.UsageError("target is the identity")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Minimal Pauli generating sets: closure checks, compilation and verification."""


@main.command()
@genset_options
def check(genset, n, k, cap_n, threads):
    """Universality report for a generating set."""
    gs = _load(genset, n, k)
    try:
        rep = run_closure(gs, cap=cap_n)
    except CapExceeded as exc:
        raise CapError(str(exc)) from None
    size, bound = len(gs), 2 * gs.n + 1
    rel = "=" if size == bound else (">" if size > bound else "<")
    click.echo(f"adjoint_universal: {str(rep.adjoint_universal).lower()}, size {size} {rel} 2·{gs.n}+1")
    click.echo(f"product_universal: {str(rep.product_universal).lower()}")
    click.echo(f"closure_size: {rep.size} / {4**gs.n - 1}")
    click.echo(f"max_min_length: {rep.max_length}")


def _compiler_for(gs: GeneratorSet, genset: str, n, k, split):
    name = genset.lower()
    if name == "example1":
        ctx = example1_context(gs.n)
        return lambda p: pauli_compiler(ctx, p)
    if name == "example2":
        rc: RewritingCompiler = example2_compiler(gs.n)
        return rc.compile
    if name == "example3":
        ctx = example3_context(gs.n // 3)
        return lambda p: pauli_compiler(ctx, p)
    if name == "prop1":
        ctx = build_context(prop1_set(), [])
        return lambda p: pauli_compiler(ctx, p)
    if split is None:
        raise click.UsageError(f"{genset} is not a known product construction; pass --split K")
    try:
        base, pairs = split_theorem1(gs, split)
        ctx = build_context(base, pairs)
    except (GensetError, CompileError) as exc:
        raise click.UsageError(f"cannot build a compiler context: {exc}") from None
    # translate context indices back to the file's own order and phases
    pos = {v: i for i, v in enumerate(gs.vectors)}
    remap = [pos[v] for v in ctx.combined.vectors]
    return lambda p: replay(gs, [remap[i] for i in _compile_indices(ctx, p)], p)


def _dense_check(seq: CompiledSequence, theta: float, dense_cap: int) -> str:
    circ = emit_circuit(seq, theta)
    text = circ.to_text()
    if seq.genset.n <= dense_cap:
        dev = verify_circuit(circ, dense_cap)
        if dev >= CIRCUIT_TOL:
            raise VerifyError(f"circuit deviation {dev:.3e} exceeds {CIRCUIT_TOL}")
        click.echo(f"circuit deviation: {dev:.3e}", err=True)
    return text


@main.command("compile")
@genset_options
@click.option("--target", default=None, help="Pauli string to compile, e.g. IIZ or -iXYZ.")
@click.option("--theta", type=float, default=None, help="Also emit the rotation circuit for e^{theta P}.")
@click.option("--out", default=None, help="Sequence file (stdout when omitted).")
@click.option("--split", type=click.IntRange(min=2), default=None, help="Base size for file sets.")
@click.option("--dense-cap", type=click.IntRange(min=1, max=10), default=DEFAULT_DENSE_CAP, show_default=True)
def compile_cmd(genset, n, k, cap_n, threads, target, theta, out, split, dense_cap):
    """Compile a target into a nested-commutator sequence."""
    gs = _load(genset, n, k)
    p = _target(target, gs.n)
    comp = _compiler_for(gs, genset, n, k, split)
    try:
        seq = comp(p)
    except CompileError as exc:
        raise VerifyError(str(exc)) from None
    _emit(seq.to_text(), out)
    if theta is not None:
        text = _dense_check(seq, theta, dense_cap)
        _emit(text, f"{out}.circuit" if out else None)


@main.command()
@genset_options
@click.option("--target", default=None, help="Pauli string to reach.")
@click.option("--out", default=None)
def oracle(genset, n, k, cap_n, threads, target, out):
    """Shortest sequence by breadth-first search."""
    gs = _load(genset, n, k)
    p = _target(target, gs.n)
    try:
        rep = run_closure(gs, cap=cap_n)
    except CapExceeded as exc:
        raise CapError(str(exc)) from None
    idx = bfs_sequence(gs, p, rep)
    if idx is None:
        raise VerifyError(f"{to_text(p)} is not reachable")
    _emit(replay(gs, idx, p).to_text(), out)


@main.command("closure")
@genset_options
@click.option("--out", default=None, help="CSV path (stdout when omitted).")
def closure_cmd(genset, n, k, cap_n, threads, out):
    """Write every reachable vector with its minimal length."""
    gs = _load(genset, n, k)
    try:
        rep = run_closure(gs, cap=cap_n)
    except CapExceeded as exc:
        raise CapError(str(exc)) from None
    _emit(rep.to_csv(), out)


def _parse_ns(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out += range(int(lo), int(hi) + 1)
        elif part:
            out.append(int(part))
    return out


@main.command()
@click.option("--families", default=",".join(FAMILIES), show_default=True)
@click.option("--ns", default="3-8", show_default=True, help="Qubit counts, e.g. 6-10 or 3,6,9.")
@click.option("--out", required=True, help="Output directory.")
@click.option("--cap-n", type=click.IntRange(min=1), default=DEFAULT_CLOSURE_CAP, show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=None)
def rates(families, ns, out, cap_n, threads):
    """Coverage and maximal-length curves as CSV."""
    _set_threads(threads)
    try:
        ns_list = _parse_ns(ns)
        fams = [f.strip() for f in families.split(",") if f.strip()]
        for f in fams:
            family(f)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    curves, lmax = [], []
    try:
        for f in fams:
            for n_, L in max_length_curve(f, ns_list, cap=cap_n):
                lmax.append((f, n_, L))
                curves.append(coverage_curve(family(f)(n_), cap=cap_n, label=f))
    except CapExceeded as exc:
        raise CapError(str(exc)) from None
    write_coverage_csv(curves, outdir / "coverage.csv")
    write_lmax_csv(lmax, outdir / "lmax.csv")
    click.echo(f"wrote {outdir / 'coverage.csv'} and {outdir / 'lmax.csv'}")


@main.command()
@click.option("--n", "--N", "n", type=click.IntRange(min=1), required=True)
@click.option("--exhaustive", is_flag=True, help="Enumerate every 2N-subset.")
@click.option("--samples", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--cap-n", type=click.IntRange(min=1), default=4, show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=None)
def minimality(n, exhaustive, samples, seed, cap_n, threads):
    """Search for a 2N-element universal set (none should exist)."""
    _set_threads(threads)
    if n > cap_n:
        raise CapError(f"N={n} exceeds cap {cap_n}")
    if n == 1:
        raise click.UsageError("need N >= 2")
    rep = exhaustive_minimality_check(n, budget=samples, exhaustive=exhaustive or n == 2, seed=seed)
    click.echo(f"{rep.checked - len(rep.counterexamples)}/{rep.checked} subsets non-universal")
    if not rep.ok:
        raise VerifyError(f"universal subset found: {rep.counterexamples[0]}")


@main.command()
@click.argument("sequence", type=click.Path(exists=True, dir_okay=False))
@click.option("--theta", type=float, default=1.0, show_default=True)
@click.option("--dense-cap", type=click.IntRange(min=1, max=10), default=DEFAULT_DENSE_CAP, show_default=True)
def verify(sequence, theta, dense_cap):
    """Replay a sequence file and check its rotation circuit densely."""
    try:
        seq = load_compiled(Path(sequence).read_text(encoding="utf-8"))
    except CompileError as exc:
        raise VerifyError(f"replay failed: {exc}") from None
    try:
        dev = verify_circuit(emit_circuit(seq, theta), dense_cap)
    except DenseCapExceeded as exc:
        raise CapError(str(exc)) from None
    click.echo(f"replay: ok, L={seq.length}, alpha_sign={seq.alpha_sign:+d}")
    click.echo(f"deviation: {dev:.3e}")
    if not dev < CIRCUIT_TOL or math.isnan(dev):
        raise VerifyError(f"deviation {dev:.3e} exceeds {CIRCUIT_TOL}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
