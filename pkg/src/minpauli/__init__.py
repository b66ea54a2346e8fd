"""Minimal Pauli-string generating sets of su(2^N) and a nested-commutator compiler."""

from .closure import ClosureReport, bfs_sequence, closure, is_product_universal
from .compiler import (
    CompiledSequence,
    build_context,
    example1_context,
    example3_context,
    pauli_compiler,
)
from .f2 import f2_decompose, f2_rank
from .gensets import (
    GeneratorSet,
    example1_set,
    example2_set,
    example3_set,
    prop1_set,
    standard_set,
    theorem1_combine,
)
from .pauli import (
    PauliError,
    PauliString,
    ScaledPauli,
    SymplecticVector,
    ad_exact,
    ad_symplectic,
    commutes,
    f_vector,
    multiply,
    nested_ad,
    parse_pauli,
    to_text,
)

__version__ = "0.1.0"

__all__ = [
    "ClosureReport",
    "CompiledSequence",
    "GeneratorSet",
    "PauliError",
    "PauliString",
    "ScaledPauli",
    "SymplecticVector",
    "ad_exact",
    "ad_symplectic",
    "bfs_sequence",
    "build_context",
    "closure",
    "commutes",
    "example1_context",
    "example1_set",
    "example2_set",
    "example3_context",
    "example3_set",
    "f2_decompose",
    "f2_rank",
    "f_vector",
    "is_product_universal",
    "multiply",
    "nested_ad",
    "parse_pauli",
    "pauli_compiler",
    "prop1_set",
    "standard_set",
    "theorem1_combine",
    "to_text",
]
