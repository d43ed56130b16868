"""Exact chain Hopf algebra computations over F_p and Z_(p).

Presentations of chain algebras with diagonals, their primitives and
indecomposables, the mod-p Bockstein spectral sequence, the length ≤ 2 cobar
complex, and a certificate-producing pipeline that replaces a Hopf algebra
up to homotopy by an isomorphic primitively generated one.
"""

from .algebra import COMMUTATIVE, FREE, AlgebraPresentation, Derivation, Element, GeneratorSpec, Tensor, tensor
from .errors import AnickError
from .hopf import HahPresentation, free_hah, commutative_hah, j_map_at, primitives_at, reduced_diagonal
from .linalg import Fp, ZLocal, make_ring
from .primitivization import (
    ExtensionProblem,
    PrimitivizationConfig,
    primitivize,
    trivialize_extension,
    verify_presentation,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraPresentation",
    "AnickError",
    "COMMUTATIVE",
    "Derivation",
    "Element",
    "ExtensionProblem",
    "FREE",
    "Fp",
    "GeneratorSpec",
    "HahPresentation",
    "PrimitivizationConfig",
    "Tensor",
    "ZLocal",
    "commutative_hah",
    "free_hah",
    "j_map_at",
    "make_ring",
    "primitives_at",
    "primitivize",
    "reduced_diagonal",
    "tensor",
    "trivialize_extension",
    "verify_presentation",
]
