"""Multidimensional-matrix combinatorics: permanents of polystochastic
matrices, latin hypercube transversals, Birkhoff decomposition, and a
constructive positive-diagonal finder for 4-dimensional matrices of order 4.
"""

from .birkhoff import (
    BvNDecomposition,
    birkhoff_decompose,
    extend_partial_diagonal,
    perm_matrix,
    positive_diagonal_through,
    verify_lemma2,
)
from .diagonals import (
    Diagonal,
    PartialDiagonal,
    count_positive_diagonals,
    enumerate_diagonals,
    find_positive_diagonal,
    is_positive_partial_diagonal,
    permanent,
)
from .errors import (
    CapacityError,
    InputError,
    LemmaViolationError,
    PolypermError,
    TheoremViolationError,
    ValidationError,
)
from .gen import random_latin, random_polystochastic, sinkhorn_project
from .kernels import BACKEND as KERNEL_BACKEND
from .latin import (
    LatinHypercube,
    cayley_table,
    count_transversals,
    enumerate_latin,
    from_matrix,
    q_hypercube,
    to_matrix,
    z_matrix,
)
from .matrix import EPS, MultiDimMatrix, PlaneRef, loads_pmat, dumps_pmat
from .prover44 import (
    ProofTrace,
    find_positive_diagonal_44,
    realize_crossing_matrix,
    realize_table2_matrix,
    table2_pattern,
)
from .rowlatin import RowLatinRectangle, canonical_form, enumerate_classes, verify_lemma1

__version__ = "0.1.0"

__all__ = [
    "BvNDecomposition",
    "CapacityError",
    "Diagonal",
    "EPS",
    "InputError",
    "KERNEL_BACKEND",
    "LatinHypercube",
    "LemmaViolationError",
    "MultiDimMatrix",
    "PartialDiagonal",
    "PlaneRef",
    "PolypermError",
    "ProofTrace",
    "RowLatinRectangle",
    "TheoremViolationError",
    "ValidationError",
    "birkhoff_decompose",
    "canonical_form",
    "cayley_table",
    "count_positive_diagonals",
    "count_transversals",
    "dumps_pmat",
    "enumerate_classes",
    "enumerate_diagonals",
    "enumerate_latin",
    "extend_partial_diagonal",
    "find_positive_diagonal",
    "find_positive_diagonal_44",
    "from_matrix",
    "is_positive_partial_diagonal",
    "loads_pmat",
    "perm_matrix",
    "permanent",
    "positive_diagonal_through",
    "q_hypercube",
    "random_latin",
    "random_polystochastic",
    "realize_crossing_matrix",
    "realize_table2_matrix",
    "sinkhorn_project",
    "table2_pattern",
    "to_matrix",
    "verify_lemma1",
    "verify_lemma2",
    "z_matrix",
]
