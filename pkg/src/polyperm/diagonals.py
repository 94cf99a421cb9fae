"""Diagonals of multidimensional matrices: enumeration, permanents, positivity search.

A diagonal of a d-dimensional matrix of order n is a set of n indices that are
pairwise distinct in every coordinate.  Canonical form: sort members by first
coordinate, giving a (d-1)-tuple of permutations (s_2, ..., s_d) with member
i = (i, s_2[i], ..., s_d[i]); there are (n!)**(d-1) diagonals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations, product
from typing import Iterator, Optional, Sequence

from . import kernels
from .errors import CapacityError, InputError
from .matrix import EPS, MultiDimMatrix

#: Refuse full-enumeration work above this many diagonals.
DIAGONAL_CAP = 10 ** 9


class PartialDiagonal:
    """A set of m <= n indices pairwise distinct in all components."""

    __slots__ = ("cells",)

    def __init__(self, cells):
        cells = tuple(sorted(tuple(c) for c in cells))
        if cells:
            d = len(cells[0])
            if any(len(c) != d for c in cells):
                raise InputError("cells have inconsistent dimension")
            for pos in range(d):
                seen = [c[pos] for c in cells]
                if len(set(seen)) != len(seen):
                    raise InputError(
                        f"cells share coordinate value in position {pos}: not a partial diagonal"
                    )
        self.cells = cells

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __eq__(self, other):
        return isinstance(other, PartialDiagonal) and self.cells == other.cells

    def __repr__(self):
        return f"PartialDiagonal({list(self.cells)})"


class Diagonal:
    """A full diagonal in permutation-tuple canonical form."""

    __slots__ = ("order", "perms")

    def __init__(self, order: int, perms: Sequence[Sequence[int]]):
        perms = tuple(tuple(p) for p in perms)
        for p in perms:
            if sorted(p) != list(range(order)):
                raise InputError(f"{p} is not a permutation of 0..{order - 1}")
        self.order = order
        self.perms = perms

    @property
    def dim(self) -> int:
        return len(self.perms) + 1

    def indices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            (i,) + tuple(p[i] for p in self.perms) for i in range(self.order)
        )

    @classmethod
    def from_indices(cls, cells) -> "Diagonal":
        cells = sorted(tuple(c) for c in cells)
        if not cells:
            raise InputError("a diagonal needs at least one index")
        n, d = len(cells), len(cells[0])
        if [c[0] for c in cells] != list(range(n)):
            raise InputError("first coordinates must cover 0..n-1")
        perms = []
        for pos in range(1, d):
            p = tuple(c[pos] for c in cells)
            perms.append(p)
        return cls(n, perms)

    def to_text(self) -> str:
        return "diag " + " ".join(
            "(" + ",".join(map(str, idx)) + ")" for idx in self.indices()
        )

    @classmethod
    def from_text(cls, text: str) -> "Diagonal":
        tokens = text.split()
        if not tokens or tokens[0] != "diag":
            raise InputError("diagonal text must start with 'diag'")
        cells = []
        for tok in tokens[1:]:
            if not (tok.startswith("(") and tok.endswith(")")):
                raise InputError(f"bad index token {tok!r}")
            cells.append(tuple(int(x) for x in tok[1:-1].split(",")))
        return cls.from_indices(cells)

    def __eq__(self, other):
        return (
            isinstance(other, Diagonal)
            and self.order == other.order
            and self.perms == other.perms
        )

    def __hash__(self):
        return hash((self.order, self.perms))

    def __repr__(self):
        return f"Diagonal({self.indices()})"


def diagonal_count(dim: int, order: int) -> int:
    return math.factorial(order) ** (dim - 1)


def _check_capacity(dim: int, order: int, cap: int = DIAGONAL_CAP) -> None:
    if diagonal_count(dim, order) > cap:
        raise CapacityError(
            f"(n!)**(d-1) = {diagonal_count(dim, order)} exceeds the cap {cap}"
        )


def enumerate_diagonals(dim: int, order: int, cap: int = DIAGONAL_CAP) -> Iterator[Diagonal]:
    """All diagonals in lexicographic permutation-tuple order, each once."""
    if dim < 1 or order < 1:
        raise InputError("dimension and order must be positive")
    _check_capacity(dim, order, cap)
    perm_list = list(permutations(range(order)))
    for combo in product(perm_list, repeat=dim - 1):
        yield Diagonal(order, combo)


def permanent(matrix: MultiDimMatrix, cap: int = DIAGONAL_CAP):
    """Sum over all diagonals of the product of the entries on the diagonal.

    Exact in exact mode.  Deliberately independent of the positivity-counting
    kernel so the two can cross-check each other on (0,1) matrices.
    """
    _check_capacity(matrix.dim, matrix.order, cap)
    if matrix.mode == "float":
        return kernels.permanent_float(matrix.entries, matrix.dim, matrix.order)
    return _permanent_exact(matrix)


def _permanent_exact(matrix: MultiDimMatrix) -> Fraction:
    # Scale to integers once; diagonal products then run over machine ints.
    denom = 1
    for e in matrix.entries:
        denom = denom * e.denominator // math.gcd(denom, e.denominator)
    scaled = [int(e * denom) for e in matrix.entries]
    n, d = matrix.order, matrix.dim
    if d == 1:
        prod = 1
        for v in scaled:
            prod *= v
        return Fraction(prod, denom ** n)
    used = [0] * d

    def rec(i, axis, off, prod):
        base = off * n
        total = 0
        nxt = axis + 1
        for c in range(n):
            bit = 1 << c
            if used[axis] & bit:
                continue
            if nxt == d:
                p = prod * scaled[base + c]
                if p == 0:
                    continue
                if i + 1 == n:
                    total += p
                else:
                    used[axis] |= bit
                    total += rec(i + 1, 1, i + 1, p)
                    used[axis] ^= bit
            else:
                used[axis] |= bit
                total += rec(i, nxt, base + c, prod)
                used[axis] ^= bit
        return total

    return Fraction(rec(0, 1, 0, 1), denom ** n)


def count_positive_diagonals(
    matrix: MultiDimMatrix, eps: float = EPS, cap: int = DIAGONAL_CAP
) -> int:
    """Number of diagonals all of whose entries are positive."""
    _check_capacity(matrix.dim, matrix.order, cap)
    return kernels.count_positive_diagonals(
        matrix.support(eps), matrix.dim, matrix.order
    )


def find_positive_diagonal(matrix: MultiDimMatrix, eps: float = EPS) -> Optional[Diagonal]:
    """Lexicographically least positive diagonal in permutation-tuple order, or None."""
    perms = kernels.find_positive_diagonal(matrix.support(eps), matrix.dim, matrix.order)
    if perms is None:
        return None
    return Diagonal(matrix.order, perms)


class DiagnosticResult:
    """Boolean with a reason code for the failing case."""

    __slots__ = ("ok", "reason")

    def __init__(self, ok: bool, reason: Optional[str] = None):
        self.ok = ok
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"DiagnosticResult(ok={self.ok}, reason={self.reason!r})"


def check_positive_partial_diagonal(
    matrix: MultiDimMatrix, cells, eps: float = EPS
) -> DiagnosticResult:
    """True iff the cells form a partial diagonal and every entry is positive.

    Malformed inputs (repeated component values) report ok=False with reason
    'not_pairwise_distinct' rather than raising.
    """
    cells = [tuple(c) for c in cells]
    for c in cells:
        if len(c) != matrix.dim:
            return DiagnosticResult(False, "wrong_dimension")
        if any(not 0 <= a < matrix.order for a in c):
            return DiagnosticResult(False, "index_out_of_range")
    for pos in range(matrix.dim):
        vals = [c[pos] for c in cells]
        if len(set(vals)) != len(vals):
            return DiagnosticResult(False, "not_pairwise_distinct")
    for c in cells:
        if not matrix.positive_at(c, eps):
            return DiagnosticResult(False, "nonpositive_entry")
    return DiagnosticResult(True)


def is_positive_partial_diagonal(matrix: MultiDimMatrix, cells, eps: float = EPS) -> bool:
    return bool(check_positive_partial_diagonal(matrix, cells, eps))
