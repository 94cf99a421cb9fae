"""Latin hypercubes, their correspondence with polystochastic (0,1)-matrices,
transversal counting, and small-order enumeration.

A d-dimensional latin hypercube of order n is an n**d symbol array in which
every line contains every symbol of {0..n-1} exactly once.  It corresponds
one-to-one to the (d+1)-dimensional (0,1)-matrix with a 1 at (a_1,...,a_d, s)
exactly when the hypercube holds symbol s at (a_1,...,a_d); transversals map
to positive diagonals, so the transversal count equals the permanent.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Optional, Sequence

from . import kernels
from .diagonals import Diagonal, diagonal_count, DIAGONAL_CAP
from .errors import CapacityError, InputError, ValidationError
from .matrix import MultiDimMatrix, _check_perm

#: Enumeration guards (full enumeration is exponential).
ENUM_LIMITS = {2: 6, 3: 4}


class LatinHypercube:
    """Immutable d-dimensional latin hypercube of order n over symbols 0..n-1."""

    __slots__ = ("dim", "order", "cells")

    def __init__(self, dim: int, order: int, cells: Sequence[int], validate: bool = True):
        cells = tuple(int(c) for c in cells)
        if len(cells) != order ** dim:
            raise InputError(
                f"expected {order ** dim} cells for dim {dim} order {order}, got {len(cells)}"
            )
        self.dim = dim
        self.order = order
        self.cells = cells
        if validate and not self._is_latin():
            raise ValidationError("array is not latin: some line repeats a symbol")

    def _is_latin(self) -> bool:
        n, d = self.order, self.dim
        if any(not 0 <= c < n for c in self.cells):
            return False
        full = (1 << n) - 1
        size = len(self.cells)
        for axis in range(d):
            stride = n ** (d - 1 - axis)
            block = stride * n
            for start in range(0, size, block):
                for lo in range(start, start + stride):
                    mask = 0
                    for off in range(lo, lo + block, stride):
                        mask |= 1 << self.cells[off]
                    if mask != full:
                        return False
        return True

    def offset(self, idx: Sequence[int]) -> int:
        off = 0
        for a in idx:
            if not 0 <= a < self.order:
                raise InputError(f"index {tuple(idx)} out of range")
            off = off * self.order + a
        return off

    def __getitem__(self, idx: Sequence[int]) -> int:
        return self.cells[self.offset(idx)]

    def rows(self) -> list:
        """Nested-list view (for d=2: list of rows)."""
        def build(level, base):
            if level == self.dim:
                return self.cells[base]
            stride = self.order ** (self.dim - 1 - level)
            return [build(level + 1, base + i * stride) for i in range(self.order)]

        return build(0, 0)

    def apply_equivalence(
        self,
        axis_perms: Sequence[Sequence[int]],
        symbol_perm: Sequence[int],
    ) -> "LatinHypercube":
        """Relabel hyperplanes along each axis and permute symbols.

        New cell at index a reads old cell at (perm_1[a_1], ..., perm_d[a_d]),
        then maps the symbol through symbol_perm.  Latinness and transversal
        counts are preserved.
        """
        if len(axis_perms) != self.dim:
            raise InputError(f"need {self.dim} axis permutations")
        perms = [_check_perm(p, self.order) for p in axis_perms]
        sym = _check_perm(symbol_perm, self.order)
        out = [
            sym[self[tuple(p[a] for p, a in zip(perms, idx))]]
            for idx in product(range(self.order), repeat=self.dim)
        ]
        return LatinHypercube(self.dim, self.order, out, validate=False)

    def __eq__(self, other):
        return (
            isinstance(other, LatinHypercube)
            and self.dim == other.dim
            and self.order == other.order
            and self.cells == other.cells
        )

    def __hash__(self):
        return hash((self.dim, self.order, self.cells))

    def __repr__(self):
        return f"LatinHypercube(dim={self.dim}, order={self.order})"


# -- correspondence with (0,1)-matrices ---------------------------------------

def to_matrix(cube: LatinHypercube) -> MultiDimMatrix:
    """The (d+1)-dimensional polystochastic (0,1)-matrix of a latin hypercube."""
    n = cube.order
    entries = [0] * (n ** (cube.dim + 1))
    for off, sym in enumerate(cube.cells):
        entries[off * n + sym] = 1
    return MultiDimMatrix(cube.dim + 1, n, entries, "exact")


def indicator_support(cube: LatinHypercube) -> bytes:
    """Support bytes of to_matrix(cube), built directly."""
    n = cube.order
    out = bytearray(n ** (cube.dim + 1))
    for off, sym in enumerate(cube.cells):
        out[off * n + sym] = 1
    return bytes(out)


def from_matrix(matrix: MultiDimMatrix) -> LatinHypercube:
    """Inverse of `to_matrix`; requires a polystochastic (0,1)-matrix."""
    if matrix.dim < 2:
        raise ValidationError("need dimension >= 2 to read off a hypercube")
    if not matrix.is_zero_one():
        raise ValidationError("matrix entries are not all 0 or 1")
    if not matrix.is_polystochastic():
        raise ValidationError("matrix is not polystochastic")
    n = matrix.order
    cells = []
    for base in range(0, len(matrix.entries), n):
        line = matrix.entries[base: base + n]
        cells.append(next(s for s in range(n) if line[s] == 1))
    return LatinHypercube(matrix.dim - 1, n, cells, validate=False)


# -- constructions -------------------------------------------------------------

def z_matrix(dim: int, order: int) -> MultiDimMatrix:
    """(0,1)-matrix with a 1 exactly where the coordinate sum is divisible by n.

    Always polystochastic; its permanent is zero when both dim-1 and order
    are even, and positive whenever dim is even.
    """
    if dim < 2:
        raise InputError("z_matrix needs dimension >= 2")
    n = order
    entries = [0] * (n ** dim)
    for off, idx in enumerate(product(range(n), repeat=dim)):
        if sum(idx) % n == 0:
            entries[off] = 1
    return MultiDimMatrix(dim, n, entries, "exact")


def q_hypercube(dim: int, order: int) -> LatinHypercube:
    """The latin hypercube corresponding to z_matrix(dim + 1, order)."""
    return from_matrix(z_matrix(dim + 1, order))


def cayley_table(order: int) -> LatinHypercube:
    """Latin square of the cyclic group: cell (i, j) holds (i + j) mod n."""
    n = order
    cells = [(i + j) % n for i in range(n) for j in range(n)]
    return LatinHypercube(2, n, cells, validate=False)


# -- transversals ---------------------------------------------------------------

def count_transversals(cube: LatinHypercube, cap: int = DIAGONAL_CAP) -> int:
    """Number of diagonals of the hypercube hitting all n symbols.

    Counts directly on the symbol array (independent of the matrix-side
    kernels, which serve as a cross-check through the correspondence).
    """
    n, d = cube.order, cube.dim
    if diagonal_count(d + 1, n) > cap:
        raise CapacityError("transversal count exceeds the diagonal cap")
    cells = cube.cells
    if d == 1:
        return 1  # a 1-dimensional hypercube is a permutation
    used = [0] * d  # axes 1..d-1

    def rec(i, axis, off, symmask):
        base = off * n
        total = 0
        nxt = axis + 1
        for c in range(n):
            bit = 1 << c
            if used[axis] & bit:
                continue
            if nxt == d:
                sym = 1 << cells[base + c]
                if symmask & sym:
                    continue
                if i + 1 == n:
                    total += 1
                else:
                    used[axis] |= bit
                    total += rec(i + 1, 1, i + 1, symmask | sym)
                    used[axis] ^= bit
            else:
                used[axis] |= bit
                total += rec(i, nxt, base + c, symmask)
                used[axis] ^= bit
        return total

    return rec(0, 1, 0, 0)


def has_transversal(cube: LatinHypercube) -> bool:
    """Existence check via the positive-diagonal kernel on the indicator matrix."""
    return (
        kernels.find_positive_diagonal(indicator_support(cube), cube.dim + 1, cube.order)
        is not None
    )


def find_transversal(cube: LatinHypercube) -> Optional[Diagonal]:
    """A transversal as a diagonal of the corresponding indicator matrix."""
    perms = kernels.find_positive_diagonal(
        indicator_support(cube), cube.dim + 1, cube.order
    )
    if perms is None:
        return None
    return Diagonal(cube.order, perms)


# -- enumeration ----------------------------------------------------------------

def enumerate_latin(
    dim: int,
    order: int,
    reduced: bool = True,
    allow_large: bool = False,
) -> Iterator[LatinHypercube]:
    """Cell-by-cell backtracking enumeration of latin hypercubes.

    With reduced=True the d axis lines through the origin are pinned to the
    identity symbol order (the standard reduced form for d=2), so each
    hypercube is equivalent to at least one enumerated representative.
    With reduced=False every hypercube is produced (tiny cases only).
    """
    if dim < 1 or order < 1:
        raise InputError("dimension and order must be positive")
    if not allow_large:
        limit = ENUM_LIMITS.get(dim, 1 if dim == 1 else 0)
        if order > limit:
            raise CapacityError(
                f"enumeration of dim {dim} order {order} exceeds the default scope "
                "(override with allow_large=True / --unsafe-scope)"
            )
    n, d = order, dim
    size = n ** d
    idx_list = list(product(range(n), repeat=d))
    # per axis: the line id of each cell and the stride-invariant bookkeeping
    line_ids = []
    for axis in range(d):
        ids = []
        for idx in idx_list:
            rest = idx[:axis] + idx[axis + 1:]
            lid = 0
            for a in rest:
                lid = lid * n + a
            ids.append(lid)
        line_ids.append(ids)
    pinned = [None] * size
    if reduced:
        for off, idx in enumerate(idx_list):
            nonzero = [a for a in idx if a != 0]
            if len(nonzero) <= 1:
                pinned[off] = sum(idx)
    masks = [[0] * (n ** (d - 1)) for _ in range(d)]
    cells = [0] * size

    def rec(off: int) -> Iterator[LatinHypercube]:
        if off == size:
            yield LatinHypercube(d, n, tuple(cells), validate=False)
            return
        lids = [line_ids[axis][off] for axis in range(d)]
        taken = 0
        for axis in range(d):
            taken |= masks[axis][lids[axis]]
        want = pinned[off]
        for sym in range(n) if want is None else (want,):
            bit = 1 << sym
            if taken & bit:
                continue
            cells[off] = sym
            for axis in range(d):
                masks[axis][lids[axis]] |= bit
            yield from rec(off + 1)
            for axis in range(d):
                masks[axis][lids[axis]] ^= bit

    return rec(0)


# -- lhc text format -------------------------------------------------------------

def write_lhc(cube: LatinHypercube, f) -> None:
    f.write(f"lhc {cube.dim} {cube.order}\n")
    n = cube.order
    for start in range(0, len(cube.cells), n):
        f.write(" ".join(map(str, cube.cells[start: start + n])) + "\n")


def read_lhc(f) -> LatinHypercube:
    tokens = f.read().split()
    if len(tokens) < 3 or tokens[0] != "lhc":
        raise ValidationError("not an lhc file: missing 'lhc <dim> <order>' header")
    try:
        dim, order = int(tokens[1]), int(tokens[2])
        cells = [int(t) for t in tokens[3:]]
    except ValueError as exc:
        raise ValidationError(f"bad lhc file: {exc}") from exc
    if len(cells) != order ** dim:
        raise ValidationError(
            f"lhc body has {len(cells)} cells, expected {order ** dim}"
        )
    return LatinHypercube(dim, order, cells)  # validates latinness


def dumps_lhc(cube: LatinHypercube) -> str:
    import io

    buf = io.StringIO()
    write_lhc(cube, buf)
    return buf.getvalue()


def loads_lhc(text: str) -> LatinHypercube:
    import io

    return read_lhc(io.StringIO(text))
