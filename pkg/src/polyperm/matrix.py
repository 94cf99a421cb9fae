"""Dense d-dimensional matrices of order n with line/plane access and serialization.

Entries are exact rationals (`fractions.Fraction`, the default) or floats.
The flat entry layout is row-major with the last coordinate fastest: index
(a_1, ..., a_d) lives at offset sum(a_i * n**(d-i)).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, InputError, ValidationError

#: Default positivity threshold for float-mode matrices.  An entry x with
#: x > EPS counts as positive, |x| <= EPS as zero; x < -EPS is invalid.
EPS = 1e-12

#: Dense storage guard: refuse matrices with more than 2**28 entries.
MAX_ENTRIES = 2 ** 28

MODES = ("exact", "float")


def _check_shape(dim: int, order: int) -> None:
    if dim < 1 or order < 1:
        raise InputError(f"dimension and order must be positive, got {dim}, {order}")
    if order ** dim > MAX_ENTRIES:
        raise CapacityError(
            f"order**dim = {order}**{dim} exceeds the {MAX_ENTRIES} entry guard"
        )


class PlaneRef:
    """A k-dimensional plane: a subset of positions pinned to fixed values.

    The free (unfixed) positions keep their original relative order.  A
    1-dimensional PlaneRef is a line, a (d-1)-dimensional one a hyperplane.
    """

    __slots__ = ("dim", "fixed")

    def __init__(self, dim: int, fixed: dict[int, int]):
        if not all(0 <= p < dim for p in fixed):
            raise InputError(f"fixed positions {sorted(fixed)} out of range for dim {dim}")
        self.dim = dim
        self.fixed = dict(sorted(fixed.items()))

    @classmethod
    def from_pattern(cls, pattern: Sequence) -> "PlaneRef":
        """Build from a per-position sequence where None or '*' marks a free position."""
        fixed = {
            p: int(v) for p, v in enumerate(pattern) if v is not None and v != "*"
        }
        return cls(len(pattern), fixed)

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(p for p in range(self.dim) if p not in self.fixed)

    @property
    def k(self) -> int:
        """Dimension of the plane (number of free positions)."""
        return self.dim - len(self.fixed)

    def __repr__(self):
        cells = ["*" if p not in self.fixed else str(self.fixed[p]) for p in range(self.dim)]
        return f"PlaneRef({','.join(cells)})"

    def __eq__(self, other):
        return (
            isinstance(other, PlaneRef)
            and self.dim == other.dim
            and self.fixed == other.fixed
        )


class MultiDimMatrix:
    """Immutable dense d-dimensional matrix of order n.

    All mutation happens by constructing new values, so instances can be
    shared freely across workers.
    """

    __slots__ = ("dim", "order", "entries", "mode")

    def __init__(self, dim: int, order: int, entries: Iterable, mode: str = "exact"):
        _check_shape(dim, order)
        if mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {mode!r}")
        if mode == "exact":
            entries = tuple(
                e if isinstance(e, Fraction) else Fraction(e) for e in entries
            )
        else:
            entries = tuple(float(e) for e in entries)
        if len(entries) != order ** dim:
            raise InputError(
                f"expected {order ** dim} entries for dim {dim} order {order}, "
                f"got {len(entries)}"
            )
        self.dim = dim
        self.order = order
        self.entries = entries
        self.mode = mode

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_function(cls, dim: int, order: int, fn, mode: str = "exact") -> "MultiDimMatrix":
        _check_shape(dim, order)
        entries = [fn(idx) for idx in product(range(order), repeat=dim)]
        return cls(dim, order, entries, mode)

    @classmethod
    def constant(cls, dim: int, order: int, value, mode: str = "exact") -> "MultiDimMatrix":
        _check_shape(dim, order)
        return cls(dim, order, [value] * order ** dim, mode)

    @classmethod
    def zeros(cls, dim: int, order: int, mode: str = "exact") -> "MultiDimMatrix":
        return cls.constant(dim, order, 0, mode)

    @classmethod
    def identity2(cls, order: int, mode: str = "exact") -> "MultiDimMatrix":
        """2-dimensional identity (the main-diagonal permutation indicator)."""
        return cls.from_function(2, order, lambda ij: 1 if ij[0] == ij[1] else 0, mode)

    # -- indexing ------------------------------------------------------------

    def offset(self, idx: Sequence[int]) -> int:
        if len(idx) != self.dim:
            raise InputError(f"index {tuple(idx)} has wrong length for dim {self.dim}")
        off = 0
        for a in idx:
            if not 0 <= a < self.order:
                raise InputError(f"index {tuple(idx)} out of range for order {self.order}")
            off = off * self.order + a
        return off

    def __getitem__(self, idx: Sequence[int]):
        return self.entries[self.offset(idx)]

    def indices(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.order), repeat=self.dim)

    # -- lines and planes ----------------------------------------------------

    def plane_indices(self, plane: PlaneRef) -> Iterator[tuple[int, ...]]:
        if plane.dim != self.dim:
            raise InputError("plane dimension mismatch")
        free = plane.free
        base = [0] * self.dim
        for p, v in plane.fixed.items():
            if not 0 <= v < self.order:
                raise InputError(f"fixed value {v} out of range")
            base[p] = v
        for combo in product(range(self.order), repeat=len(free)):
            for p, v in zip(free, combo):
                base[p] = v
            yield tuple(base)

    def lines(self) -> Iterator[PlaneRef]:
        """All d * n**(d-1) lines of the matrix."""
        for axis in range(self.dim):
            others = [p for p in range(self.dim) if p != axis]
            for combo in product(range(self.order), repeat=self.dim - 1):
                yield PlaneRef(self.dim, dict(zip(others, combo)))

    def line_sum(self, line: PlaneRef):
        if line.k != 1:
            raise InputError("line_sum requires a 1-dimensional plane")
        return sum(self[idx] for idx in self.plane_indices(line))

    def extract_plane(self, plane: PlaneRef) -> "MultiDimMatrix":
        if plane.k == 0:
            raise InputError("extract_plane requires at least one free position")
        sub = [self[idx] for idx in self.plane_indices(plane)]
        return MultiDimMatrix(plane.k, self.order, sub, self.mode)

    # -- predicates ----------------------------------------------------------

    def is_zero_one(self) -> bool:
        return all(e == 0 or e == 1 for e in self.entries)

    def is_polystochastic(self, eps: float = EPS) -> bool:
        if self.mode == "exact":
            if any(e < 0 for e in self.entries):
                return False
            return self._exact_line_sums_equal_one()
        if any(e < -eps for e in self.entries):
            return False
        return all(abs(self.line_sum(line) - 1.0) <= eps for line in self.lines())

    def _exact_line_sums_equal_one(self) -> bool:
        # Integer fast path: scale by the lcm of denominators so the many
        # line sums run over machine ints instead of Fraction arithmetic.
        denom = 1
        for e in self.entries:
            denom = denom * e.denominator // math.gcd(denom, e.denominator)
        scaled = [int(e * denom) for e in self.entries]
        n, d = self.order, self.dim
        size = len(scaled)
        for axis in range(d):
            stride = n ** (d - 1 - axis)
            block = stride * n
            for start in range(0, size, block):
                for lo in range(start, start + stride):
                    if sum(scaled[lo: lo + block: stride]) != denom:
                        return False
        return True

    # -- support -------------------------------------------------------------

    def support(self, eps: float = EPS) -> bytes:
        """Positivity indicator per entry, as a flat byte string.

        Float mode: entries below -eps are an invalid matrix; entries in
        [-eps, eps] count as zero.
        """
        if self.mode == "exact":
            return bytes(1 if e > 0 else 0 for e in self.entries)
        out = bytearray(len(self.entries))
        for i, e in enumerate(self.entries):
            if e > eps:
                out[i] = 1
            elif e < -eps:
                raise ValidationError(f"entry {e} at offset {i} is below -eps")
        return bytes(out)

    def positive_at(self, idx: Sequence[int], eps: float = EPS) -> bool:
        e = self[idx]
        if self.mode == "exact":
            return e > 0
        if e < -eps:
            raise ValidationError(f"entry {e} at {tuple(idx)} is below -eps")
        return e > eps

    # -- transforms ----------------------------------------------------------

    def relabel(self, axis: int, perm: Sequence[int]) -> "MultiDimMatrix":
        """New matrix A' with A'[.., x, ..] = A[.., perm[x], ..] along `axis`."""
        if not 0 <= axis < self.dim:
            raise InputError(f"axis {axis} out of range for dim {self.dim}")
        perm = _check_perm(perm, self.order)
        n, d = self.order, self.dim
        stride = n ** (d - 1 - axis)
        block = stride * n
        src = self.entries
        out = [None] * len(src)
        for start in range(0, len(src), block):
            for x in range(n):
                dst_base = start + x * stride
                src_base = start + perm[x] * stride
                out[dst_base: dst_base + stride] = src[src_base: src_base + stride]
        return MultiDimMatrix(d, n, out, self.mode)

    def permute_axes(self, order_map: Sequence[int]) -> "MultiDimMatrix":
        """Reorder coordinate positions: new index p reads old position order_map[p]."""
        perm = _check_perm(order_map, self.dim)
        out = [
            self[tuple(idx[perm[p]] for p in range(self.dim))]
            for idx in product(range(self.order), repeat=self.dim)
        ]
        return MultiDimMatrix(self.dim, self.order, out, self.mode)

    # -- conversions ---------------------------------------------------------

    def to_float(self) -> "MultiDimMatrix":
        if self.mode == "float":
            return self
        return MultiDimMatrix(self.dim, self.order, [float(e) for e in self.entries], "float")

    def to_exact(self) -> "MultiDimMatrix":
        """Exact lift of a float matrix via decimal (repr) conversion."""
        if self.mode == "exact":
            return self
        return MultiDimMatrix(
            self.dim, self.order, [Fraction(repr(e)) for e in self.entries], "exact"
        )

    # -- dunder --------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, MultiDimMatrix)
            and self.dim == other.dim
            and self.order == other.order
            and self.mode == other.mode
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"MultiDimMatrix(dim={self.dim}, order={self.order}, mode={self.mode!r})"


def _check_perm(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise InputError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


# -- pmat text format ----------------------------------------------------------

def write_pmat(matrix: MultiDimMatrix, f) -> None:
    """Write the `pmat <dim> <order> <exact|float>` text format."""
    f.write(f"pmat {matrix.dim} {matrix.order} {matrix.mode}\n")
    n = matrix.order
    fmt = str if matrix.mode == "exact" else repr
    for row_start in range(0, len(matrix.entries), n):
        row = matrix.entries[row_start: row_start + n]
        f.write(" ".join(fmt(e) for e in row) + "\n")


def read_pmat(f) -> MultiDimMatrix:
    tokens = f.read().split()
    if len(tokens) < 4 or tokens[0] != "pmat":
        raise ValidationError("not a pmat file: missing 'pmat <dim> <order> <mode>' header")
    try:
        dim, order = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise ValidationError(f"bad pmat header: {exc}") from exc
    mode = tokens[3]
    if mode not in MODES:
        raise ValidationError(f"bad pmat mode {mode!r}")
    body = tokens[4:]
    if len(body) != order ** dim:
        raise ValidationError(
            f"pmat body has {len(body)} entries, expected {order ** dim}"
        )
    try:
        if mode == "exact":
            entries = [Fraction(t) for t in body]
        else:
            entries = [float(t) for t in body]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad pmat entry: {exc}") from exc
    return MultiDimMatrix(dim, order, entries, mode)


def dumps_pmat(matrix: MultiDimMatrix) -> str:
    import io

    buf = io.StringIO()
    write_pmat(matrix, buf)
    return buf.getvalue()


def loads_pmat(text: str) -> MultiDimMatrix:
    import io

    return read_pmat(io.StringIO(text))
