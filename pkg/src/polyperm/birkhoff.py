"""Doubly stochastic matrices: convex decomposition into permutation matrices,
positive diagonals through prescribed cells, partial-diagonal extension, and an
exhaustive support-pattern verifier for the length-2 -> length-3 extension
property at order 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .diagonals import Diagonal, PartialDiagonal, check_positive_partial_diagonal, find_positive_diagonal
from .errors import InputError, LemmaViolationError, ValidationError
from .matrix import EPS, MultiDimMatrix

#: Residual mass above this is treated as a non-doubly-stochastic input.
RESIDUAL_BOUND = 1e-9


def perm_matrix(perm: Sequence[int], mode: str = "exact") -> MultiDimMatrix:
    n = len(perm)
    entries = [0] * (n * n)
    for i, j in enumerate(perm):
        entries[i * n + j] = 1
    return MultiDimMatrix(2, n, entries, mode)


def is_doubly_stochastic(matrix: MultiDimMatrix, eps: float = EPS) -> bool:
    return matrix.dim == 2 and matrix.is_polystochastic(eps)


def _require_ds(matrix: MultiDimMatrix, eps: float) -> None:
    if matrix.dim != 2:
        raise ValidationError("expected a 2-dimensional matrix")
    if not matrix.is_polystochastic(eps):
        raise ValidationError("matrix is not doubly stochastic within tolerance")


class BvNDecomposition:
    """Convex combination of permutation matrices: weights sum to 1, all positive."""

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Sequence[tuple]):
        self.order = order
        self.terms = [(w, tuple(p)) for w, p in terms]
        total = sum(w for w, _ in self.terms)
        if total != 1 and not abs(float(total) - 1.0) <= 1e-9:
            raise ValidationError(f"weights sum to {total}, not 1")
        if any(w <= 0 for w, _ in self.terms):
            raise ValidationError("weights must be positive")

    def __len__(self):
        return len(self.terms)

    def reconstruct(self, mode: str = "exact") -> MultiDimMatrix:
        n = self.order
        acc = [Fraction(0)] * (n * n)
        for w, p in self.terms:
            for i, j in enumerate(p):
                acc[i * n + j] += Fraction(w)
        if mode == "float":
            return MultiDimMatrix(2, n, [float(x) for x in acc], "float")
        return MultiDimMatrix(2, n, acc, "exact")

    def to_text(self) -> str:
        lines = []
        for w, p in self.terms:
            lines.append(f"theta {w} : perm " + " ".join(map(str, p)))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"BvNDecomposition(order={self.order}, terms={len(self.terms)})"


def _nullspace_vector(columns: list[tuple[int, ...]], n: int) -> list[Fraction]:
    """A nonzero rational c with sum_i c_i * vec(P_i) = 0.

    Exists whenever len(columns) exceeds the dimension (n-1)**2 + 1 of the
    span of order-n permutation matrices.  Deterministic: first free column,
    plain fraction elimination.
    """
    t = len(columns)
    rows = []
    for cell in range(n * n):
        r, c = divmod(cell, n)
        rows.append([Fraction(1 if columns[j][r] == c else 0) for j in range(t)])
    pivots = {}  # column -> row index
    rank = 0
    for col in range(t):
        pivot_row = None
        for ri in range(rank, len(rows)):
            if rows[ri][col]:
                pivot_row = ri
                break
        if pivot_row is None:
            # free column: express it against earlier pivots
            sol = [Fraction(0)] * t
            sol[col] = Fraction(1)
            for pcol, prow in pivots.items():
                sol[pcol] = -rows[prow][col]
            return sol
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for ri in range(len(rows)):
            if ri != rank and rows[ri][col]:
                f = rows[ri][col]
                rows[ri] = [a - f * b for a, b in zip(rows[ri], rows[rank])]
        pivots[col] = rank
        rank += 1
    raise ValidationError("no affine dependence found; term count within bound")


def _reduce_terms(terms: list[list], n: int, bound: int) -> list[list]:
    """Convex-combination reduction: drop affinely dependent permutations until
    at most `bound` terms remain.  Preserves the weighted sum exactly."""
    while len(terms) > bound:
        c = _nullspace_vector([p for _, p in terms], n)
        lam = None
        for (w, _), ci in zip(terms, c):
            if ci > 0:
                ratio = Fraction(w) / ci
                if lam is None or ratio < lam:
                    lam = ratio
        if lam is None:
            c = [-x for x in c]
            for (w, _), ci in zip(terms, c):
                if ci > 0:
                    ratio = Fraction(w) / ci
                    if lam is None or ratio < lam:
                        lam = ratio
        terms = [
            [w - lam * ci, p]
            for (w, p), ci in zip(terms, c)
            if w - lam * ci > 0
        ]
    return terms


def birkhoff_decompose(matrix: MultiDimMatrix, eps: float = EPS) -> BvNDecomposition:
    """Decompose a doubly stochastic matrix into a convex combination of
    permutation matrices with at most (n-1)**2 + 1 terms.

    Greedy core: repeatedly take the lexicographically least positive diagonal
    of the residual and subtract its minimum entry.  Because the greedy walk
    alone can exceed the term bound on dense supports, affinely dependent
    permutations are merged away as soon as the bound is crossed.  Float
    inputs are lifted to exact rationals, so subtraction never drifts.
    """
    _require_ds(matrix, eps)
    n = matrix.order
    bound = (n - 1) ** 2 + 1
    if matrix.mode == "float":
        # Exact binary lift; negatives within [-eps, 0] were already vetted
        # by the validation above and are clamped to zero.
        work = [Fraction(x) if x > 0 else Fraction(0) for x in matrix.entries]
    else:
        work = list(matrix.entries)
    terms: list[list] = []
    while True:
        residual = MultiDimMatrix(2, n, work, "exact")
        diag = find_positive_diagonal(residual)
        if diag is None:
            break
        cells = diag.indices()
        theta = min(work[i * n + j] for i, j in cells)
        perm = tuple(j for _, j in cells)
        for i, j in cells:
            work[i * n + j] -= theta
        terms.append([theta, perm])
        terms = _reduce_terms(terms, n, bound)
    leftover = max(abs(x) for x in work)
    if leftover > RESIDUAL_BOUND:
        raise ValidationError(
            f"residual mass {float(leftover):.3g} after extraction; input is not doubly stochastic"
        )
    if not terms:
        raise ValidationError("matrix has no positive diagonal; not doubly stochastic")
    total = sum(w for w, _ in terms)
    if total != 1:
        terms = [[w / total, p] for w, p in terms]
    if matrix.mode == "float":
        out = [(float(w), p) for w, p in terms]
    else:
        out = [(w, p) for w, p in terms]
    return BvNDecomposition(n, out)


def positive_diagonal_through(
    matrix: MultiDimMatrix, cell: Sequence[int], eps: float = EPS
) -> Diagonal:
    """Lexicographically least positive diagonal containing `cell`.

    Exists for every positive cell of a doubly stochastic matrix, since some
    term of any convex decomposition uses it.
    """
    _require_ds(matrix, eps)
    r0, c0 = cell
    if not matrix.positive_at((r0, c0), eps):
        raise InputError(f"cell {tuple(cell)} is not positive")
    n = matrix.order
    support = matrix.support(eps)
    assign = [0] * n

    def rec(row: int, used: int) -> bool:
        if row == n:
            return True
        cols = (c0,) if row == r0 else range(n)
        for c in cols:
            if used >> c & 1 or not support[row * n + c]:
                continue
            assign[row] = c
            if rec(row + 1, used | 1 << c):
                return True
        return False

    if not rec(0, 0):
        raise LemmaViolationError(
            f"no positive diagonal through {tuple(cell)}; matrix not doubly stochastic?"
        )
    return Diagonal(n, [tuple(assign)])


def iter_positive_diagonals_through(matrix: MultiDimMatrix, cell, eps: float = EPS):
    """All positive diagonals through `cell`, in lexicographic order."""
    n = matrix.order
    support = matrix.support(eps)
    r0, c0 = cell
    assign = [0] * n

    def rec(row: int, used: int):
        if row == n:
            yield Diagonal(n, [tuple(assign)])
            return
        cols = (c0,) if row == r0 else range(n)
        for c in cols:
            if used >> c & 1 or not support[row * n + c]:
                continue
            assign[row] = c
            yield from rec(row + 1, used | 1 << c)

    yield from rec(0, 0)


def extend_partial_diagonal(
    matrix: MultiDimMatrix, partial: PartialDiagonal | Sequence, eps: float = EPS
) -> PartialDiagonal:
    """Extend a positive length-2 partial diagonal of an order-4 doubly
    stochastic matrix by one positive cell outside its rows and columns.

    The extension always exists for valid inputs; a missing one raises
    LemmaViolationError as a bug trap.  Deterministic: lexicographically
    least valid cell.
    """
    _require_ds(matrix, eps)
    if matrix.order != 4:
        raise InputError("extension contract is stated for order 4")
    cells = list(partial)
    if len(cells) != 2:
        raise InputError("partial diagonal must have length 2")
    chk = check_positive_partial_diagonal(matrix, cells, eps)
    if not chk:
        raise InputError(f"not a positive partial diagonal: {chk.reason}")
    rows = {c[0] for c in cells}
    cols = {c[1] for c in cells}
    for r in range(4):
        if r in rows:
            continue
        for c in range(4):
            if c in cols:
                continue
            if matrix.positive_at((r, c), eps):
                return PartialDiagonal(cells + [(r, c)])
    raise LemmaViolationError(
        "positive length-2 partial diagonal admits no extension; invalid input or bug"
    )


# -- exhaustive support-pattern verifier ---------------------------------------

PERM_MASKS_4 = tuple(
    sum(1 << (i * 4 + p[i]) for i in range(4)) for p in permutations(range(4))
)

_FREE_MASKS: dict[tuple[int, int, int, int], int] = {}
for _r1 in range(4):
    for _r2 in range(_r1 + 1, 4):
        for _c1 in range(4):
            for _c2 in range(4):
                if _c1 == _c2:
                    continue
                _mask = 0
                for _r in range(4):
                    if _r in (_r1, _r2):
                        continue
                    for _c in range(4):
                        if _c in (_c1, _c2):
                            continue
                        _mask |= 1 << (_r * 4 + _c)
                _FREE_MASKS[(_r1, _c1, _r2, _c2)] = _mask


def support_is_realizable(mask: int) -> bool:
    """True iff `mask` is a union of order-4 permutation supports, i.e. the
    support of some doubly stochastic matrix."""
    cover = 0
    hit = False
    for pm in PERM_MASKS_4:
        if pm & ~mask == 0:
            cover |= pm
            hit = True
    return hit and cover == mask


def _lemma2_chunk(start: int, stop: int) -> tuple[int, int, list[str]]:
    realizable = 0
    pairs = 0
    violations = []
    for mask in range(start, stop):
        cover = 0
        hit = False
        for pm in PERM_MASKS_4:
            if pm & ~mask == 0:
                cover |= pm
                hit = True
        if not hit or cover != mask:
            continue
        realizable += 1
        cells = [(b >> 2, b & 3) for b in range(16) if mask >> b & 1]
        for a in range(len(cells)):
            r1, c1 = cells[a]
            for b in range(a + 1, len(cells)):
                r2, c2 = cells[b]
                if r1 == r2 or c1 == c2:
                    continue
                pairs += 1
                key = (r1, c1, r2, c2) if r1 < r2 else (r2, c2, r1, c1)
                if mask & _FREE_MASKS[key] == 0:
                    violations.append(
                        f"support {mask:#06x}: pair ({r1},{c1}),({r2},{c2}) has no extension"
                    )
    return realizable, pairs, violations


@dataclass
class Lemma2Report:
    """Outcome of the exhaustive extension check over realizable supports."""

    note: str = (
        "conclusion checked over all order-4 (0,1) supports realizable by "
        "doubly stochastic matrices (unions of permutation supports); the "
        "extension property depends only on the support"
    )
    patterns_scanned: int = 0
    patterns_realizable: int = 0
    pairs_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.patterns_realizable >= 1 and not self.violations

    def render(self) -> str:
        lines = [
            f"note: {self.note}",
            f"patterns_scanned: {self.patterns_scanned}",
            f"patterns_realizable: {self.patterns_realizable}",
            f"pairs_checked: {self.pairs_checked}",
            f"violations: {len(self.violations)}",
        ]
        lines += [f"violation: {v}" for v in self.violations]
        return "\n".join(lines)


def verify_lemma2(jobs: int = 1) -> Lemma2Report:
    """Scan all 65536 order-4 (0,1) patterns; on every realizable support,
    check that each positive length-2 partial diagonal extends to length 3."""
    report = Lemma2Report(patterns_scanned=1 << 16)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        step = (1 << 16) // jobs + 1
        spans = [(s, min(s + step, 1 << 16)) for s in range(0, 1 << 16, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_lemma2_chunk, *zip(*spans)))
    else:
        results = [_lemma2_chunk(0, 1 << 16)]
    for realizable, pairs, violations in results:
        report.patterns_realizable += realizable
        report.pairs_checked += pairs
        report.violations.extend(violations)
    return report
