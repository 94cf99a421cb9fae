"""Generators of test matrices: random latin hypercubes, exact polystochastic
convex combinations, and iterative line scaling toward polystochasticity.
"""

from __future__ import annotations

import random
from fractions import Fraction
import numpy as np

from .errors import CapacityError, ValidationError
from .latin import LatinHypercube
from .matrix import EPS, MultiDimMatrix

#: Randomized-backtracking guards (tested contract: d <= 3, n <= 6).
RANDOM_LATIN_LIMITS = {1: 16, 2: 12, 3: 8}


def random_latin(dim: int, order: int, seed: int) -> LatinHypercube:
    """Uniform-ish latin hypercube via backtracking with random value order.

    Deterministic for a given (dim, order, seed).
    """
    limit = RANDOM_LATIN_LIMITS.get(dim, 0)
    if order > limit:
        raise CapacityError(
            f"random_latin(dim={dim}, order={order}) exceeds the supported scope"
        )
    rng = random.Random(seed)
    n, d = order, dim
    size = n ** d
    # line ids per axis for each flat offset
    line_ids = []
    for axis in range(d):
        ids = []
        for off in range(size):
            idx = []
            o = off
            for _ in range(d):
                idx.append(o % n)
                o //= n
            idx.reverse()
            rest = idx[:axis] + idx[axis + 1:]
            lid = 0
            for a in rest:
                lid = lid * n + a
            ids.append(lid)
        line_ids.append(ids)
    masks = [[0] * (n ** (d - 1)) for _ in range(d)]
    cells = [0] * size

    def rec(off: int) -> bool:
        if off == size:
            return True
        lids = [line_ids[axis][off] for axis in range(d)]
        taken = 0
        for axis in range(d):
            taken |= masks[axis][lids[axis]]
        candidates = [s for s in range(n) if not taken >> s & 1]
        rng.shuffle(candidates)
        for sym in candidates:
            bit = 1 << sym
            cells[off] = sym
            for axis in range(d):
                masks[axis][lids[axis]] |= bit
            if rec(off + 1):
                return True
            for axis in range(d):
                masks[axis][lids[axis]] ^= bit
        return False

    if not rec(0):
        raise ValidationError("backtracking failed to produce a latin hypercube")
    return LatinHypercube(d, n, cells, validate=False)


def random_polystochastic(
    dim: int, order: int, k_terms: int, seed: int
) -> MultiDimMatrix:
    """Exact polystochastic matrix: a convex combination of k_terms latin
    hypercube indicators with random positive rational weights summing to 1.
    """
    if k_terms < 1:
        raise ValidationError("k_terms must be at least 1")
    rng = random.Random(seed)
    n = order
    size = n ** dim
    weights = [rng.randint(1, 999) for _ in range(k_terms)]
    total = sum(weights)
    acc = [0] * size
    for w in weights:
        cube = random_latin(dim - 1, n, rng.getrandbits(63))
        for off, sym in enumerate(cube.cells):
            acc[off * n + sym] += w
    entries = [Fraction(a, total) for a in acc]
    return MultiDimMatrix(dim, n, entries, "exact")


class SinkhornResult:
    """Scaled matrix plus convergence information."""

    __slots__ = ("matrix", "converged", "sweeps", "max_deviation")

    def __init__(self, matrix, converged, sweeps, max_deviation):
        self.matrix = matrix
        self.converged = converged
        self.sweeps = sweeps
        self.max_deviation = max_deviation

    def __iter__(self):
        return iter((self.matrix, self.converged))

    def __repr__(self):
        return (
            f"SinkhornResult(converged={self.converged}, sweeps={self.sweeps}, "
            f"max_deviation={self.max_deviation:.3g})"
        )


def sinkhorn_project(
    matrix: MultiDimMatrix,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    eps: float = EPS,
) -> SinkhornResult:
    """Repeatedly rescale every line to sum 1, sweeping the d axes in turn.

    Stops when all line sums are within tol of 1 (converged) or after
    max_iter sweeps (flagged, matrix still returned).  Zero entries never
    change status, and an all-zero line is a validation error.
    """
    n, d = matrix.order, matrix.dim
    arr = np.array([float(e) for e in matrix.entries], dtype=float)
    if (arr < -eps).any():
        raise ValidationError("matrix has negative entries")
    arr = arr.reshape([n] * d)
    support = arr > eps
    for axis in range(d):
        if (support.sum(axis=axis) == 0).any():
            raise ValidationError(f"a line along axis {axis} has no positive entry")

    def deviation() -> float:
        return max(float(np.abs(arr.sum(axis=ax) - 1.0).max()) for ax in range(d))

    dev = deviation()
    if dev <= tol:
        return SinkhornResult(matrix.to_float(), True, 0, dev)
    sweeps = 0
    while sweeps < max_iter:
        for axis in range(d):
            sums = arr.sum(axis=axis, keepdims=True)
            arr = arr / sums
        sweeps += 1
        dev = deviation()
        if dev <= tol:
            break
    out = MultiDimMatrix(d, n, arr.reshape(-1).tolist(), "float")
    return SinkhornResult(out, dev <= tol, sweeps, dev)
