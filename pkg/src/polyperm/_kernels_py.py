"""Pure-Python reference implementations of the hot search kernels.

Mirrors `_speedups.pyx` exactly; `polyperm.kernels` picks whichever is
available at import time.  Inputs are flat buffers in the row-major layout of
`MultiDimMatrix` (last coordinate fastest).
"""

BACKEND = "python"


def _prefix_tables(support, dim, order):
    """tables[L] marks length-(L+1) index prefixes with a positive completion."""
    tables = [None] * dim
    tables[dim - 1] = support
    for level in range(dim - 2, -1, -1):
        nxt = tables[level + 1]
        size = order ** (level + 1)
        cur = bytearray(size)
        for off in range(size):
            base = off * order
            for c in range(order):
                if nxt[base + c]:
                    cur[off] = 1
                    break
        tables[level] = bytes(cur)
    return tables


def count_positive_diagonals(support, dim, order):
    """Number of diagonals whose cells are all marked positive in `support`."""
    n, d = order, dim
    if d == 1:
        return 1 if all(support[i] for i in range(n)) else 0
    tables = _prefix_tables(support, d, n)
    used = [0] * d  # bitmask of coordinate values taken, per axis 1..d-1

    def rec(i, axis, off):
        # choosing the coordinate of member i along `axis`; off indexes the
        # prefix (i, c_1, ..., c_{axis-1})
        table = tables[axis]
        base = off * n
        total = 0
        nxt = axis + 1
        if nxt == d:
            for c in range(n):
                bit = 1 << c
                if used[axis] & bit or not table[base + c]:
                    continue
                if i + 1 == n:
                    total += 1
                else:
                    used[axis] |= bit
                    total += rec(i + 1, 1, i + 1)
                    used[axis] ^= bit
        else:
            for c in range(n):
                bit = 1 << c
                if used[axis] & bit or not table[base + c]:
                    continue
                used[axis] |= bit
                total += rec(i, nxt, base + c)
                used[axis] ^= bit
        return total

    return rec(0, 1, 0)


def find_positive_diagonal(support, dim, order):
    """Lexicographically least positive diagonal in permutation-tuple order.

    Variables are assigned axis-major: all of sigma_2, then sigma_3, ...,
    values ascending, so the first complete assignment is the minimum.
    Returns a tuple of (dim-1) permutations, or None.
    """
    n, d = order, dim
    if d == 1:
        return () if all(support[i] for i in range(n)) else None
    tables = _prefix_tables(support, d, n)
    used = [0] * d
    offs = list(range(n))  # per-member prefix offsets at the current axis
    result = [[0] * n for _ in range(d - 1)]

    def rec(axis, i):
        if i == n:
            axis += 1
            i = 0
        if axis == d:
            return True
        table = tables[axis]
        base = offs[i] * n
        saved = offs[i]
        for c in range(n):
            bit = 1 << c
            if used[axis] & bit or not table[base + c]:
                continue
            used[axis] |= bit
            offs[i] = base + c
            result[axis - 1][i] = c
            if rec(axis, i + 1):
                return True
            used[axis] ^= bit
            offs[i] = saved
        return False

    if rec(1, 0):
        return tuple(tuple(p) for p in result)
    return None


def permanent_float(entries, dim, order):
    """Permanent of a float matrix by straight diagonal enumeration."""
    n, d = order, dim
    if d == 1:
        prod = 1.0
        for i in range(n):
            prod *= entries[i]
        return prod
    used = [0] * d

    def rec(i, axis, off, prod):
        base = off * n
        total = 0.0
        nxt = axis + 1
        for c in range(n):
            bit = 1 << c
            if used[axis] & bit:
                continue
            if nxt == d:
                p = prod * entries[base + c]
                if p == 0.0:
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

    return rec(0, 1, 0, 1.0)
