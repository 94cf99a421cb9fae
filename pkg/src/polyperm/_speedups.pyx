# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; mirrors `_kernels_py` (the import-time fallback).

Buffers are flat, row-major with the last coordinate fastest.  Guards: the
callers cap work at ~1e9 diagonals, so dim <= 32 and order <= 30 are ample.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"

cdef int MAX_DIM = 32


cdef bytes _prefix_blob(const unsigned char[::1] support, int dim, int order,
                        long* bases):
    """Concatenated prefix tables; tables[L] at bases[L] has order**(L+1)
    bytes and marks prefixes owning at least one positive completion."""
    cdef long total = 0
    cdef long size = 1
    cdef int level
    for level in range(dim):
        size *= order
        bases[level] = total
        total += size
    blob = bytearray(total)
    cdef unsigned char[::1] view = blob
    cdef long off, base
    cdef int c
    size = 1
    for level in range(dim):
        size *= order
    # deepest level copies the support
    base = bases[dim - 1]
    for off in range(size):
        view[base + off] = support[off]
    for level in range(dim - 2, -1, -1):
        size = size // order
        base = bases[level]
        for off in range(size):
            for c in range(order):
                if view[bases[level + 1] + off * order + c]:
                    view[base + off] = 1
                    break
    return bytes(blob)


cdef long _count_rec(const unsigned char* pref, const long* bases,
                     unsigned int* used, int d, int n,
                     int i, int axis, long off) noexcept:
    cdef long total = 0
    cdef long base = off * n
    cdef const unsigned char* table = pref + bases[axis]
    cdef int c
    cdef unsigned int bit
    if axis + 1 == d:
        for c in range(n):
            bit = 1u << c
            if used[axis] & bit or not table[base + c]:
                continue
            if i + 1 == n:
                total += 1
            else:
                used[axis] |= bit
                total += _count_rec(pref, bases, used, d, n, i + 1, 1, i + 1)
                used[axis] ^= bit
    else:
        for c in range(n):
            bit = 1u << c
            if used[axis] & bit or not table[base + c]:
                continue
            used[axis] |= bit
            total += _count_rec(pref, bases, used, d, n, i, axis + 1, base + c)
            used[axis] ^= bit
    return total


def count_positive_diagonals(const unsigned char[::1] support, int dim, int order):
    """Number of diagonals whose cells are all marked positive in `support`."""
    cdef int i
    if dim > MAX_DIM or order > 30:
        raise ValueError("kernel guard: dim <= 32 and order <= 30 required")
    if dim == 1:
        for i in range(order):
            if not support[i]:
                return 0
        return 1
    cdef long bases[32]
    blob = _prefix_blob(support, dim, order, bases)
    cdef const unsigned char[::1] pref = blob
    cdef unsigned int used[32]
    for i in range(dim):
        used[i] = 0
    return _count_rec(&pref[0], bases, used, dim, order, 0, 1, 0)


cdef bint _find_rec(const unsigned char* pref, const long* bases,
                    unsigned int* used, long* offs, int* result,
                    int d, int n, int axis, int i) noexcept:
    if i == n:
        axis += 1
        i = 0
    if axis == d:
        return 1
    cdef const unsigned char* table = pref + bases[axis]
    cdef long base = offs[i] * n
    cdef long saved = offs[i]
    cdef int c
    cdef unsigned int bit
    for c in range(n):
        bit = 1u << c
        if used[axis] & bit or not table[base + c]:
            continue
        used[axis] |= bit
        offs[i] = base + c
        result[(axis - 1) * n + i] = c
        if _find_rec(pref, bases, used, offs, result, d, n, axis, i + 1):
            return 1
        used[axis] ^= bit
        offs[i] = saved
    return 0


def find_positive_diagonal(const unsigned char[::1] support, int dim, int order):
    """Lexicographically least positive diagonal in permutation-tuple order,
    as a tuple of (dim-1) permutations, or None."""
    cdef int i, a
    if dim > MAX_DIM or order > 30:
        raise ValueError("kernel guard: dim <= 32 and order <= 30 required")
    if dim == 1:
        for i in range(order):
            if not support[i]:
                return None
        return ()
    cdef long bases[32]
    blob = _prefix_blob(support, dim, order, bases)
    cdef const unsigned char[::1] pref = blob
    cdef unsigned int used[32]
    for i in range(dim):
        used[i] = 0
    cdef long* offs = <long*> malloc(order * sizeof(long))
    cdef int* result = <int*> malloc((dim - 1) * order * sizeof(int))
    if offs == NULL or result == NULL:
        free(offs)
        free(result)
        raise MemoryError()
    for i in range(order):
        offs[i] = i
    try:
        if not _find_rec(&pref[0], bases, used, offs, result, dim, order, 1, 0):
            return None
        return tuple(
            tuple(result[a * order + i] for i in range(order))
            for a in range(dim - 1)
        )
    finally:
        free(offs)
        free(result)


cdef double _perm_rec(const double* entries, unsigned int* used,
                      int d, int n, int i, int axis, long off,
                      double prod) noexcept:
    cdef double total = 0.0
    cdef double p
    cdef long base = off * n
    cdef int c
    cdef unsigned int bit
    for c in range(n):
        bit = 1u << c
        if used[axis] & bit:
            continue
        if axis + 1 == d:
            p = prod * entries[base + c]
            if p == 0.0:
                continue
            if i + 1 == n:
                total += p
            else:
                used[axis] |= bit
                total += _perm_rec(entries, used, d, n, i + 1, 1, i + 1, p)
                used[axis] ^= bit
        else:
            used[axis] |= bit
            total += _perm_rec(entries, used, d, n, i, axis + 1, base + c, prod)
            used[axis] ^= bit
    return total


def permanent_float(entries, int dim, int order):
    """Permanent of a float matrix by straight diagonal enumeration."""
    cdef int i
    if dim > MAX_DIM or order > 30:
        raise ValueError("kernel guard: dim <= 32 and order <= 30 required")
    import array
    buf = array.array("d", entries)
    cdef double[::1] view = buf
    cdef double prod
    if dim == 1:
        prod = 1.0
        for i in range(order):
            prod *= view[i]
        return prod
    cdef unsigned int used[32]
    for i in range(dim):
        used[i] = 0
    return _perm_rec(&view[0], used, dim, order, 0, 1, 0, 1.0)
