"""Backend parity: the compiled kernels must agree with the pure-Python
reference on counting, search order, and float permanents."""

import random

import pytest

from oracles import brute_permanent, brute_positive_diagonals
from polyperm import _kernels_py
from polyperm.gen import random_polystochastic
from polyperm.latin import z_matrix
from polyperm.matrix import MultiDimMatrix

speedups = pytest.importorskip("polyperm._speedups")


def random_support(rng, dim, order, density):
    size = order ** dim
    return bytes(1 if rng.random() < density else 0 for _ in range(size))


CASES = [(2, 3), (2, 4), (3, 3), (3, 4), (4, 2), (4, 4), (5, 2)]


@pytest.mark.parametrize("dim,order", CASES)
def test_count_parity(dim, order):
    rng = random.Random(dim * 100 + order)
    for density in (0.2, 0.5, 0.9):
        sup = random_support(rng, dim, order, density)
        assert speedups.count_positive_diagonals(
            sup, dim, order
        ) == _kernels_py.count_positive_diagonals(sup, dim, order)


@pytest.mark.parametrize("dim,order", CASES)
def test_find_parity(dim, order):
    rng = random.Random(dim * 200 + order)
    for density in (0.15, 0.4, 0.8):
        sup = random_support(rng, dim, order, density)
        assert speedups.find_positive_diagonal(
            sup, dim, order
        ) == _kernels_py.find_positive_diagonal(sup, dim, order)


def test_find_is_axis_major_minimum():
    rng = random.Random(9)
    for _ in range(30):
        m = random_polystochastic(3, 4, 1 + rng.randrange(3), rng.randrange(10 ** 6))
        sup = m.support()
        got = speedups.find_positive_diagonal(sup, 3, 4)
        all_pos = brute_positive_diagonals(m)
        assert got == (min(all_pos) if all_pos else None)


def test_count_against_bruteforce():
    for z, expected in [(z_matrix(3, 3), 3), (z_matrix(4, 2), 4), (z_matrix(5, 2), 0)]:
        sup = z.support()
        assert speedups.count_positive_diagonals(sup, z.dim, z.order) == expected
        assert _kernels_py.count_positive_diagonals(sup, z.dim, z.order) == expected


def test_permanent_float_parity():
    rng = random.Random(3)
    for dim, order in [(2, 4), (3, 3), (4, 3)]:
        size = order ** dim
        entries = [rng.random() if rng.random() < 0.7 else 0.0 for _ in range(size)]
        a = speedups.permanent_float(entries, dim, order)
        b = _kernels_py.permanent_float(entries, dim, order)
        assert a == pytest.approx(b, rel=1e-12)


def test_permanent_float_against_bruteforce():
    rng = random.Random(4)
    entries = [rng.random() for _ in range(27)]
    m = MultiDimMatrix(3, 3, entries, "float")
    expected = brute_permanent(m)
    assert speedups.permanent_float(entries, 3, 3) == pytest.approx(expected, rel=1e-12)


def test_dim_one_edge_cases():
    for impl in (speedups, _kernels_py):
        assert impl.count_positive_diagonals(bytes([1, 1, 1]), 1, 3) == 1
        assert impl.count_positive_diagonals(bytes([1, 0, 1]), 1, 3) == 0
        assert impl.find_positive_diagonal(bytes([1, 1]), 1, 2) == ()
        assert impl.find_positive_diagonal(bytes([1, 0]), 1, 2) is None
        assert impl.permanent_float([2.0, 0.5], 1, 2) == 1.0


def test_kernels_module_selection():
    from polyperm import kernels

    assert kernels.BACKEND in ("compiled", "python")
    assert kernels.count_positive_diagonals(z_matrix(3, 3).support(), 3, 3) == 3


def test_compiled_guard_rejects_oversized_shapes():
    with pytest.raises(ValueError):
        speedups.count_positive_diagonals(bytes(31), 1, 31)


def test_order_one_shapes():
    sup = bytes([1])
    for impl in (speedups, _kernels_py):
        assert impl.count_positive_diagonals(sup * 4, 4, 1) == 1
        assert impl.find_positive_diagonal(sup * 2, 2, 1) == ((0,),)
