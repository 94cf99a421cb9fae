import math
from fractions import Fraction

import pytest

from oracles import brute_permanent, brute_permanent_2d, brute_positive_diagonals
from polyperm.diagonals import (
    Diagonal,
    PartialDiagonal,
    check_positive_partial_diagonal,
    count_positive_diagonals,
    enumerate_diagonals,
    find_positive_diagonal,
    is_positive_partial_diagonal,
    permanent,
)
from polyperm.errors import CapacityError, InputError
from polyperm.gen import random_latin, random_polystochastic
from polyperm.latin import cayley_table, to_matrix, z_matrix
from polyperm.matrix import MultiDimMatrix


def test_enumerate_counts():
    assert sum(1 for _ in enumerate_diagonals(2, 3)) == 6
    assert sum(1 for _ in enumerate_diagonals(4, 4)) == 13824
    assert sum(1 for _ in enumerate_diagonals(5, 2)) == 16
    assert sum(1 for _ in enumerate_diagonals(1, 5)) == 1


@pytest.mark.parametrize(
    "dim,order", [(d, n) for d in range(1, 6) for n in range(1, 5)]
)
def test_enumerate_no_duplicates(dim, order):
    seen = set()
    count = 0
    for diag in enumerate_diagonals(dim, order):
        seen.add(diag.perms)
        count += 1
    assert count == math.factorial(order) ** (dim - 1)
    assert len(seen) == count


def test_enumerate_capacity_guard():
    with pytest.raises(CapacityError):
        list(enumerate_diagonals(2, 30))


def test_permanent_identity():
    for n in (1, 2, 4, 5):
        assert permanent(MultiDimMatrix.identity2(n)) == 1


def test_permanent_z34_zero():
    assert permanent(z_matrix(3, 4)) == 0


def test_permanent_constant_third():
    m = MultiDimMatrix.constant(2, 3, Fraction(1, 3))
    assert permanent(m) == Fraction(2, 9)


def test_permanent_z42_against_bruteforce():
    z = z_matrix(4, 2)
    assert brute_permanent(z) == 4
    assert permanent(z) == 4


def test_permanent_matches_2d_oracle():
    import random

    rng = random.Random(4)
    for n in range(1, 6):
        rows = [[Fraction(rng.randint(0, 6), 7) for _ in range(n)] for _ in range(n)]
        m = MultiDimMatrix(2, n, [e for row in rows for e in row])
        assert permanent(m) == brute_permanent_2d(rows)
    # float mode against the same oracle
    rows = [[rng.random() for _ in range(4)] for _ in range(4)]
    m = MultiDimMatrix(2, 4, [e for row in rows for e in row], "float")
    assert permanent(m) == pytest.approx(brute_permanent_2d(rows), rel=1e-12)


def test_permanent_matches_bruteforce_multidim():
    for seed in range(4):
        m = random_polystochastic(3, 3, 2, seed)
        assert permanent(m) == brute_permanent(m)


def test_find_positive_identity():
    diag = find_positive_diagonal(MultiDimMatrix.identity2(4))
    assert diag.indices() == ((0, 0), (1, 1), (2, 2), (3, 3))


def test_find_positive_z52_none():
    assert find_positive_diagonal(z_matrix(5, 2)) is None


def test_find_positive_z33():
    z = z_matrix(3, 3)
    assert count_positive_diagonals(z) == 3
    diag = find_positive_diagonal(z)
    assert diag.indices() == ((0, 0, 0), (1, 1, 1), (2, 2, 2))
    # the group-table indicator variant, as an index-set example
    cay = to_matrix(cayley_table(3))
    diag = find_positive_diagonal(cay)
    assert set(diag.indices()) == {(0, 0, 0), (1, 1, 2), (2, 2, 1)}


def test_find_positive_is_lex_least():
    for seed in (0, 3, 8):
        m = random_polystochastic(3, 3, 2, seed)
        expected = min(brute_positive_diagonals(m))
        assert find_positive_diagonal(m).perms == expected


def test_count_examples():
    assert count_positive_diagonals(z_matrix(3, 4)) == 0
    assert count_positive_diagonals(MultiDimMatrix.constant(4, 4, Fraction(1, 4))) == 13824


def test_count_equals_permanent_on_01():
    for z in (z_matrix(3, 3), z_matrix(4, 2), z_matrix(4, 3), z_matrix(3, 4)):
        assert permanent(z) == count_positive_diagonals(z)
    for seed in range(5):
        ind = to_matrix(random_latin(2, 4, seed))
        assert permanent(ind) == count_positive_diagonals(ind)


def test_positive_permanent_iff_positive_diagonal():
    for seed in range(8):
        m = random_polystochastic(3, 3, 1 + seed % 3, seed)
        assert (permanent(m) > 0) == (find_positive_diagonal(m) is not None)


def test_permanent_relabel_invariance():
    m = random_polystochastic(3, 3, 3, seed=13)
    p = permanent(m)
    assert permanent(m.relabel(0, (2, 0, 1))) == p
    assert permanent(m.relabel(2, (1, 0, 2))) == p
    assert permanent(m.permute_axes((2, 0, 1))) == p
    assert permanent(m.permute_axes((1, 0, 2))) == p


def test_partial_diagonal_checks():
    ident = MultiDimMatrix.identity2(4)
    assert is_positive_partial_diagonal(ident, [(0, 0), (1, 1)])
    res = check_positive_partial_diagonal(ident, [(0, 0), (0, 1)])
    assert not res and res.reason == "not_pairwise_distinct"
    res = check_positive_partial_diagonal(ident, [(0, 0), (1, 2)])
    assert not res and res.reason == "nonpositive_entry"
    z = z_matrix(3, 4)
    assert is_positive_partial_diagonal(z, [(0, 0, 0), (1, 1, 2)])


def test_partial_diagonal_type():
    p = PartialDiagonal([(1, 2), (0, 0)])
    assert len(p) == 2
    with pytest.raises(InputError):
        PartialDiagonal([(0, 0), (0, 1)])


def test_diagonal_text_roundtrip():
    diag = find_positive_diagonal(z_matrix(4, 2))
    text = diag.to_text()
    assert text.startswith("diag (0,")
    assert Diagonal.from_text(text) == diag


def test_diagonal_from_indices_validation():
    with pytest.raises(InputError):
        Diagonal.from_indices([(0, 0), (0, 1)])
    d = Diagonal.from_indices([(1, 0), (0, 1)])
    assert d.perms == ((1, 0),)
