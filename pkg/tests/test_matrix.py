from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyperm.errors import CapacityError, InputError, ValidationError
from polyperm.gen import random_polystochastic
from polyperm.latin import z_matrix
from polyperm.matrix import (
    MultiDimMatrix,
    PlaneRef,
    dumps_pmat,
    loads_pmat,
)


def test_get_identity_entries():
    ident = MultiDimMatrix.identity2(3)
    assert ident[(1, 1)] == 1
    assert ident[(0, 1)] == 0


def test_get_z32_entry():
    z = z_matrix(3, 2)
    assert z[(1, 1, 0)] == 1
    ones = {idx for idx in z.indices() if z[idx] == 1}
    assert ones == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_get_out_of_range():
    ident = MultiDimMatrix.identity2(3)
    with pytest.raises(InputError):
        ident[(3, 0)]
    with pytest.raises(InputError):
        ident[(0, 0, 0)]


def test_line_sum_examples():
    ident = MultiDimMatrix.identity2(4)
    row0 = PlaneRef(2, {0: 0})
    assert ident.line_sum(row0) == 1
    zero = MultiDimMatrix.zeros(3, 2)
    assert zero.line_sum(PlaneRef(3, {0: 0, 1: 1})) == 0
    z = z_matrix(3, 4)
    assert z.line_sum(PlaneRef.from_pattern((0, 0, "*"))) == 1


def test_line_sum_requires_line():
    ident = MultiDimMatrix.identity2(4)
    with pytest.raises(InputError):
        ident.line_sum(PlaneRef(2, {}))


def test_line_count():
    z = z_matrix(3, 4)
    assert sum(1 for _ in z.lines()) == 3 * 4 ** 2


def test_every_line_of_z_sums_to_one():
    z = z_matrix(4, 3)
    assert all(z.line_sum(line) == 1 for line in z.lines())


def test_is_polystochastic():
    assert z_matrix(3, 4).is_polystochastic()
    assert MultiDimMatrix.identity2(4).is_polystochastic()
    assert not MultiDimMatrix.zeros(2, 3).is_polystochastic()


def test_is_polystochastic_float_mode():
    m = z_matrix(3, 4).to_float()
    assert m.is_polystochastic()
    bent = MultiDimMatrix(2, 2, [0.5, 0.5, 0.5, 0.5 + 1e-6], "float")
    assert not bent.is_polystochastic(eps=1e-9)
    assert bent.is_polystochastic(eps=1e-3)


def test_is_zero_one():
    assert z_matrix(5, 2).is_zero_one()
    assert MultiDimMatrix.identity2(3).is_zero_one()
    assert not MultiDimMatrix.constant(2, 2, Fraction(1, 2)).is_zero_one()


def test_extract_plane_b_block():
    m = random_polystochastic(4, 4, 3, seed=11)
    b = m.extract_plane(PlaneRef.from_pattern(("*", "*", 0, 0)))
    assert b.dim == 2
    for i in range(4):
        for j in range(4):
            assert b[(i, j)] == m[(i, j, 0, 0)]
    # a full-range 2-dimensional plane of a polystochastic matrix is doubly
    # stochastic
    assert b.is_polystochastic()


def test_extract_plane_line_and_identity():
    ident = MultiDimMatrix.identity2(4)
    line = ident.extract_plane(PlaneRef(2, {0: 2}))
    assert line.entries == (0, 0, 1, 0)
    again = ident.extract_plane(PlaneRef(2, {}))
    assert again == ident
    with pytest.raises(InputError):
        ident.extract_plane(PlaneRef(2, {0: 0, 1: 0}))


def test_relabel_swap_gives_antidiagonal():
    ident = MultiDimMatrix.identity2(2)
    swapped = ident.relabel(0, (1, 0))
    assert swapped.entries == (0, 1, 1, 0)


def test_relabel_identity_and_inverse():
    m = random_polystochastic(3, 3, 2, seed=5)
    assert m.relabel(1, (0, 1, 2)) == m
    perm = (2, 0, 1)
    inv = (1, 2, 0)
    assert m.relabel(1, perm).relabel(1, inv) == m


def test_relabel_z33_shift():
    z = z_matrix(3, 3)
    shifted = z.relabel(0, (1, 2, 0))  # i -> i+1 mod 3
    expected = MultiDimMatrix.from_function(
        3, 3, lambda idx: 1 if sum(idx) % 3 == 2 else 0
    )
    assert shifted == expected


def test_relabel_rejects_non_bijection():
    with pytest.raises(InputError):
        MultiDimMatrix.identity2(3).relabel(0, (0, 0, 1))


def test_relabel_preserves_polystochastic():
    m = random_polystochastic(3, 4, 3, seed=9)
    for axis in range(3):
        assert m.relabel(axis, (3, 1, 0, 2)).is_polystochastic()


def test_permute_axes_roundtrip():
    m = random_polystochastic(3, 3, 2, seed=1)
    t = m.permute_axes((1, 2, 0))
    assert t.permute_axes((2, 0, 1)) == m
    for idx in m.indices():
        assert t[idx] == m[(idx[1], idx[2], idx[0])]


def test_capacity_guard():
    with pytest.raises(CapacityError):
        MultiDimMatrix.zeros(30, 4)


def test_pmat_roundtrip_exact():
    m = random_polystochastic(3, 3, 4, seed=2)
    text = dumps_pmat(m)
    back = loads_pmat(text)
    assert back == m
    assert text.splitlines()[0] == "pmat 3 3 exact"


def test_pmat_roundtrip_float():
    m = random_polystochastic(2, 4, 3, seed=3).to_float()
    back = loads_pmat(dumps_pmat(m))
    assert back.entries == m.entries  # bit-exact via repr round trip


def test_pmat_rejects_garbage():
    with pytest.raises(ValidationError):
        loads_pmat("nope 2 2 exact 1 0 0 1")
    with pytest.raises(ValidationError):
        loads_pmat("pmat 2 2 exact 1 0 0")
    with pytest.raises(ValidationError):
        loads_pmat("pmat 2 2 exact 1 0 0 x")


@settings(max_examples=30, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=0, max_value=3, max_denominator=50),
        min_size=8,
        max_size=8,
    )
)
def test_pmat_roundtrip_random_fractions(entries):
    m = MultiDimMatrix(3, 2, entries, "exact")
    assert loads_pmat(dumps_pmat(m)) == m


def test_entries_normalized_to_fraction():
    m = MultiDimMatrix(1, 3, [1, 0, Fraction(1, 2)])
    assert all(isinstance(e, Fraction) for e in m.entries)


def test_support_float_negative_entry_rejected():
    m = MultiDimMatrix(1, 2, [0.5, -0.5], "float")
    with pytest.raises(ValidationError):
        m.support()


def test_support_threshold():
    m = MultiDimMatrix(1, 3, [0.5, 1e-14, 0.0], "float")
    assert m.support() == bytes([1, 0, 0])
