import random
from fractions import Fraction

import pytest

from polyperm.birkhoff import (
    PERM_MASKS_4,
    BvNDecomposition,
    birkhoff_decompose,
    extend_partial_diagonal,
    iter_positive_diagonals_through,
    perm_matrix,
    positive_diagonal_through,
    support_is_realizable,
    verify_lemma2,
)
from polyperm.errors import InputError, ValidationError
from polyperm.gen import random_polystochastic
from polyperm.matrix import MultiDimMatrix


def half_identity_cycle(n=4):
    """(I + C)/2 for the n-cycle C."""
    entries = [
        Fraction(1, 2) if j == i or j == (i + 1) % n else Fraction(0)
        for i in range(n)
        for j in range(n)
    ]
    return MultiDimMatrix(2, n, entries)


def test_identity_decomposition():
    dec = birkhoff_decompose(MultiDimMatrix.identity2(4))
    assert dec.terms == [(Fraction(1), (0, 1, 2, 3))]


def test_constant_half():
    dec = birkhoff_decompose(MultiDimMatrix.constant(2, 2, Fraction(1, 2)))
    assert sorted(dec.terms) == [
        (Fraction(1, 2), (0, 1)),
        (Fraction(1, 2), (1, 0)),
    ]


def test_cyclic_thirds():
    dec = birkhoff_decompose(MultiDimMatrix.constant(2, 3, Fraction(1, 3)))
    assert len(dec) == 3
    assert all(w == Fraction(1, 3) for w, _ in dec.terms)
    assert {p for _, p in dec.terms} == {(0, 1, 2), (1, 2, 0), (2, 0, 1)}


def test_rejects_non_doubly_stochastic():
    with pytest.raises(ValidationError):
        birkhoff_decompose(MultiDimMatrix.zeros(2, 3))
    with pytest.raises(ValidationError):
        birkhoff_decompose(MultiDimMatrix.constant(3, 2, Fraction(1, 2)))


def test_exact_reconstruction_and_bound():
    for n in (2, 3, 4, 5, 6):
        for seed in range(8):
            m = random_polystochastic(2, n, 2 * n, seed)
            dec = birkhoff_decompose(m)
            assert dec.reconstruct() == m
            assert len(dec) <= n * n - 2 * n + 2
            assert sum(w for w, _ in dec.terms) == 1


def test_float_reconstruction():
    for n in (3, 4, 6):
        for seed in range(6):
            m = random_polystochastic(2, n, n + 2, seed).to_float()
            dec = birkhoff_decompose(m)
            rec = dec.reconstruct("float")
            err = max(abs(a - b) for a, b in zip(rec.entries, m.entries))
            assert err <= 1e-12
            assert len(dec) <= n * n - 2 * n + 2


def test_decomposition_deterministic():
    m = random_polystochastic(2, 5, 9, 77)
    assert birkhoff_decompose(m).terms == birkhoff_decompose(m).terms


def test_decomposition_text():
    dec = birkhoff_decompose(MultiDimMatrix.constant(2, 2, Fraction(1, 2)))
    text = dec.to_text()
    assert "theta 1/2 : perm 0 1" in text


def test_positive_diagonal_through_identity():
    diag = positive_diagonal_through(MultiDimMatrix.identity2(4), (2, 2))
    assert diag.indices() == ((0, 0), (1, 1), (2, 2), (3, 3))


def test_positive_diagonal_through_constant():
    m = MultiDimMatrix.constant(2, 4, Fraction(1, 4))
    diag = positive_diagonal_through(m, (0, 3))
    assert diag.perms[0] == (3, 0, 1, 2)  # lex-least among those fixing 0->3


def test_positive_diagonal_through_forced():
    m = half_identity_cycle()
    diag = positive_diagonal_through(m, (0, 1))
    assert set(diag.indices()) == {(0, 1), (1, 2), (2, 3), (3, 0)}
    with pytest.raises(InputError):
        positive_diagonal_through(m, (0, 2))


def test_iter_diagonals_through():
    m = MultiDimMatrix.constant(2, 3, Fraction(1, 3))
    diags = list(iter_positive_diagonals_through(m, (0, 0)))
    assert [d.perms[0] for d in diags] == [(0, 1, 2), (0, 2, 1)]


def test_extend_partial_diagonal_identity():
    ext = extend_partial_diagonal(MultiDimMatrix.identity2(4), [(0, 0), (1, 1)])
    assert ext.cells == ((0, 0), (1, 1), (2, 2))


def test_extend_partial_diagonal_cycle():
    ext = extend_partial_diagonal(half_identity_cycle(), [(0, 1), (1, 2)])
    assert ext.cells == ((0, 1), (1, 2), (2, 3))


def test_extend_validates_input():
    ident = MultiDimMatrix.identity2(4)
    with pytest.raises(InputError):
        extend_partial_diagonal(ident, [(0, 0)])
    with pytest.raises(InputError):
        extend_partial_diagonal(ident, [(0, 0), (1, 2)])
    with pytest.raises(InputError):
        extend_partial_diagonal(MultiDimMatrix.identity2(5), [(0, 0), (1, 1)])


def test_extension_exists_for_random_inputs():
    for seed in range(40):
        m = random_polystochastic(2, 4, 1 + seed % 6, seed)
        sup = m.support()
        cells = [(i, j) for i in range(4) for j in range(4) if sup[i * 4 + j]]
        for a in range(len(cells)):
            for b in range(a + 1, len(cells)):
                (r1, c1), (r2, c2) = cells[a], cells[b]
                if r1 == r2 or c1 == c2:
                    continue
                ext = extend_partial_diagonal(m, [(r1, c1), (r2, c2)])
                assert len(ext) == 3
                assert set([(r1, c1), (r2, c2)]).issubset(set(ext.cells))
                extra = next(c for c in ext.cells if c not in {(r1, c1), (r2, c2)})
                assert m[extra] > 0


def test_lemma2_report():
    rep = verify_lemma2()
    assert rep.passed
    assert rep.patterns_scanned == 65536
    assert rep.patterns_realizable >= 1
    assert not rep.violations
    # identity support is realizable, bare corners are not
    ident_mask = sum(1 << (i * 4 + i) for i in range(4))
    assert support_is_realizable(ident_mask)
    assert support_is_realizable(0xFFFF)
    assert not support_is_realizable(0b11)


def test_realizable_supports_admit_positive_combinations():
    rng = random.Random(5)
    sampled = 0
    mask = 0
    while sampled < 100:
        mask = rng.randrange(1, 1 << 16)
        if not support_is_realizable(mask):
            continue
        sampled += 1
        inside = [p for p in PERM_MASKS_4 if p & ~mask == 0]
        k = len(inside)
        acc = [Fraction(0)] * 16
        for pm in inside:
            for b in range(16):
                if pm >> b & 1:
                    acc[b] += Fraction(1, k)
        m = MultiDimMatrix(2, 4, acc)
        assert m.is_polystochastic()
        got = sum(1 << b for b in range(16) if acc[b] > 0)
        assert got == mask


def test_bvn_validation():
    with pytest.raises(ValidationError):
        BvNDecomposition(2, [(Fraction(1, 2), (0, 1))])
    with pytest.raises(ValidationError):
        BvNDecomposition(2, [(Fraction(3, 2), (0, 1)), (Fraction(-1, 2), (1, 0))])


def test_perm_matrix():
    p = perm_matrix((1, 0, 2))
    assert p[(0, 1)] == 1 and p[(0, 0)] == 0 and p.is_polystochastic()
