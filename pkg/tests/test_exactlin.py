from fractions import Fraction

import pytest

from tilehull.exactlin import (
    LatticeZn,
    RatMatrix,
    characteristic_polynomial,
    column_space_basis,
    determinant,
    eventual_rank,
    extend_to_basis,
    invariant_factors,
    inverse,
    lattice_from_generators,
    rank_q,
    smith_normal_form,
    xgcd,
)

PAIRED_5x5 = RatMatrix.from_rows([
    [1, 1, 0, 0, 1],
    [1, 1, 0, 0, 1],
    [0, 0, 1, 1, 1],
    [0, 0, 1, 1, 1],
    [1, 1, 1, 1, 1],
])


def test_rank_identity_and_zero():
    assert rank_q(RatMatrix.identity(3)) == 3
    assert rank_q(RatMatrix.zeros(2, 2)) == 0
    assert rank_q(RatMatrix.zeros(0, 4)) == 0


def test_rank_of_repeated_rows():
    assert rank_q(PAIRED_5x5) == 3


def test_rank_with_fractions():
    m = RatMatrix.from_rows([[Fraction(1, 2), 1], [1, 2]])
    assert rank_q(m) == 1


@pytest.mark.parametrize("rows, diag", [
    ([[2, 0], [0, 2]], (2, 2)),
    ([[1, 1], [1, 0]], (1, 1)),
    ([[2, 0], [0, 3]], (1, 6)),
])
def test_smith_normal_form(rows, diag):
    m = RatMatrix.from_rows(rows)
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert tuple(abs(int(d[i, i])) for i in range(2)) == diag
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1


def test_smith_needs_integers():
    with pytest.raises(ValueError):
        smith_normal_form(RatMatrix.from_rows([[Fraction(1, 2)]]))


def test_invariant_factors_skip_zeros():
    assert invariant_factors(RatMatrix.from_rows([[2, 4], [4, 8]])) == (2,)


def test_eventual_rank():
    assert eventual_rank(RatMatrix.identity(4)) == 4
    assert eventual_rank(RatMatrix.from_rows([[0, 1], [0, 0]])) == 0
    # gamma1 -> gamma3, gamma2 -> gamma3, gamma3 -> gamma1 + gamma2 + gamma3, as columns
    m = RatMatrix.from_columns([[0, 0, 1], [0, 0, 1], [1, 1, 1]])
    assert eventual_rank(m) == 2


def test_eventual_rank_of_empty():
    assert eventual_rank(RatMatrix.zeros(0, 0)) == 0


def test_characteristic_polynomial():
    assert characteristic_polynomial(RatMatrix.from_rows([[1, 1], [1, 0]])) == (1, -1, -1)
    assert characteristic_polynomial(PAIRED_5x5) == (1, -5, 4, 4, 0, 0)


def test_inverse_and_power():
    m = RatMatrix.from_rows([[2, 1], [1, 1]])
    assert m @ inverse(m) == RatMatrix.identity(2)
    assert m.power(0) == RatMatrix.identity(2)
    assert m.power(3) == m @ m @ m


def test_shape_errors():
    with pytest.raises(ValueError):
        RatMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ValueError):
        RatMatrix.identity(2) @ RatMatrix.identity(3)
    with pytest.raises(ValueError):
        determinant(RatMatrix.zeros(2, 3))


def test_column_space_and_extension():
    m = RatMatrix.from_rows([[1, 2, 0], [2, 4, 0], [0, 0, 1]])
    cols = column_space_basis(m)
    assert len(cols) == 2
    full = extend_to_basis(cols, 3)
    assert len(full) == 3
    assert rank_q(RatMatrix.from_columns(full)) == 3


def test_extend_rejects_dependent_vectors():
    with pytest.raises(ValueError):
        extend_to_basis([(1, 1), (2, 2)], 2)


def test_xgcd():
    x, y, g = xgcd(12, 18)
    assert x * 12 + y * 18 == g and abs(g) == 6


def test_lattice_examples():
    lat = lattice_from_generators(2, [(2, 0), (0, 2)])
    assert lat.rank == 2 and lat.index == 4
    one = lattice_from_generators(1, [(2,)])
    assert one.rank == 1 and one.index == 2
    assert (4,) in one and (3,) not in one
    empty = lattice_from_generators(3, [])
    assert empty.rank == 0 and empty.index is None


def test_lattice_canonical_form():
    a = lattice_from_generators(2, [(2, 4), (0, 6)])
    b = lattice_from_generators(2, [(2, -2), (2, 4)])
    assert a == b
    assert a.index == 12


def test_lattice_membership_of_generators():
    gens = [(3, 1, 0), (0, 2, 5), (6, 0, -5)]
    lat = lattice_from_generators(3, gens)
    for g in gens:
        assert g in lat
    assert (1, 0, 0) not in lat
    assert (Fraction(1, 2), 0, 0) not in lat


@pytest.mark.parametrize("n", range(6))
def test_index_of_scaled_square_lattice(n):
    lat = lattice_from_generators(2, [(1, 0), (0, 1)]).scaled(2 ** n)
    assert lat.index == 4 ** n


def test_sublattice():
    big = lattice_from_generators(2, [(1, 0), (0, 1)])
    small = lattice_from_generators(2, [(2, 0), (1, 3)])
    assert small.is_sublattice_of(big)
    assert not big.is_sublattice_of(small)
    assert isinstance(small, LatticeZn)
