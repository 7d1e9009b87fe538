from fractions import Fraction

import pytest

from tilehull.errors import BasisMismatchError, FormalArithmeticError
from tilehull.formal_num import (
    I,
    ONE,
    SQRT3,
    TAU,
    XI,
    FormalBasis,
    FormalComplex,
    complex_mul,
    format_formal,
    parse_complex,
    parse_formal,
    parse_terms,
    rank_of_values,
    span_module,
    specialize,
)


def test_parse_and_format():
    v = parse_formal("3/2 + t1 - t2/4")
    assert v.basis.symbols == ("1", "t1", "t2")
    assert v.coeffs == (Fraction(3, 2), Fraction(1), Fraction(-1, 4))
    assert format_formal(v) == "3/2 + t1 - 1/4*t2"


def test_parse_terms_collects_repeats():
    assert parse_terms("t1 + 2*t1 - 1") == {"t1": Fraction(3), "1": Fraction(-1)}


@pytest.mark.parametrize("bad", ["", "+", "t1 t2", "3 $"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_formal(bad)


def test_arithmetic_and_rationals():
    b = FormalBasis.of("t1")
    t = b.symbol("t1")
    v = t * 2 + 1
    assert v.coefficient("t1") == 2 and v.coefficient("1") == 1
    assert (v - v).is_zero
    assert b.rational(5).rational_value() == 5


def test_product_of_symbols_is_refused():
    b = FormalBasis.of("t1", "t2")
    with pytest.raises(FormalArithmeticError):
        b.symbol("t1") * b.symbol("t2")


def test_bases_must_match():
    a = FormalBasis.of("t1").symbol("t1")
    c = FormalBasis.of("t2").symbol("t2")
    with pytest.raises(BasisMismatchError):
        a + c


def test_rank_of_values():
    b = FormalBasis.of("t1", "t2")
    t1, t2 = b.symbol("t1"), b.symbol("t2")
    assert rank_of_values([t1, t2, t1 + t2]) == 2
    assert rank_of_values([b.rational(1), b.rational(3)]) == 1
    assert rank_of_values([]) == 0


def test_specialize():
    v = parse_formal("1 + 2*t1")
    assert specialize(v, {"t1": Fraction(1, 2)}).rational_value() == 2


def test_span_module_membership():
    b = FormalBasis.of()
    mod = span_module([b.rational(4), b.rational(6)])
    assert 2 in mod and 1 not in mod
    assert mod.rank == 1
    assert mod.describe() == "(2)Z"


def test_span_module_with_fractions():
    b = FormalBasis.of("t1")
    mod = span_module([b.rational(Fraction(1, 2)), b.symbol("t1")])
    assert b.rational(Fraction(3, 2)) in mod
    assert b.rational(Fraction(1, 3)) not in mod
    assert mod.rank == 2


def test_submodules():
    b = FormalBasis.of()
    small = span_module([b.rational(4)])
    big = span_module([b.rational(2)])
    assert small.is_submodule_of(big)
    assert not big.is_submodule_of(small)
    assert big.same_as(span_module([b.rational(6), b.rational(4)]))


def test_xi_is_a_sixth_root_of_unity():
    p = ONE
    for _ in range(6):
        p = complex_mul(p, XI)
    assert p == ONE
    assert complex_mul(XI, XI) == XI - ONE


def test_complex_units():
    assert complex_mul(I, I) == ONE.scale(-1)
    assert complex_mul(SQRT3, SQRT3) == ONE.scale(3)


def test_tau_squared_is_refused():
    with pytest.raises(FormalArithmeticError):
        complex_mul(TAU, TAU)


def test_parse_complex():
    assert parse_complex("2*i*sqrt3 - 1/2") == FormalComplex.of(one=Fraction(-1, 2), i_sqrt3=2)
    assert parse_complex("tau").carries_tau
    assert parse_complex("sqrt3").is_real
    with pytest.raises(ValueError):
        parse_complex("pi")
