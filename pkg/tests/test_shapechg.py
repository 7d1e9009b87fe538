import pytest

from tilehull.apcx import ap_for
from tilehull.errors import ShapeError
from tilehull.exactlin import determinant
from tilehull.formal_num import FormalBasis, parse_formal, rank_of_values
from tilehull.retmod import (
    LengthAssignment,
    limit_rank,
    pullback,
    rational_lengths,
    symbolic_lengths,
    unit_lengths,
)
from tilehull.shapechg import (
    check_theorem2,
    coboundary,
    cocycle_basis,
    cohomologous,
    evaluate_on_cycles,
    genericity_sweep,
    predicted_limit_rank,
    reparametrize,
    synth_generic,
)


def _plus(a: LengthAssignment, b: LengthAssignment) -> LengthAssignment:
    basis = a.basis.extend(b.basis.symbols)
    return LengthAssignment(a.alphabet, tuple(x.rebase(basis) + y.rebase(basis)
                                              for x, y in zip(a.lengths, b.lengths)))


def test_zero_coboundary(tm):
    g, _ = ap_for(tm, 1)
    zero = FormalBasis.of().zero()
    cob = coboundary(g, [zero] * g.vertex_count)
    assert all(v.is_zero for v in cob.lengths)


def test_coboundary_on_a_wedge_of_circles(fib):
    g, _ = ap_for(fib, 0)
    assert g.vertex_count == 1
    cob = coboundary(g, [parse_formal("7 + t1")])
    assert all(v.is_zero for v in cob.lengths)


def test_indicator_coboundary_vanishes_on_cycles(tm):
    g, _ = ap_for(tm, 1)
    cob = coboundary(g, {0: FormalBasis.of().rational(1)})
    values = {v.rational_value() for v in cob.lengths}
    assert values <= {-1, 0, 1} and values != {0}
    assert all(v.is_zero for v in evaluate_on_cycles(cob, g))


def test_coboundary_needs_every_vertex(tm):
    g, _ = ap_for(tm, 1)
    with pytest.raises(ValueError):
        coboundary(g, [FormalBasis.of().zero()])


def test_cohomologous(tm):
    g, _ = ap_for(tm, 1)
    L = symbolic_lengths(g.collared.codes)
    assert cohomologous(L, L, g)
    f = {v: L.basis.symbol("t1") * v for v in range(g.vertex_count)}
    assert cohomologous(L, _plus(L, coboundary(g, f)), g)


def test_perturbing_a_loop_edge_changes_the_class(tm):
    g, _ = ap_for(tm, 1)
    unit = unit_lengths(g.collared.codes)
    bumped = list(unit.lengths)
    e = g.non_tree[0]
    bumped[e] = bumped[e] + 1
    assert not cohomologous(unit, LengthAssignment(unit.alphabet, tuple(bumped)), g)


def test_evaluate_on_cycles(fib, tm):
    g, _ = ap_for(fib, 0)
    assert rank_of_values(evaluate_on_cycles(symbolic_lengths(g.collared.codes), g)) == 2
    g, _ = ap_for(tm, 1)
    values = evaluate_on_cycles(unit_lengths(g.collared.codes), g)
    assert all(v.is_rational for v in values)
    assert rank_of_values(values) == 1
    zero = LengthAssignment(g.collared.codes, tuple(FormalBasis.of().zero() for _ in g.collared.codes))
    assert all(v.is_zero for v in evaluate_on_cycles(zero, g))


@pytest.mark.parametrize("name, lengths, rank", [
    ("tm", "symbolic", 2),
    ("tm", "unit", 1),
    ("tem", "symbolic", 3),
])
def test_predicted_limit_rank(request, name, lengths, rank):
    g, m = ap_for(request.getfixturevalue(name), 1)
    L = symbolic_lengths(g.collared.codes) if lengths == "symbolic" else unit_lengths(g.collared.codes)
    assert predicted_limit_rank(L, g, m) == rank


def test_mld_invariance(tem):
    g, m = ap_for(tem, 1)
    L1 = symbolic_lengths(g.collared.codes)
    f = {v: L1.basis.symbol(f"t{v + 1}") - 3 for v in range(g.vertex_count)}
    L2 = _plus(L1, coboundary(g, f))
    assert cohomologous(L1, L2, g)
    assert predicted_limit_rank(L1, g, m) == predicted_limit_rank(L2, g, m)
    v1 = evaluate_on_cycles(L1, g)
    v2 = [v.rebase(L2.basis) for v in evaluate_on_cycles(L2, g)]
    assert [v.rebase(L2.basis) for v in v1] == v2


def test_cocycle_basis_is_invertible(tm, tem):
    for s in (tm, tem):
        g, m = ap_for(s, 1)
        cb = cocycle_basis(g, m)
        assert all(isinstance(x, int) for f in cb.functionals for x in f)
        assert determinant(cb.evaluation_matrix(g)) != 0


@pytest.mark.parametrize("name, ell", [("tm", 2), ("tem", 3)])
def test_synth_generic_reaches_ell(request, name, ell):
    g, m = ap_for(request.getfixturevalue(name), 1)
    L = synth_generic(g, unit_lengths(g.collared.codes), ell, m)
    assert predicted_limit_rank(L, g, m) >= ell
    assert L.basis.symbols[:1] == ("1",)
    assert {f"tau{i + 1}" for i in range(ell)} <= set(L.basis.symbols)


def test_synth_generic_edge_cases(tm):
    g, m = ap_for(tm, 1)
    base = unit_lengths(g.collared.codes)
    assert synth_generic(g, base, 0, m) is base
    with pytest.raises(ShapeError):
        synth_generic(g, base, 3, m)
    with pytest.raises(ShapeError):
        synth_generic(g, symbolic_lengths(g.collared.codes), 1, m)


def test_reparametrize():
    L = LengthAssignment(("A", "B"), (parse_formal("1 + 2*tau1"), parse_formal("1 + 2*tau1")))
    out = reparametrize(L, {"tau1": parse_formal("u1 - 1/2")})
    assert out.of("A") == parse_formal("2*u1")


def test_genericity_sweep(tem):
    g, m = ap_for(tem, 1)
    L = synth_generic(g, unit_lengths(g.collared.codes), 3, m)
    trials = genericity_sweep(g, m, L, 3, trials=20, seed=7)
    good = [t for t in trials if t.rank >= 3]
    assert len(good) >= 19
    assert all(t.singular for t in trials if t.rank < 3)


def test_predicted_matches_enumeration(tm, tem, small_scan):
    for s, rank in ((tm, 2), (tem, 3)):
        g, m = ap_for(s, 1)
        sub = g.collared.substitution
        for L in (symbolic_lengths(sub.alphabet), pullback(rational_lengths(s.alphabet, [2, 5]), g.collared)):
            assert predicted_limit_rank(L, g, m) == limit_rank(sub, L, (1, 4), small_scan)


@pytest.mark.parametrize("name, radius, ell, cap", [
    ("fib", 0, 2, 10),
    ("tm", 1, 2, 10),
    ("tem", 1, 3, 8),
])
def test_theorem2(request, small_scan, name, radius, ell, cap):
    report = check_theorem2(request.getfixturevalue(name), radius, ell, cap, small_scan)
    assert report.passed
    assert report.detail["min_rank"] >= ell
    assert report.detail["failures"] == []
    assert report.cech_rank == ell
