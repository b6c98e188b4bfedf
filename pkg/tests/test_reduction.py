"""Minimal reductions, Valabrega-Valla, Itoh, and Sally tables."""

import pytest
from math import comb

from hilbertsally.closure import MonomialIdeal
from hilbertsally.errors import HypothesisViolation
from hilbertsally.filtration import Filtration
from hilbertsally.hilbert import build_hilbert_data
from hilbertsally.ideals import Ideal, ideal_product, ideal_sum
from hilbertsally.poly import Ring, parse_polynomial
from hilbertsally.reduction import (
    SplitMix64,
    check_itoh,
    find_minimal_reduction,
    sally_lengths,
    valabrega_valla,
)

R = Ring(("x", "y"))


def P(t):
    return parse_polynomial(t, R)


def pipeline(F, seed=1, N=7, explicit=None, levels=2, direct_window=None):
    red = find_minimal_reduction(F, seed, N, explicit_J=explicit)
    hd = build_hilbert_data(F, N, red.r)
    check_itoh(F, red)
    valabrega_valla(F, red)
    tab = sally_lengths(F, red, levels, N, hd, direct_window=direct_window)
    return red, hd, tab


def test_maximal_ideal_reduction_is_trivial():
    F = Filtration.adic(Ideal.maximal(R))
    red, hd, tab = pipeline(F, seed=3)
    assert red.r == 0
    assert red.local_colength == 1
    assert red.itoh_ok and red.cm_verdict
    assert all(v == 0 for v in tab.s)
    assert tab.l2 == 0 and tab.delta == 0


def test_normal_cubics_with_explicit_reduction():
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(3, 0), (0, 3)]))
    J = Ideal(R, [P("x^3"), P("y^3")])
    red, hd, tab = pipeline(F, explicit=J)
    assert red.r == 1
    assert red.local_colength == 9 and red.junk == 0
    assert red.itoh_ok is True and red.cm_verdict is True
    assert all(v == 0 for v in tab.s)
    assert all(v == 0 for v in tab.c[2])
    assert tab.delta == 0


def test_explicit_reduction_wrong_size_rejected():
    F = Filtration.adic(Ideal.maximal(R))
    bad = Ideal(R, [P("x")])
    with pytest.raises(HypothesisViolation):
        find_minimal_reduction(F, 1, 6, explicit_J=bad)


def test_seed_determinism_and_l2_independence():
    base = Ideal(R, [P("x^4"), P("x^3*y"), P("y^4")])
    F = Filtration.adic(base)
    red_a, hd_a, tab_a = pipeline(F, seed=11, N=8)
    red_b, hd_b, tab_b = pipeline(F, seed=12, N=8)
    red_c = find_minimal_reduction(F, 11, 8)
    # identical seeds identical draws
    assert red_a.coefficient_matrix == red_c.coefficient_matrix
    # different seeds, same invariants
    assert red_a.r == red_b.r
    assert tab_a.l2 == tab_b.l2
    assert tab_a.delta == tab_b.delta
    assert hd_a.coefficients == hd_b.coefficients


def test_l2_closed_form_and_product_length_identity():
    base = Ideal(R, [P("x^4"), P("x^3*y"), P("y^4")])
    F = Filtration.adic(base)
    red, hd, tab = pipeline(F, seed=11, N=8)
    e0 = hd.coefficients[0]
    l1 = hd.lengths[0]
    lI1_I2 = F.ideal_at(2).colength() - F.ideal_at(1).colength()
    assert tab.l2 == e0 + (2 - 1) * l1 - lI1_I2
    # l(R/J I_1) = e0 + d * l(R/I_1): the Koszul splitting of J/J I_1
    jl1 = hd.lengths[1] + tab.s[1]
    assert jl1 == e0 + 2 * l1


def test_junk_constant_accounting_against_local_products():
    # single products through the raw reduction agree with products
    # through the certified m-primary component
    base = Ideal(R, [P("x^4"), P("x^3*y"), P("y^4")])
    F = Filtration.adic(base)
    red = find_minimal_reduction(F, 5, 8)
    for n in (1, 2, 3):
        via_local = ideal_product(red.J_local, F.ideal_at(n)).colength()
        assert via_local == F.ideal_at(n + 1).colength() + red.diag_at(F, n)


def test_sally_additivity_and_lemma_freeness():
    base = Ideal(R, [P("x^4"), P("x^3*y"), P("y^4")])
    F = Filtration.adic(base)
    red, hd, tab = pipeline(F, seed=11, N=8)
    d = 2
    for lev in (1, 2):
        for n in range(0, tab.N + 1):
            assert tab.c[lev][n] == tab.l[lev][n] + tab.c[lev + 1][n]
            assert tab.l[lev][n] >= 0
        if tab.level_condition.get(lev):
            diag_lev = red.diag_at(F, lev)
            for n in range(lev, tab.N + 1):
                assert tab.l[lev][n] == diag_lev * comb(n - lev + d - 1, d - 1)


def test_vanishing_table_iff_small_reduction_number():
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(3, 0), (0, 3)]))
    red, hd, tab = pipeline(F, explicit=Ideal(R, [P("x^3"), P("y^3")]))
    for lev in (1, 2):
        vanishes = all(v == 0 for v in tab.c[lev])
        assert vanishes == (red.r <= lev)


def test_power_intersection_identity_with_reduction():
    # J^{n+1} cap J^n I_2 = J^{n+1} I_1 whenever Itoh's condition holds,
    # and it holds automatically for normal filtrations
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(4, 0), (3, 1), (0, 4)]))
    red, hd, tab = pipeline(F, seed=11, N=8)
    assert red.itoh_ok
    Jl = red.J_local
    I1, I2 = F.ideal_at(1), F.ideal_at(2)
    Jpow = Jl
    for n in range(0, 3):
        Jnext = ideal_product(Jpow, Jl)  # J^{n+1}
        lhs_b = ideal_product(Jpow, I2)  # J^n I_2
        rhs = ideal_product(Jnext, I1)  # J^{n+1} I_1
        inter = (
            Jnext.colength() + lhs_b.colength() - ideal_sum(Jnext, lhs_b).colength()
        )
        assert inter == rhs.colength()
        Jpow = Jnext


def test_splitmix_is_stable():
    rng = SplitMix64(1)
    first = [rng.below(32003) for _ in range(4)]
    rng2 = SplitMix64(1)
    assert first == [rng2.below(32003) for _ in range(4)]
    assert first != [SplitMix64(2).below(32003) for _ in range(4)]
