"""Filtration kinds, caching, and admissibility checking."""

import pytest

from hilbertsally.closure import MonomialIdeal
from hilbertsally.errors import TableExhaustedError
from hilbertsally.filtration import Filtration, check_admissible, filtration_ideal
from hilbertsally.ideals import Ideal, ideal_equal, ideal_power
from hilbertsally.poly import Ring, parse_polynomial

R = Ring(("x", "y"))


def P(t):
    return parse_polynomial(t, R)


def test_adic_powers():
    F = Filtration.adic(Ideal.maximal(R))
    assert filtration_ideal(F, 0).colength() == 0
    m3 = filtration_ideal(F, 3)
    assert ideal_equal(m3, ideal_power(Ideal.maximal(R), 3))


def test_normal_monomial_entries():
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(3, 0), (0, 3)]))
    I1 = F.ideal_at(1)
    # the first entry is the closure, not the ideal itself
    assert I1.colength() == 6
    I2 = F.ideal_at(2)
    assert ideal_equal(I2, ideal_power(Ideal.maximal(R), 6))


def test_declared_normal_returns_plain_powers():
    base = Ideal(R, [P("x^2"), P("x*y"), P("y^3")])
    F = Filtration.declared_normal(base)
    assert F.normality_assumed
    assert ideal_equal(F.ideal_at(2), ideal_power(base, 2))


def test_cache_coherence():
    F = Filtration.adic(Ideal.maximal(R))
    a = F.ideal_at(4)
    b = F.ideal_at(4)
    assert a is b


def test_table_filtration_and_exhaustion():
    m = Ideal.maximal(R)
    F = Filtration.from_table(R, [m, ideal_power(m, 2), ideal_power(m, 3)])
    assert F.ideal_at(2).colength() == 3
    with pytest.raises(TableExhaustedError):
        F.ideal_at(4)


def test_admissibility_pass_adic():
    F = Filtration.adic(Ideal(R, [P("x^2"), P("y^2")]))
    assert check_admissible(F, 4).ok


def test_admissibility_pass_normal():
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(3, 0), (0, 3)]))
    assert check_admissible(F, 4).ok


def test_admissibility_violation_reported():
    m = Ideal.maximal(R)
    # I_2 not inside I_1: chain broken on purpose
    bad = Filtration.from_table(R, [ideal_power(m, 2), m, ideal_power(m, 3)])
    report = check_admissible(bad, 2)
    assert not report.ok
    assert any("I_2" in v for v in report.violations)


def test_descending_chain_property():
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(2, 0), (0, 3)]))
    from hilbertsally.ideals import ideal_contains

    for n in range(0, 4):
        assert ideal_contains(F.ideal_at(n), F.ideal_at(n + 1))
