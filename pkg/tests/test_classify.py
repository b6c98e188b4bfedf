"""Boundary-case classification and its consequence batteries."""

import pytest

from hilbertsally.classify import classify
from hilbertsally.closure import MonomialIdeal
from hilbertsally.errors import WindowTooSmallError
from hilbertsally.filtration import Filtration
from hilbertsally.hilbert import build_hilbert_data
from hilbertsally.ideals import Ideal
from hilbertsally.poly import Ring, parse_polynomial
from hilbertsally.reduction import (
    check_itoh,
    find_minimal_reduction,
    sally_lengths,
    valabrega_valla,
)

R = Ring(("x", "y"))


def P(t):
    return parse_polynomial(t, R)


def full_pipeline(F, seed=1, N=7, explicit=None):
    red = find_minimal_reduction(F, seed, N, explicit_J=explicit)
    hd = build_hilbert_data(F, N, red.r)
    check_itoh(F, red)
    valabrega_valla(F, red)
    tab = sally_lengths(F, red, 2, N, hd)
    return classify(F, red, hd, tab), red, hd, tab


def test_maximal_ideal_is_degenerate_r1():
    rep, red, hd, tab = full_pipeline(Filtration.adic(Ideal.maximal(R)), seed=3)
    assert rep.case == "R1"
    assert rep.depth == "CM"
    assert rep.coefficients == (1, 0, 0)
    assert rep.m is None


def test_normal_cubics_r1_battery():
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(3, 0), (0, 3)]))
    rep, red, hd, tab = full_pipeline(F, explicit=Ideal(R, [P("x^3"), P("y^3")]))
    assert rep.case == "R1"
    assert rep.cm_verdict is True
    assert rep.l2 == 0 and rep.delta == 0
    assert rep.numerator == (6, 3)
    names = [c.name for c in rep.checks]
    assert "series numerator (l1, e0-l1-l2, l2)" in names
    assert all(c.ok for c in rep.checks)


def test_case_assignment_is_seed_stable():
    F = Filtration.normal_monomial(R, MonomialIdeal(2, [(4, 0), (3, 1), (0, 4)]))
    reports = []
    for seed in (5, 6):
        rep, *_ = full_pipeline(F, seed=seed, N=8)
        reports.append(rep)
    a, b = reports
    assert a.case == b.case
    assert a.m == b.m
    assert a.coefficients == b.coefficients
    assert a.l2 == b.l2
    assert a.r == b.r


def test_window_guard_refuses_short_windows():
    F = Filtration.adic(Ideal.maximal(R))
    red = find_minimal_reduction(F, 3, 7)
    hd = build_hilbert_data(F, 7, red.r)
    check_itoh(F, red)
    valabrega_valla(F, red)
    tab = sally_lengths(F, red, 2, 7, hd)
    import dataclasses

    short = dataclasses.replace(hd, lengths=hd.lengths[:4])
    with pytest.raises(WindowTooSmallError):
        classify(F, red, short, tab)


def test_ev_case_with_positive_l2():
    # normal filtration of the three cubes plus the space diagonal in
    # three variables: a boundary case with a genuinely positive l2
    R3 = Ring(("x", "y", "z"))
    F = Filtration.normal_monomial(
        R3, MonomialIdeal(3, [(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)])
    )
    red = find_minimal_reduction(F, 2024, 12)
    N = red.r + 6
    hd = build_hilbert_data(F, N, red.r)
    check_itoh(F, red)
    valabrega_valla(F, red)
    tab = sally_lengths(F, red, 2, N, hd, direct_window=red.r + 3)
    rep = classify(F, red, hd, tab)
    assert rep.case == "EV"
    assert rep.l2 == 1 and rep.delta == 0
    assert rep.coefficients == (27, 18, 1, 0)
    assert rep.coefficients[2] == rep.l2  # e2 = l2 on the boundary
    assert red.r == 2 and rep.cm_verdict
    assert all(c.ok for c in rep.checks)
