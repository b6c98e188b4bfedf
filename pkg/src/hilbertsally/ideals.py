"""Ideal-level operations: sums, products, powers, intersections, lengths.

The package models the local ring k[x_1..x_d]_(x_1..x_d): every length is
the length at the origin.  For ideals supported only at the origin the
global colength already is the local one; reduction ideals J (generic
d-element subideals) acquire extra zeros away from the origin, and their
local data is recovered either by adjoining certified pure powers (the
m-primary component) or, for single products J*B, by subtracting the
constant junk contribution of J (see ReductionData in reduction.py).
"""

from __future__ import annotations

import threading

from .errors import (
    ContainmentError,
    HypothesisViolation,
    RingMismatchError,
)
from .groebner import (
    buchberger,
    colength,
    is_member,
    reduce_modulo_power,
    staircase_counts,
)
from .poly import (
    BlockElimination,
    GradedReverseLex,
    Polynomial,
    pack_exponents,
    unpack_exponents,
)


def monomial_layer(ring, degree):
    """All monomials of the given total degree, as polynomials."""
    out = []
    d = ring.d

    def rec(i, left, acc):
        if i == d - 1:
            acc.append(left)
            out.append(Polynomial.monomial(ring, tuple(acc)))
            acc.pop()
            return
        for e in range(left + 1):
            acc.append(e)
            rec(i + 1, left - e, acc)
            acc.pop()

    rec(0, degree, [])
    return out


def pure_power_gens(ring, degree):
    out = []
    for i in range(ring.d):
        exps = [0] * ring.d
        exps[i] = degree
        out.append(Polynomial.monomial(ring, exps))
    return out


class Ideal:
    """Generator-backed ideal with a lazily cached Groebner basis.

    ``certified_mbound`` carries a proven containment m^D in the ideal
    (propagated through sums, products and powers); it both enables sound
    degree truncation for homogeneous generators and records that the
    ideal is m-primary.  Equality is Groebner-level, never generator-level.
    """

    __slots__ = ("ring", "generators", "certified_mbound", "_gb", "_gb_lock")

    def __init__(self, ring, generators, certified_mbound=None):
        gens = tuple(g for g in generators if not g.is_zero())
        if not gens:
            raise ValueError("ideal needs a nonzero generator")
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError("generator in a different ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "certified_mbound", certified_mbound)
        object.__setattr__(self, "_gb", None)
        object.__setattr__(self, "_gb_lock", threading.Lock())

    def __setattr__(self, *a):
        raise AttributeError("Ideal is immutable")

    def __reduce__(self):
        return (Ideal, (self.ring, self.generators, self.certified_mbound))

    def __repr__(self):
        return f"Ideal({len(self.generators)} gens over {self.ring!r})"

    @classmethod
    def unit(cls, ring):
        return cls(ring, [Polynomial.constant(ring, 1)], certified_mbound=0)

    @classmethod
    def maximal(cls, ring):
        gens = [Polynomial.variable(ring, v) for v in ring.variables]
        return cls(ring, gens, certified_mbound=1)

    @classmethod
    def parse(cls, ring, texts):
        from .poly import parse_polynomial

        return cls(ring, [parse_polynomial(t, ring) for t in texts])

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.generators)

    def groebner(self):
        """Cached reduced Groebner basis (grevlex).

        Homogeneous ideals with a certified m-power containment are
        computed with the sound degree truncation at that power.
        """
        gb = self._gb
        if gb is not None:
            return gb
        with self._gb_lock:
            if self._gb is None:
                bound = None
                if self.certified_mbound is not None and self.is_homogeneous():
                    bound = self.certified_mbound
                gb = buchberger(self.generators, GradedReverseLex(self.ring.d), bound)
                object.__setattr__(self, "_gb", gb)
        return self._gb

    # -- generating data --------------------------------------------------

    def spanning_generators(self):
        """A generating set suitable for forming products.

        For a truncated basis the head-form elements only generate the
        ideal together with m^D, so the degree-D monomial layer rides
        along; exact bases return their head-form elements.
        """
        gb = self.groebner()
        gens = gb.generating_elements()
        if gb.degree_bound is not None:
            gens = gens + monomial_layer(self.ring, gb.degree_bound)
        return gens

    def colength(self):
        """Length of R/I; requires a zero-dimensional (m-primary) ideal."""
        return colength(self.groebner())

    def contains_polynomial(self, f):
        gb = self.groebner()
        if gb.degree_bound is not None:
            # terms of degree >= D lie in m^D, inside the ideal by certificate
            f = reduce_modulo_power(f, gb.degree_bound)
        return is_member(f, gb)

    def primarity_degree(self):
        """Smallest verified k with m^k inside the ideal.

        For homogeneous ideals the staircase closure degree is a proof;
        otherwise each candidate layer is checked by normal forms.
        """
        gb = self.groebner()
        counts = staircase_counts(gb)
        k = len(counts)
        if gb.degree_bound is None and not self.is_homogeneous():
            cap = k + self.ring.d * (k + 1) + 2
            while k <= cap:
                if all(
                    is_member(u, gb) for u in monomial_layer(self.ring, k)
                ):
                    return k
                k += 1
            raise HypothesisViolation("no m-power containment found by probing")
        return k


def _same_ring(A, B):
    if A.ring != B.ring:
        raise RingMismatchError("ideals in different rings")


def _min_bound(a, b):
    if a is None or b is None:
        return None
    return min(a, b)


def ideal_sum(A, B):
    _same_ring(A, B)
    bound = _min_bound(A.certified_mbound, B.certified_mbound)
    return Ideal(A.ring, A.generators + B.generators, bound)


def ideal_product(A, B):
    """Product generated by pairwise products of spanning generators."""
    _same_ring(A, B)
    ga = A.spanning_generators()
    gb_ = B.spanning_generators()
    prods = [f * g for f in ga for g in gb_]
    bound = None
    if A.certified_mbound is not None and B.certified_mbound is not None:
        bound = A.certified_mbound + B.certified_mbound
    return Ideal(A.ring, prods, bound)


def ideal_power(A, k):
    """k-th power by repeated squaring; A^0 is the unit ideal."""
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return Ideal.unit(A.ring)
    result = None
    base = A
    while k:
        if k & 1:
            result = base if result is None else ideal_product(result, base)
        k >>= 1
        if k:
            base = ideal_product(base, base)
    return result


def ideal_contains(A, B):
    """Does A contain B?  Tested on generators of B."""
    _same_ring(A, B)
    return all(A.contains_polynomial(g) for g in B.generators)


def ideal_equal(A, B):
    _same_ring(A, B)
    return ideal_contains(A, B) and ideal_contains(B, A)


def _fresh_variable(ring):
    for name in ("t", "u", "w", "t0", "t1", "elim"):
        if name not in ring.variables:
            return name
    i = 0
    while f"t{i}" in ring.variables:
        i += 1
    return f"t{i}"


def _lift(f, big_ring):
    d = f.ring.d
    terms = {}
    for m, c in f.terms.items():
        exps = (0,) + unpack_exponents(m, d)
        terms[pack_exponents(exps)] = c
    return Polynomial(big_ring, terms)


def _project(f, small_ring):
    D = f.ring.d
    terms = {}
    for m, c in f.terms.items():
        exps = unpack_exponents(m, D)
        if exps[0] != 0:
            return None
        terms[pack_exponents(exps[1:])] = c
    return Polynomial(small_ring, terms)


def ideal_intersection(A, B):
    """Intersection via one auxiliary variable and a block order.

    Generators t*a_i and (1-t)*b_j in R[t]; the elements of a Groebner
    basis under an order eliminating t that do not involve t generate
    the intersection.  The product A*B must land inside the result, which
    is verified before returning.
    """
    from .poly import Ring

    _same_ring(A, B)
    ring = A.ring
    tname = _fresh_variable(ring)
    big = Ring((tname,) + ring.variables, ring.p)
    t = Polynomial.variable(big, tname)
    one = Polynomial.constant(big, 1)
    gens = [t * _lift(a, big) for a in A.generators]
    gens += [(one - t) * _lift(b, big) for b in B.generators]
    gb = buchberger(gens, BlockElimination(big.d, 1))
    kept = []
    for f in gb.elements:
        small = _project(f, ring)
        if small is not None and not small.is_zero():
            kept.append(small)
    if not kept:
        raise HypothesisViolation("empty intersection basis for nonzero ideals")
    bound = None
    if A.certified_mbound is not None and B.certified_mbound is not None:
        bound = max(A.certified_mbound, B.certified_mbound)
    result = Ideal(ring, kept, bound)
    probe = [f * g for f in A.generators for g in B.generators]
    if not all(result.contains_polynomial(fg) for fg in probe):
        raise HypothesisViolation("intersection failed its A*B containment check")
    return result


def quotient_length(A, B):
    """Length of A/B for nested m-primary ideals B inside A."""
    _same_ring(A, B)
    if not ideal_contains(A, B):
        raise ContainmentError(
            "quotient_length: second ideal is not contained in the first "
            "(violated admissibility or reduction hypothesis)"
        )
    la = A.colength()
    lb = B.colength()
    if lb < la:
        raise HypothesisViolation("colength of the smaller ideal is smaller")
    return lb - la


def intersection_colength(A, B):
    """Length of R/(A intersect B) by inclusion-exclusion.

    Exact for m-primary A and B: 0 -> R/(A cap B) -> R/A + R/B -> R/(A+B) -> 0.
    """
    _same_ring(A, B)
    return A.colength() + B.colength() - ideal_sum(A, B).colength()
