"""Integral closure of monomial ideals via the Newton polyhedron.

Membership of a lattice point in conv(V) + R_{>=0}^d is decided exactly
over the rationals: by Caratheodory it is enough to look for a convex
combination supported on at most d+1 generators, and each such small
system is settled by Fourier-Motzkin elimination.  A power-membership
oracle (x^a integral over I iff x^{ka} lies in I^k for some k) backs the
geometry up in the test suite.
"""

from __future__ import annotations

from itertools import combinations

from .poly import Polynomial


def _minimalize(points):
    """Antichain of componentwise-minimal points."""
    pts = sorted(set(map(tuple, points)), key=lambda p: (sum(p), p))
    keep = []
    for p in pts:
        if not any(all(q[i] <= p[i] for i in range(len(p))) for q in keep):
            keep.append(p)
    return keep


class MonomialIdeal:
    """Monomial ideal given by the exponent vectors of minimal generators."""

    __slots__ = ("dim", "exponents")

    def __init__(self, dim, exponents):
        exponents = [tuple(e) for e in exponents]
        if not exponents:
            raise ValueError("need at least one generator")
        for e in exponents:
            if len(e) != dim or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "exponents", tuple(_minimalize(exponents)))

    def __setattr__(self, *a):
        raise AttributeError("MonomialIdeal is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, MonomialIdeal)
            and self.dim == other.dim
            and set(self.exponents) == set(other.exponents)
        )

    def __hash__(self):
        return hash((self.dim, frozenset(self.exponents)))

    def __repr__(self):
        pts = ",".join(str(e) for e in self.exponents)
        return f"MonomialIdeal({pts})"

    def contains_monomial(self, a):
        return any(all(v[i] <= a[i] for i in range(self.dim)) for v in self.exponents)

    def polynomials(self, ring):
        if ring.d != self.dim:
            raise ValueError("ring dimension mismatch")
        return [Polynomial.monomial(ring, e) for e in self.exponents]

    @classmethod
    def from_ideal(cls, ideal):
        """Extract exponent vectors from an Ideal with monomial generators."""
        exps = []
        for g in ideal.generators:
            ex = g.exponents()
            if len(ex) != 1:
                raise ValueError("generator is not a monomial")
        for g in ideal.generators:
            ((e, _),) = g.exponents().items()
            exps.append(e)
        return cls(ideal.ring.d, exps)


def _fm_feasible(rows, nvars):
    """Fourier-Motzkin: is there a rational solution of sum(c_i x_i) <= b?

    ``rows`` is a list of (coeffs tuple, bound).  Elimination uses only
    cross-multiplication, so everything stays in exact integers.
    """
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for cs, b in rows:
            c = cs[var]
            if c > 0:
                pos.append((cs, b))
            elif c < 0:
                neg.append((cs, b))
            else:
                rest.append((cs, b))
        new_rows = rest
        for cp, bp in pos:
            for cn, bn in neg:
                scale_p = cp[var]
                scale_n = -cn[var]
                cs = tuple(
                    cn[i] * scale_p + cp[i] * scale_n for i in range(nvars)
                )
                b = bn * scale_p + bp * scale_n
                new_rows.append((cs, b))
        rows = new_rows
    return all(b >= 0 for _, b in rows)


def _subset_feasible(a, subset, d):
    """Does a lie in conv(subset) + R_{>=0}^d?  Small exact LP."""
    s = len(subset)
    # lambda_s = 1 - sum(others); variables are lambda_0..lambda_{s-2}
    nv = s - 1
    rows = []
    last = subset[-1]
    if nv == 0:
        return all(last[i] <= a[i] for i in range(d))
    # componentwise: sum lambda_i v_i <= a  with lambda_s substituted
    for i in range(d):
        coeffs = [subset[j][i] - last[i] for j in range(nv)]
        rows.append((coeffs, a[i] - last[i]))
    # lambda_j >= 0
    for j in range(nv):
        coeffs = [0] * nv
        coeffs[j] = -1
        rows.append((coeffs, 0))
    # lambda_s >= 0  <=>  sum lambda_j <= 1
    rows.append(([1] * nv, 1))
    return _fm_feasible(rows, nv)


def np_member(a, V, dim=None):
    """Is the point a in conv(V) + R_{>=0}^d?  Exact rational test."""
    V = [tuple(v) for v in V]
    a = tuple(a)
    d = dim or len(a)
    # cheap cone shortcut: a dominates some generator
    for v in V:
        if all(v[i] <= a[i] for i in range(d)):
            return True
    deg_a = sum(a)
    for size in range(2, min(len(V), d + 1) + 1):
        for subset in combinations(V, size):
            # necessary: the subset's coordinate minima cannot exceed a
            ok = True
            for i in range(d):
                if min(v[i] for v in subset) > a[i]:
                    ok = False
                    break
            if not ok or min(sum(v) for v in subset) > deg_a:
                continue
            if _subset_feasible(a, subset, d):
                return True
    return False


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _valid_inequalities(V, d):
    """Inequalities <w, x> >= c with w >= 0 satisfied by the whole hull.

    Any nonnegative w paired with c = min over generators is valid for
    conv(V) + R_{>=0}^d, so this list is sound by construction; it is a
    fast rejection filter in front of the exact membership test and
    carries no completeness burden.
    """
    normals = set()
    for i in range(d):
        e = [0] * d
        e[i] = 1
        normals.add(tuple(e))
    if d == 2:
        for u, v in combinations(V, 2):
            w = (v[1] - u[1], u[0] - v[0])
            for s in (1, -1):
                cand = (s * w[0], s * w[1])
                if min(cand) >= 0 and max(cand) > 0:
                    normals.add(cand)
    elif d == 3:
        axes = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        pool = list(combinations(V, 3)) + [
            (u, v, None) for u, v in combinations(V, 2)
        ]
        for item in pool:
            if item[2] is None:
                u, v, _ = item
                dirs = [tuple(b - a for a, b in zip(u, v))]
                cands = [_cross(dirs[0], ax) for ax in axes]
            else:
                u, v, w = item
                cands = [
                    _cross(
                        tuple(b - a for a, b in zip(u, v)),
                        tuple(b - a for a, b in zip(u, w)),
                    )
                ]
            for w_ in cands:
                for s in (1, -1):
                    cand = tuple(s * x for x in w_)
                    if min(cand) >= 0 and max(cand) > 0:
                        normals.add(cand)
    out = []
    for w in normals:
        c = min(sum(a * b for a, b in zip(w, v)) for v in V)
        out.append((w, c))
    return out


def integral_closure(I):
    """Minimal monomial generators of the integral closure.

    Searches the box 0 <= a_j <= max_i v_ij; minimal generators outside
    the box cannot exist (decrementing a coordinate beyond every
    generator keeps membership).  The total degree of a minimal
    generator is also bounded by the largest generator degree: a hull
    point of strictly larger degree has coordinate slack against its
    convex witness, so some coordinate can be decremented.  Idempotent
    and inflationary.
    """
    d = I.dim
    V = I.exponents
    box = [max(v[j] for v in V) for j in range(d)]
    lo = min(sum(v) for v in V)
    hi = max(sum(v) for v in V)
    cuts = _valid_inequalities(V, d)
    members = []

    def decide(point):
        for w, c in cuts:
            if sum(a * b for a, b in zip(w, point)) < c:
                return False
        return np_member(point, V, d)

    def walk(j, point, partial):
        if j == d - 1:
            start = max(0, lo - partial)
            stop = min(box[j], hi - partial)
            for val in range(start, stop + 1):
                point.append(val)
                if decide(point):
                    members.append(tuple(point))
                point.pop()
            return
        for val in range(min(box[j], hi - partial) + 1):
            point.append(val)
            walk(j + 1, point, partial + val)
            point.pop()

    walk(0, [], 0)
    return MonomialIdeal(d, _minimalize(members))


def monomial_power(I, n):
    """n-th ordinary power: n-fold sums of exponent vectors, minimalized."""
    if n < 0:
        raise ValueError("negative power")
    if n == 0:
        return MonomialIdeal(I.dim, [tuple([0] * I.dim)])
    current = list(I.exponents)
    for _ in range(n - 1):
        nxt = set()
        for u in current:
            for v in I.exponents:
                nxt.add(tuple(u[i] + v[i] for i in range(I.dim)))
        current = _minimalize(nxt)
    return MonomialIdeal(I.dim, current)


def normal_power(I, n):
    """Integral closure of I^n."""
    if n < 1:
        raise ValueError("n must be positive")
    return integral_closure(monomial_power(I, n))


def closure_oracle(a, I, k_max):
    """Power-membership oracle: x^a integral over I iff x^{ka} in I^k.

    True iff some k <= k_max works; used to cross-check np_member.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    a = tuple(a)
    for k in range(1, k_max + 1):
        target = tuple(k * x for x in a)
        if monomial_power(I, k).contains_monomial(target):
            return True
    return False


def monomial_colength(I):
    """Brute-force lattice count of standard monomials (test oracle)."""
    d = I.dim
    if I.contains_monomial((0,) * d):
        return 0
    # every variable must appear as a pure power or the count is infinite
    for j in range(d):
        if not any(
            v[j] > 0 and all(v[i] == 0 for i in range(d) if i != j)
            for v in I.exponents
        ):
            raise ValueError("not zero-dimensional")
    cap = max(sum(v) for v in I.exponents)
    count = 0

    def walk(j, point):
        nonlocal count
        if j == d:
            if not I.contains_monomial(point):
                count += 1
            return
        for val in range(cap + 1):
            point.append(val)
            walk(j + 1, point)
            point.pop()

    walk(0, [])
    return count
