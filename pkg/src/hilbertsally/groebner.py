"""Buchberger engine: reduced Groebner bases, normal forms, colengths.

Pair handling follows Gebauer-Moller (coprime criterion last, chain
criterion on both new and old pairs), selection is normal (smallest lcm
degree first).  Internally the basis is kept in *head form*: elements are
monic with irreducible lead terms but unreduced, short tails.  S-polynomial
processing only chews the lead term until it is irreducible or the
polynomial dies, which keeps every merge short; fully reduced tails are
materialized lazily when the canonical elements are requested.  Lead terms,
hence staircases, colengths and normal forms, are exact either way.

Degree truncation.  ``degree_bound=D`` carries the caller's certificate
that m^D is contained in the ideal; the computation then represents the
ideal exactly below degree D, with the degree-D monomials adjoined as
implicit basis elements:

* any term of degree >= D is reduced away on sight (reduction by the
  implicit monomials);
* a pair is discarded when both halves of its S-polynomial lie in m^D,
  i.e. when lcm_degree - width >= D for both elements (width = lead
  degree minus minimal degree), which makes the S-polynomial zero
  modulo the implicit part;
* for every basis element of positive width below the bound, the
  products with the implicit degree-D monomials can produce new lead
  terms below D, so the "frontier" multiples v*f with deg(v*lt(f)) = D
  are processed like S-polynomials.  Skipping these is unsound: for
  {x^5 + x^2} with m^6 certified inside the ideal, x*(x^5+x^2) mod m^6
  reveals x^3 and then x^2, which no ordinary pair would find.

For homogeneous input every width is zero, no frontier products exist,
and the rule degrades to the classical "discard pairs of lcm degree
>= D".
"""

from __future__ import annotations

import heapq

from .errors import (
    DegreeWindowError,
    NotZeroDimensionalError,
    RingMismatchError,
)
from .poly import (
    GradedReverseLex,
    Polynomial,
    make_degree_fn,
    mono_degree,
    mono_divides,
    mono_lcm,
    unpack_exponents,
)

_MASK_BITS_PER_VAR = {1: 32, 2: 16, 3: 10, 4: 8, 5: 6, 6: 5}

_FRONTIER_CAP = 200000  # refuse absurdly loose bounds instead of hanging


def _divmask_fn(d):
    """Bit-per-threshold prefilter: mask(t) superset of mask(g) is necessary
    for g | t, so a single AND rejects most divisor candidates."""
    bits = _MASK_BITS_PER_VAR.get(d, 4)

    def mask(exps):
        m = 0
        pos = 0
        for i in range(d):
            e = exps[i]
            hit = e if e < bits else bits
            m |= ((1 << hit) - 1) << pos
            pos += bits
        return m

    return mask


def _monomials_of_degree(d, deg):
    """Packed monomials of total degree deg, d variables."""
    out = []

    def rec(i, left, acc):
        if i == d - 1:
            out.append(acc | (left << (16 * i)))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, acc | (e << (16 * i)))

    rec(0, deg, 0)
    return out


class _Entry:
    __slots__ = (
        "lt",
        "lt_exps",
        "lt_deg",
        "lt_key",
        "tail",
        "mask",
        "width",
        "redundant",
    )

    def __init__(self, lt, lt_exps, lt_deg, lt_key, tail, mask, width):
        self.lt = lt
        self.lt_exps = lt_exps
        self.lt_deg = lt_deg
        self.lt_key = lt_key
        self.tail = tail  # list[(mono, coeff)], monic normalization, order < lt
        self.mask = mask
        self.width = width  # lt_deg - mindeg; 0 for homogeneous elements
        self.redundant = False


class _Engine:
    """Shared state for one Buchberger run (and later normal forms)."""

    def __init__(self, ring, order, degree_bound):
        self.ring = ring
        self.order = order
        self.bound = degree_bound
        self.d = ring.d
        self.p = ring.p
        self.borrow = ring._borrow_mask
        self.key = order.key
        self.degfn = make_degree_fn(ring.d)
        self.maskfn = _divmask_fn(ring.d)
        self.entries = []
        self.by_degree = {}  # lt_deg -> list of entries, for divisor scans
        self.min_lt_deg = None

    # -- construction ------------------------------------------------

    def make_entry(self, terms):
        key = self.key
        lt = max(terms, key=key)
        lc = terms[lt]
        p = self.p
        inv = self.ring.coeff_inv(lc)
        d = self.d
        tail = []
        mindeg = None
        if p is None:
            for m, c in terms.items():
                if m != lt:
                    tail.append((m, c * inv))
        else:
            for m, c in terms.items():
                if m != lt:
                    tail.append((m, (c * inv) % p))
        exps = unpack_exponents(lt, d)
        deg = sum(exps)
        mindeg = deg
        for m, _ in tail:
            md = mono_degree(m, d)
            if md < mindeg:
                mindeg = md
        return _Entry(lt, exps, deg, key(lt), tail, self.maskfn(exps), deg - mindeg)

    def insert(self, entry):
        self.entries.append(entry)
        self.by_degree.setdefault(entry.lt_deg, []).append(entry)
        if self.min_lt_deg is None or entry.lt_deg < self.min_lt_deg:
            self.min_lt_deg = entry.lt_deg

    # -- reduction ---------------------------------------------------

    def find_reducer(self, m, mdeg):
        mmask = self.maskfn(unpack_exponents(m, self.d))
        borrow = self.borrow
        by_degree = self.by_degree
        lo = self.min_lt_deg
        if lo is None:
            return None
        for deg in range(lo, mdeg + 1):
            bucket = by_degree.get(deg)
            if not bucket:
                continue
            for g in bucket:
                if g.redundant:
                    continue
                if g.mask & ~mmask:
                    continue
                if mono_divides(g.lt, m, borrow):
                    return g
        return None

    # Coefficients over F_p are kept only lazily normalized inside the
    # working dict: products of reduced values stay far below 2**62, so
    # exact integer arithmetic is safe and the expensive % p happens once
    # per popped term instead of once per merged term.
    _LAZY_LIMIT = 1 << 62

    def head_reduce(self, work):
        """Chew the lead term until it is irreducible; None when zero.

        ``work`` is consumed.  The result is a term dict whose maximal
        term is irreducible; lower terms are left as they are (their
        coefficients exact but possibly unnormalized mod p).
        """
        d, p, key = self.d, self.p, self.key
        degfn = self.degfn
        bound = self.bound
        lim = self._LAZY_LIMIT
        heap = [(-key(m), m) for m in work]
        heapq.heapify(heap)
        get = work.get
        push = heapq.heappush
        pop = heapq.heappop
        find = self.find_reducer
        while heap:
            m = heap[0][1]
            c = get(m)
            if c is None:
                pop(heap)
                continue
            if p is not None:
                c %= p
                if not c:
                    pop(heap)
                    del work[m]
                    continue
                work[m] = c
            mdeg = degfn(m)
            if bound is not None and mdeg >= bound:
                pop(heap)
                del work[m]
                continue  # inside the certified m^D part
            g = find(m, mdeg)
            if g is None:
                return work
            pop(heap)
            del work[m]
            shift = m - g.lt
            if p is None:
                for tm, tc in g.tail:
                    nm = tm + shift
                    v = get(nm, 0) - c * tc
                    if v:
                        if nm not in work:
                            push(heap, (-key(nm), nm))
                        work[nm] = v
                    elif nm in work:
                        del work[nm]
            else:
                for tm, tc in g.tail:
                    nm = tm + shift
                    old = get(nm)
                    if old is None:
                        work[nm] = (-c * tc) % p
                        push(heap, (-key(nm), nm))
                    else:
                        v = old - c * tc
                        if v:
                            if -lim < v < lim:
                                work[nm] = v
                            else:
                                work[nm] = v % p
                        else:
                            del work[nm]
        return None

    def full_reduce(self, work):
        """Complete normal form: no term divisible by any live lead term."""
        d, p, key = self.d, self.p, self.key
        degfn = self.degfn
        bound = self.bound
        lim = self._LAZY_LIMIT
        remainder = {}
        heap = [(-key(m), m) for m in work]
        heapq.heapify(heap)
        get = work.get
        push = heapq.heappush
        pop = heapq.heappop
        find = self.find_reducer
        while heap:
            m = pop(heap)[1]
            c = work.get(m)
            if c is None:
                continue
            if p is not None:
                c %= p
                if not c:
                    del work[m]
                    continue
            del work[m]
            mdeg = degfn(m)
            if bound is not None and mdeg >= bound:
                continue
            g = find(m, mdeg)
            if g is None:
                remainder[m] = c
                continue
            shift = m - g.lt
            if p is None:
                for tm, tc in g.tail:
                    nm = tm + shift
                    v = get(nm, 0) - c * tc
                    if v:
                        if nm not in work:
                            push(heap, (-key(nm), nm))
                        work[nm] = v
                    elif nm in work:
                        del work[nm]
            else:
                for tm, tc in g.tail:
                    nm = tm + shift
                    old = get(nm)
                    if old is None:
                        work[nm] = (-c * tc) % p
                        push(heap, (-key(nm), nm))
                    else:
                        v = old - c * tc
                        if v:
                            if -lim < v < lim:
                                work[nm] = v
                            else:
                                work[nm] = v % p
                        else:
                            del work[nm]
        return remainder


class GroebnerBasis:
    """Reduced Groebner basis; immutable once constructed.

    ``degree_bound`` of D means the computed data represent the ideal
    modulo its certified m^D part: lead terms, normal forms and standard
    monomials are exact below degree D.  ``elements`` (canonical, fully
    tail-reduced, monic, ascending lead terms) are materialized lazily;
    ``generating_elements`` returns the cheaper head-form basis.  For a
    bounded basis the latter generates the ideal only together with m^D;
    the ideal layer accounts for that when forming products.
    """

    __slots__ = ("ring", "order", "degree_bound", "_engine", "_elements")

    def __init__(self, ring, order, degree_bound, engine):
        self.ring = ring
        self.order = order
        self.degree_bound = degree_bound
        self._engine = engine
        self._elements = None

    @property
    def elements(self):
        if self._elements is None:
            eng = self._engine
            out = []
            for e in eng.entries:
                if e.redundant:
                    continue
                tail_reduced = eng.full_reduce(dict(e.tail))
                terms = dict(tail_reduced)
                terms[e.lt] = self.ring.coeff(1)
                out.append(Polynomial(self.ring, terms))
            out.sort(key=lambda f: eng.key(max(f.terms, key=eng.key)))
            self._elements = tuple(out)
        return self._elements

    def generating_elements(self):
        out = []
        for e in self._engine.entries:
            if e.redundant:
                continue
            terms = dict(e.tail)
            terms[e.lt] = self.ring.coeff(1)
            out.append(Polynomial(self.ring, terms))
        return out

    def leading_exponents(self):
        return [e.lt_exps for e in self._engine.entries if not e.redundant]

    def size(self):
        return sum(1 for e in self._engine.entries if not e.redundant)

    def __repr__(self):
        bound = f", D<{self.degree_bound}" if self.degree_bound else ""
        return f"<GroebnerBasis {self.size()} elements{bound}>"


def buchberger(gens, order=None, degree_bound=None):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``degree_bound=D`` carries the caller's certificate that m^D lies in
    the ideal; the result is then exact below degree D (see module
    docstring).  Without a bound the computation is exact everywhere.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("need at least one nonzero generator")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators in different rings")
    order = order or GradedReverseLex(ring.d)

    eng = _Engine(ring, order, degree_bound)
    d = ring.d
    p = ring.p
    key = eng.key
    borrow = ring._borrow_mask
    entries = eng.entries
    bound = degree_bound
    pairs = []  # heap of (lcm_deg, lcm_key, i, j), i < j
    lcms = {}
    frontier = []  # term dicts of frontier products, processed like S-polys

    def add_element(terms):
        e = eng.make_entry(terms)
        t = len(entries)
        # chain rule against existing pairs
        if pairs:
            survivors = []
            for item in pairs:
                _, _, i, j = item
                lij = lcms[(i, j)]
                if (
                    mono_divides(e.lt, lij, borrow)
                    and mono_lcm(entries[i].lt, e.lt, d) != lij
                    and mono_lcm(entries[j].lt, e.lt, d) != lij
                ):
                    del lcms[(i, j)]
                    continue
                survivors.append(item)
            if len(survivors) != len(pairs):
                pairs[:] = survivors
                heapq.heapify(pairs)
        cand = []
        for i, g in enumerate(entries):
            if g.redundant:
                continue
            cand.append((mono_lcm(g.lt, e.lt, d), i))
        # Gebauer-Moller M rule: drop lcms strictly dominated by another
        keep = []
        for lcm_it, i in cand:
            dominated = False
            for lcm_jt, _ in cand:
                if lcm_jt != lcm_it and mono_divides(lcm_jt, lcm_it, borrow):
                    dominated = True
                    break
            if not dominated:
                keep.append((lcm_it, i))
        # F rule: one pair per lcm value
        by_lcm = {}
        for lcm_it, i in keep:
            by_lcm.setdefault(lcm_it, i)
        # B rule last: coprime lead terms reduce to zero on their own
        for lcm_it, i in by_lcm.items():
            if lcm_it == entries[i].lt + e.lt:
                continue
            ldeg = mono_degree(lcm_it, d)
            if (
                bound is not None
                and ldeg - entries[i].width >= bound
                and ldeg - e.width >= bound
            ):
                continue  # S-polynomial lies in the certified m^D part
            lcms[(i, t)] = lcm_it
            heapq.heappush(pairs, (ldeg, key(lcm_it), i, t))
        for g in entries:
            if not g.redundant and mono_divides(e.lt, g.lt, borrow):
                g.redundant = True
        eng.insert(e)
        # frontier products against the implicit m^D monomials
        if bound is not None and e.width > 0 and e.lt_deg < bound:
            gap = bound - e.lt_deg
            count = 1
            for i in range(1, d):
                count = count * (gap + i) // i
            if count > _FRONTIER_CAP:
                raise ValueError(
                    "degree_bound too loose for the frontier construction"
                )
            for v in _monomials_of_degree(d, gap):
                s = {}
                for tm, tc in e.tail:
                    nm = tm + v
                    if mono_degree(nm, d) < bound:
                        s[nm] = tc
                if s:
                    frontier.append(s)

    def spair_terms(i, j, lcm_it):
        gi, gj = entries[i], entries[j]
        s = {}
        shift_i = lcm_it - gi.lt
        for tm, tc in gi.tail:
            s[tm + shift_i] = tc
        shift_j = lcm_it - gj.lt
        for tm, tc in gj.tail:
            nm = tm + shift_j
            v = s.get(nm, 0) - tc
            if p is not None:
                v %= p
            if v:
                s[nm] = v
            elif nm in s:
                del s[nm]
        return s

    for g in sorted(gens, key=lambda f: key(max(f.terms, key=key))):
        r = eng.head_reduce(dict(g.terms))
        if r:
            add_element(r)

    while pairs or frontier:
        if pairs and (not frontier or pairs[0][0] < bound):
            lcm_deg, _, i, j = heapq.heappop(pairs)
            lcm_it = lcms.pop((i, j), None)
            if lcm_it is None:
                continue
            s = spair_terms(i, j, lcm_it)
        else:
            s = frontier.pop()
        if not s:
            continue
        r = eng.head_reduce(s)
        if r:
            add_element(r)

    # minimal lead terms only; canonical tails are materialized lazily
    return GroebnerBasis(ring, order, degree_bound, eng)


def _check_window(f, gb):
    if gb.degree_bound is not None and f.total_degree() >= gb.degree_bound:
        raise DegreeWindowError(
            f"degree {f.total_degree()} outside the validity window "
            f"(< {gb.degree_bound}) of this truncated basis"
        )


def normal_form(f, gb):
    """Remainder of f modulo gb: no term divisible by a basis lead term."""
    if f.ring != gb.ring:
        raise RingMismatchError("polynomial and basis in different rings")
    _check_window(f, gb)
    r = gb._engine.full_reduce(dict(f.terms))
    return Polynomial(gb.ring, r)


def is_member(f, gb):
    """True iff f lies in the ideal (within the bound's validity window)."""
    if f.is_zero():
        return True
    if f.ring != gb.ring:
        raise RingMismatchError("polynomial and basis in different rings")
    _check_window(f, gb)
    # head reduction suffices: membership iff the whole thing dies
    return gb._engine.head_reduce(dict(f.terms)) is None


def reduce_modulo_power(f, degree):
    """Drop the terms of f of total degree >= degree.

    Sound preprocessing for membership tests against an ideal certified
    to contain m^degree.
    """
    d = f.ring.d
    return Polynomial(
        f.ring, {m: c for m, c in f.terms.items() if mono_degree(m, d) < degree}
    )


def _has_unit(gb):
    return any(e.lt == 0 for e in gb._engine.entries if not e.redundant)


def zero_dimensional(gb):
    """Pure power of every variable among the lead terms (or unit ideal)."""
    if gb.degree_bound is not None:
        return True  # m^D inside the ideal by the bound's certificate
    if _has_unit(gb):
        return True
    d = gb.ring.d
    seen = [False] * d
    for e in gb._engine.entries:
        if e.redundant:
            continue
        support = [i for i, x in enumerate(e.lt_exps) if x]
        if len(support) == 1:
            seen[support[0]] = True
    return all(seen)


def staircase_counts(gb):
    """Standard monomials per degree, up to staircase closure (or bound)."""
    if _has_unit(gb):
        return []
    if not zero_dimensional(gb):
        raise NotZeroDimensionalError(
            "ideal is not zero-dimensional: no pure power of some variable "
            "among the lead terms (input not m-primary)"
        )
    d = gb.ring.d
    lts = {e.lt for e in gb._engine.entries if not e.redundant}
    bound = gb.degree_bound
    if bound is None:
        cap = sum(max(e.lt_exps) for e in gb._engine.entries if not e.redundant)
        bound = cap + d + 1  # unreachable for a closed staircase
    var_monos = gb.ring._var_monomials
    lane_shifts = [vm.bit_length() - 1 for vm in var_monos]
    level = {0} - lts
    counts = []
    e_deg = 0
    while level and e_deg < bound:
        counts.append(len(level))
        e_deg += 1
        if e_deg >= bound:
            break
        nxt = set()
        for s in level:
            for vm in var_monos:
                u = s + vm
                if u in nxt or u in lts:
                    continue
                # standard iff not a lead term and every parent is standard
                ok = True
                for wm, sh in zip(var_monos, lane_shifts):
                    if (u >> sh) & 0xFFFF and (u - wm) not in level:
                        ok = False
                        break
                if ok:
                    nxt.add(u)
        level = nxt
    if level and gb.degree_bound is None:
        raise NotZeroDimensionalError("staircase failed to close (not m-primary)")
    return counts


def colength(gb):
    """Length of R/I: the number of standard monomials below the staircase."""
    return sum(staircase_counts(gb))


def max_standard_degree(gb):
    """Largest degree carrying a standard monomial; -1 for the unit ideal."""
    return len(staircase_counts(gb)) - 1
