"""Exact multivariate polynomial arithmetic over F_p and Q.

Monomials are packed into single machine integers, one 16-bit lane per
variable (lane 0 = first variable).  Monomial product is then integer
addition and divisibility is a masked subtraction, which is what makes
the Groebner engine fast enough in pure Python.  Exponents are capped
well below 2**15 so the borrow trick in ``mono_divides`` stays exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ExponentOverflowError,
    PolyParseError,
    RingMismatchError,
)

LANE_BITS = 16
LANE_MASK = (1 << LANE_BITS) - 1
EXP_LIMIT = 4096  # desk-scale degrees; keeps lane arithmetic borrow-free


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Ring:
    """Ambient polynomial ring: ordered variables plus a coefficient field.

    ``p`` is a prime for F_p, or None for the rationals.  Instances are
    immutable and hashable; all operations check that operands share a ring.
    """

    __slots__ = ("variables", "p", "d", "_borrow_mask", "_var_monomials")

    def __init__(self, variables, p=32003):
        variables = tuple(variables)
        if not variables:
            raise ValueError("ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be unique")
        for v in variables:
            if not v.isidentifier():
                raise ValueError(f"bad variable name {v!r}")
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", len(variables))
        mask = 0
        for i in range(len(variables)):
            mask |= 1 << (LANE_BITS * i + LANE_BITS - 1)
        object.__setattr__(self, "_borrow_mask", mask)
        object.__setattr__(
            self, "_var_monomials", tuple(1 << (LANE_BITS * i) for i in range(len(variables)))
        )

    def __setattr__(self, *a):
        raise AttributeError("Ring is immutable")

    def __reduce__(self):
        return (Ring, (self.variables, self.p))

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.variables == other.variables
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.variables, self.p))

    def __repr__(self):
        field = "QQ" if self.p is None else f"GF({self.p})"
        return f"Ring({','.join(self.variables)}; {field})"

    # coefficient helpers ------------------------------------------------

    def coeff(self, value):
        """Coerce an integer (or Fraction over Q) into the field."""
        if self.p is None:
            return Fraction(value)
        return value % self.p

    def coeff_inv(self, value):
        if self.p is None:
            return Fraction(1) / value
        return pow(value, self.p - 2, self.p)

    def variable_monomial(self, i):
        return self._var_monomials[i]


# packed monomial helpers ------------------------------------------------


def pack_exponents(exps):
    m = 0
    for i, e in enumerate(exps):
        if e < 0 or e >= EXP_LIMIT:
            raise ExponentOverflowError(f"exponent {e} outside [0, {EXP_LIMIT})")
        m |= e << (LANE_BITS * i)
    return m


def unpack_exponents(m, d):
    return tuple((m >> (LANE_BITS * i)) & LANE_MASK for i in range(d))


def mono_degree(m, d):
    t = 0
    for i in range(d):
        t += (m >> (LANE_BITS * i)) & LANE_MASK
    return t


def mono_divides(t, u, borrow_mask):
    """True iff monomial t divides u.  Lanes must hold values < 2**15."""
    diff = u - t
    return diff >= 0 and not (diff & borrow_mask)


def mono_lcm(t, u, d):
    out = 0
    for i in range(d):
        s = LANE_BITS * i
        a = (t >> s) & LANE_MASK
        b = (u >> s) & LANE_MASK
        out |= (a if a > b else b) << s
    return out


# monomial orders --------------------------------------------------------


class MonomialOrder:
    """Total order on packed monomials given by an integer sort key.

    Larger key means larger monomial.  Keys are multiplicative in the sense
    required of a monomial order; graded kinds compare total degree first.
    """

    name = "?"

    def key(self, m):  # pragma: no cover - overridden
        raise NotImplementedError


def make_degree_fn(d):
    """Total degree of a packed monomial, specialized per dimension."""
    if d == 1:
        return lambda m: m
    if d == 2:
        return lambda m: (m & LANE_MASK) + (m >> LANE_BITS)
    if d == 3:
        return lambda m: (m & LANE_MASK) + ((m >> 16) & LANE_MASK) + (m >> 32)
    if d == 4:
        return lambda m: (
            (m & LANE_MASK)
            + ((m >> 16) & LANE_MASK)
            + ((m >> 32) & LANE_MASK)
            + (m >> 48)
        )

    def deg(m):
        t = 0
        while m:
            t += m & LANE_MASK
            m >>= LANE_BITS
        return t

    return deg


class GradedReverseLex(MonomialOrder):
    name = "grevlex"

    def __init__(self, d):
        self.d = d
        self._deg_shift = LANE_BITS * d
        # lane-wise complement in one subtraction: no lane exceeds LANE_MASK
        self._full = (1 << (LANE_BITS * d)) - 1
        self._degfn = make_degree_fn(d)

    def key(self, m):
        # (total degree, reversed negated exponents) packed into one int
        return (self._degfn(m) << self._deg_shift) | (self._full - m)


class Lexicographic(MonomialOrder):
    name = "lex"

    def __init__(self, d):
        self.d = d

    def key(self, m):
        d = self.d
        out = 0
        for i in range(d):
            e = (m >> (LANE_BITS * i)) & LANE_MASK
            out |= e << (LANE_BITS * (d - 1 - i))
        return out


class BlockElimination(MonomialOrder):
    """Eliminates the first ``split`` variables: graded-revlex on each block,
    first block dominant.  Used for the auxiliary-variable intersection."""

    name = "block"

    def __init__(self, d, split):
        if not 0 < split < d:
            raise ValueError("split must cut the variables in two blocks")
        self.d = d
        self.split = split
        self._first = GradedReverseLex(split)
        self._rest = GradedReverseLex(d - split)
        self._rest_shift = LANE_BITS * split
        self._first_mask = (1 << self._rest_shift) - 1
        self._rest_bits = LANE_BITS * (d - split) + LANE_BITS * (d - split)

    def key(self, m):
        first = m & self._first_mask
        rest = m >> self._rest_shift
        k1 = self._first.key(first)
        k2 = self._rest.key(rest)
        return (k1 << (2 * LANE_BITS * (self.d - self.split) + LANE_BITS)) | k2


def compare(a, b, order):
    """Spec-level comparison of two packed monomials: -1, 0 or 1."""
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


# polynomials ------------------------------------------------------------


class Polynomial:
    """Immutable sparse polynomial: packed monomial -> nonzero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", dict(terms))

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.ring, self.terms))

    @classmethod
    def from_terms(cls, ring, terms):
        clean = {}
        for m, c in terms.items():
            c = ring.coeff(c)
            if c:
                clean[m] = c
        return cls(ring, clean)

    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def constant(cls, ring, value):
        c = ring.coeff(value)
        return cls(ring, {0: c} if c else {})

    @classmethod
    def variable(cls, ring, name):
        i = ring.variables.index(name)
        return cls(ring, {ring.variable_monomial(i): ring.coeff(1)})

    @classmethod
    def monomial(cls, ring, exps, coeff=1):
        c = ring.coeff(coeff)
        if not c:
            return cls(ring, {})
        return cls(ring, {pack_exponents(exps): c})

    # queries ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        """Max total degree, or -1 for the zero polynomial."""
        d = self.ring.d
        return max((mono_degree(m, d) for m in self.terms), default=-1)

    def min_degree(self):
        d = self.ring.d
        return min((mono_degree(m, d) for m in self.terms), default=-1)

    def is_homogeneous(self):
        d = self.ring.d
        degs = {mono_degree(m, d) for m in self.terms}
        return len(degs) <= 1

    def exponents(self):
        d = self.ring.d
        return {unpack_exponents(m, d): c for m, c in self.terms.items()}

    # arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError("operands in different rings")

    def __add__(self, other):
        self._check(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            elif m in out:
                del out[m]
        return Polynomial(self.ring, out)

    def __neg__(self):
        p = self.ring.p
        if p is None:
            return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})
        return Polynomial(self.ring, {m: (p - c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.ring)
        if self.total_degree() + other.total_degree() >= EXP_LIMIT:
            raise ExponentOverflowError("product degree outside desk scale")
        p = self.ring.p
        out = {}
        small, big = self.terms, other.terms
        if len(small) > len(big):
            small, big = big, small
        for m1, c1 in small.items():
            for m2, c2 in big.items():
                m = m1 + m2
                v = out.get(m, 0) + c1 * c2
                if p is not None:
                    v %= p
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
        return Polynomial(self.ring, out)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k >>= 1
        return result

    def scale(self, c):
        c = self.ring.coeff(c)
        if not c:
            return Polynomial.zero(self.ring)
        p = self.ring.p
        if p is None:
            return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})
        return Polynomial(self.ring, {m: (v * c) % p for m, v in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items()))))

    # printing -----------------------------------------------------------

    def to_text(self, order=None):
        """Canonical string, terms sorted descending in the given order."""
        if not self.terms:
            return "0"
        ring = self.ring
        order = order or GradedReverseLex(ring.d)
        pieces = []
        for m in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[m]
            exps = unpack_exponents(m, ring.d)
            factors = []
            for name, e in zip(ring.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if ring.p is None and c < 0:
                sign, mag = "-", -c
            else:
                sign, mag = "+", c
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"<{self.to_text()}>"


# parsing ----------------------------------------------------------------


def parse_polynomial(text, ring):
    """Parse the documented grammar::

        poly  := term (('+'|'-') term)*
        term  := coef? ('*'? var ('^' int)?)*
        coef  := int ('/' int)?     # the '/' form only over Q

    Whitespace is insignificant; coefficients are decimal integers
    interpreted in the field.  Like terms are combined.
    """
    d = ring.d
    var_index = {v: i for i, v in enumerate(ring.variables)}
    n = len(text)
    pos = 0
    terms = {}

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def read_int():
        nonlocal pos
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise PolyParseError("expected integer", start)
        return int(text[start:pos])

    def read_name():
        nonlocal pos
        start = pos
        if pos < n and (text[pos].isalpha() or text[pos] == "_"):
            pos += 1
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
        if start == pos:
            raise PolyParseError("expected variable", start)
        return text[start:pos]

    first = True
    while True:
        skip_ws()
        if pos >= n:
            if first:
                raise PolyParseError("empty polynomial", pos)
            break
        sign = 1
        if text[pos] == "+":
            pos += 1
        elif text[pos] == "-":
            sign = -1
            pos += 1
        elif not first:
            raise PolyParseError(f"expected '+' or '-', got {text[pos]!r}", pos)
        first = False
        skip_ws()
        if pos >= n:
            raise PolyParseError("dangling sign", pos)

        coeff = None
        if text[pos].isdigit():
            coeff = read_int()
            skip_ws()
            if pos < n and text[pos] == "/":
                if ring.p is not None:
                    raise PolyParseError("fractional coefficient over a prime field", pos)
                pos += 1
                skip_ws()
                coeff = Fraction(coeff, read_int())
                skip_ws()
        exps = [0] * d
        saw_var = False
        while True:
            skip_ws()
            save = pos
            if pos < n and text[pos] == "*":
                pos += 1
                skip_ws()
            if pos < n and (text[pos].isalpha() or text[pos] == "_"):
                name_pos = pos
                name = read_name()
                if name not in var_index:
                    raise PolyParseError(f"unknown variable {name!r}", name_pos)
                e = 1
                skip_ws()
                if pos < n and text[pos] == "^":
                    pos += 1
                    skip_ws()
                    e = read_int()
                if e >= EXP_LIMIT:
                    raise ExponentOverflowError(f"exponent {e} outside [0, {EXP_LIMIT})")
                exps[var_index[name]] += e
                saw_var = True
            else:
                pos = save
                break
        if coeff is None:
            if not saw_var:
                raise PolyParseError("expected coefficient or variable", pos)
            coeff = 1
        if any(e >= EXP_LIMIT for e in exps):
            raise ExponentOverflowError("accumulated exponent outside desk scale")
        m = pack_exponents(exps)
        c = ring.coeff(sign * coeff)
        v = terms.get(m, 0) + c
        if ring.p is not None:
            v %= ring.p
        if v:
            terms[m] = v
        elif m in terms:
            del terms[m]
    return Polynomial(ring, terms)
