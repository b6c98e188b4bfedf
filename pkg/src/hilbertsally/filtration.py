"""Filtrations {I_n}: adic, normal-monomial, declared-normal, or tabulated."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .closure import MonomialIdeal, normal_power
from .errors import HypothesisViolation, TableExhaustedError
from .ideals import Ideal, ideal_contains, ideal_product


ADIC = "adic"
NORMAL_MONOMIAL = "normal_monomial"
DECLARED_NORMAL = "declared_normal"
TABLE = "table"


class Filtration:
    """A chain R = I_0 over I_1 over ... realized lazily and cached.

    adic             I_n = I^n
    normal_monomial  I_n = integral closure of I^n (monomial base only)
    declared_normal  I_n = I^n, caller asserting the powers are closed;
                     downstream reports carry a "normality assumed" flag
    table            explicit list I_1..I_N, no extrapolation
    """

    def __init__(self, ring, kind, base=None, monomial_base=None, table=None):
        self.ring = ring
        self.kind = kind
        self.base = base
        self.monomial_base = monomial_base
        self.table = tuple(table) if table else None
        self._cache = {0: Ideal.unit(ring)}
        self._lock = threading.Lock()
        if base is not None:
            self._cache[1] = base

    @staticmethod
    def _with_bound(base_ideal):
        """Attach a certified m-power containment to the base if missing."""
        if base_ideal.certified_mbound is not None:
            return base_ideal
        bound = base_ideal.primarity_degree()
        return Ideal(base_ideal.ring, base_ideal.generators, certified_mbound=bound)

    @classmethod
    def adic(cls, base_ideal):
        return cls(base_ideal.ring, ADIC, base=cls._with_bound(base_ideal))

    @classmethod
    def declared_normal(cls, base_ideal):
        return cls(base_ideal.ring, DECLARED_NORMAL, base=cls._with_bound(base_ideal))

    @classmethod
    def normal_monomial(cls, ring, monomial_ideal):
        if not isinstance(monomial_ideal, MonomialIdeal):
            monomial_ideal = MonomialIdeal.from_ideal(monomial_ideal)
        f = cls(ring, NORMAL_MONOMIAL, monomial_base=monomial_ideal)
        return f

    @classmethod
    def from_table(cls, ring, ideals):
        if not ideals:
            raise ValueError("table filtration needs at least I_1")
        return cls(ring, TABLE, base=ideals[0], table=ideals)

    @property
    def normality_assumed(self):
        return self.kind == DECLARED_NORMAL

    def base_primarity(self):
        """Certified k with m^k inside I_1 (used for truncation bounds)."""
        return self.ideal_at(1).primarity_degree()

    def ideal_at(self, n):
        """The ideal I_n; errors beyond a table's last entry."""
        if n < 0:
            raise ValueError("filtration index must be >= 0")
        got = self._cache.get(n)
        if got is not None:
            return got
        with self._lock:
            got = self._cache.get(n)
            if got is not None:
                return got
            ideal = self._realize(n)
            self._cache[n] = ideal
            return ideal

    def _realize(self, n):
        ring = self.ring
        if self.kind == TABLE:
            if n > len(self.table):
                raise TableExhaustedError(
                    f"table filtration has {len(self.table)} entries, asked for {n}"
                )
            return self.table[n - 1]
        if self.kind == NORMAL_MONOMIAL:
            closed = normal_power(self.monomial_base, n)
            ideal = Ideal(ring, closed.polynomials(ring))
            # monomial staircase closure is a proof of m-power containment
            bound = ideal.primarity_degree()
            return Ideal(ring, closed.polynomials(ring), certified_mbound=bound)
        # adic kinds: step from the largest cached power
        prev_n = max(k for k in self._cache if k <= n and k >= 1)
        ideal = self._cache[prev_n]
        base = self._cache[1]
        for step in range(prev_n + 1, n + 1):
            ideal = ideal_product(ideal, base)
            self._cache[step] = ideal
        return ideal

    def declared_or_adic_power_bound(self, n):
        base_bound = self.ideal_at(1).certified_mbound
        if base_bound is None:
            return None
        return base_bound * n


@dataclass
class AdmissibilityReport:
    ok: bool
    checked_through: int
    violations: list = field(default_factory=list)


def check_admissible(F, N):
    """Verify I_a * I_b inside I_{a+b} and I^n inside I_n up to N.

    Violations are collected and reported, not raised.
    """
    if N < 2:
        raise ValueError("admissibility window must be at least 2")
    violations = []
    # descending chain
    for n in range(N):
        A = F.ideal_at(n)
        B = F.ideal_at(n + 1)
        if not ideal_contains(A, B):
            violations.append(f"I_{n+1} not contained in I_{n}")
    # products
    for a in range(1, N):
        for b in range(a, N):
            if a + b > N:
                break
            prod = ideal_product(F.ideal_at(a), F.ideal_at(b))
            if not ideal_contains(F.ideal_at(a + b), prod):
                violations.append(f"I_{a} * I_{b} not contained in I_{a+b}")
    # ordinary powers sit inside
    base = F.ideal_at(1)
    power = base
    for n in range(2, N + 1):
        power = ideal_product(power, base)
        if not ideal_contains(F.ideal_at(n), power):
            violations.append(f"I^{n} not contained in I_{n}")
    return AdmissibilityReport(not violations, N, violations)


def filtration_ideal(F, n):
    """Spec-level accessor for I_n."""
    return F.ideal_at(n)


def ensure_m_primary_base(F):
    """The standing hypothesis: I_1 is m-primary."""
    base = F.ideal_at(1)
    try:
        base.colength()
    except Exception as exc:
        raise HypothesisViolation(f"base ideal is not m-primary: {exc}") from exc
