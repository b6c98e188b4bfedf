"""Hilbert-Samuel function, coefficients in the binomial basis, and the
Hilbert series numerator of the associated graded ring.

All arithmetic is exact; the coefficient fit solves an integer linear
system on the top d+1 samples and re-verifies the polynomial on at least
three earlier samples past the stabilization index, so both an
undersized window and a wrong dimension surface as errors instead of
silently wrong output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import WindowTooSmallError


def binom_poly(n, c):
    """C(n+c, c) as a polynomial value; zero when the lower index is negative."""
    if c < 0:
        return 0
    return comb(n + c, c)


@dataclass(frozen=True)
class HilbertData:
    """Length sequence H(n) = l(R/I_{n+1}) with extracted invariants."""

    lengths: tuple
    d: int
    coefficients: tuple
    fit_window: tuple
    verify_window: tuple
    series_numerator: tuple
    stabilization: int

    def polynomial_value(self, n):
        total = 0
        for i, e in enumerate(self.coefficients):
            total += (-1) ** i * e * binom_poly(n, self.d - i)
        return total


def hilbert_function(F, N, threads=1):
    """H(n) = l(R/I_{n+1}) for n = 0..N, exact."""
    indices = list(range(N + 1))
    if threads and threads > 1:
        return _parallel_lengths(F, indices, threads)
    return [F.ideal_at(n + 1).colength() for n in indices]


def _parallel_lengths(F, indices, threads):
    from concurrent.futures import ProcessPoolExecutor

    # each colength is an isolated job; ideals realized first so workers
    # receive plain generator data
    ideals = [F.ideal_at(n + 1) for n in indices]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_colength_job, ideals))


def _colength_job(ideal):
    return ideal.colength()


def hilbert_coefficients(lengths, d, r):
    """Integer coefficients e_0..e_d fitted on the top d+1 samples.

    The fit is verified exactly on the three largest samples below the
    fit window (all past the stabilization index r); any mismatch or a
    non-integer solution raises WindowTooSmallError.
    """
    N = len(lengths) - 1
    if N < r + d + 3:
        raise WindowTooSmallError(
            f"window too small, increase N: need N >= r + d + 3 = {r + d + 3}, got {N}"
        )
    fit_points = list(range(N - d, N + 1))
    rows = []
    rhs = []
    for n in fit_points:
        rows.append([(-1) ** i * binom_poly(n, d - i) for i in range(d + 1)])
        rhs.append(lengths[n])
    coeffs = _solve_exact(rows, rhs)
    if coeffs is None:
        raise WindowTooSmallError("window too small, increase N: singular fit system")
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise WindowTooSmallError(
                "window too small, increase N: non-integer coefficient fit"
            )
        out.append(int(c))
    verify_points = [N - d - 3, N - d - 2, N - d - 1]
    for n in verify_points:
        if n < r:
            raise WindowTooSmallError(
                "window too small, increase N: verification sample below stabilization"
            )
        predicted = sum(
            (-1) ** i * out[i] * binom_poly(n, d - i) for i in range(d + 1)
        )
        if predicted != lengths[n]:
            raise WindowTooSmallError(
                f"window too small, increase N: fitted polynomial misses H({n}) "
                f"(predicted {predicted}, computed {lengths[n]})"
            )
    return tuple(out), tuple(fit_points), tuple(verify_points)


def _solve_exact(rows, rhs):
    """Gaussian elimination over Q; None when singular."""
    k = len(rows)
    M = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(k):
        pivot = None
        for r_i in range(col, k):
            if M[r_i][col]:
                pivot = r_i
                break
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r_i in range(k):
            if r_i != col and M[r_i][col]:
                f = M[r_i][col]
                M[r_i] = [a - f * b for a, b in zip(M[r_i], M[col])]
    return [M[i][k] for i in range(k)]


def gring_series_numerator(source, d_or_N, r):
    """Coefficients h_k of the associated graded ring's series numerator.

    h_k is the d-fold alternating difference of g_i = l(I_i/I_{i+1});
    beyond degree r + d every coefficient must vanish, which doubles as
    the window check.  Trailing zeros are trimmed.

    Accepts either an already computed length list together with the
    dimension, or a filtration together with the window N.
    """
    if hasattr(source, "ideal_at"):
        lengths = hilbert_function(source, d_or_N)
        d = source.ring.d
    else:
        lengths = list(source)
        d = d_or_N
    N = len(lengths) - 1
    g = [lengths[0]] + [lengths[i] - lengths[i - 1] for i in range(1, N + 1)]
    h = []
    for k in range(N + 1):
        total = 0
        for j in range(0, min(k, d) + 1):
            total += (-1) ** j * comb(d, j) * g[k - j]
        h.append(total)
    for k in range(r + d + 1, N + 1):
        if h[k] != 0:
            raise WindowTooSmallError(
                f"window too small, increase N: numerator tail h_{k} = {h[k]} nonzero"
            )
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return tuple(h)


def numerator_coefficient_identities(numerator, d):
    """e_i as the i-th factorial-normalized derivative of h at 1."""
    out = []
    for i in range(d + 1):
        out.append(sum(comb(k, i) * hk for k, hk in enumerate(numerator)))
    return tuple(out)


def infer_stabilization(lengths, d):
    """Smallest r for which fit, verification and numerator tail all pass.

    Used by the standalone hilbert command, where no reduction provides r.
    """
    N = len(lengths) - 1
    for r in range(0, max(N - d - 2, 1)):
        if N < r + d + 3:
            break
        try:
            hilbert_coefficients(lengths, d, r)
            gring_series_numerator(lengths, d, r)
            return r
        except WindowTooSmallError:
            continue
    raise WindowTooSmallError(
        "window too small, increase N: no stabilization index fits the samples"
    )


def build_hilbert_data(F, N, r, threads=1):
    """Assemble HilbertData for a filtration over the window 0..N."""
    lengths = hilbert_function(F, N, threads=threads)
    d = F.ring.d
    coeffs, fit_w, verify_w = hilbert_coefficients(lengths, d, r)
    numerator = gring_series_numerator(lengths, d, r)
    # internal consistency: numerator derivatives reproduce the fit
    derived = numerator_coefficient_identities(numerator, d)
    if tuple(derived) != tuple(coeffs):
        raise WindowTooSmallError(
            f"window too small, increase N: numerator-derived coefficients {derived} "
            f"disagree with the binomial fit {coeffs}"
        )
    return HilbertData(
        lengths=tuple(lengths),
        d=d,
        coefficients=tuple(coeffs),
        fit_window=fit_w,
        verify_window=verify_w,
        series_numerator=numerator,
        stabilization=r,
    )
