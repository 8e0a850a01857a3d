"""Base-b digit recovery of sparse univariate integer polynomials.

A polynomial f with coefficients of absolute value at most C is uniquely
determined by the single integer f(b) whenever b >= 2C+1: the value is a
balanced base-b numeral whose digits are the coefficients.  The decoder walks
the numeral from the bottom, locating each nonzero digit with a
repeated-squaring divisibility ladder so the cost scales with the number of
terms rather than the degree.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .core import MAX_EXPONENT, UniPoly

GAP_RESIDUE = "gap-residue"
DEGREE_OVERFLOW = "degree-overflow"
TERM_OVERFLOW = "term-overflow"

# Test hook: when set (before import), min_coef drops the balanced mapping for
# high residues, corrupting every decode with a negative coefficient.  The
# selftest suite must go red under it; see tests/test_cli.py.
_FAULT_INJECT = bool(os.environ.get("SPARSERAT_FAULT_INJECT"))


@dataclass(frozen=True)
class DecodeResult:
    """Decoded polynomial, or a failure marker carrying the reason.

    iterations counts executed digit-loop passes; on a full decode it equals
    the number of terms of the recovered polynomial.
    """

    poly: UniPoly | None
    reason: str | None
    iterations: int

    @property
    def ok(self) -> bool:
        return self.reason is None


def _fail(reason: str, iterations: int) -> DecodeResult:
    return DecodeResult(None, reason, iterations)


def min_deg(rho: int, beta: int) -> int:
    """Largest e with beta**e dividing rho, i.e. the lowest exponent of f.

    Uses the divisibility ladder [beta, beta^2, beta^4, ...], rebuilt per call,
    peeling one binary block of the answer per pass; O(log^2 e) big-integer
    divisions overall.  Divisibility ignores the sign of rho.
    """
    if rho == 0:
        raise ValueError("zero-input")
    if beta < 2:
        raise ValueError("beta must be >= 2")
    a = abs(rho)
    if a % beta:
        return 0
    ladder = [beta]
    while a % (ladder[-1] * ladder[-1]) == 0:
        ladder.append(ladder[-1] * ladder[-1])
    exp = 0
    while a % beta == 0:
        j = 0
        while j + 1 < len(ladder) and a % ladder[j + 1] == 0:
            j += 1
        a //= ladder[j]
        exp += 1 << j
    return exp


def min_coef(rho: int, beta: int, d: int, height_bound: int) -> int:
    """Balanced digit of rho at position d, or 0 when it falls in the gap.

    v = (rho / beta**d) mod beta is mapped to v when v <= height_bound and to
    v - beta when v >= beta - height_bound; the unused middle range signals a
    coefficient outside [-height_bound, height_bound], reported in-band as 0.
    """
    v = (rho // beta**d) % beta
    if height_bound < v < beta - height_bound:
        return 0
    if v <= height_bound:
        return v
    if _FAULT_INJECT:
        return v
    return v - beta


def top_degree(rho: int, beta: int) -> int:
    """floor(log_beta(2|rho|)), the degree of the producing polynomial.

    Decided by exact integer comparison against a ladder of powers of beta;
    no floating point.
    """
    if rho == 0:
        raise ValueError("zero-input")
    if beta < 2:
        raise ValueError("beta must be >= 2")
    target = 2 * abs(rho)
    ladder = [beta]
    while ladder[-1] * ladder[-1] <= target:
        ladder.append(ladder[-1] * ladder[-1])
    exp = 0
    val = 1
    for j in range(len(ladder) - 1, -1, -1):
        nxt = val * ladder[j]
        if nxt <= target:
            val = nxt
            exp += 1 << j
    return exp


def upoly_decode(
    rho: int,
    beta: int,
    height_bound: int,
    max_deg: int | None = None,
    max_terms: int | None = None,
) -> DecodeResult:
    """Recover the unique f with height <= height_bound and f(beta) = rho.

    Peels one nonzero digit per pass: find the lowest remaining exponent with
    min_deg, read its balanced digit with min_coef, subtract and shift.  A
    gap digit means no such f exists (the usual outcome when rho is a wrong
    multiple of a true evaluation) and yields failure("gap-residue").  The
    optional caps bound runaway decodes of garbage inputs and yield
    failure("degree-overflow") / failure("term-overflow"); rho = 0 decodes to
    the zero polynomial.
    """
    if height_bound < 1:
        raise ValueError("height bound must be >= 1")
    if beta < 2 * height_bound + 1:
        raise ValueError("beta must be >= 2*height_bound + 1")
    if rho == 0:
        return DecodeResult(UniPoly(), None, 0)
    u = rho
    shift = 0
    terms: list[tuple[int, int]] = []
    iterations = 0
    while u != 0:
        iterations += 1
        d = min_deg(u, beta)
        c = min_coef(u, beta, d, height_bound)
        if c == 0:
            return _fail(GAP_RESIDUE, iterations)
        exp = shift + d
        if (max_deg is not None and exp > max_deg) or exp > MAX_EXPONENT:
            return _fail(DEGREE_OVERFLOW, iterations)
        if max_terms is not None and len(terms) >= max_terms:
            return _fail(TERM_OVERFLOW, iterations)
        terms.append((c, exp))
        u = (u - c * beta**d) // beta ** (d + 1)
        shift = exp + 1
    return DecodeResult(UniPoly(terms), None, iterations)
