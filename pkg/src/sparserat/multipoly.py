"""Kronecker-style evaluation chains and recursive multivariate decoding.

A multivariate polynomial evaluated at chain points behaves like a nested
base-b numeral: the digits of the value in the last point are the values of
the coefficient polynomials in the remaining variables, so one univariate
digit decode per level peels off one variable at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import MAX_EXPONENT, ChainTooLargeError, MultiPoly, SubstitutionChain
from .unipoly import upoly_decode

BOUND_TIGHT = "tight"
BOUND_LOOSE = "loose"


@dataclass(frozen=True)
class MultiDecodeResult:
    poly: MultiPoly | None
    reason: str | None

    @property
    def ok(self) -> bool:
        return self.reason is None


def build_chain(
    base: int, shifts: Sequence[int], deg_bound: int, exp_base: int
) -> SubstitutionChain:
    """Chain of points (base + shift_i) ** (exp_base ** (i-1)).

    exp_base must be deg_bound+1 (enough for polynomial decoding) or
    2*deg_bound+1 (needed when products of two bounded-degree polynomials
    must stay decodable).  The caller guarantees base >= 2*height+1.
    """
    shifts = tuple(shifts)
    if exp_base not in (deg_bound + 1, 2 * deg_bound + 1):
        raise ValueError("exp_base must be deg_bound+1 or 2*deg_bound+1")
    n = len(shifts)
    if n < 1:
        raise ValueError("need at least one shift")
    top = exp_base ** (n - 1) if exp_base > 1 else 1
    if top > MAX_EXPONENT or top * max(deg_bound, 1) > MAX_EXPONENT:
        raise ChainTooLargeError("chain-too-large")
    points = tuple((base + c) ** (exp_base**i) for i, c in enumerate(shifts))
    return SubstitutionChain(base, shifts, exp_base, deg_bound, points)


def coef_bound(
    height_bound: int,
    level: int,
    chain: SubstitutionChain,
    term_bound: int | None,
    bound_mode: str = BOUND_TIGHT,
    deg_bound: int | None = None,
) -> int:
    """Height bound for the digit values one decoding level below the top.

    At level 1 the digits are the actual coefficients, bounded by
    height_bound.  Above that a digit is a coefficient polynomial evaluated at
    the chain prefix, bounded by height_bound * p_{level-1}**D * s where the
    geometric-tail factor s is (p_1 - p_1**(1-T)) / (p_1 - 1) in tight mode
    and p_1 / (p_1 - 1) in loose mode (no term-count information).
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    if level == 1:
        return height_bound
    if deg_bound is None:
        deg_bound = chain.deg_bound
    p1 = chain.points[0]
    prev = chain.points[level - 2]
    if bound_mode == BOUND_TIGHT:
        if term_bound is None:
            raise ValueError("tight mode needs a term bound")
        tail = (p1 - Fraction(1, p1 ** (term_bound - 1))) / (p1 - 1)
    elif bound_mode == BOUND_LOOSE:
        tail = Fraction(p1, p1 - 1)
    else:
        raise ValueError(f"unknown bound mode {bound_mode!r}")
    return math.floor(height_bound * prev**deg_bound * tail)


def mpoly_decode(
    chain: SubstitutionChain,
    rho: int,
    term_bound: int | None,
    deg_bound: int,
    height_bound: int,
    bound_mode: str = BOUND_TIGHT,
    last_base_offset: int = 0,
) -> MultiDecodeResult:
    """Recover the polynomial whose chain evaluation is rho, or fail.

    Decodes the top variable's digits at the last chain point, then recurses
    on each digit value with the reduced budgets (term_bound - t + 1,
    deg_bound - e).  Budgets gate the decode at every level: exponents beyond
    the degree budget and digit counts beyond the term budget are failures,
    and the final height bound is enforced at level 1.  term_bound may be
    None (no term information), which requires loose mode.

    last_base_offset shifts the top-level decoding base, for callers that
    evaluated at (p_1, ..., p_n + offset).
    """
    if bound_mode == BOUND_TIGHT and term_bound is None:
        raise ValueError("tight mode needs a term bound")
    return _decode_level(
        chain, chain.n, rho, term_bound, deg_bound, height_bound, bound_mode,
        last_base_offset,
    )


def _decode_level(chain, level, rho, term_bound, deg_bound, height_bound,
                  bound_mode, base_offset):
    base = chain.points[level - 1] + base_offset
    if level == 1:
        level_bound = height_bound
    else:
        level_bound = coef_bound(
            height_bound, level, chain, term_bound, bound_mode, deg_bound
        )
    digits = upoly_decode(rho, base, level_bound, max_deg=deg_bound,
                          max_terms=term_bound)
    if not digits.ok:
        return MultiDecodeResult(None, digits.reason)
    if level == 1:
        return MultiDecodeResult(
            MultiPoly(1, ((c, (e,)) for c, e in digits.poly.terms)), None
        )
    t = len(digits.poly)
    sub_terms = None if term_bound is None else term_bound - t + 1
    assembled: list[tuple[int, tuple[int, ...]]] = []
    for c, e in digits.poly.terms:
        sub = _decode_level(chain, level - 1, c, sub_terms, deg_bound - e,
                            height_bound, bound_mode, 0)
        if not sub.ok:
            return sub
        for sc, sexps in sub.poly.terms:
            assembled.append((sc, sexps + (e,)))
    return MultiDecodeResult(MultiPoly(level, assembled), None)
