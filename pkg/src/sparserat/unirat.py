"""Univariate rational interpolation from one or two big-integer evaluations.

All three interpolators reduce h = f/g to polynomial digit decoding: the
black-box value h(b) = a/b' in lowest terms relates to the true values by an
unknown integer scale, and an incremental search over candidate scales
i = 1, 2, ... accepts the first i whose scaled values both decode within the
coefficient and term bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import BlackBox, RationalFunction, UniPoly, canonicalize, zero_function
from .unipoly import top_degree, upoly_decode

DEFAULT_MAX_ITER = 1_000_000

FIRST_POINT = "first"
SECOND_POINT = "second"


class ScaleSearchExhausted(RuntimeError):
    """The scale search ran past its cap; the supplied bounds are likely wrong."""

    def __init__(self, max_iter: int):
        super().__init__(f"mu-search-exhausted after {max_iter} candidates")
        self.max_iter = max_iter


@dataclass(frozen=True)
class RatioGate:
    """Exact-rational bracket deciding which evaluation point to decode.

    The two scales hiding behind the reduced values at adjacent points have a
    ratio confined to (lo_ratio/slack, hi_ratio*slack); when the bracket lies
    entirely above or below 1 the smaller scale's side is known.
    """

    lo_ratio: Fraction
    hi_ratio: Fraction
    slack: Fraction
    deg_low: int
    deg_cap: int

    def choose_side(self, cap_first: int, cap_second: int) -> str:
        if self.lo_ratio >= self.slack:
            return FIRST_POINT
        if self.hi_ratio <= 1 / self.slack:
            return SECOND_POINT
        return FIRST_POINT if cap_first < cap_second else SECOND_POINT

    def first_interval(self, i: int) -> tuple[Fraction, Fraction]:
        return self.lo_ratio / self.slack * i, self.hi_ratio * self.slack * i

    def second_interval(self, i: int) -> tuple[Fraction, Fraction]:
        return i / (self.hi_ratio * self.slack), self.slack / self.lo_ratio * i


def scale_upper_bound(a: int, beta: int, deg_bound: int) -> int:
    """Cap on the hidden scale: floor(beta**(deg_bound+1) / (2|a|)), >= 1."""
    if a == 0:
        raise ValueError("zero-numerator")
    return max(1, beta ** (deg_bound + 1) // (2 * abs(a)))


def ratio_gate(
    a1: int, a2: int, beta: int, deg_low: int, deg_cap: int, height_bound: int
) -> RatioGate:
    """Gate for reduced numerator values a1 at beta and a2 at beta+1."""
    if a1 == 0 or a2 == 0:
        raise ValueError("zero-numerator")
    lo = Fraction(abs(a1) * (beta + 1) ** deg_low, abs(a2) * beta**deg_low)
    hi = Fraction(abs(a1) * (beta + 1) ** deg_cap, abs(a2) * beta**deg_cap)
    slack = 1 + Fraction(2 * height_bound, beta * (beta - 1))
    return RatioGate(lo, hi, slack, deg_low, deg_cap)


def interval_contains_integer(lo: Fraction, hi: Fraction) -> bool:
    """Whether the open interval (lo, hi) contains an integer."""
    return math.floor(lo) + 1 < hi


def _decode_pair(a, b, i, beta, height_bound, term_bound):
    """Decode (a*i, b*i), retrying with flipped signs when the numerator fails.

    The reduced value keeps its denominator positive, so the true scale can be
    negative; the flipped attempt covers that reading of the same i.
    """
    f = upoly_decode(a * i, beta, height_bound, max_terms=term_bound)
    if f.ok:
        g = upoly_decode(b * i, beta, height_bound, max_terms=term_bound)
    else:
        f = upoly_decode(-a * i, beta, height_bound, max_terms=term_bound)
        if not f.ok:
            return None
        g = upoly_decode(-b * i, beta, height_bound, max_terms=term_bound)
    if not g.ok:
        return None
    return f.poly, g.poly


def _matches_at(num: UniPoly, den: UniPoly, x: int, value: Fraction) -> bool:
    dv = den.evaluate(x)
    if dv == 0:
        return False
    return Fraction(num.evaluate(x), dv) == value


def _record(stats, **kv) -> None:
    if stats is not None:
        stats.update(kv)


def one_point(
    bb: BlackBox,
    term_bound: int,
    height_bound: int,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    stats: dict | None = None,
) -> RationalFunction:
    """Deterministic interpolation from the single evaluation at 2TC^2 + 1.

    With that base, the scale search accepts exactly at the true scale: any
    smaller candidate would force two distinct bounded functions to agree at
    the point, which the base is chosen large enough to exclude.  Exactly one
    black-box query.
    """
    beta = 2 * term_bound * height_bound**2 + 1
    val = bb.query((beta,))
    a, b = val.numerator, val.denominator
    if a == 0:
        _record(stats, mu=0, beta=beta)
        return zero_function(1)
    for i in range(1, max_iter + 1):
        pair = _decode_pair(a, b, i, beta, height_bound, term_bound)
        if pair is not None:
            _record(stats, mu=i, beta=beta)
            return canonicalize(*pair)
    raise ScaleSearchExhausted(max_iter)


def two_point(
    bb: BlackBox,
    term_bound: int,
    height_bound: int,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    stats: dict | None = None,
) -> RationalFunction:
    """Deterministic interpolation from two adjacent points near sqrt(2T)*C.

    The base drops to ceil(sqrt(2*max(T,5)) * C); a candidate decoded from
    the first point is accepted only if it reproduces the reduced value at
    the second, which restores uniqueness at the smaller base.  Exactly two
    black-box queries.
    """
    t1 = max(term_bound, 5)
    target = 2 * t1 * height_bound * height_bound
    beta = math.isqrt(target)
    if beta * beta < target:
        beta += 1
    v1 = bb.query((beta,))
    v2 = bb.query((beta + 1,))
    a, b = v1.numerator, v1.denominator
    if a == 0:
        _record(stats, mu=0, beta=beta)
        return zero_function(1)
    for i in range(1, max_iter + 1):
        pair = _decode_pair(a, b, i, beta, height_bound, term_bound)
        if pair is not None and _matches_at(pair[0], pair[1], beta + 1, v2):
            _record(stats, mu=i, beta=beta)
            return canonicalize(*pair)
    raise ScaleSearchExhausted(max_iter)


def two_point_prob(
    bb: BlackBox,
    deg_bound: int,
    height_bound: int,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    stats: dict | None = None,
) -> RationalFunction:
    """Probabilistic interpolation at base 3C+1 using a degree bound.

    Works at the two points 3C+1 and 3C+2.  The degree bound caps the hidden
    scale on each side; the ratio gate picks the side whose scale is smaller,
    and candidate scales whose bracket interval contains no integer are
    skipped without decoding.  A candidate is accepted once it reproduces the
    other point's value, so a wrong function can pass with some (empirically
    tiny) probability.  Exactly two black-box queries.
    """
    beta = 3 * height_bound + 1
    v1 = bb.query((beta,))
    v2 = bb.query((beta + 1,))
    a1, b1 = v1.numerator, v1.denominator
    a2, b2 = v2.numerator, v2.denominator
    if a1 == 0:
        _record(stats, mu=0, beta=beta)
        return zero_function(1)
    if a2 == 0:
        raise ValueError("zero-numerator at the second point; inconsistent black box")
    deg_low = max(top_degree(a1, beta), top_degree(a2, beta + 1))
    cap_first = scale_upper_bound(a1, beta, deg_bound)
    cap_second = scale_upper_bound(a2, beta + 1, deg_bound)
    gate = ratio_gate(a1, a2, beta, deg_low, deg_bound, height_bound)
    side = gate.choose_side(cap_first, cap_second)
    if side == FIRST_POINT:
        for i in range(1, min(cap_first, max_iter) + 1):
            if not interval_contains_integer(*gate.first_interval(i)):
                continue
            pair = _decode_pair(a1, b1, i, beta, height_bound, None)
            if pair is not None and _matches_at(pair[0], pair[1], beta + 1, v2):
                _record(stats, mu=i, beta=beta, side=side)
                return canonicalize(*pair)
    else:
        for i in range(1, min(cap_second, max_iter) + 1):
            if not interval_contains_integer(*gate.second_interval(i)):
                continue
            pair = _decode_pair(a2, b2, i, beta + 1, height_bound, None)
            if pair is not None and _matches_at(pair[0], pair[1], beta, v1):
                _record(stats, mu=i, beta=beta, side=side)
                return canonicalize(*pair)
    raise ScaleSearchExhausted(min(cap_first if side == FIRST_POINT else cap_second,
                                   max_iter))
