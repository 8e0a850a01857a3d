"""Multivariate rational interpolation over randomly shifted chains.

Random per-variable shifts make the numerator and denominator images along
the chain coprime with high probability, after which one (or two) chain
evaluations feed the same scale search used univariately, with the recursive
chain decoder in place of single-variable digit decoding.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .core import BlackBox, MultiPoly, PoleError, RationalFunction, canonicalize, eval_rational
from .multipoly import BOUND_LOOSE, BOUND_TIGHT, build_chain, mpoly_decode
from .unipoly import top_degree
from .unirat import (
    DEFAULT_MAX_ITER,
    FIRST_POINT,
    RatioGate,
    ScaleSearchExhausted,
    interval_contains_integer,
    scale_upper_bound,
)

_VALIDATE_POINTS = 10
_VALIDATE_COORD_RANGE = 1 << 20


class ValidationError(RuntimeError):
    """Post-hoc random-point validation contradicted the recovered function."""


def sample_shifts(n: int, shift_range: int, rng_seed: int) -> tuple[int, ...]:
    """n shifts drawn uniformly from {1..shift_range}, sorted nondecreasing."""
    return _draw_shifts(random.Random(rng_seed), n, shift_range)


def _draw_shifts(rng: random.Random, n: int, shift_range: int) -> tuple[int, ...]:
    if n < 1 or shift_range < 1:
        raise ValueError("need n >= 1 and shift_range >= 1")
    return tuple(sorted(rng.randint(1, shift_range) for _ in range(n)))


def success_lower_bound(deg_bound: int, n: int, shift_range: int) -> Fraction:
    """Guaranteed one-point success probability, 1 - 2(2D+1)^(2n)/N, floored at 0."""
    p = 1 - Fraction(2 * (2 * deg_bound + 1) ** (2 * n), shift_range)
    return p if p > 0 else Fraction(0)


def _zero(n: int) -> RationalFunction:
    return RationalFunction(MultiPoly(n), MultiPoly(n, [(1, (0,) * n)]))


def _record(stats, **kv) -> None:
    if stats is not None:
        stats.update(kv)


def _decode_pair(chain, a, b, i, term_bound, deg_bound, height_bound, bound_mode,
                 offset):
    f = mpoly_decode(chain, a * i, term_bound, deg_bound, height_bound,
                     bound_mode, offset)
    if f.ok:
        g = mpoly_decode(chain, b * i, term_bound, deg_bound, height_bound,
                         bound_mode, offset)
    else:
        f = mpoly_decode(chain, -a * i, term_bound, deg_bound, height_bound,
                         bound_mode, offset)
        if not f.ok:
            return None
        g = mpoly_decode(chain, -b * i, term_bound, deg_bound, height_bound,
                         bound_mode, offset)
    if not g.ok:
        return None
    return f.poly, g.poly


def _matches_at(num: MultiPoly, den: MultiPoly, point, value: Fraction) -> bool:
    dv = den.evaluate(point)
    if dv == 0:
        return False
    return Fraction(num.evaluate(point), dv) == value


def _post_hoc_check(bb: BlackBox, h: RationalFunction, rng: random.Random) -> None:
    """Compare h against the black box at fresh random points (resampling poles)."""
    checked = 0
    attempts = 0
    while checked < _VALIDATE_POINTS:
        attempts += 1
        if attempts > 50 * _VALIDATE_POINTS:
            raise ValidationError("could not find enough pole-free validation points")
        point = tuple(rng.randint(1, _VALIDATE_COORD_RANGE) for _ in range(h.n))
        try:
            expected = bb.query(point)
        except PoleError:
            continue
        try:
            got = eval_rational(h, point)
        except PoleError:
            raise ValidationError(f"recovered function has a pole at {point}")
        if got != expected:
            raise ValidationError(f"mismatch at {point}: {got} != {expected}")
        checked += 1


def one_point(
    bb: BlackBox,
    n: int,
    term_bound: int,
    deg_bound: int,
    height_bound: int,
    shift_range: int,
    rng_seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    stats: dict | None = None,
    validate_extra: bool = False,
) -> RationalFunction:
    """Probabilistic interpolation from one evaluation along a random chain.

    Base 2TC^2+1, chain exponent base 2D+1 so products of two candidates stay
    decodable, shifts drawn from {1..shift_range}.  Succeeds whenever the
    shifted images of numerator and denominator stay coprime, which happens
    with probability at least success_lower_bound(D, n, shift_range).  Exactly
    one black-box query; validate_extra adds 10 random-point checks (and their
    queries) afterwards.
    """
    if bb.n != n:
        raise ValueError(f"black box has {bb.n} variables, expected {n}")
    rng = random.Random(rng_seed)
    base = 2 * term_bound * height_bound**2 + 1
    chain = build_chain(base, _draw_shifts(rng, n, shift_range), deg_bound,
                        2 * deg_bound + 1)
    val = bb.query(chain.points)
    a, b = val.numerator, val.denominator
    if a == 0:
        _record(stats, mu=0, points=chain.points)
        return _zero(n)
    for i in range(1, max_iter + 1):
        pair = _decode_pair(chain, a, b, i, term_bound, deg_bound, height_bound,
                            BOUND_TIGHT, 0)
        if pair is not None:
            h = canonicalize(*pair)
            _record(stats, mu=i, points=chain.points)
            if validate_extra:
                _post_hoc_check(bb, h, rng)
            return h
    raise ScaleSearchExhausted(max_iter)


def mv_ratio_gate(
    a1: int,
    a2: int,
    chain,
    deg_low: int,
    deg_cap: int,
    height_bound: int,
) -> RatioGate:
    """Side-choosing gate for chain values at (.., p_n) and (.., p_n + 1).

    Same bracket as the univariate gate with the last chain point as the
    ratio base and slack 1 + 2C/((p_1 - 1)(p_n - 1)).
    """
    if a1 == 0 or a2 == 0:
        raise ValueError("zero-numerator")
    p1 = chain.points[0]
    pn = chain.points[-1]
    lo = Fraction(abs(a1) * (pn + 1) ** deg_low, abs(a2) * pn**deg_low)
    hi = Fraction(abs(a1) * (pn + 1) ** deg_cap, abs(a2) * pn**deg_cap)
    slack = 1 + Fraction(2 * height_bound, (p1 - 1) * (pn - 1))
    return RatioGate(lo, hi, slack, deg_low, deg_cap)


def two_point(
    bb: BlackBox,
    n: int,
    deg_bound: int,
    deg_bound_last: int,
    height_bound: int,
    shift_range: int,
    rng_seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    stats: dict | None = None,
    validate_extra: bool = False,
) -> RationalFunction:
    """Probabilistic interpolation from two evaluations at base 3C+1.

    Chain exponent base D+1; the second point bumps the last coordinate by
    one.  The scale caps come from the last-variable degree bound, the gate
    picks the side with the smaller hidden scale, and candidates are verified
    against the other point, so the result can be wrong with some small
    probability.  Exactly two black-box queries.
    """
    if bb.n != n:
        raise ValueError(f"black box has {bb.n} variables, expected {n}")
    rng = random.Random(rng_seed)
    base = 3 * height_bound + 1
    chain = build_chain(base, _draw_shifts(rng, n, shift_range), deg_bound,
                        deg_bound + 1)
    pts1 = chain.points
    pts2 = pts1[:-1] + (pts1[-1] + 1,)
    v1 = bb.query(pts1)
    v2 = bb.query(pts2)
    a1, b1 = v1.numerator, v1.denominator
    a2, b2 = v2.numerator, v2.denominator
    if a1 == 0:
        _record(stats, mu=0, points=pts1)
        return _zero(n)
    if a2 == 0:
        raise ValueError("zero-numerator at the second point; inconsistent black box")
    pn = pts1[-1]
    deg_low = max(top_degree(a1, pn), top_degree(a2, pn + 1))
    cap_first = scale_upper_bound(a1, pn, deg_bound_last)
    cap_second = scale_upper_bound(a2, pn + 1, deg_bound_last)
    gate = mv_ratio_gate(a1, a2, chain, deg_low, deg_bound_last, height_bound)
    side = gate.choose_side(cap_first, cap_second)
    if side == FIRST_POINT:
        for i in range(1, min(cap_first, max_iter) + 1):
            if not interval_contains_integer(*gate.first_interval(i)):
                continue
            pair = _decode_pair(chain, a1, b1, i, None, deg_bound, height_bound,
                                BOUND_LOOSE, 0)
            if pair is not None and _matches_at(pair[0], pair[1], pts2, v2):
                h = canonicalize(*pair)
                _record(stats, mu=i, points=pts1, side=side)
                if validate_extra:
                    _post_hoc_check(bb, h, rng)
                return h
    else:
        for i in range(1, min(cap_second, max_iter) + 1):
            if not interval_contains_integer(*gate.second_interval(i)):
                continue
            pair = _decode_pair(chain, a2, b2, i, None, deg_bound, height_bound,
                                BOUND_LOOSE, 1)
            if pair is not None and _matches_at(pair[0], pair[1], pts1, v1):
                h = canonicalize(*pair)
                _record(stats, mu=i, points=pts1, side=side)
                if validate_extra:
                    _post_hoc_check(bb, h, rng)
                return h
    raise ScaleSearchExhausted(min(cap_first if side == FIRST_POINT else cap_second,
                                   max_iter))
