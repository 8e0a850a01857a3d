"""Black-box construction, random instances, and independent oracles.

Everything here exists to audit the interpolators, so none of it reuses their
decoding paths: the dense decoder re-expands numerals digit by digit, and the
resultant comes straight from a fraction-free Sylvester determinant.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    CERT_PRIME,
    MultiPoly,
    Poly,
    RationalFunction,
    UniPoly,
    canonicalize,
    eval_rational,
    unipoly_coprime,
)
from .unipoly import DEGREE_OVERFLOW, GAP_RESIDUE, DecodeResult

RESULTANT_MAX_DEGREE = 64
_ORACLE_MAX_DEGREE = 200
_GENERATION_TRIES = 1000
_CERT_SHIFT_RANGE = 1 << 20
_CERT_REPEATS = 3


class GenerationFailedError(RuntimeError):
    """The rejection loop could not produce a coprime instance."""


class CountingBlackBox:
    """Evaluates a fixed target exactly, counting queries and keeping a transcript.

    A single instance mutates its counter and must not be shared across
    threads without external coordination.
    """

    def __init__(self, target: RationalFunction):
        self.target = target
        self.queries = 0
        self.transcript: list[tuple[tuple[int, ...], Fraction]] = []

    @property
    def n(self) -> int:
        return self.target.n

    def query(self, point: Sequence[int]) -> Fraction:
        point = tuple(point)
        value = eval_rational(self.target, point)
        self.queries += 1
        self.transcript.append((point, value))
        return value


def make_blackbox(h: RationalFunction) -> CountingBlackBox:
    return CountingBlackBox(h)


@dataclass(frozen=True)
class InstanceSpec:
    """Bounds and seed for one random rational-function instance."""

    n: int
    term_bound: int
    deg_bound: int
    height_bound: int
    seed: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.term_bound < 1:
            raise ValueError("term bound must be >= 1")
        if self.deg_bound < 0:
            raise ValueError("degree bound must be >= 0")
        if self.height_bound < 1:
            raise ValueError("height bound must be >= 1")
        if self.term_bound > self.monomial_budget:
            raise ValueError("term bound exceeds available monomials")

    @property
    def monomial_budget(self) -> int:
        return math.comb(self.deg_bound + self.n, self.n)


def _nonzero_coef(rng: random.Random, height_bound: int) -> int:
    c = rng.randint(1, height_bound)
    return -c if rng.random() < 0.5 else c


def random_unipoly(rng: random.Random, terms: int, deg_bound: int,
                   height_bound: int) -> UniPoly:
    """Uniform sparse univariate polynomial with exactly `terms` terms."""
    if terms > deg_bound + 1:
        raise ValueError("more terms than available exponents")
    exps = rng.sample(range(deg_bound + 1), terms)
    return UniPoly((_nonzero_coef(rng, height_bound), e) for e in exps)


def random_multipoly(rng: random.Random, n: int, terms: int, deg_bound: int,
                     height_bound: int) -> MultiPoly:
    """Uniform sparse polynomial with distinct monomials of total degree <= bound."""
    if terms > math.comb(deg_bound + n, n):
        raise ValueError("more terms than available monomials")
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < terms:
        exps = tuple(rng.randint(0, deg_bound) for _ in range(n))
        if sum(exps) <= deg_bound:
            chosen.add(exps)
    return MultiPoly(n, ((_nonzero_coef(rng, height_bound), e) for e in chosen))


def random_instance(spec: InstanceSpec) -> RationalFunction:
    """Random canonical h = f/g within the spec's bounds, certified coprime.

    Coprimality is checked by a Euclidean remainder sequence for n = 1 and by
    the resultant of shifted univariate images for n > 1 (several shift draws;
    a nonzero image resultant certifies coprimality exactly).  Non-coprime
    draws are rejected and retried; identical seeds give identical instances.
    """
    rng = random.Random(spec.seed)
    for _ in range(_GENERATION_TRIES):
        if spec.n == 1:
            num: Poly = random_unipoly(rng, spec.term_bound, spec.deg_bound,
                                       spec.height_bound)
            den: Poly = random_unipoly(rng, spec.term_bound, spec.deg_bound,
                                       spec.height_bound)
            coprime = unipoly_coprime(num, den)
        else:
            num = random_multipoly(rng, spec.n, spec.term_bound, spec.deg_bound,
                                   spec.height_bound)
            den = random_multipoly(rng, spec.n, spec.term_bound, spec.deg_bound,
                                   spec.height_bound)
            coprime = _certified_coprime_multi(num, den, rng)
        if coprime:
            return canonicalize(num, den)
    raise GenerationFailedError("generation-failed")


# --- coprimality certificate for multivariate pairs --------------------------


def _binomial_power_dense(shift: int, exp: int) -> list[int]:
    """(x + shift)**exp as a dense coefficient list, low exponent first."""
    out = [0] * (exp + 1)
    binom = 1
    for j in range(exp + 1):
        out[exp - j] = binom * shift**j
        binom = binom * (exp - j) // (j + 1)
    return out


def _conv(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _add_dense(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = a[:]
    for i, v in enumerate(b):
        out[i] += v
    return out


def _shifted_image(p: MultiPoly, shifts: Sequence[int], weight_base: int) -> UniPoly:
    """Univariate image under x_i -> (x + shift_i) ** weight_base^(i-1)."""
    weights = [weight_base**i for i in range(p.n)]
    total = [0]
    for c, exps in p.terms:
        term = [c]
        for e, w, s in zip(exps, weights, shifts):
            if e:
                term = _conv(term, _binomial_power_dense(s, e * w))
        total = _add_dense(total, term)
    return UniPoly((c, e) for e, c in enumerate(total) if c)


def _image_degree_cap(p: MultiPoly, q: MultiPoly) -> tuple[int, int]:
    """(weight base, worst-case image degree) for a shifted-image pair."""
    d = max(p.total_degree or 0, q.total_degree or 0)
    return d + 1, d * (d + 1) ** (p.n - 1)


def _eval_except(p: MultiPoly, keep: int, values: Sequence[int]) -> UniPoly:
    """Collapse all variables but `keep` at the given values."""
    acc: dict[int, int] = {}
    for c, exps in p.terms:
        v = c
        for idx, (x, e) in enumerate(zip(values, exps)):
            if idx != keep and e:
                v *= x**e
        acc[exps[keep]] = acc.get(exps[keep], 0) + v
    return UniPoly((v, e) for e, v in acc.items() if v)


def _certified_coprime_multi(num: MultiPoly, den: MultiPoly,
                             rng: random.Random) -> bool:
    weight_base, image_cap = _image_degree_cap(num, den)
    if image_cap <= RESULTANT_MAX_DEGREE:
        # Shifted-image resultant: a nonzero value certifies coprimality, and
        # a genuine common factor forces zero for every shift choice.
        for _ in range(_CERT_REPEATS):
            shifts = sorted(rng.randint(1, _CERT_SHIFT_RANGE)
                            for _ in range(num.n))
            fi = _shifted_image(num, shifts, weight_base)
            gi = _shifted_image(den, shifts, weight_base)
            if not fi.is_zero and not gi.is_zero and resultant(fi, gi) != 0:
                return True
        return False
    # Degrees beyond the resultant oracle: collapse all but one variable at
    # random values and test each variable's image pair instead.  A common
    # factor involving x_k keeps that image pair non-coprime for almost every
    # collapse, so surviving all repeats certifies coprimality only
    # probabilistically (acceptable for a test-instance generator).
    for var in range(num.n):
        for _ in range(_CERT_REPEATS):
            values = [rng.randint(1, _CERT_SHIFT_RANGE) for _ in range(num.n)]
            fi = _eval_except(num, var, values)
            gi = _eval_except(den, var, values)
            if fi.is_zero or gi.is_zero:
                continue
            if unipoly_coprime(fi, gi):
                break
        else:
            return False
    return True


# --- Sylvester resultant oracle ----------------------------------------------


def resultant(f: UniPoly, g: UniPoly) -> int:
    """Sylvester-matrix resultant by exact fraction-free elimination.

    An oracle-scale routine: degrees are capped at 64 and the matrix is built
    densely.  Nonzero iff f and g are coprime; any common divisor of f(x0)
    and g(x0) at an integer point divides it.
    """
    if f.is_zero or g.is_zero:
        raise ValueError("resultant requires nonzero polynomials")
    m = f.degree
    k = g.degree
    if max(m, k) > RESULTANT_MAX_DEGREE:
        raise ValueError("degree beyond oracle scale")
    if m == 0 and k == 0:
        return 1
    if k == 0:
        return g.terms[0].coef ** m
    if m == 0:
        return f.terms[0].coef ** k
    fd = f.dense_coeffs()[::-1]
    gd = g.dense_coeffs()[::-1]
    size = m + k
    matrix = [[0] * size for _ in range(size)]
    for row in range(k):
        matrix[row][row:row + m + 1] = fd
    for row in range(m):
        matrix[k + row][row:row + k + 1] = gd
    return _bareiss_det(matrix)


def _bareiss_det(matrix: list[list[int]]) -> int:
    size = len(matrix)
    sign = 1
    prev = 1
    for col in range(size - 1):
        if matrix[col][col] == 0:
            for row in range(col + 1, size):
                if matrix[row][col] != 0:
                    matrix[col], matrix[row] = matrix[row], matrix[col]
                    sign = -sign
                    break
            else:
                return 0
        pivot = matrix[col][col]
        for row in range(col + 1, size):
            m_row = matrix[row]
            m_col = matrix[col]
            factor = m_row[col]
            for j in range(col + 1, size):
                m_row[j] = (m_row[j] * pivot - factor * m_col[j]) // prev
            m_row[col] = 0
        prev = pivot
    return sign * matrix[size - 1][size - 1]


# --- dense decoding oracle ----------------------------------------------------


def dense_decode_oracle(rho: int, beta: int, height_bound: int,
                        max_deg: int = _ORACLE_MAX_DEGREE) -> DecodeResult:
    """Full balanced base-beta expansion, digit by digit from the bottom.

    No sparsity shortcuts: every position is visited, borrowing from the next
    digit whenever the residue exceeds the height bound.  Semantics match
    upoly_decode on its whole domain; feasible up to degree ~200.
    """
    if height_bound < 1:
        raise ValueError("height bound must be >= 1")
    if beta < 2 * height_bound + 1:
        raise ValueError("beta must be >= 2*height_bound + 1")
    if rho == 0:
        return DecodeResult(UniPoly(), None, 0)
    u = rho
    terms: list[tuple[int, int]] = []
    exp = 0
    digits = 0
    while u != 0:
        if exp > max_deg:
            return DecodeResult(None, DEGREE_OVERFLOW, digits)
        digits += 1
        r = u % beta
        if r <= height_bound:
            c = r
        elif r >= beta - height_bound:
            c = r - beta
        else:
            return DecodeResult(None, GAP_RESIDUE, digits)
        if c:
            terms.append((c, exp))
        u = (u - c) // beta
        exp += 1
    return DecodeResult(UniPoly(terms), None, digits)
