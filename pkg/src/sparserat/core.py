"""Core types: sparse integer polynomials, canonical rational functions, bounds.

Polynomials are immutable sorted term lists with arbitrary-precision integer
coefficients.  A rational function is a numerator/denominator pair; the unique
reduced representative (joint gcd removed, positive sign anchor on the
denominator) is produced by :func:`canonicalize` and is what every
interpolation routine returns and every equality test compares.

Exact rational values are plain :class:`fractions.Fraction` objects, which
already keep a positive denominator and a reduced numerator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Protocol, Sequence, Union

# Exponents must stay machine-int sized.  Kronecker chains multiply exponents
# together, so chain builders check their total against the same cap.
MAX_EXPONENT = 2**62

# Mersenne prime backing the modular coprimality certificate.  Coefficient
# heights must stay below it for the certificate to be exact; larger inputs
# fall back to the exact remainder-sequence gcd.
CERT_PRIME = (1 << 61) - 1


class PoleError(ZeroDivisionError):
    """Denominator vanished at an evaluation point."""


class ChainTooLargeError(ValueError):
    """Substitution-chain exponents exceed the machine-int guard."""


class UniTerm(NamedTuple):
    coef: int
    exp: int


class MultiTerm(NamedTuple):
    coef: int
    exps: tuple[int, ...]


def _check_exp(exp: int) -> int:
    if exp < 0 or exp > MAX_EXPONENT:
        raise ValueError(f"exponent {exp} outside [0, 2^62]")
    return exp


@dataclass(frozen=True, init=False)
class UniPoly:
    """Sparse univariate integer polynomial.

    Terms are stored with strictly increasing exponents and no zero
    coefficients; the zero polynomial is the empty term list.  Instances are
    immutable and safe to share across threads.
    """

    terms: tuple[UniTerm, ...]

    def __init__(self, terms: Iterable[tuple[int, int]] = ()):
        merged: dict[int, int] = {}
        for coef, exp in terms:
            _check_exp(exp)
            merged[exp] = merged.get(exp, 0) + coef
        object.__setattr__(
            self,
            "terms",
            tuple(UniTerm(c, e) for e, c in sorted(merged.items()) if c != 0),
        )

    @property
    def n(self) -> int:
        return 1

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial (no -inf arithmetic)."""
        return self.terms[-1].exp if self.terms else None

    @property
    def min_exp(self) -> int | None:
        return self.terms[0].exp if self.terms else None

    @property
    def height(self) -> int:
        return max((abs(t.coef) for t in self.terms), default=0)

    def __len__(self) -> int:
        return len(self.terms)

    def __neg__(self) -> "UniPoly":
        return UniPoly((-c, e) for c, e in self.terms)

    def evaluate(self, x: int) -> int:
        return sum(c * x**e for c, e in self.terms)

    def dense_coeffs(self) -> list[int]:
        """Coefficient list c[0..deg], low exponent first (empty when zero)."""
        if self.is_zero:
            return []
        out = [0] * (self.terms[-1].exp + 1)
        for c, e in self.terms:
            out[e] = c
        return out

    def as_multivariate(self) -> "MultiPoly":
        return MultiPoly(1, ((c, (e,)) for c, e in self.terms))


def _chain_key(exps: tuple[int, ...]) -> tuple[int, ...]:
    # Monomial order induced by the substitution chains: the last variable is
    # the most significant (its chain point dwarfs all earlier ones).
    return exps[::-1]


@dataclass(frozen=True, init=False)
class MultiPoly:
    """Sparse integer polynomial in n variables.

    Terms are strictly increasing in the chain monomial order (exponent
    vectors compared with the last variable most significant), which is the
    order digit decoding naturally produces.
    """

    n: int
    terms: tuple[MultiTerm, ...]

    def __init__(self, n: int, terms: Iterable[tuple[int, Sequence[int]]] = ()):
        if n < 1:
            raise ValueError("need at least one variable")
        merged: dict[tuple[int, ...], int] = {}
        for coef, exps in terms:
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} has length != {n}")
            for e in exps:
                _check_exp(e)
            merged[exps] = merged.get(exps, 0) + coef
        ordered = sorted(
            ((e, c) for e, c in merged.items() if c != 0),
            key=lambda item: _chain_key(item[0]),
        )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", tuple(MultiTerm(c, e) for e, c in ordered))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int | None:
        return max(sum(t.exps) for t in self.terms) if self.terms else None

    @property
    def height(self) -> int:
        return max((abs(t.coef) for t in self.terms), default=0)

    def degree_in(self, var: int) -> int | None:
        return max(t.exps[var] for t in self.terms) if self.terms else None

    @property
    def leading_term(self) -> MultiTerm:
        """Largest term in the chain monomial order."""
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[-1]

    def __len__(self) -> int:
        return len(self.terms)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.n, ((-c, e) for c, e in self.terms))

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.n}")
        total = 0
        for c, exps in self.terms:
            v = c
            for x, e in zip(point, exps):
                if e:
                    v *= x**e
            total += v
        return total

    def as_univariate(self) -> UniPoly:
        if self.n != 1:
            raise ValueError("only single-variable polynomials convert")
        return UniPoly((c, e[0]) for c, e in self.terms)


Poly = Union[UniPoly, MultiPoly]


@dataclass(frozen=True)
class RationalFunction:
    """Numerator/denominator pair over the same variables.

    The constructor only enforces a nonzero denominator; build canonical
    instances through :func:`canonicalize`.  Equality is structural, so two
    canonical instances are equal iff they are the same function.
    """

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if type(self.num) is not type(self.den):
            raise TypeError("numerator and denominator must be the same kind")
        if self.num.n != self.den.n:
            raise ValueError("numerator and denominator disagree on variable count")
        if self.den.is_zero:
            raise ZeroDivisionError("zero-denominator")

    @property
    def n(self) -> int:
        return self.num.n


class BlackBox(Protocol):
    """Oracle returning the exact value of an unknown function at any point."""

    @property
    def n(self) -> int: ...

    def query(self, point: Sequence[int]) -> Fraction: ...


@dataclass(frozen=True)
class Bounds:
    """Caller-supplied interpolation bounds and the scale-search cap."""

    term_bound: int | None = None
    deg_bound: int | None = None
    deg_bound_last: int | None = None
    height_bound: int = 1
    shift_range: int = 1
    max_iter: int = 1_000_000

    def __post_init__(self) -> None:
        if self.term_bound is not None and self.term_bound < 1:
            raise ValueError("term bound must be >= 1")
        if self.deg_bound is not None and self.deg_bound < 0:
            raise ValueError("degree bound must be >= 0")
        if self.deg_bound_last is not None and self.deg_bound_last < 0:
            raise ValueError("last-variable degree bound must be >= 0")
        if self.height_bound < 1:
            raise ValueError("height bound must be >= 1")
        if self.shift_range < 1:
            raise ValueError("shift range must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class SubstitutionChain:
    """Evaluation points for multivariate digit decoding.

    point_i = (base + shift_i) ** (exp_base ** (i-1)) with nondecreasing
    positive shifts, so each point dominates the previous one enough that
    distinct monomials map to separated magnitudes.
    """

    base: int
    shifts: tuple[int, ...]
    exp_base: int
    deg_bound: int
    points: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError("chain base must be >= 2")
        if not self.shifts:
            raise ValueError("chain needs at least one shift")
        if any(s < 1 for s in self.shifts):
            raise ValueError("shifts must be positive")
        if any(a > b for a, b in zip(self.shifts, self.shifts[1:])):
            raise ValueError("shifts must be nondecreasing")
        if self.deg_bound < 0:
            raise ValueError("degree bound must be >= 0")
        if len(self.points) != len(self.shifts):
            raise ValueError("points and shifts disagree in length")
        for prev, cur in zip(self.points, self.points[1:]):
            if cur < prev ** (self.deg_bound + 1):
                raise ValueError("chain points grow too slowly for the degree bound")

    @property
    def n(self) -> int:
        return len(self.shifts)

    def prefix(self, k: int) -> "SubstitutionChain":
        """Sub-chain over the first k variables."""
        if not 1 <= k <= self.n:
            raise ValueError(f"prefix length {k} outside 1..{self.n}")
        return SubstitutionChain(
            self.base, self.shifts[:k], self.exp_base, self.deg_bound, self.points[:k]
        )


def zero_function(n: int = 1) -> RationalFunction:
    """The canonical zero function 0/1 over n variables."""
    if n == 1:
        return RationalFunction(UniPoly(), UniPoly([(1, 0)]))
    return RationalFunction(MultiPoly(n), MultiPoly(n, [(1, (0,) * n)]))


def eval_rational(h: RationalFunction, point: Sequence[int]) -> Fraction:
    """Exact reduced value of h at an integer point.

    Raises PoleError when the denominator vanishes there; the algorithm-chosen
    evaluation points can never hit a pole because a nonzero bounded-height
    denominator cannot vanish at them.
    """
    point = tuple(point)
    if len(point) != h.n:
        raise ValueError(f"point has {len(point)} coordinates, expected {h.n}")
    if isinstance(h.num, UniPoly):
        num_val = h.num.evaluate(point[0])
        den_val = h.den.evaluate(point[0])
    else:
        num_val = h.num.evaluate(point)
        den_val = h.den.evaluate(point)
    if den_val == 0:
        raise PoleError("pole")
    return Fraction(num_val, den_val)


# --- canonical forms ---------------------------------------------------------


def _content(p: Poly) -> int:
    return math.gcd(*(t.coef for t in p.terms)) if p.terms else 0


def _div_coeffs(p: Poly, k: int):
    if isinstance(p, UniPoly):
        return UniPoly((c // k, e) for c, e in p.terms)
    return MultiPoly(p.n, ((c // k, e) for c, e in p.terms))


def _sign_anchor(den: Poly) -> int:
    # Sign convention: the coefficient of the denominator monomial that is
    # largest with the FIRST variable most significant must be positive.  For
    # univariate denominators this is the ordinary leading coefficient.
    if isinstance(den, UniPoly):
        return den.terms[-1].coef
    return max(den.terms, key=lambda t: t.exps).coef


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _rem_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by b in the prime field, dense low-first lists."""
    a = a[:]
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    for k in range(len(a) - 1, db - 1, -1):
        q = a[k] * inv % p
        if q:
            off = k - db
            for j in range(db):
                a[off + j] = (a[off + j] - q * b[j]) % p
        a[k] = 0
    del a[db:]
    return _trim(a)


def _gcd_degree_mod(fc: list[int], gc: list[int], p: int) -> int:
    """Degree of gcd(f, g) in the prime field (Euclidean remainder sequence)."""
    a = _trim([c % p for c in fc])
    b = _trim([c % p for c in gc])
    while b:
        a, b = b, _rem_mod(a, b, p)
    return len(a) - 1


def _primitive(coeffs: list[int]) -> list[int]:
    coeffs = _trim(coeffs[:])
    if not coeffs:
        return coeffs
    c = math.gcd(*coeffs)
    if coeffs[-1] < 0:
        c = -c
    return [x // c for x in coeffs]


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """lc(b)^(deg a - deg b + 1) * a mod b over the integers."""
    a = a[:]
    db = len(b) - 1
    lc = b[-1]
    for k in range(len(a) - 1, db - 1, -1):
        head = a[k]
        for j in range(len(a)):
            a[j] *= lc
        if head:
            off = k - db
            for j in range(db):
                a[off + j] -= head * b[j]
        a[k] = 0
    del a[db:]
    return _trim(a)


def _gcd_exact_dense(fc: list[int], gc: list[int]) -> list[int]:
    """Primitive gcd of two nonzero integer polynomials (primitive PRS)."""
    a = _primitive(fc)
    b = _primitive(gc)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [1]
        a, b = b, _primitive(_pseudo_rem(a, b))
    return a


def _div_exact_dense(num: list[int], div: list[int]) -> list[int]:
    quot = [0] * (len(num) - len(div) + 1)
    rem = num[:]
    for k in range(len(quot) - 1, -1, -1):
        q, r = divmod(rem[k + len(div) - 1], div[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        quot[k] = q
        if q:
            for j in range(len(div)):
                rem[k + j] -= q * div[j]
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return quot


def _from_dense(coeffs: list[int]) -> UniPoly:
    return UniPoly((c, e) for e, c in enumerate(coeffs) if c)


def unipoly_coprime(f: UniPoly, g: UniPoly) -> bool:
    """Whether gcd(f, g) has degree zero, by a Euclidean remainder sequence.

    Runs in the prime field when coefficient heights allow, which certifies a
    trivial gcd exactly (a nontrivial integer gcd survives reduction because
    the leading coefficients are not divisible by the prime); otherwise falls
    back to the exact primitive remainder sequence.
    """
    if f.is_zero or g.is_zero:
        return False
    fd, gd = f.dense_coeffs(), g.dense_coeffs()
    if f.height < CERT_PRIME and g.height < CERT_PRIME:
        if _gcd_degree_mod(fd, gd, CERT_PRIME) == 0:
            return True
    return len(_gcd_exact_dense(fd, gd)) == 1


def canonicalize(num: Poly, den: Poly) -> RationalFunction:
    """Reduce a numerator/denominator pair to its canonical representative.

    Removes the joint gcd (the polynomial common factor where computable plus
    the integer content taken across both coefficient lists) and flips signs
    so the denominator's sign anchor is positive.  Multivariate inputs only
    have their content and sign normalized; the interpolation pipeline feeds
    this function pairs whose polynomial parts are already coprime.
    """
    if type(num) is not type(den) or num.n != den.n:
        raise TypeError("numerator and denominator must match in kind and arity")
    if den.is_zero:
        raise ZeroDivisionError("zero-denominator")
    if num.is_zero:
        return zero_function(num.n)
    if isinstance(num, UniPoly) and not unipoly_coprime(num, den):
        w = _gcd_exact_dense(num.dense_coeffs(), den.dense_coeffs())
        if len(w) > 1:
            num = _from_dense(_div_exact_dense(num.dense_coeffs(), w))
            den = _from_dense(_div_exact_dense(den.dense_coeffs(), w))
    joint = math.gcd(_content(num), _content(den))
    if joint > 1:
        num = _div_coeffs(num, joint)
        den = _div_coeffs(den, joint)
    if _sign_anchor(den) < 0:
        num, den = -num, -den
    return RationalFunction(num, den)
