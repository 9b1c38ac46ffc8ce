"""Exact scalar arithmetic: rationals, Gaussian rationals, multiindices,
extended nonnegative values, certified square-root enclosures, and exact
finite sums of square roots.

Everything here stays in (extensions of) the rationals.  Floating point
appears only in explicit ``to_float`` presentations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

RationalLike = Union[int, Fraction]

_FACTORIAL_MEMO_CAP = 256
_factorial_memo: list[int] = [1]


def factorial(n: int) -> int:
    """Factorial with a memoized table up to a fixed cap."""
    if n < 0:
        raise ValueError("factorial of negative integer")
    if n >= _FACTORIAL_MEMO_CAP:
        return math.factorial(n)
    while len(_factorial_memo) <= n:
        _factorial_memo.append(_factorial_memo[-1] * len(_factorial_memo))
    return _factorial_memo[n]


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def pochhammer(x: Fraction | int, r: int) -> Fraction:
    """Raising factorial (x)_r = x (x+1) ... (x+r-1); empty product is 1."""
    if r < 0:
        raise ValueError("pochhammer needs r >= 0")
    out = Fraction(1)
    x = Fraction(x)
    for i in range(r):
        out *= x + i
    return out


def is_allowed_hbar(hbar: Fraction) -> bool:
    """True when no prefactor (1/2h)_r can vanish: 2h not in {0,-1,-1/2,-1/3,...}."""
    two_h = 2 * Fraction(hbar)
    if two_h == 0:
        return False
    u = 1 / two_h
    return not (u.denominator == 1 and u <= 0)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction."""
    return Fraction(text.strip())


def format_rational(q: RationalLike) -> str:
    """Serialize as "p/q", or plain "p" for integers."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def sqrt_bracket(q: RationalLike, tol: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Rational enclosure [lo, hi] of sqrt(q) for q >= 0 with hi - lo <= tol.

    Uses integer square roots of scaled numerators, so both bounds are exact
    rationals.  Each doubling of the scale halves the width.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    if q == 0:
        return Fraction(0), Fraction(0)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    p, d = q.numerator, q.denominator
    # sqrt(p/d) = sqrt(p*d)/d; scale by 2^s until the grid is finer than tol.
    s = 0
    while Fraction(1, d << s) > tol:
        s += 1
    scale = 1 << s
    r = math.isqrt(p * d * scale * scale)
    lo = Fraction(r, d * scale)
    hi = Fraction(r + 1, d * scale) if r * r != p * d * scale * scale else lo
    return lo, hi


def sqrt_float(q: RationalLike) -> float:
    q = Fraction(q)
    return math.sqrt(q.numerator / q.denominator)


def root_float(q: RationalLike, power_of_two: int) -> float:
    """Float presentation of q**(1/2^m) for q >= 0."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    x = q.numerator / q.denominator
    for _ in range(power_of_two):
        x = math.sqrt(x)
    return x


@dataclass(frozen=True)
class GaussianRational:
    """Complex number with Fraction real and imaginary parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re: RationalLike, im: RationalLike = 0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    @staticmethod
    def coerce(value: "GaussianRational | RationalLike") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value), Fraction(0))

    def __add__(self, other: "GaussianRational | RationalLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: "GaussianRational | RationalLike") -> "GaussianRational":
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other: "GaussianRational | RationalLike") -> "GaussianRational":
        return GaussianRational.coerce(other) + (-self)

    def __mul__(self, other: "GaussianRational | RationalLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "GaussianRational | RationalLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        n = o.abs_squared()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        c = o.conjugate()
        num = self * c
        return GaussianRational(num.re / n, num.im / n)

    def __pow__(self, k: int) -> "GaussianRational":
        if k < 0:
            return GaussianRational.of(1) / (self ** (-k))
        out = GaussianRational.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @staticmethod
    def from_json(data: dict) -> "GaussianRational":
        return GaussianRational(parse_rational(data.get("re", "0")), parse_rational(data.get("im", "0")))


GR_ZERO = GaussianRational.of(0)
GR_ONE = GaussianRational.of(1)
GR_I = GaussianRational.of(0, 1)


class MultiIndex(tuple):
    """Multiindex in N_0^n with componentwise arithmetic."""

    def __new__(cls, entries: Iterable[int]):
        t = tuple(int(e) for e in entries)
        if any(e < 0 for e in t):
            raise ValueError("multiindex entries must be nonnegative")
        return super().__new__(cls, t)

    @staticmethod
    def zero(n: int) -> "MultiIndex":
        return MultiIndex((0,) * n)

    @staticmethod
    def unit(n: int, i: int) -> "MultiIndex":
        return MultiIndex(tuple(1 if j == i else 0 for j in range(n)))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":  # type: ignore[override]
        return MultiIndex(a + b for a, b in zip(self, other, strict=True))

    def minus(self, other: "MultiIndex") -> "MultiIndex | None":
        """Componentwise difference, or None when any entry would go negative."""
        if len(self) != len(other):
            raise ValueError("dimension mismatch")
        if any(b > a for a, b in zip(self, other)):
            return None
        return MultiIndex(a - b for a, b in zip(self, other))

    def __le__(self, other: "MultiIndex") -> bool:  # type: ignore[override]
        return all(a <= b for a, b in zip(self, other, strict=True))

    def meet(self, other: "MultiIndex") -> "MultiIndex":
        """Componentwise minimum."""
        return MultiIndex(min(a, b) for a, b in zip(self, other, strict=True))

    def degree(self) -> int:
        return sum(self)

    def factorial(self) -> int:
        out = 1
        for e in self:
            out *= factorial(e)
        return out

    def __repr__(self) -> str:
        return "MultiIndex" + tuple.__repr__(self)


def multi_binomial(upper: MultiIndex, lower: MultiIndex) -> int:
    """Product of componentwise binomial coefficients; 0 unless lower <= upper."""
    out = 1
    for a, b in zip(upper, lower, strict=True):
        out *= binomial(a, b)
        if out == 0:
            return 0
    return out


def multi_range(bound: MultiIndex) -> Iterator[MultiIndex]:
    """Iterate all K with 0 <= K <= bound componentwise (lexicographic)."""
    n = len(bound)
    if n == 0:
        yield MultiIndex(())
        return
    current = [0] * n
    while True:
        yield MultiIndex(current)
        i = n - 1
        while i >= 0:
            if current[i] < bound[i]:
                current[i] += 1
                break
            current[i] = 0
            i -= 1
        if i < 0:
            return


def multi_indices_of_degree(n: int, d: int) -> Iterator[MultiIndex]:
    """All multiindices in N_0^n with |I| = d."""
    if n == 0:
        if d == 0:
            yield MultiIndex(())
        return
    if n == 1:
        yield MultiIndex((d,))
        return
    for first in range(d, -1, -1):
        for rest in multi_indices_of_degree(n - 1, d - first):
            yield MultiIndex((first,) + tuple(rest))


def multi_indices_up_to_degree(n: int, d: int) -> Iterator[MultiIndex]:
    for total in range(d + 1):
        yield from multi_indices_of_degree(n, total)


@dataclass(frozen=True)
class ExtendedNonNeg:
    """Nonnegative rational extended with infinity.

    Convention: 0 * inf = 0 (an absent contribution stays absent no matter
    how large the weight); inf absorbs under addition and under products
    with nonzero values.
    """

    value: Fraction
    infinite: bool = False

    @staticmethod
    def of(value: RationalLike) -> "ExtendedNonNeg":
        v = Fraction(value)
        if v < 0:
            raise ValueError("extended nonnegative value must be >= 0")
        return ExtendedNonNeg(v)

    @staticmethod
    def infinity() -> "ExtendedNonNeg":
        return ExtendedNonNeg(Fraction(0), True)

    def __add__(self, other: "ExtendedNonNeg | RationalLike") -> "ExtendedNonNeg":
        o = other if isinstance(other, ExtendedNonNeg) else ExtendedNonNeg.of(other)
        if self.infinite or o.infinite:
            return ExtendedNonNeg.infinity()
        return ExtendedNonNeg(self.value + o.value)

    __radd__ = __add__

    def __mul__(self, other: "ExtendedNonNeg | RationalLike") -> "ExtendedNonNeg":
        o = other if isinstance(other, ExtendedNonNeg) else ExtendedNonNeg.of(other)
        if self.is_zero() or o.is_zero():
            return ExtendedNonNeg(Fraction(0))
        if self.infinite or o.infinite:
            return ExtendedNonNeg.infinity()
        return ExtendedNonNeg(self.value * o.value)

    __rmul__ = __mul__

    def add(self, other: "ExtendedNonNeg | RationalLike") -> "ExtendedNonNeg":
        return self + other

    def mul(self, other: "ExtendedNonNeg | RationalLike") -> "ExtendedNonNeg":
        return self * other

    def squared(self) -> "ExtendedNonNeg":
        return self * self

    def is_zero(self) -> bool:
        return not self.infinite and self.value == 0

    def compare(self, other: "ExtendedNonNeg") -> int:
        if self.infinite and other.infinite:
            return 0
        if self.infinite:
            return 1
        if other.infinite:
            return -1
        return (self.value > other.value) - (self.value < other.value)

    def __le__(self, other: "ExtendedNonNeg") -> bool:
        return self.compare(other) <= 0

    def __lt__(self, other: "ExtendedNonNeg") -> bool:
        return self.compare(other) < 0

    def to_float(self) -> float:
        return math.inf if self.infinite else self.value.numerator / self.value.denominator

    def __repr__(self) -> str:
        return "ExtendedNonNeg(inf)" if self.infinite else f"ExtendedNonNeg({self.value!s})"


ENN_ZERO = ExtendedNonNeg.of(0)
ENN_INF = ExtendedNonNeg.infinity()


# --- exact finite sums of square roots ------------------------------------

_SMALL_PRIMES: list[int] = []


def _primes_up_to(limit: int) -> list[int]:
    global _SMALL_PRIMES
    if _SMALL_PRIMES and _SMALL_PRIMES[-1] >= limit:
        return _SMALL_PRIMES
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    _SMALL_PRIMES = [i for i, flag in enumerate(sieve) if flag]
    return _SMALL_PRIMES


_TRIAL_BOUND = 100_000


def square_free_split(n: int) -> tuple[int, int]:
    """Write n = s^2 * r with r squarefree; returns (s, r). n must be >= 1.

    Trial division runs over a fixed small-prime table, so arbitrarily large
    smooth inputs (factorial products in particular) reduce quickly.  A
    leftover cofactor with only huge prime factors is classified by size; the
    rare undecidable case raises rather than guessing."""
    if n < 1:
        raise ValueError("need a positive integer")
    root = math.isqrt(n)
    if root * root == n:
        s2, r2 = (1, 1) if root == 1 else square_free_split(root)
        # n = root^2 = (s2^2 r2)^2, and r2^2 folds into the square part
        return s2 * s2 * r2, 1
    s, r = 1, 1
    for p in _primes_up_to(_TRIAL_BOUND):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                r *= p
    if n > 1:
        # every prime factor of the cofactor exceeds _TRIAL_BOUND
        root = math.isqrt(n)
        if root * root == n:
            # root's factors also exceed the bound; squarefree if below bound^2
            if root > _TRIAL_BOUND**2:
                raise ValueError(f"cannot certify square part of cofactor {n}")
            s *= root
        elif n <= _TRIAL_BOUND**3:
            # at most two large prime factors and not a square: squarefree
            r *= n
        else:
            raise ValueError(f"cannot certify squarefree part of cofactor {n}")
    return s, r


class RootSum:
    """Exact finite sum sum_r c_r * sqrt(r) over squarefree positive radicands.

    Closed under addition and multiplication (radicand products reduce with a
    gcd, no factorization needed after construction).  Equality is structural,
    which is valid because square roots of distinct squarefree integers are
    linearly independent over the rationals.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        for r, c in (terms or {}).items():
            if c != 0:
                clean[r] = Fraction(c)
        self.terms = clean

    @staticmethod
    def rational(q: RationalLike) -> "RootSum":
        return RootSum({1: Fraction(q)})

    @staticmethod
    def sqrt_rational(q: RationalLike) -> "RootSum":
        """Exact representation of sqrt(q) for q >= 0."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("sqrt of negative rational")
        if q == 0:
            return RootSum({})
        s, r = square_free_split(q.numerator * q.denominator)
        # sqrt(p/d) = sqrt(p d)/d = s sqrt(r)/d
        return RootSum({r: Fraction(s, q.denominator)})

    def __add__(self, other: "RootSum | RationalLike") -> "RootSum":
        o = other if isinstance(other, RootSum) else RootSum.rational(other)
        out = dict(self.terms)
        for r, c in o.terms.items():
            out[r] = out.get(r, Fraction(0)) + c
        return RootSum(out)

    __radd__ = __add__

    def __neg__(self) -> "RootSum":
        return RootSum({r: -c for r, c in self.terms.items()})

    def __sub__(self, other: "RootSum | RationalLike") -> "RootSum":
        o = other if isinstance(other, RootSum) else RootSum.rational(other)
        return self + (-o)

    def __mul__(self, other: "RootSum | RationalLike") -> "RootSum":
        o = other if isinstance(other, RootSum) else RootSum.rational(other)
        out: dict[int, Fraction] = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in o.terms.items():
                g = math.gcd(r1, r2)
                rad = (r1 // g) * (r2 // g)
                coeff = c1 * c2 * g
                out[rad] = out.get(rad, Fraction(0)) + coeff
        return RootSum(out)

    __rmul__ = __mul__

    def squared(self) -> "RootSum":
        return self * self

    def is_rational(self) -> bool:
        return all(r == 1 for r in self.terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational RootSum")
        return self.terms.get(1, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RootSum.rational(other)
        if not isinstance(other, RootSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def bracket(self, tol: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the value (terms may have either sign)."""
        lo = hi = Fraction(0)
        k = max(1, len(self.terms))
        for r, c in self.terms.items():
            per_term = tol / (k * max(1, abs(c)))
            slo, shi = sqrt_bracket(Fraction(r), per_term)
            if c >= 0:
                lo += c * slo
                hi += c * shi
            else:
                lo += c * shi
                hi += c * slo
        return lo, hi

    def to_float(self) -> float:
        return sum(float(c) * math.sqrt(r) for r, c in self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "RootSum(0)"
        parts = [f"{c!s}*sqrt({r})" for r, c in sorted(self.terms.items())]
        return "RootSum(" + " + ".join(parts) + ")"
