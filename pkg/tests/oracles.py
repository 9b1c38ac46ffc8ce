"""Independent reference computations the tests compare against.

Everything here is deliberately written without touching the library's own
product or recursion code paths: sympy differentiation for the flat star
product, sympy polynomial expansion for the symmetry pullback, and the
decimal module for high-precision constants.
"""

from __future__ import annotations

import random
from decimal import Decimal, getcontext
from fractions import Fraction

import sympy

from exactstar.algebra import Element
from exactstar.scalars import (
    GaussianRational,
    MultiIndex,
    multi_indices_up_to_degree,
    multi_range,
)


def seeded(seed: int) -> random.Random:
    return random.Random(seed)


def random_gr(rng: random.Random, span: int = 4) -> GaussianRational:
    return GaussianRational.of(
        Fraction(rng.randint(-span, span), rng.randint(1, 3)),
        Fraction(rng.randint(-span, span), rng.randint(1, 3)),
    )


def random_disk_element(rng, n: int, level: int, nterms: int = 4) -> Element:
    idx = list(multi_indices_up_to_degree(n, level))
    terms = {}
    for _ in range(nterms):
        terms[(rng.choice(idx), rng.choice(idx))] = random_gr(rng)
    return Element(terms)


def random_cone_element(rng, n: int, level: int, nterms: int = 4) -> Element:
    terms = {}
    for _ in range(nterms):
        alpha = rng.randint(0, level)
        idx = list(multi_indices_up_to_degree(n, alpha))
        terms[(rng.choice(idx), rng.choice(idx), alpha)] = random_gr(rng)
    return Element(terms)


def random_vector(rng, n: int, level: int, nterms: int = 3):
    from exactstar.gns import GnsVector

    idx = list(multi_indices_up_to_degree(n, level))
    return GnsVector({rng.choice(idx): random_gr(rng) for _ in range(nterms)})


# ---------------------------------------------------------------------------
# flat Wick star product by differentiation (sympy)


def wick_star_sympy(n: int, hbar: Fraction, I, J, K, L):
    """Star product of the monomials z^I zbar^J and z^K zbar^L, as a map
    (zexp, zbarexp) -> Fraction, computed with sympy derivatives only."""
    zs = sympy.symbols(f"z0:{n}")
    ws = sympy.symbols(f"w0:{n}")  # stands in for conj(z)
    a = sympy.prod([zs[i] ** I[i] for i in range(n)]) * sympy.prod(
        [ws[i] ** J[i] for i in range(n)]
    )
    b = sympy.prod([zs[i] ** K[i] for i in range(n)]) * sympy.prod(
        [ws[i] ** L[i] for i in range(n)]
    )
    total = sympy.Integer(0)
    h2 = sympy.Rational(2 * hbar)
    for N in multi_range(MultiIndex(I).meet(MultiIndex(L))):
        da, db = a, b
        for i in range(n):
            da = sympy.diff(da, zs[i], N[i])
            db = sympy.diff(db, ws[i], N[i])
        weight = h2 ** sum(N) / sympy.Integer(
            sympy.prod([sympy.factorial(e) for e in N])
        )
        total += weight * da * db
    total = sympy.expand(total)
    out = {}
    poly = sympy.Poly(total, *zs, *ws) if total != 0 else None
    if poly is None:
        return out
    for monom, coeff in poly.terms():
        ze, we = MultiIndex(monom[:n]), MultiIndex(monom[n:])
        out[(ze, we)] = Fraction(sympy.Rational(coeff))
    return out


# ---------------------------------------------------------------------------
# symmetry pullback by expansion (sympy)


def pullback_sympy(U_rows, gamma: int, I, J):
    """Coefficients of the substituted level-gamma monomial, by sympy.

    U_rows: matrix entries as (re, im) Fraction pairs.  Returns a map
    (K, L) -> GaussianRational matching the library's normalization."""
    from exactstar.scalars import factorial

    size = len(U_rows)
    n = size - 1
    zs = sympy.symbols(f"z0:{size}")
    cs = sympy.symbols(f"c0:{size}")  # conjugate copies
    i_unit = sympy.I

    def entry(a, b, conj=False):
        re, im = U_rows[a][b]
        val = sympy.Rational(re) + i_unit * sympy.Rational(im)
        return sympy.conjugate(val) if conj else val

    rows = [sum(entry(a, b) * zs[b] for b in range(size)) for a in range(size)]
    crows = [
        sum(entry(a, b, conj=True) * cs[b] for b in range(size))
        for a in range(size)
    ]
    I, J = MultiIndex(I), MultiIndex(J)
    expr = rows[0] ** (gamma - I.degree()) * crows[0] ** (gamma - J.degree())
    for i in range(n):
        expr *= rows[i + 1] ** I[i] * crows[i + 1] ** J[i]
    expr = sympy.expand(expr)
    poly = sympy.Poly(expr, *zs, *cs)
    out = {}
    src_norm = (
        I.factorial() * factorial(gamma - I.degree())
        * J.factorial() * factorial(gamma - J.degree())
    )
    for monom, coeff in poly.terms():
        K = MultiIndex(monom[1:size])
        L = MultiIndex(monom[size + 1:])
        tgt_norm = (
            K.factorial() * factorial(gamma - K.degree())
            * L.factorial() * factorial(gamma - L.degree())
        )
        val = sympy.simplify(coeff * sympy.Rational(tgt_norm, src_norm))
        re = Fraction(sympy.Rational(sympy.re(val)))
        im = Fraction(sympy.Rational(sympy.im(val)))
        out[(K, L)] = GaussianRational.of(re, im)
    return {k: v for k, v in out.items() if not v.is_zero()}


# ---------------------------------------------------------------------------
# constants


def e_minus_one_decimal(places: int = 50) -> tuple[Fraction, Fraction]:
    """Enclosure of e - 1 good to the requested number of digits."""
    getcontext().prec = places + 10
    val = Decimal(1).exp() - 1
    eps = Decimal(10) ** (-places)
    return Fraction(val - eps), Fraction(val + eps)
