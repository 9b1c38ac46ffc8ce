"""Vacuum representation of the disk algebra, in exact arithmetic.

Evaluation at the origin is a positive functional; its representation
space is spanned by the holomorphic column of the basis, with an inner
product whose weights are rational for rational parameters.  Everything
here stays inside the Gaussian rationals: inner products, matrix elements
of the representation, and truncated coherent vectors.

Two independent implementations of the action are kept side by side: one
multiplies in the algebra and projects, the other applies a closed-form
coefficient rule.  Tests require exact agreement.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import DomainError, Element
from .cone import disk_multiply, eval_disk
from .scalars import (
    GR_ZERO,
    GaussianRational,
    MultiIndex,
    binomial,
    factorial,
    multi_binomial,
    pochhammer,
)


class GnsVector:
    """Finite vector in the vacuum representation space.

    Coefficients are indexed by the multi-index of the holomorphic basis
    column; zero coefficients are dropped on construction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for q, c in (terms or {}).items():
            c = GaussianRational.coerce(c)
            if not c.is_zero():
                clean[MultiIndex(q)] = c
        self.terms = clean

    @staticmethod
    def zero() -> "GnsVector":
        return GnsVector()

    @staticmethod
    def basis(q, coeff=1) -> "GnsVector":
        return GnsVector({MultiIndex(q): GaussianRational.coerce(coeff)})

    def coeff(self, q) -> GaussianRational:
        return self.terms.get(MultiIndex(q), GR_ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GnsVector") -> "GnsVector":
        out = dict(self.terms)
        for q, c in other.terms.items():
            out[q] = out.get(q, GR_ZERO) + c
        return GnsVector(out)

    def __sub__(self, other: "GnsVector") -> "GnsVector":
        return self + other.scale(-1)

    def scale(self, z) -> "GnsVector":
        z = GaussianRational.coerce(z)
        return GnsVector({q: c * z for q, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, GnsVector) and self.terms == other.terms

    def __repr__(self) -> str:
        body = ", ".join(
            f"{tuple(q)}: {c.to_json()}" for q, c in sorted(self.terms.items())
        )
        return f"GnsVector({{{body}}})"


def gns_vector_to_json(psi: GnsVector) -> dict:
    items = []
    for q in sorted(psi.terms):
        c = psi.terms[q]
        entry = {"index": list(q)}
        entry.update(c.to_json())
        items.append(entry)
    return {"terms": items}


def gns_vector_from_json(data: dict) -> GnsVector:
    out = {}
    for entry in data.get("terms", []):
        q = MultiIndex(entry["index"])
        out[q] = GaussianRational.from_json(
            {"re": entry.get("re", "0"), "im": entry.get("im", "0")}
        )
    return GnsVector(out)


def iota(psi: GnsVector, n: int | None = None) -> Element:
    """Embed a vector back into the algebra along the holomorphic column."""
    if psi.is_zero():
        return Element.zero()
    if n is None:
        n = len(next(iter(psi.terms)))
    zero = MultiIndex.zero(n)
    return Element({(zero, q): c for q, c in psi.terms.items()})


def gns_project(a: Element) -> GnsVector:
    """Component of a disk element visible to the vacuum state: the part
    of the basis expansion with empty first index."""
    out = {}
    for (p, q), c in a.terms.items():
        if p.degree() == 0:
            out[q] = c
    return GnsVector(out)


def _require_positive(hbar) -> Fraction:
    hbar = Fraction(hbar)
    if hbar <= 0:
        raise DomainError("representation needs hbar > 0")
    return hbar


def inner_weight(q, hbar) -> Fraction:
    """Rational weight of the coefficient at index q in the inner product.

    This is the vacuum expectation of conj(f) . f for the basis element at
    q, so the pairing below is exactly the one induced by the state at the
    origin; a test pins that consistency.
    """
    hbar = _require_positive(hbar)
    q = MultiIndex(q)
    nu = 1 / (2 * hbar)
    d = q.degree()
    return pochhammer(nu, d) / Fraction(
        factorial(d) ** 2 * q.factorial()
    )


def gns_inner(psi: GnsVector, phi: GnsVector, hbar) -> GaussianRational:
    """Sesquilinear pairing; conjugate-linear in the first slot.

    Distinct basis columns are orthogonal, so the sum runs over the shared
    support only.
    """
    hbar = _require_positive(hbar)
    total = GR_ZERO
    for q, c in psi.terms.items():
        d = phi.terms.get(q)
        if d is None:
            continue
        total = total + c.conjugate() * d * inner_weight(q, hbar)
    return total


def gns_norm_squared(psi: GnsVector, hbar) -> Fraction:
    val = gns_inner(psi, psi, hbar)
    return val.re


def gns_rep_via_product(a: Element, psi: GnsVector, hbar) -> GnsVector:
    """Action of a disk element on a vector, by definition: multiply in the
    algebra against the embedded vector, then project."""
    hbar = _require_positive(hbar)
    if a.is_zero() or psi.is_zero():
        return GnsVector.zero()
    n = len(next(iter(psi.terms)))
    return gns_project(disk_multiply(a, iota(psi, n), hbar))


def gns_rep(a: Element, psi: GnsVector, hbar) -> GnsVector:
    """Action of a disk element on a vector, by a closed coefficient rule.

    Independent of gns_rep_via_product; the two must agree exactly and a
    test enforces that.
    """
    hbar = _require_positive(hbar)
    nu = 1 / (2 * hbar)
    out: dict = {}
    for (p, q), c in a.terms.items():
        alpha = max(p.degree(), q.degree())
        for s, cs in psi.terms.items():
            diff = s.minus(p)
            if diff is None:
                continue
            target = q + diff
            gamma = alpha + s.degree() - p.degree()
            jdeg = target.degree()
            weight = (
                Fraction(
                    multi_binomial(target, q)
                    * binomial(gamma, s.degree()),
                    p.factorial() * factorial(alpha - q.degree()),
                )
                * pochhammer(nu, gamma)
                * factorial(jdeg)
                / (Fraction(factorial(gamma)) * pochhammer(nu, jdeg))
            )
            val = c * cs * weight
            acc = out.get(target)
            out[target] = val if acc is None else acc + val
    return GnsVector(out)


def coherent_vector(w, cap: int) -> GnsVector:
    """Truncated coherent vector at an interior point, up to degree cap.

    Pairing against any vector supported in degrees <= cap reproduces the
    evaluation of that vector's embedding at w, exactly.
    """
    from .scalars import multi_indices_up_to_degree

    ws = tuple(GaussianRational.coerce(c) for c in w)
    n = len(ws)
    norm = sum(c.abs_squared() for c in ws)
    if norm >= 1:
        raise DomainError("coherent vectors live at interior points")
    out = {}
    for q in multi_indices_up_to_degree(n, cap):
        mono = GaussianRational.of(1)
        for c, e in zip(ws, q):
            mono = mono * c**e
        d = q.degree()
        scale = Fraction(factorial(d)) / (1 - norm) ** d
        out[q] = mono * scale
    return GnsVector(out)


def check_reproducing(w, psi: GnsVector, hbar) -> dict:
    """Pairing with the coherent vector evaluates the embedding at w."""
    hbar = _require_positive(hbar)
    if psi.is_zero():
        return {"holds": True, "cap": 0}
    cap = max(q.degree() for q in psi.terms)
    ew = coherent_vector(w, cap)
    lhs = gns_inner(ew, psi, hbar)
    n = len(next(iter(psi.terms)))
    rhs = eval_disk(iota(psi, n), w, hbar)
    return {"holds": lhs == rhs, "cap": cap, "value": lhs}


def disk_involution(a: Element) -> Element:
    """Adjoint on disk coefficients: swap the index pair and conjugate."""
    return Element(
        {(q, p): c.conjugate() for (p, q), c in a.terms.items()}
    )


def positivity_check(a: Element, hbar) -> Fraction:
    """Vacuum expectation of a* a; nonnegative for every element.

    Returns the exact rational value.
    """
    hbar = _require_positive(hbar)
    if a.is_zero():
        return Fraction(0)
    prod = disk_multiply(disk_involution(a), a, hbar)
    n = len(next(iter(a.terms))[0])
    zero = MultiIndex.zero(n)
    val = prod.coeff((zero, zero))
    if val.im != 0:
        raise DomainError("vacuum expectation of a*a must be real")
    return val.re


def state_kernel_part(a: Element) -> Element:
    """Null directions of the vacuum form inside an element: everything
    outside the holomorphic column."""
    return Element(
        {k: c for k, c in a.terms.items() if k[0].degree() != 0}
    )


def check_kernel_absorbed(a: Element, j: Element, hbar) -> bool:
    """Left multiplication keeps the vacuum null space inside itself; this
    is what makes the action well defined on vectors."""
    hbar = _require_positive(hbar)
    if not state_kernel_part(j) == j:
        raise DomainError("j must lie in the vacuum null space")
    if a.is_zero() or j.is_zero():
        return True
    return gns_project(disk_multiply(a, j, hbar)).is_zero()


def check_adjoint(a: Element, psi: GnsVector, phi: GnsVector, hbar) -> bool:
    """<pi(a) psi, phi> = <psi, pi(a*) phi>, exactly."""
    lhs = gns_inner(gns_rep(a, psi, hbar), phi, hbar)
    rhs = gns_inner(psi, gns_rep(disk_involution(a), phi, hbar), hbar)
    return lhs == rhs


def check_cauchy_schwarz(psi: GnsVector, phi: GnsVector, hbar) -> bool:
    pairing = gns_inner(psi, phi, hbar)
    return pairing.abs_squared() <= gns_norm_squared(
        psi, hbar
    ) * gns_norm_squared(phi, hbar)


def check_representation(a: Element, b: Element, psi: GnsVector, hbar) -> bool:
    """pi(a . b) psi = pi(a) pi(b) psi with the closed-form action."""
    hbar = _require_positive(hbar)
    prod = disk_multiply(a, b, hbar)
    lhs = gns_rep(prod, psi, hbar)
    rhs = gns_rep(a, gns_rep(b, psi, hbar), hbar)
    return lhs == rhs
