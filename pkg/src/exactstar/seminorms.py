"""Recursive seminorm machinery over structure-constant models.

Core recursion, with branch word ell in [0, 2^m):

    h[0, 0, gamma](a)          = |a_gamma|
    h[m+1, 2*ell, gamma](a)    = sum_alpha h[m, ell, alpha](a)^2 * row_sum(alpha, gamma)
    h[m+1, 2*ell+1, gamma](a)  = sum_beta  h[m, ell, beta](a)^2  * col_sum(beta, gamma)

where row_sum(alpha, gamma) = sum_beta |C^gamma_{alpha,beta}| and col_sum is
the transposed weight.  The seminorm is the 2^m-th root, taken only at
presentation; everything before that stays exact (rational, sums of square
roots of rationals, or certified intervals).

Series with infinitely many contributors come back as Bracket values: a
certified interval with a recorded truncation depth and a tag saying where
the tail bound came from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Protocol

from .algebra import DomainError, Element, Index, multiply
from .scalars import ExtendedNonNeg, RootSum, sqrt_bracket

DEFAULT_TOL = Fraction(1, 10**12)

# tail_source tags, in absorption priority (highest wins when combining)
TAG_DIVERGENT = "divergent_witness"
TAG_TRUNCATED = "truncated"
TAG_MAJORANT = "model_majorant"
TAG_GEOMETRIC = "geometric_tail"
TAG_EXACT = "exact"
_TAG_RANK = {TAG_EXACT: 0, TAG_GEOMETRIC: 1, TAG_MAJORANT: 2, TAG_TRUNCATED: 3, TAG_DIVERGENT: 4}


def _join_tag(s: str, t: str) -> str:
    return s if _TAG_RANK[s] >= _TAG_RANK[t] else t


@dataclass(frozen=True)
class Bracket:
    """Certified interval [lo, hi] for a nonnegative quantity.

    lo is always a finite rational lower bound.  hi may be infinite; the tag
    records why:
      exact              lo == hi, the value itself
      geometric_tail     hi from a geometric remainder (e.g. square-root digits)
      model_majorant     hi from a model-supplied closed-form term bound
      truncated          partial sum only; no upper bound computed (hi infinite)
      divergent_witness  the series is provably infinite (hi infinite, attained)
    """

    lo: Fraction
    hi: ExtendedNonNeg
    depth: int = 0
    tail_source: str = TAG_EXACT

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError("Bracket.lo must be nonnegative")
        if not self.hi.infinite and self.hi.value < self.lo:
            raise ValueError("Bracket needs lo <= hi")
        if self.tail_source == TAG_EXACT and (self.hi.infinite or self.hi.value != self.lo):
            raise ValueError("tag 'exact' requires lo == hi")

    @staticmethod
    def exact(q: Fraction | int) -> "Bracket":
        q = Fraction(q)
        return Bracket(q, ExtendedNonNeg.of(q), 0, TAG_EXACT)

    @staticmethod
    def divergent(partial: Fraction | int = 0, depth: int = 0) -> "Bracket":
        return Bracket(Fraction(partial), ExtendedNonNeg.infinity(), depth, TAG_DIVERGENT)

    @staticmethod
    def truncated(partial: Fraction | int, depth: int) -> "Bracket":
        return Bracket(Fraction(partial), ExtendedNonNeg.infinity(), depth, TAG_TRUNCATED)

    @staticmethod
    def enclosure(lo: Fraction, hi: Fraction, depth: int = 0, tag: str = TAG_GEOMETRIC) -> "Bracket":
        if lo == hi:
            return Bracket(lo, ExtendedNonNeg.of(hi), depth, TAG_EXACT)
        return Bracket(lo, ExtendedNonNeg.of(hi), depth, tag)

    def is_exact(self) -> bool:
        return self.tail_source == TAG_EXACT

    def is_divergent(self) -> bool:
        return self.tail_source == TAG_DIVERGENT

    def finite_certified(self) -> bool:
        return not self.hi.infinite

    def is_zero(self) -> bool:
        return self.is_exact() and self.lo == 0

    def width(self) -> ExtendedNonNeg:
        if self.hi.infinite:
            return ExtendedNonNeg.infinity()
        return ExtendedNonNeg.of(self.hi.value - self.lo)

    def contains(self, q: Fraction) -> bool:
        if q < self.lo:
            return False
        return self.hi.infinite or q <= self.hi.value

    def __add__(self, other: "Bracket") -> "Bracket":
        return Bracket(
            self.lo + other.lo,
            self.hi.add(other.hi),
            max(self.depth, other.depth),
            _join_tag(self.tail_source, other.tail_source),
        )

    def __mul__(self, other: "Bracket") -> "Bracket":
        if self.is_zero() or other.is_zero():
            return Bracket.exact(0)
        return Bracket(
            self.lo * other.lo,
            self.hi.mul(other.hi),
            max(self.depth, other.depth),
            _join_tag(self.tail_source, other.tail_source),
        )

    def scale(self, q: Fraction) -> "Bracket":
        if q < 0:
            raise ValueError("scale factor must be nonnegative")
        if q == 0:
            return Bracket.exact(0)
        return Bracket(self.lo * q, self.hi.mul(ExtendedNonNeg.of(q)), self.depth, self.tail_source)

    def root_interval(self, m: int, tol: Fraction = DEFAULT_TOL) -> tuple[Fraction, ExtendedNonNeg]:
        """Enclosure of the 2^m-th root."""
        lo, _ = _root_bracket(self.lo, m, tol)
        if self.hi.infinite:
            return lo, ExtendedNonNeg.infinity()
        _, hi = _root_bracket(self.hi.value, m, tol)
        return lo, ExtendedNonNeg.of(hi)

    def midpoint_float(self) -> float:
        if self.hi.infinite:
            return float("inf") if self.is_divergent() else float(self.lo)
        return float(self.lo + self.hi.value) / 2.0


def _root_bracket(q: Fraction, m: int, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Rational enclosure of q^(1/2^m), q >= 0."""
    lo = hi = q
    for _ in range(m):
        lo = sqrt_bracket(lo, tol)[0]
        hi = sqrt_bracket(hi, tol)[1]
    return lo, hi


def rootsum_bracket(rs: RootSum, tol: Fraction = DEFAULT_TOL) -> Bracket:
    if rs.is_rational():
        q = rs.rational_value()
        if q < 0:
            raise ValueError("negative value cannot become a nonnegative Bracket")
        return Bracket.exact(q)
    lo, hi = rs.bracket(tol)
    if lo < 0:
        raise ValueError("negative value cannot become a nonnegative Bracket")
    return Bracket.enclosure(lo, hi, 0, TAG_GEOMETRIC)


def rootsum_sign(rs: RootSum) -> int:
    """Exact sign of a sum of square roots of rationals."""
    if rs.is_zero():
        return 0
    tol = Fraction(1, 10**12)
    for _ in range(40):
        lo, hi = rs.bracket(tol)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        tol = tol * tol
    raise RuntimeError("sign of root sum did not resolve; value suspiciously close to zero")


# ---------------------------------------------------------------------------
# h values: the recursion's working scalars


class HVal:
    """Value of one h[m, ell, gamma] cell.

    kind "exact":   extended nonnegative rational, the value itself
    kind "sqrt":    value = sqrt(sq) for a rational sq (modulus at m = 0)
    kind "root":    exact finite sum of square roots of rationals
    kind "bracket": certified interval
    """

    __slots__ = ("kind", "enn", "sq", "rs", "br")

    def __init__(self, kind: str, enn=None, sq=None, rs=None, br=None):
        self.kind = kind
        self.enn = enn
        self.sq = sq
        self.rs = rs
        self.br = br

    @staticmethod
    def exact(value: ExtendedNonNeg | Fraction | int) -> "HVal":
        if not isinstance(value, ExtendedNonNeg):
            value = ExtendedNonNeg.of(Fraction(value))
        return HVal("exact", enn=value)

    @staticmethod
    def modulus_sq(sq: Fraction) -> "HVal":
        """Value sqrt(sq); keeps the square exact."""
        if sq < 0:
            raise ValueError("squared modulus must be nonnegative")
        return HVal("sqrt", sq=sq)

    @staticmethod
    def root(rs: RootSum) -> "HVal":
        if rs.is_rational():
            return HVal.exact(rs.rational_value())
        return HVal("root", rs=rs)

    @staticmethod
    def bracket(br: Bracket) -> "HVal":
        if br.is_exact():
            return HVal.exact(br.lo)
        return HVal("bracket", br=br)

    @staticmethod
    def zero() -> "HVal":
        return HVal.exact(0)

    @staticmethod
    def infinite() -> "HVal":
        return HVal.exact(ExtendedNonNeg.infinity())

    def is_zero(self) -> bool:
        if self.kind == "exact":
            return self.enn.is_zero()
        if self.kind == "sqrt":
            return self.sq == 0
        if self.kind == "root":
            return self.rs.is_zero()
        return self.br.is_zero()

    def is_infinite(self) -> bool:
        if self.kind == "exact":
            return self.enn.infinite
        if self.kind == "bracket":
            return self.br.is_divergent()
        return False

    def exact_rational(self) -> Fraction | None:
        """The value as a Fraction when it is exactly one, else None."""
        if self.kind == "exact" and not self.enn.infinite:
            return self.enn.value
        if self.kind == "sqrt":
            r = _exact_sqrt(self.sq)
            return r
        if self.kind == "root" and self.rs.is_rational():
            return self.rs.rational_value()
        if self.kind == "bracket" and self.br.is_exact():
            return self.br.lo
        return None

    def squared(self) -> "HVal":
        if self.kind == "sqrt":
            return HVal.exact(self.sq)
        if self.kind == "exact":
            return HVal.exact(self.enn.squared())
        if self.kind == "root":
            return HVal.root(self.rs * self.rs)
        return HVal.bracket(self.br * self.br)

    def times(self, w) -> "HVal":
        """Multiply by a nonnegative weight (Fraction, RootSum, ENN, Bracket)."""
        if isinstance(w, (int, Fraction)):
            w = Fraction(w)
            if w == 0 or self.is_zero():
                return HVal.zero()
            if self.kind == "exact":
                return HVal.exact(self.enn.mul(ExtendedNonNeg.of(w)))
            if self.kind == "sqrt":
                return HVal.root(RootSum.sqrt_rational(self.sq) * RootSum.rational(w))
            if self.kind == "root":
                return HVal.root(self.rs * RootSum.rational(w))
            return HVal.bracket(self.br.scale(w))
        if isinstance(w, ExtendedNonNeg):
            if w.infinite:
                return HVal.zero() if self.is_zero() else HVal.infinite()
            return self.times(w.value)
        if isinstance(w, RootSum):
            if w.is_rational():
                return self.times(w.rational_value())
            if self.is_zero():
                return HVal.zero()
            if self.kind in ("exact", "sqrt", "root"):
                return HVal.root(self._as_rootsum() * w)
            return HVal.bracket(self.br * rootsum_bracket(w))
        if isinstance(w, Bracket):
            return HVal.bracket(self.to_bracket() * w)
        raise TypeError(f"unsupported weight type {type(w)!r}")

    def plus(self, other: "HVal") -> "HVal":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.is_infinite() or other.is_infinite():
            return HVal.infinite()
        a, b = self, other
        if a.kind == "bracket" or b.kind == "bracket":
            return HVal.bracket(a.to_bracket() + b.to_bracket())
        if a.kind == "exact" and b.kind == "exact":
            return HVal.exact(a.enn.add(b.enn))
        return HVal.root(a._as_rootsum() + b._as_rootsum())

    def _as_rootsum(self) -> RootSum:
        if self.kind == "exact":
            if self.enn.infinite:
                raise ValueError("infinite value has no root-sum form")
            return RootSum.rational(self.enn.value)
        if self.kind == "sqrt":
            return RootSum.sqrt_rational(self.sq)
        if self.kind == "root":
            return self.rs
        raise ValueError("bracket value has no exact root-sum form")

    def to_bracket(self, tol: Fraction = DEFAULT_TOL) -> Bracket:
        if self.kind == "exact":
            if self.enn.infinite:
                return Bracket.divergent()
            return Bracket.exact(self.enn.value)
        if self.kind == "sqrt":
            r = _exact_sqrt(self.sq)
            if r is not None:
                return Bracket.exact(r)
            lo, hi = sqrt_bracket(self.sq, tol)
            return Bracket.enclosure(lo, hi, 0, TAG_GEOMETRIC)
        if self.kind == "root":
            return rootsum_bracket(self.rs, tol)
        return self.br

    def to_float(self) -> float:
        if self.kind == "sqrt":
            return float(self.sq) ** 0.5
        return self.to_bracket().midpoint_float()

    def exact_string(self) -> str:
        """Rational string when exactly rational, else ''."""
        q = self.exact_rational()
        if q is not None:
            return str(q)
        if self.is_infinite():
            return "inf"
        return ""

    def __repr__(self) -> str:
        return f"HVal({self.kind}, ~{self.to_float():.6g})"


def _exact_sqrt(sq: Fraction) -> Fraction | None:
    import math

    if sq == 0:
        return Fraction(0)
    pn = math.isqrt(sq.numerator)
    pd = math.isqrt(sq.denominator)
    if pn * pn == sq.numerator and pd * pd == sq.denominator:
        return Fraction(pn, pd)
    return None


# ---------------------------------------------------------------------------
# model protocol as the engine sees it


class SeminormModel(Protocol):
    name: str
    commutative: bool

    def pair_product(self, left: Index, right: Index) -> dict[Index, Any]: ...

    def row_sum(self, alpha: Index, gamma: Index): ...

    def col_sum(self, beta: Index, gamma: Index): ...

    def row_parents(self, gamma: Index) -> Iterable[Index]:
        """Finite enumeration of alpha with row_sum(alpha, gamma) != 0.

        Must raise InfiniteFanError when no finite enumeration exists; such
        models provide h_special instead."""
        ...

    def col_parents(self, gamma: Index) -> Iterable[Index]: ...


class HTable:
    """Memoized h[m, ell, gamma] values for one (model, element) pair."""

    def __init__(self, model, element: Element, tol: Fraction = DEFAULT_TOL):
        self.model = model
        self.element = element
        self.tol = tol
        self._cells: dict[tuple[int, int, Index], HVal] = {}

    def h(self, m: int, ell: int, gamma: Index) -> HVal:
        if m < 0:
            raise ValueError("m must be nonnegative")
        if not 0 <= ell < (1 << m):
            raise ValueError(f"branch word ell={ell} outside [0, 2^{m})")
        key = (m, ell, gamma)
        cached = self._cells.get(key)
        if cached is not None:
            return cached
        val = self._compute(m, ell, gamma)
        self._cells[key] = val
        return val

    def _compute(self, m: int, ell: int, gamma: Index) -> HVal:
        if m == 0:
            c = self.element.coeff(gamma)
            if c.is_zero():
                return HVal.zero()
            sq = c.abs_squared()
            r = _exact_sqrt(sq)
            return HVal.exact(r) if r is not None else HVal.modulus_sq(sq)

        special = getattr(self.model, "h_special", None)
        if special is not None:
            out = special(self, m, ell, gamma)
            if out is not None:
                return out

        bit = ell & 1
        parent_ell = ell >> 1
        weight: Callable = self.model.row_sum if bit == 0 else self.model.col_sum
        if m == 1:
            # h at level 0 vanishes off the support, so the fan restricts to it
            parents: Iterable[Index] = list(self.element.support())
        else:
            parents = self.model.row_parents(gamma) if bit == 0 else self.model.col_parents(gamma)
        acc = HVal.zero()
        for p in parents:
            w = weight(p, gamma)
            if _weight_is_zero(w):
                continue
            hv = self.h(m - 1, parent_ell, p)
            if hv.is_zero():
                continue
            acc = acc.plus(hv.squared().times(w))
        return acc


def _weight_is_zero(w) -> bool:
    if isinstance(w, (int, Fraction)):
        return w == 0
    if isinstance(w, ExtendedNonNeg):
        return w.is_zero()
    if isinstance(w, RootSum):
        return w.is_zero()
    if isinstance(w, Bracket):
        return w.is_zero()
    return False


def h(model, a: Element, m: int, ell: int, gamma: Index, tol: Fraction = DEFAULT_TOL):
    """One h value; ExtendedNonNeg when exact, Bracket otherwise."""
    v = HTable(model, a, tol).h(m, ell, gamma)
    q = v.exact_rational()
    if q is not None:
        return ExtendedNonNeg.of(q)
    if v.kind == "exact":
        return v.enn
    return v.to_bracket(tol)


# ---------------------------------------------------------------------------
# presentation


@dataclass(frozen=True)
class SeminormResult:
    m: int
    ell: int
    gamma: Index
    h_val: HVal
    h_bracket: Bracket
    root_lo: Fraction
    root_hi: ExtendedNonNeg
    value_float: float

    @property
    def divergent(self) -> bool:
        return self.h_bracket.is_divergent()


def _present(m: int, ell: int, gamma: Index, v: HVal, tol: Fraction) -> SeminormResult:
    br = v.to_bracket(tol)
    rlo, rhi = br.root_interval(m, tol)
    if br.is_divergent():
        val = float("inf")
    elif rhi.infinite:
        val = float(rlo)
    else:
        val = (float(rlo) + float(rhi.value)) / 2.0
    return SeminormResult(m, ell, gamma, v, br, rlo, rhi, val)


def seminorm(model, a: Element, m: int, ell: int, gamma: Index, tol: Fraction = DEFAULT_TOL) -> SeminormResult:
    """2^m-th root of h, float at presentation, exact backing retained."""
    v = HTable(model, a, tol).h(m, ell, gamma)
    return _present(m, ell, gamma, v, tol)


def seminorm_max_ell(model, a: Element, m: int, gamma: Index, tol: Fraction = DEFAULT_TOL) -> SeminormResult:
    """Maximum of h over all branch words at level m, root taken once."""
    table = HTable(model, a, tol)
    best: SeminormResult | None = None
    for ell in range(1 << m):
        cur = _present(m, ell, gamma, table.h(m, ell, gamma), tol)
        if best is None or _bracket_greater(cur.h_bracket, best.h_bracket):
            best = cur
    assert best is not None
    return best


def _bracket_greater(x: Bracket, y: Bracket) -> bool:
    if x.is_divergent() != y.is_divergent():
        return x.is_divergent()
    if x.lo != y.lo:
        return x.lo > y.lo
    if x.hi.infinite != y.hi.infinite:
        return x.hi.infinite
    if not x.hi.infinite:
        return x.hi.value > y.hi.value
    return False


# ---------------------------------------------------------------------------
# product-continuity inequality, exact squared form


def check_product_inequality(
    model,
    a: Element,
    b: Element,
    m: int,
    ell: int,
    gamma: Index,
    tol: Fraction = DEFAULT_TOL,
    tables: tuple | None = None,
) -> dict:
    """Certify h[m,ell,gamma](a*b)^2 <= h[m+1,ell,gamma](a) * h[m+1,2^m+ell,gamma](b).

    Root-free: both sides compared as exact rationals when possible, else via
    certified intervals (then 'holds' means the upper end of the left side is
    at most the lower end of the right side).  Pass tables=(t_ab, t_a, t_b)
    with prebuilt HTable instances to reuse memoized recursions across many
    (m, ell, gamma) queries for the same pair."""
    if tables is None:
        ab = multiply(model, a, b)
        tables = (HTable(model, ab, tol), HTable(model, a, tol), HTable(model, b, tol))
    t_ab, t_a, t_b = tables
    lhs = t_ab.h(m, ell, gamma).squared()
    rhs_a = t_a.h(m + 1, ell, gamma)
    rhs_b = t_b.h(m + 1, (1 << m) + ell, gamma)
    rhs = hval_product(rhs_a, rhs_b)

    out = {
        "m": m,
        "ell": ell,
        "gamma": gamma,
        "lhs_squared": lhs.to_bracket(tol),
        "rhs": rhs.to_bracket(tol),
    }
    if rhs.is_infinite():
        out.update(holds=True, mode="right-side-infinite")
        return out
    if lhs.is_infinite():
        out.update(holds=False, mode="left-side-infinite")
        return out

    lq, rq = lhs.exact_rational(), rhs.exact_rational()
    if lq is not None and rq is not None:
        out.update(holds=lq <= rq, mode="exact")
        return out
    if lhs.kind in ("exact", "sqrt", "root") and rhs.kind in ("exact", "sqrt", "root"):
        diff = rhs._as_rootsum() + lhs._as_rootsum() * RootSum.rational(Fraction(-1))
        out.update(holds=rootsum_sign(diff) >= 0, mode="root-sum-exact")
        return out
    lb, rb = out["lhs_squared"], out["rhs"]
    if not lb.hi.infinite and lb.hi.value <= rb.lo:
        out.update(holds=True, mode="interval")
    elif rb.finite_certified() and rb.hi.value < lb.lo:
        out.update(holds=False, mode="interval")
    else:
        out.update(holds=None, mode="interval-inconclusive")
    return out


def hval_product(x: HVal, y: HVal) -> HVal:
    if x.is_zero() or y.is_zero():
        return HVal.zero()
    if x.is_infinite() or y.is_infinite():
        return HVal.infinite()
    if x.kind == "bracket" or y.kind == "bracket":
        return HVal.bracket(x.to_bracket() * y.to_bracket())
    if x.kind == "exact" and y.kind == "exact":
        return HVal.exact(x.enn.mul(y.enn))
    return HVal.root(x._as_rootsum() * y._as_rootsum())


def check_triangle_inequality(
    model,
    a: Element,
    b: Element,
    m: int,
    ell: int,
    gamma: Index,
    tol: Fraction = Fraction(1, 10**30),
) -> bool:
    """(h(a+b))^(1/2^m) <= h(a)^(1/2^m) + h(b)^(1/2^m) by certified enclosures.

    Refines the interval evaluation until the comparison resolves; exact
    equality cases (zero summands, equal supports) resolve structurally."""
    table_ab = HTable(model, a + b, tol)
    ha = HTable(model, a, tol).h(m, ell, gamma)
    hb = HTable(model, b, tol).h(m, ell, gamma)
    hab = table_ab.h(m, ell, gamma)
    if hab.is_zero():
        return True
    if ha.is_infinite() or hb.is_infinite():
        return True
    if hab.is_infinite():
        return False
    neg = RootSum.rational(Fraction(-1))
    if m == 0 and all(v.kind in ("exact", "sqrt", "root") for v in (hab, ha, hb)):
        d = hab._as_rootsum() + ha._as_rootsum() * neg + hb._as_rootsum() * neg
        return rootsum_sign(d) <= 0
    qab, qa, qb = hab.exact_rational(), ha.exact_rational(), hb.exact_rational()
    if None not in (qab, qa, qb):
        x, y, z = qab, qa, qb
        if m == 0:
            return x <= y + z
        if x <= y + z:
            # t^(1/2^m) is subadditive, so this already settles it
            return True
        if m == 1:
            # sqrt(x) <= sqrt(y) + sqrt(z): square once, isolate the cross term
            return (x - y - z) ** 2 <= 4 * y * z
        if m == 2:
            # fourth roots: two exact squarings through sums of square roots,
            # so equality cases (proportional summands) resolve structurally
            d1 = (
                RootSum.sqrt_rational(x)
                + RootSum.sqrt_rational(y) * neg
                + RootSum.sqrt_rational(z) * neg
            )
            if rootsum_sign(d1) <= 0:
                return True
            d2 = d1 * d1 + RootSum.sqrt_rational(y * z) * RootSum.rational(Fraction(-4))
            return rootsum_sign(d2) <= 0
    cur = tol
    for _ in range(6):
        la, ra = ha.to_bracket(cur).root_interval(m, cur)
        lb_, rb_ = hb.to_bracket(cur).root_interval(m, cur)
        lab, rab = hab.to_bracket(cur).root_interval(m, cur)
        if rab.infinite or ra.infinite or rb_.infinite:
            return False
        if rab.value <= la + lb_:
            return True
        if lab > ra.value + rb_.value:
            return False
        cur = cur * cur
    raise RuntimeError("triangle comparison did not resolve; sides too close")


# ---------------------------------------------------------------------------
# omega-weighted seminorms


@dataclass(frozen=True)
class OmegaWeights:
    """Nonnegative weight profile gamma -> |omega_gamma| over ranked indices.

    kinds:
      table                finite explicit map
      coefficient          indicator of a single index
      geometric            R^rank  (point-evaluation profile at radius R)
      geometric_factorial  R^rank / rank!
    """

    description: str
    kind: str
    table: tuple = ()
    ratio: Fraction | None = None

    @staticmethod
    def coefficient(idx: Index) -> "OmegaWeights":
        return OmegaWeights(f"coefficient functional at {idx}", "coefficient", ((idx, Fraction(1)),))

    @staticmethod
    def from_table(weights: dict) -> "OmegaWeights":
        items = tuple((i, Fraction(w)) for i, w in weights.items())
        if any(w < 0 for _, w in items):
            raise ValueError("weights must be nonnegative")
        return OmegaWeights("table weights", "table", items)

    @staticmethod
    def point(radius: Fraction) -> "OmegaWeights":
        radius = Fraction(radius)
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        return OmegaWeights(f"point evaluation, radius {radius}", "geometric", (), radius)

    @staticmethod
    def point_factorial(radius: Fraction) -> "OmegaWeights":
        radius = Fraction(radius)
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        return OmegaWeights(
            f"point evaluation with factorial basis scaling, radius {radius}",
            "geometric_factorial",
            (),
            radius,
        )

    def weight(self, rank: int, idx: Index) -> Fraction:
        if self.kind in ("table", "coefficient"):
            for i, w in self.table:
                if i == idx:
                    return w
            return Fraction(0)
        from .scalars import factorial

        if self.kind == "geometric":
            return self.ratio**rank
        if self.kind == "geometric_factorial":
            return self.ratio**rank / factorial(rank)
        raise ValueError(f"unknown weight kind {self.kind!r}")

    def max_table_rank(self, rank_fn) -> int:
        return max((rank_fn(i) for i, w in self.table if w != 0), default=0)


def omega_h(
    model,
    a: Element,
    m: int,
    ell: int,
    omega: OmegaWeights,
    gamma_cap: int,
    tol: Fraction = DEFAULT_TOL,
) -> Bracket:
    """Sum over indices of |omega| * h[m, ell, .], as a certified Bracket.

    gamma_cap floors the summation rank; the sum is extended further until the
    model's tail majorant certifies the remainder (or divergence is witnessed,
    or no bound exists and the result is a truncated lower bound)."""
    if gamma_cap < 0:
        raise ValueError("truncation rank must be nonnegative")
    rank_fn = model.index_rank
    table = HTable(model, a, tol)

    if omega.kind in ("table", "coefficient"):
        cap = max(gamma_cap, omega.max_table_rank(rank_fn))
        acc = HVal.zero()
        for idx in model.indices_up_to(cap):
            w = omega.weight(rank_fn(idx), idx)
            if w == 0:
                continue
            acc = acc.plus(table.h(m, ell, idx).times(w))
        return acc.to_bracket(tol)

    if a.is_zero():
        return Bracket.exact(0)

    if m == 0:
        # finite support: the weighted sum is finite and exact
        acc = HVal.zero()
        depth = 0
        for idx in a.support():
            r = rank_fn(idx)
            depth = max(depth, r)
            acc = acc.plus(table.h(0, 0, idx).times(omega.weight(r, idx)))
        br = acc.to_bracket(tol)
        return Bracket(br.lo, br.hi, depth, br.tail_source)

    factorial_weights = omega.kind == "geometric_factorial"
    radius = omega.ratio

    majorant = getattr(model, "h_majorant", None)
    bound = majorant(a, m) if majorant is not None else None

    if bound is None:
        br = _omega_partial(model, table, a, m, ell, omega, gamma_cap, tol)
        return Bracket.truncated(br.lo, gamma_cap)

    c_maj, b_maj, p_maj = bound
    growth = radius * b_maj
    if not factorial_weights and growth >= 1:
        witness = getattr(model, "h_lower_const", None)
        lower = witness(a, m) if witness is not None else None
        if lower is not None and radius >= 1:
            c_low, k0 = lower
            if c_low > 0:
                br = _omega_partial(model, table, a, m, ell, omega, max(gamma_cap, k0), tol)
                return Bracket.divergent(br.lo, max(gamma_cap, k0))
        br = _omega_partial(model, table, a, m, ell, omega, gamma_cap, tol)
        return Bracket.truncated(br.lo, gamma_cap)

    def term_bound(k: int) -> Fraction:
        from .scalars import factorial

        t = c_maj * growth**k * Fraction(k + 1) ** p_maj
        return t / factorial(k) if factorial_weights else t

    def ratio_bound(k: int) -> Fraction:
        # term_bound(k+1)/term_bound(k), decreasing in k
        r = growth * (Fraction(k + 2, k + 1)) ** p_maj
        return r / (k + 1) if factorial_weights else r

    theta = Fraction(1, 2) if factorial_weights else (1 + growth) / 2
    cap = gamma_cap
    hard_cap = gamma_cap + 100000
    while ratio_bound(cap + 1) >= theta and cap < hard_cap:
        cap += 1
    partial = _omega_partial(model, table, a, m, ell, omega, cap, tol)
    rho = ratio_bound(cap + 1)
    tail = term_bound(cap + 1) / (1 - rho)
    # keep extending while the tail dominates the requested resolution
    while tail > tol * (partial.lo + tail) and cap < hard_cap:
        cap = cap + max(1, cap // 4)
        partial = _omega_partial(model, table, a, m, ell, omega, cap, tol)
        rho = ratio_bound(cap + 1)
        tail = term_bound(cap + 1) / (1 - rho)
    hi = partial.hi.add(ExtendedNonNeg.of(tail))
    return Bracket(partial.lo, hi, cap, _join_tag(TAG_MAJORANT, partial.tail_source))


def _omega_partial(model, table: HTable, a, m, ell, omega, cap, tol) -> Bracket:
    acc = HVal.zero()
    rank_fn = model.index_rank
    for idx in model.indices_up_to(cap):
        w = omega.weight(rank_fn(idx), idx)
        if w == 0:
            continue
        hv = table.h(m, ell, idx)
        if hv.is_infinite():
            return Bracket.divergent(acc.to_bracket(tol).lo, cap)
        acc = acc.plus(hv.times(w))
    br = acc.to_bracket(tol)
    return Bracket(br.lo, br.hi, cap, br.tail_source)


def check_omega_product_inequality(
    model,
    a: Element,
    b: Element,
    m: int,
    ell: int,
    omega: OmegaWeights,
    gamma_cap: int,
    tol: Fraction = DEFAULT_TOL,
) -> bool:
    """Squared form: (omega_h(a*b, m, ell))^2 <= omega_h(a, m+1, ell) * omega_h(b, m+1, 2^m+ell)."""
    ab = multiply(model, a, b)
    lhs = omega_h(model, ab, m, ell, omega, gamma_cap, tol)
    ra = omega_h(model, a, m + 1, ell, omega, gamma_cap, tol)
    rb = omega_h(model, b, m + 1, (1 << m) + ell, omega, gamma_cap, tol)
    if ra.is_divergent() or rb.is_divergent():
        return True
    lhs_sq_hi = lhs.hi.squared()
    if lhs_sq_hi.infinite:
        raise DomainError("left side lacks a certified upper bound")
    return lhs_sq_hi.value <= ra.lo * rb.lo or _exact_omega_compare(lhs, ra, rb)


def _exact_omega_compare(lhs: Bracket, ra: Bracket, rb: Bracket) -> bool:
    if not (lhs.is_exact() and ra.is_exact() and rb.is_exact()):
        return False
    return lhs.lo**2 <= ra.lo * rb.lo


# ---------------------------------------------------------------------------
# growth classification and the l1-vs-sup comparison constant


def comparison_constant(epsilon: Fraction, depth: int, tol: Fraction = DEFAULT_TOL) -> Bracket:
    """Bracket for sum_{n>=1} 1/(n!)^epsilon, truncated at n = depth.

    Tail: for n > N, (n!)^epsilon >= ((N+1)!)^epsilon * ((N+2)^epsilon)^(n-N-1),
    a geometric comparison."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    two_eps = 2 * epsilon
    if two_eps.denominator != 1:
        raise DomainError("epsilon must be a half-integer for exact comparisons")
    from .scalars import factorial

    def term_bracket(n: int) -> tuple[Fraction, Fraction]:
        sq = Fraction(1, factorial(n) ** two_eps.numerator)  # (1/(n!)^eps)^2
        if epsilon.denominator == 1:
            q = Fraction(1, factorial(n) ** epsilon.numerator)
            return q, q
        return sqrt_bracket(sq, tol * tol)

    lo = Fraction(0)
    hi = Fraction(0)
    for n in range(1, depth + 1):
        tl, th = term_bracket(n)
        lo += tl
        hi += th
    _, t_next_hi = term_bracket(depth + 1)
    ratio_lo, ratio_hi = (
        (Fraction(1, depth + 2), Fraction(1, depth + 2))
        if epsilon.denominator == 1
        else sqrt_bracket(Fraction(1, depth + 2), tol * tol)
    )
    tail = t_next_hi / (1 - ratio_hi)
    return Bracket(lo, ExtendedNonNeg.of(hi + tail), depth, TAG_GEOMETRIC)


def growth_classify(
    seq: dict,
    rank: Callable[[Index], int],
    eps_list: Iterable[Fraction],
    bound: dict | None = None,
    comparison_depth: int = 20,
    tol: Fraction = DEFAULT_TOL,
) -> dict:
    """Sub-factorial growth report for a coefficient sample.

    For each epsilon: the exact sample supremum of |a_N|/(rank(N)!)^epsilon
    (compared in squared form, so epsilon may be a half-integer), plus a
    certification verdict when a closed-form bound on the full sequence is
    supplied:

      bound = {"kind": "exponential", "base": B}   |a_k| <= B^k for all k
      bound = {"kind": "factorial"}                |a_k| = k!

    Exponential bounds are certified sub-factorial for every epsilon > 0 by
    locating the peak of B^k/(k!)^epsilon; factorial sequences are rejected
    for epsilon < 1 (the ratio (k!)^(1-epsilon) is unbounded) and bounded by
    1 for epsilon >= 1."""
    from .scalars import GaussianRational, factorial

    entries = []
    for epsilon in eps_list:
        epsilon = Fraction(epsilon)
        if epsilon <= 0:
            raise DomainError("epsilon must be positive")
        two_eps = 2 * epsilon
        if two_eps.denominator != 1:
            raise DomainError("epsilon must be a half-integer for exact comparisons")
        e2 = two_eps.numerator

        best_sq = Fraction(0)
        best_idx = None
        for idx, coeff in seq.items():
            coeff = GaussianRational.coerce(coeff)
            r = rank(idx)
            val_sq = coeff.abs_squared() / Fraction(factorial(r) ** e2)
            if val_sq > best_sq:
                best_sq, best_idx = val_sq, idx
        slo, shi = sqrt_bracket(best_sq, tol) if best_sq != 0 else (Fraction(0), Fraction(0))
        entry = {
            "epsilon": epsilon,
            "sample_sup": Bracket.enclosure(slo, shi),
            "sample_argmax": best_idx,
            "bound_kind": None if bound is None else bound.get("kind"),
            "subfactorial": None,
            "certified_sup": None,
        }

        if bound is not None and bound.get("kind") == "exponential":
            base = Fraction(bound["base"])
            if base < 0:
                raise DomainError("exponential base must be nonnegative")
            # terms B^k/(k!)^eps decrease once (k+1)^eps >= B, i.e. (k+1)^(2 eps) >= B^2
            k_star = 0
            while Fraction(k_star + 1) ** e2 < base**2:
                k_star += 1
            peak_sq = max(
                (base ** (2 * k)) / Fraction(factorial(k) ** e2) for k in range(k_star + 1)
            )
            plo, phi = sqrt_bracket(peak_sq, tol)
            entry["subfactorial"] = True
            entry["certified_sup"] = Bracket.enclosure(plo, phi)
            entry["peak_rank"] = k_star
        elif bound is not None and bound.get("kind") == "factorial":
            if epsilon < 1:
                # (k!)^(1-eps) exceeds any bound; witness the rank where its
                # square passes 4 (exponent 2 - 2 eps is a positive integer)
                exp_int = 2 - e2
                k = 0
                while factorial(k) ** exp_int <= 4:
                    k += 1
                entry["subfactorial"] = False
                entry["witness_rank"] = k
            else:
                entry["subfactorial"] = True
                entry["certified_sup"] = Bracket.exact(1)
        entries.append(entry)

    comparisons = {
        str(Fraction(e)): comparison_constant(Fraction(e), comparison_depth, tol) for e in eps_list
    }
    return {"entries": entries, "comparison_constants": comparisons}
