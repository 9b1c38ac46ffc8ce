"""Worked basis models: polynomials, Laurent series, infinite matrices,
group algebras over Z / Z^d / free groups, and the flat Wick star product.

Each model fixes a countable basis, the structure constants of the product
in that basis, and the row/column weight sums driving the seminorm
recursion.  Models with infinitely many recursion contributors implement
h_special, returning certified Bracket values (or witnessed divergence).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .algebra import DomainError, Element, InfiniteFanError, Index
from .scalars import (
    ENN_INF,
    GaussianRational,
    MultiIndex,
    RootSum,
    binomial,
    factorial,
    multi_range,
    multi_indices_up_to_degree,
)
from .seminorms import (
    TAG_MAJORANT,
    Bracket,
    DEFAULT_TOL,
    HTable,
    HVal,
    hval_product,
    rootsum_bracket,
)


class BaseModel:
    """Shared memoization and defaults for structure-constant models."""

    name: str = "base"
    commutative: bool = False

    def __init__(self):
        self._pair_memo: dict = {}
        self._row_memo: dict = {}
        self._col_memo: dict = {}

    # -- product ------------------------------------------------------------
    def pair_product(self, left: Index, right: Index) -> dict:
        key = (left, right)
        out = self._pair_memo.get(key)
        if out is None:
            out = self._pair(left, right)
            self._pair_memo[key] = out
        return out

    def _pair(self, left: Index, right: Index) -> dict:
        raise NotImplementedError

    # -- recursion weights --------------------------------------------------
    def row_sum(self, alpha: Index, gamma: Index):
        key = (alpha, gamma)
        out = self._row_memo.get(key)
        if out is None:
            out = self._row(alpha, gamma)
            self._row_memo[key] = out
        return out

    def col_sum(self, beta: Index, gamma: Index):
        key = (beta, gamma)
        out = self._col_memo.get(key)
        if out is None:
            out = self._col(beta, gamma)
            self._col_memo[key] = out
        return out

    def _row(self, alpha: Index, gamma: Index):
        raise NotImplementedError

    def _col(self, beta: Index, gamma: Index):
        raise NotImplementedError

    def row_parents(self, gamma: Index) -> Iterable[Index]:
        raise InfiniteFanError(f"{self.name}: no finite contributor enumeration")

    def col_parents(self, gamma: Index) -> Iterable[Index]:
        raise InfiniteFanError(f"{self.name}: no finite contributor enumeration")

    def h_special(self, table: HTable, m: int, ell: int, gamma: Index):
        return None

    # -- index plumbing -----------------------------------------------------
    def validate_index(self, idx: Index) -> Index:
        return idx

    def index_sort_key(self, idx: Index):
        return idx

    def index_rank(self, idx: Index) -> int:
        raise NotImplementedError

    def indices_up_to(self, rank: int) -> Iterator[Index]:
        raise NotImplementedError

    def index_to_json(self, idx: Index):
        return idx

    def index_from_json(self, data) -> Index:
        return self.validate_index(data)

    def unit_index(self) -> Index | None:
        return None

    def unit(self) -> Element:
        u = self.unit_index()
        if u is None:
            raise DomainError(f"{self.name}: no unit basis vector")
        return Element.basis(u)


def _as_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{what} must be an integer, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# polynomials in one variable


class PolynomialModel(BaseModel):
    """Basis z^k (monomial) or z^k/k! (factorial), k >= 0."""

    commutative = True

    def __init__(self, basis: str):
        super().__init__()
        if basis not in ("monomial", "factorial"):
            raise DomainError(f"unknown polynomial basis {basis!r}")
        self.basis = basis
        self.name = f"poly:{basis}"

    def validate_index(self, idx):
        k = _as_int(idx, "polynomial degree")
        if k < 0:
            raise DomainError("polynomial degree must be nonnegative")
        return k

    def _pair(self, n, m):
        if self.basis == "monomial":
            return {n + m: Fraction(1)}
        return {n + m: Fraction(binomial(n + m, n))}

    def _row(self, n, k):
        if n < 0 or n > k:
            return Fraction(0)
        return Fraction(1) if self.basis == "monomial" else Fraction(binomial(k, n))

    _col = _row

    def row_parents(self, k):
        return range(k + 1)

    col_parents = row_parents

    def index_rank(self, idx) -> int:
        return idx

    def indices_up_to(self, rank: int):
        return iter(range(rank + 1))

    def unit_index(self):
        return 0

    def index_from_json(self, data):
        return self.validate_index(data)

    def evaluate(self, a: Element, z0: GaussianRational) -> GaussianRational:
        z0 = GaussianRational.coerce(z0)
        out = GaussianRational.of(0)
        for k, c in a.terms.items():
            term = c * z0**k
            if self.basis == "factorial":
                term = term * Fraction(1, factorial(k))
            out = out + term
        return out

    def involution(self, a: Element) -> Element:
        return a.map_coeffs(lambda c: c.conjugate())

    # h[m, ., k] <= C * B^k * (k+1)^p for all k: closed-form majorant used by
    # the weighted-series tails
    def h_majorant(self, a: Element, m: int):
        if m < 1:
            return None
        c = sum((coeff.abs_squared() for coeff in a.terms.values()), Fraction(0))
        if self.basis == "monomial":
            b, p = Fraction(1), 0
        else:
            b, p = Fraction(1), max((k for k in a.terms), default=0)
        for _ in range(m - 1):
            if self.basis == "monomial":
                c, b, p = c * c, b, 2 * p + 1
            else:
                c, b, p = c * c, 1 + b * b, 2 * p
        return c, b, p

    # h[m, ., k] is nondecreasing in k (weights [n <= k] and binom(k, n) are),
    # so its value at the top of the support is a lower bound from there on
    def h_lower_const(self, a: Element, m: int):
        if a.is_zero() or m < 1:
            return None
        k0 = max(a.terms)
        v = HTable(self, a).h(m, 0, k0).exact_rational()
        if v is None or v == 0:
            return None
        return v, k0


# ---------------------------------------------------------------------------
# Laurent bases


class LaurentModel(BaseModel):
    """Basis z^k (plain) or z^k/|k|! (factorial), k in Z.

    The plain basis is the deliberate failure case: every weight is 1, so the
    recursion at depth 2 sums a positive constant over all of Z."""

    commutative = True

    TRUNC_WINDOW = 12

    def __init__(self, basis: str):
        super().__init__()
        if basis not in ("plain", "factorial"):
            raise DomainError(f"unknown Laurent basis {basis!r}")
        self.basis = basis
        self.name = f"laurent:{basis}"

    def validate_index(self, idx):
        return _as_int(idx, "Laurent degree")

    def _pair(self, n, m):
        if self.basis == "plain":
            return {n + m: Fraction(1)}
        k = n + m
        return {k: Fraction(factorial(abs(k)), factorial(abs(n)) * factorial(abs(m)))}

    def _row(self, n, k):
        if self.basis == "plain":
            return Fraction(1)
        return Fraction(factorial(abs(k)), factorial(abs(n)) * factorial(abs(k - n)))

    _col = _row

    def rowsum(self, n: int, k: int) -> Fraction:
        """The recursion weight; constant 1 on the plain basis (the divergence
        witness), |k|!/(|n|!|k-n|!) on the factorial basis."""
        return self._row(n, k)

    def index_rank(self, idx) -> int:
        return abs(idx)

    def indices_up_to(self, rank: int):
        return iter(range(-rank, rank + 1))

    def unit_index(self):
        return 0

    def evaluate(self, a: Element, z0: GaussianRational) -> GaussianRational:
        z0 = GaussianRational.coerce(z0)
        if z0.is_zero():
            raise DomainError("Laurent evaluation needs a nonzero point")
        out = GaussianRational.of(0)
        for k, c in a.terms.items():
            term = c * z0**k
            if self.basis == "factorial":
                term = term * Fraction(1, factorial(abs(k)))
            out = out + term
        return out

    def involution(self, a: Element) -> Element:
        return Element({-k: c.conjugate() for k, c in a.terms.items()})

    def h_special(self, table: HTable, m: int, ell: int, gamma):
        if m <= 1:
            return None
        a = table.element
        if a.is_zero():
            return HVal.zero()
        if self.basis == "plain":
            # depth-1 values are a positive constant on all of Z; the next
            # level sums it with weight 1 over infinitely many indices
            return HVal.infinite()
        if m == 2:
            return self._h2_factorial(table, ell, gamma)
        return self._h_truncated(table, m, ell, gamma)

    def _h2_factorial(self, table: HTable, ell: int, gamma: int) -> HVal:
        a = table.element
        pl = ell >> 1
        lk = abs(gamma)
        ranks = [abs(j) for j in a.terms]
        L = max(ranks)
        k1 = sum((c.abs_squared() for c in a.terms.values()), Fraction(0))

        def term_bound(s: int) -> Fraction:
            # both signs of n at |n| = s; h1(n) <= k1 (s+1)^L, weight
            # <= |gamma|!/(s! (s-lk)!)
            return 2 * k1 * k1 * Fraction(s + 1) ** (2 * L) * Fraction(
                factorial(lk), factorial(s) * factorial(s - lk)
            )

        def ratio_bound(s: int) -> Fraction:
            return Fraction(s + 2, s + 1) ** (2 * L) / Fraction((s + 1) * (s + 1 - lk))

        smin = max(L, lk) + 1
        cutoff = smin
        while ratio_bound(cutoff + 1) >= Fraction(1, 2):
            cutoff += 1
        partial = self._window_sum(table, 1, pl, gamma, cutoff)
        tail = term_bound(cutoff + 1) / (1 - ratio_bound(cutoff + 1))
        while tail > table.tol * (partial + tail) and cutoff < smin + 300:
            cutoff += 4
            partial = self._window_sum(table, 1, pl, gamma, cutoff)
            tail = term_bound(cutoff + 1) / (1 - ratio_bound(cutoff + 1))
        return HVal.bracket(
            Bracket.enclosure(partial, partial + tail, cutoff, TAG_MAJORANT)
        )

    def _window_sum(self, table: HTable, pm: int, pl: int, gamma: int, cutoff: int) -> Fraction:
        total = Fraction(0)
        for n in range(-cutoff, cutoff + 1):
            hv = table.h(pm, pl, n)
            q = hv.exact_rational()
            assert q is not None  # depth-1 values on a finite support are exact
            total += q * q * self._row(n, gamma)
        return total

    def _h_truncated(self, table: HTable, m: int, ell: int, gamma):
        pl = ell >> 1
        w = self.TRUNC_WINDOW
        total = Fraction(0)
        for n in range(-w, w + 1):
            hv = table.h(m - 1, pl, n)
            lo = hv.to_bracket(table.tol).lo
            total += lo * lo * self._row(n, gamma)
        return HVal.bracket(Bracket.truncated(total, w))


def laurent_rowsum(model: LaurentModel, n: int, k: int) -> Fraction:
    if not isinstance(model, LaurentModel):
        raise DomainError("laurent_rowsum needs a Laurent model")
    return model.rowsum(n, k)


# ---------------------------------------------------------------------------
# infinite matrices


class MatrixModel(BaseModel):
    """Matrix units over indices (i, j), i, j >= 1.

    variant plain:  basis E_ij,          pair weight 1
    variant hat:    basis E_ij/sqrt(i!j!), pair weight 1/j!
    variant tilde:  basis E_ij/(i j),     pair weight 1/j^2

    The plain variant is the second deliberate failure case: the depth-2
    branch sums a constant over a full row, with weight 1."""

    commutative = False

    TILDE_CAP = 1500
    TRUNC_WINDOW = 25

    def __init__(self, variant: str):
        super().__init__()
        if variant not in ("plain", "hat", "tilde"):
            raise DomainError(f"unknown matrix variant {variant!r}")
        self.variant = variant
        self.name = f"matrix:{variant}"
        self._weight_sum: HVal | None = None

    def pair_weight(self, j: int) -> Fraction:
        if self.variant == "plain":
            return Fraction(1)
        if self.variant == "hat":
            return Fraction(1, factorial(j))
        return Fraction(1, j * j)

    def trace_weight(self, i: int) -> Fraction:
        # coefficient of E_ii when unrescaling the basis vector at (i, i)
        return self.pair_weight(i)

    def validate_index(self, idx):
        if not (isinstance(idx, tuple) and len(idx) == 2):
            raise DomainError(f"matrix index must be a pair, got {idx!r}")
        i, j = (_as_int(v, "matrix index entry") for v in idx)
        if i < 1 or j < 1:
            raise DomainError("matrix indices start at 1")
        return (i, j)

    def _pair(self, left, right):
        (i, j), (k, l) = left, right
        if j != k:
            return {}
        return {(i, l): self.pair_weight(j)}

    def _row(self, alpha, gamma):
        (i, j), (r, _s) = alpha, gamma
        return self.pair_weight(j) if i == r else Fraction(0)

    def _col(self, beta, gamma):
        (k, l), (_r, s) = beta, gamma
        return self.pair_weight(k) if l == s else Fraction(0)

    def index_sort_key(self, idx):
        i, j = idx
        return (max(i, j), i, j)

    def index_rank(self, idx) -> int:
        return max(idx)

    def indices_up_to(self, rank: int):
        for i in range(1, rank + 1):
            for j in range(1, rank + 1):
                if max(i, j) <= rank:
                    yield (i, j)

    def index_to_json(self, idx):
        return list(idx)

    def index_from_json(self, data):
        if not isinstance(data, (list, tuple)):
            raise DomainError("matrix index JSON must be a two-entry list")
        return self.validate_index(tuple(data))

    def involution(self, a: Element) -> Element:
        return Element({(j, i): c.conjugate() for (i, j), c in a.terms.items()})

    def trace(self, a: Element) -> GaussianRational:
        out = GaussianRational.of(0)
        for (i, j), c in a.terms.items():
            if i == j:
                out = out + c * self.trace_weight(i)
        return out

    def weight_series(self, tol: Fraction = DEFAULT_TOL) -> HVal:
        """sum_{j>=1} pair_weight(j), the depth-2 constant-branch factor."""
        if self._weight_sum is not None:
            return self._weight_sum
        if self.variant == "plain":
            out = HVal.infinite()
        elif self.variant == "hat":
            partial, j = Fraction(0), 0
            tail = Fraction(2)
            while tail > tol * partial or j < 1:
                j += 1
                partial += Fraction(1, factorial(j))
                tail = Fraction(2, factorial(j + 1))
            out = HVal.bracket(Bracket.enclosure(partial, partial + tail, j, TAG_MAJORANT))
        else:
            partial, j = Fraction(0), 0
            while j < self.TILDE_CAP:
                j += 1
                partial += Fraction(1, j * j)
            out = HVal.bracket(
                Bracket.enclosure(partial, partial + Fraction(1, j), j, TAG_MAJORANT)
            )
        self._weight_sum = out
        return out

    def h_special(self, table: HTable, m: int, ell: int, gamma):
        if m <= 1:
            return None
        if table.element.is_zero():
            return HVal.zero()
        if m == 2:
            return self._h2(table, ell, gamma)
        return self._h_truncated(table, m, ell, gamma)

    def _h2(self, table: HTable, ell: int, gamma) -> HVal:
        r, s = gamma
        bit0 = ell & 1
        bit1 = (ell >> 1) & 1
        supp = list(table.element.support())
        if bit0 == 0 and bit1 == 0:
            # parents (r, j), depth-1 value independent of j: constant branch
            v = table.h(1, 0, (r, 1))
            return hval_product(v.squared(), self.weight_series(table.tol))
        if bit0 == 1 and bit1 == 1:
            v = table.h(1, 1, (1, s))
            return hval_product(v.squared(), self.weight_series(table.tol))
        acc = HVal.zero()
        if bit0 == 0:
            # parents (r, j); depth-1 column branch vanishes off support columns
            for j in sorted({jj for _ii, jj in supp}):
                hv = table.h(1, 1, (r, j))
                acc = acc.plus(hv.squared().times(self.pair_weight(j)))
        else:
            for k in sorted({ii for ii, _jj in supp}):
                hv = table.h(1, 0, (k, s))
                acc = acc.plus(hv.squared().times(self.pair_weight(k)))
        return acc

    def _h_truncated(self, table: HTable, m: int, ell: int, gamma):
        r, s = gamma
        bit0 = ell & 1
        pl = ell >> 1
        total = Fraction(0)
        for t in range(1, self.TRUNC_WINDOW + 1):
            parent = (r, t) if bit0 == 0 else (t, s)
            hv = table.h(m - 1, pl, parent)
            lo = hv.to_bracket(table.tol).lo
            total += lo * lo * self.pair_weight(t)
        return HVal.bracket(Bracket.truncated(total, self.TRUNC_WINDOW))


def matrix_trace(model: MatrixModel, a: Element) -> GaussianRational:
    if not isinstance(model, MatrixModel):
        raise DomainError("matrix_trace needs a matrix model")
    return model.trace(a)


# ---------------------------------------------------------------------------
# group algebras: Z, Z^d, free groups


@dataclass(frozen=True)
class SignedInterval:
    """Certified enclosure [lo, hi] of a real value of either sign."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError("interval needs lo <= hi")

    @staticmethod
    def exact(q: Fraction) -> "SignedInterval":
        q = Fraction(q)
        return SignedInterval(q, q)

    @staticmethod
    def from_rootsum(rs: RootSum, tol: Fraction = DEFAULT_TOL) -> "SignedInterval":
        if rs.is_rational():
            return SignedInterval.exact(rs.rational_value())
        lo, hi = rs.bracket(tol)
        return SignedInterval(lo, hi)

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, q: Fraction) -> bool:
        return self.lo <= q <= self.hi

    def midpoint_float(self) -> float:
        return float(self.lo + self.hi) / 2.0


@dataclass(frozen=True)
class ComplexBracket:
    """Certified enclosure of a complex value, component-wise."""

    re: SignedInterval
    im: SignedInterval

    def is_exact(self) -> bool:
        return self.re.is_exact() and self.im.is_exact()

    def exact_value(self) -> GaussianRational:
        if not self.is_exact():
            raise ValueError("not exact")
        return GaussianRational(self.re.lo, self.im.lo)


class GroupModel(BaseModel):
    """Group algebra with basis e_g = g / (length(g)!)^epsilon.

    groups: Z (words = integers), Z^d (tuples), free group on N generators
    (reduced words as tuples of (generator, nonzero exponent)).  epsilon is
    1 (all-rational) or 1/2 (weights are exact square-root sums; products of
    basis vectors are not rational and are refused)."""

    SHELL_BUDGET = 20000
    TRUNC_PARENT_BUDGET = 80

    def __init__(self, kind: str, size: int = 0, epsilon: Fraction = Fraction(1)):
        super().__init__()
        epsilon = Fraction(epsilon)
        if epsilon not in (Fraction(1), Fraction(1, 2)):
            raise DomainError("group rescaling exponent must be 1 or 1/2")
        self.kind = kind
        self.size = size
        self.epsilon = epsilon
        if kind == "Z":
            self.name = "group:Z"
            self.commutative = True
        elif kind == "Zd":
            if size < 1:
                raise DomainError("Z^d needs d >= 1")
            self.name = f"group:Zd:{size}"
            self.commutative = True
        elif kind == "free":
            if size < 1:
                raise DomainError("free group needs at least one generator")
            self.name = f"group:free:{size}"
            self.commutative = False
        else:
            raise DomainError(f"unknown group kind {kind!r}")
        self._shell_memo: dict[int, list] = {}

    # -- group operations ---------------------------------------------------
    def identity(self):
        if self.kind == "Z":
            return 0
        if self.kind == "Zd":
            return (0,) * self.size
        return ()

    def mul(self, g, h):
        if self.kind == "Z":
            return g + h
        if self.kind == "Zd":
            return tuple(a + b for a, b in zip(g, h))
        out = list(g)
        for gen, exp in h:
            if out and out[-1][0] == gen:
                merged = out[-1][1] + exp
                out.pop()
                if merged != 0:
                    out.append((gen, merged))
            else:
                out.append((gen, exp))
        return tuple(out)

    def inv(self, g):
        if self.kind == "Z":
            return -g
        if self.kind == "Zd":
            return tuple(-a for a in g)
        return tuple((gen, -exp) for gen, exp in reversed(g))

    def length(self, g) -> int:
        if self.kind == "Z":
            return abs(g)
        if self.kind == "Zd":
            return sum(abs(a) for a in g)
        return sum(abs(exp) for _gen, exp in g)

    def shell(self, s: int) -> list:
        """All group elements of word length exactly s."""
        if s < 0:
            return []
        cached = self._shell_memo.get(s)
        if cached is not None:
            return cached
        if self.kind == "Z":
            out = [0] if s == 0 else [s, -s]
        elif self.kind == "Zd":
            out = [tuple(v) for v in self._zd_shell(self.size, s)]
        else:
            out = [tuple(w) for w in self._free_shell(None, s)]
        self._shell_memo[s] = out
        return out

    def _zd_shell(self, d: int, s: int):
        if d == 1:
            if s == 0:
                yield [0]
            else:
                yield [s]
                yield [-s]
            return
        for first in range(-s, s + 1):
            for rest in self._zd_shell(d - 1, s - abs(first)):
                yield [first] + rest

    def _free_shell(self, prev_gen, s: int):
        if s == 0:
            yield []
            return
        for gen in range(self.size):
            if gen == prev_gen:
                continue
            for e in range(1, s + 1):
                for sign in (1, -1):
                    for rest in self._free_shell(gen, s - e):
                        yield [(gen, sign * e)] + rest

    def shell_growth_base(self) -> int:
        if self.kind == "Z":
            return 2
        if self.kind == "Zd":
            return 2 * self.size
        return 2 * self.size

    # -- weights ------------------------------------------------------------
    def c_scale(self, g):
        """(length!)^epsilon as Fraction (eps=1) or RootSum (eps=1/2)."""
        f = factorial(self.length(g))
        if self.epsilon == 1:
            return Fraction(f)
        return RootSum.sqrt_rational(Fraction(f))

    def _ratio(self, k_len: int, g_len: int, h_len: int):
        q = Fraction(factorial(k_len), factorial(g_len) * factorial(h_len))
        if self.epsilon == 1:
            return q
        return RootSum.sqrt_rational(q)

    def _pair(self, g, h):
        if self.epsilon != 1:
            raise DomainError(
                "basis products with epsilon = 1/2 have irrational structure "
                "constants; use epsilon = 1 for algebra operations"
            )
        k = self.mul(g, h)
        return {k: self._ratio(self.length(k), self.length(g), self.length(h))}

    def _row(self, g, k):
        # single contributor: the partner is forced to g^{-1} k
        other = self.mul(self.inv(g), k)
        return self._ratio(self.length(k), self.length(g), self.length(other))

    def _col(self, h, k):
        other = self.mul(k, self.inv(h))
        return self._ratio(self.length(k), self.length(other), self.length(h))

    def rowsum_bracket(self, g, k, tol: Fraction = DEFAULT_TOL) -> Bracket:
        w = self._row(g, k)
        if isinstance(w, Fraction):
            return Bracket.exact(w)
        return rootsum_bracket(w, tol)

    # -- indices ------------------------------------------------------------
    def validate_index(self, idx):
        if self.kind == "Z":
            return _as_int(idx, "group element")
        if self.kind == "Zd":
            if not (isinstance(idx, tuple) and len(idx) == self.size):
                raise DomainError(f"group element must be a {self.size}-tuple")
            return tuple(_as_int(v, "group element entry") for v in idx)
        if not isinstance(idx, tuple):
            raise DomainError("free-group element must be a tuple of syllables")
        word = []
        for syl in idx:
            if not (isinstance(syl, tuple) and len(syl) == 2):
                raise DomainError("free-group syllable must be (generator, exponent)")
            gen, exp = syl
            gen = _as_int(gen, "generator")
            exp = _as_int(exp, "exponent")
            if not 0 <= gen < self.size:
                raise DomainError(f"generator {gen} outside range(0, {self.size})")
            if exp == 0:
                raise DomainError("zero exponent in reduced word")
            if word and word[-1][0] == gen:
                raise DomainError("word not reduced: repeated adjacent generator")
            word.append((gen, exp))
        return tuple(word)

    def index_sort_key(self, idx):
        return (self.length(idx), idx if self.kind != "Z" else (idx,))

    def index_rank(self, idx) -> int:
        return self.length(idx)

    def indices_up_to(self, rank: int):
        for s in range(rank + 1):
            yield from self.shell(s)

    def unit_index(self):
        return self.identity()

    def index_to_json(self, idx):
        if self.kind == "Z":
            return idx
        if self.kind == "Zd":
            return list(idx)
        return [[gen, exp] for gen, exp in idx]

    def index_from_json(self, data):
        if self.kind == "Z":
            return self.validate_index(data)
        if self.kind == "Zd":
            if not isinstance(data, (list, tuple)):
                raise DomainError("group element JSON must be a list")
            return self.validate_index(tuple(data))
        if not isinstance(data, (list, tuple)):
            raise DomainError("free-group element JSON must be a list of pairs")
        return self.validate_index(tuple(tuple(p) for p in data))

    # -- algebra maps -------------------------------------------------------
    def antipode(self, a: Element) -> Element:
        """Linear extension of g -> g^{-1} in the rescaled basis."""
        return Element({self.inv(g): c for g, c in a.terms.items()})

    def involution(self, a: Element) -> Element:
        return Element({self.inv(g): c.conjugate() for g, c in a.terms.items()})

    def character(self, a: Element, generator_values: dict) -> ComplexBracket:
        """sum_g (a_g / c(g)) chi(g) for the homomorphism chi determined by
        its values on the generators; exact at eps = 1, certified enclosure
        at eps = 1/2.  Finite supports make the tail vanish."""
        re_acc: RootSum = RootSum({})
        im_acc: RootSum = RootSum({})
        for g, coeff in a.terms.items():
            chi = self._char_value(g, generator_values)
            val = coeff * chi
            scale = self.c_scale(g)
            inv_scale = (
                RootSum.rational(1 / scale)
                if isinstance(scale, Fraction)
                else RootSum.sqrt_rational(1 / (scale * scale).rational_value())
            )
            re_acc = re_acc + inv_scale * RootSum.rational(val.re)
            im_acc = im_acc + inv_scale * RootSum.rational(val.im)
        tol = DEFAULT_TOL
        return ComplexBracket(
            SignedInterval.from_rootsum(re_acc, tol), SignedInterval.from_rootsum(im_acc, tol)
        )

    def _char_value(self, g, generator_values: dict) -> GaussianRational:
        if self.kind == "Z":
            base = GaussianRational.coerce(generator_values[0])
            return base**g
        if self.kind == "Zd":
            out = GaussianRational.of(1)
            for i, e in enumerate(g):
                out = out * (GaussianRational.coerce(generator_values[i]) ** e)
            return out
        out = GaussianRational.of(1)
        for gen, exp in g:
            out = out * (GaussianRational.coerce(generator_values[gen]) ** exp)
        return out

    # -- seminorm specials --------------------------------------------------
    def h_special(self, table: HTable, m: int, ell: int, gamma):
        if m <= 1:
            return None
        if table.element.is_zero():
            return HVal.zero()
        if m == 2:
            return self._h2(table, ell, gamma)
        return self._h_truncated(table, m, ell, gamma)

    def _h2(self, table: HTable, ell: int, gamma) -> HVal:
        a = table.element
        bit0 = ell & 1
        pl = ell >> 1
        weight = self._row if bit0 == 0 else self._col
        lk = self.length(gamma)
        L = max(self.length(g) for g in a.terms)
        k1 = sum((c.abs_squared() for c in a.terms.values()), Fraction(0))
        gb = self.shell_growth_base()
        tol = table.tol

        def term_bound_hi(s: int) -> Fraction:
            # shell count <= gb^s; h1 <= k1 (s+1)^(eps L) in value, squared here
            poly = Fraction(s + 1) ** int(2 * self.epsilon * L)
            q = Fraction(factorial(lk), factorial(s) * factorial(s - lk))
            base = k1 * k1 * poly * Fraction(gb) ** s
            if self.epsilon == 1:
                return base * q
            from .scalars import sqrt_bracket

            return base * sqrt_bracket(q, tol)[1]

        def ratio_bound_hi(s: int) -> Fraction:
            poly = Fraction(s + 2, s + 1) ** int(2 * self.epsilon * L)
            q = Fraction(1, (s + 1) * (s + 1 - lk))
            if self.epsilon == 1:
                return gb * poly * q
            from .scalars import sqrt_bracket

            return gb * poly * sqrt_bracket(q, tol)[1]

        smin = max(L, lk) + 1
        acc = HVal.zero()
        words = 0
        s = 0
        while True:
            sh = self.shell(s)
            words += len(sh)
            if words > self.SHELL_BUDGET:
                lo = acc.to_bracket(tol).lo
                return HVal.bracket(Bracket.truncated(lo, s - 1))
            for g in sh:
                hv = table.h(1, pl, g)
                if hv.is_zero():
                    continue
                acc = acc.plus(hv.squared().times(weight(g, gamma)))
            if s >= smin and ratio_bound_hi(s + 1) < Fraction(1, 2):
                tail = term_bound_hi(s + 1) / (1 - ratio_bound_hi(s + 1))
                partial = acc.to_bracket(tol)
                if tail <= tol * (partial.lo + tail) or s >= smin + 60:
                    hi = partial.hi.add(tail)
                    return HVal.bracket(Bracket(partial.lo, hi, s, TAG_MAJORANT))
            s += 1

    def _h_truncated(self, table: HTable, m: int, ell: int, gamma):
        bit0 = ell & 1
        pl = ell >> 1
        weight = self._row if bit0 == 0 else self._col
        total = Fraction(0)
        used = 0
        depth = 0
        for s in range(0, 12):
            sh = self.shell(s)
            if used + len(sh) > self.TRUNC_PARENT_BUDGET and s > 0:
                break
            used += len(sh)
            depth = s
            for g in sh:
                hv = table.h(m - 1, pl, g)
                lo = hv.to_bracket(table.tol).lo
                if lo == 0:
                    continue
                w = weight(g, gamma)
                w_lo = w if isinstance(w, Fraction) else rootsum_bracket(w, table.tol).lo
                total += lo * lo * w_lo
        return HVal.bracket(Bracket.truncated(total, depth))


def group_rowsum(model: GroupModel, g, k, tol: Fraction = DEFAULT_TOL) -> Bracket:
    if not isinstance(model, GroupModel):
        raise DomainError("group_rowsum needs a group model")
    return model.rowsum_bracket(g, k, tol)


def word_length(model: GroupModel, g) -> int:
    if not isinstance(model, GroupModel):
        raise DomainError("word_length needs a group model")
    return model.length(model.validate_index(g))


# ---------------------------------------------------------------------------
# flat Wick star product on C^n


class WickFlatModel(BaseModel):
    """Polynomials in z, zbar with the normal-ordered star product.

    Basis e_{I,J} = z^I zbar^J / (I! J! (2 hbar)^(|I|+|J|)); the product is
    f * g = sum_N (2 hbar)^|N| / N! (d_z^N f)(d_zbar^N g), which gives the
    commutation relation [z_k, zbar_l] = 2 hbar delta_kl."""

    commutative = False

    TRUNC_DEGREE_PAD = 3

    def __init__(self, n: int, hbar: Fraction):
        super().__init__()
        if n < 1:
            raise DomainError("need at least one variable")
        hbar = Fraction(hbar)
        if hbar <= 0:
            raise DomainError("flat Wick model needs hbar > 0")
        self.n = n
        self.hbar = hbar
        self.two_h = 2 * hbar
        self.name = f"wick:{n}"

    def validate_index(self, idx):
        if not (isinstance(idx, tuple) and len(idx) == 2):
            raise DomainError("Wick index must be a pair of multiindices")
        I, J = (v if isinstance(v, MultiIndex) else MultiIndex(v) for v in idx)
        if len(I) != self.n or len(J) != self.n:
            raise DomainError(f"multiindices must have {self.n} entries")
        return (I, J)

    def _pair(self, left, right):
        (I, J), (K, L) = left, right
        out: dict = {}
        for N in multi_range(I.meet(L)):
            tgt_i = I + K
            tgt_i = tgt_i.minus(N)
            tgt_j = (J + L).minus(N)
            num = tgt_i.factorial() * tgt_j.factorial()
            den = (
                N.factorial()
                * I.minus(N).factorial()
                * J.factorial()
                * K.factorial()
                * L.minus(N).factorial()
            )
            coeff = Fraction(num, den) / self.two_h ** N.degree()
            key = (tgt_i, tgt_j)
            out[key] = out.get(key, Fraction(0)) + coeff
        return out

    def _row(self, alpha, gamma):
        (I, J), (G1, G2) = alpha, gamma
        if G2.minus(J) is None:
            return Fraction(0)
        total = Fraction(0)
        for N in multi_range(I):
            if G1.minus(I.minus(N)) is None:
                continue
            L = G2.minus(J) + N
            num = G1.factorial() * G2.factorial()
            den = (
                N.factorial()
                * I.minus(N).factorial()
                * J.factorial()
                * G1.minus(I.minus(N)).factorial()
                * L.minus(N).factorial()
            )
            total += Fraction(num, den) / self.two_h ** N.degree()
        return total

    def _col(self, beta, gamma):
        (K, L), (G1, G2) = beta, gamma
        if G1.minus(K) is None:
            return Fraction(0)
        total = Fraction(0)
        for N in multi_range(L):
            if G2.minus(L.minus(N)) is None:
                continue
            I = G1.minus(K) + N
            num = G1.factorial() * G2.factorial()
            den = (
                N.factorial()
                * I.minus(N).factorial()
                * G2.minus(L.minus(N)).factorial()
                * K.factorial()
                * L.minus(N).factorial()
            )
            total += Fraction(num, den) / self.two_h ** N.degree()
        return total

    def index_sort_key(self, idx):
        I, J = idx
        return (I.degree() + J.degree(), tuple(I), tuple(J))

    def index_rank(self, idx) -> int:
        I, J = idx
        return I.degree() + J.degree()

    def indices_up_to(self, rank: int):
        for I in multi_indices_up_to_degree(self.n, rank):
            for J in multi_indices_up_to_degree(self.n, rank - I.degree()):
                yield (I, J)

    def unit_index(self):
        z = MultiIndex.zero(self.n)
        return (z, z)

    def index_to_json(self, idx):
        I, J = idx
        return {"I": list(I), "J": list(J)}

    def index_from_json(self, data):
        if not (isinstance(data, dict) and "I" in data and "J" in data):
            raise DomainError("Wick index JSON needs fields I and J")
        return self.validate_index((MultiIndex(data["I"]), MultiIndex(data["J"])))

    def involution(self, a: Element) -> Element:
        return Element({(J, I): c.conjugate() for (I, J), c in a.terms.items()})

    def z_element(self, i: int) -> Element:
        """The coordinate function z_i as an element."""
        e = MultiIndex.unit(self.n, i)
        z = MultiIndex.zero(self.n)
        return Element({(e, z): GaussianRational.coerce(self.two_h)})

    def zbar_element(self, i: int) -> Element:
        e = MultiIndex.unit(self.n, i)
        z = MultiIndex.zero(self.n)
        return Element({(z, e): GaussianRational.coerce(self.two_h)})

    def evaluate(self, a: Element, point: tuple) -> GaussianRational:
        w = tuple(GaussianRational.coerce(p) for p in point)
        if len(w) != self.n:
            raise DomainError(f"point must have {self.n} entries")
        out = GaussianRational.of(0)
        for (I, J), c in a.terms.items():
            mono = GaussianRational.of(1)
            for i in range(self.n):
                mono = mono * (w[i] ** I[i]) * (w[i].conjugate() ** J[i])
            scale = Fraction(1, I.factorial() * J.factorial()) / self.two_h ** (
                I.degree() + J.degree()
            )
            out = out + c * mono * scale
        return out

    def h_special(self, table: HTable, m: int, ell: int, gamma):
        if m <= 1:
            return None
        if table.element.is_zero():
            return HVal.zero()
        bit0 = ell & 1
        pl = ell >> 1
        weight = self.row_sum if bit0 == 0 else self.col_sum
        supp_deg = max(self.index_rank(i) for i in table.element.terms)
        cap = self.index_rank(gamma) + supp_deg + self.TRUNC_DEGREE_PAD
        total = Fraction(0)
        for parent in self.indices_up_to(cap):
            w = weight(parent, gamma)
            if w == 0:
                continue
            hv = table.h(m - 1, pl, parent)
            lo = hv.to_bracket(table.tol).lo
            total += lo * lo * w
        return HVal.bracket(Bracket.truncated(total, cap))


def wick_flat_product(model: WickFlatModel, a: Element, b: Element) -> Element:
    from .algebra import multiply

    if not isinstance(model, WickFlatModel):
        raise DomainError("wick_flat_product needs a flat Wick model")
    return multiply(model, a, b)


# ---------------------------------------------------------------------------
# registry


def get_model(spec: str, hbar: Fraction | None = None, epsilon: Fraction | None = None, n: int | None = None):
    """Instantiate a model from its CLI name.

    poly:monomial | poly:factorial | laurent:plain | laurent:factorial |
    matrix:plain | matrix:hat | matrix:tilde | group:Z | group:Zd:<d> |
    group:free:<N> | wick:<n> | cone | disk
    """
    parts = spec.split(":")
    eps = Fraction(1) if epsilon is None else Fraction(epsilon)
    if parts[0] == "poly" and len(parts) == 2:
        return PolynomialModel(parts[1])
    if parts[0] == "laurent" and len(parts) == 2:
        return LaurentModel(parts[1])
    if parts[0] == "matrix" and len(parts) == 2:
        return MatrixModel(parts[1])
    if parts[0] == "group":
        if len(parts) == 2 and parts[1] == "Z":
            return GroupModel("Z", epsilon=eps)
        if len(parts) == 3 and parts[1] == "Zd":
            return GroupModel("Zd", int(parts[2]), epsilon=eps)
        if len(parts) == 3 and parts[1] == "free":
            return GroupModel("free", int(parts[2]), epsilon=eps)
    if parts[0] == "wick" and len(parts) == 2:
        if hbar is None:
            raise DomainError("wick model needs --hbar")
        return WickFlatModel(int(parts[1]), hbar)
    if parts[0] in ("cone", "disk") and len(parts) == 1:
        from .cone import ConeModel, DiskModel

        if hbar is None:
            raise DomainError(f"{parts[0]} model needs --hbar")
        dim = 1 if n is None else n
        if parts[0] == "cone":
            return ConeModel(dim, hbar)
        return DiskModel(dim, hbar)
    raise DomainError(f"unknown model {spec!r}")


def model_registry() -> list[dict]:
    """Names and parameter hints for the CLI listing."""
    return [
        {"name": "poly:monomial", "params": ""},
        {"name": "poly:factorial", "params": ""},
        {"name": "laurent:plain", "params": ""},
        {"name": "laurent:factorial", "params": ""},
        {"name": "matrix:plain", "params": ""},
        {"name": "matrix:hat", "params": ""},
        {"name": "matrix:tilde", "params": ""},
        {"name": "group:Z", "params": "--epsilon 1|1/2"},
        {"name": "group:Zd:<d>", "params": "--epsilon 1|1/2"},
        {"name": "group:free:<N>", "params": "--epsilon 1|1/2"},
        {"name": "wick:<n>", "params": "--hbar p/q"},
        {"name": "cone", "params": "--hbar p/q --n <dim>"},
        {"name": "disk", "params": "--hbar p/q --n <dim>"},
    ]
