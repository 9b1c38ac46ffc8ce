"""Star product on the cone over index triples and its quotient to the disk.

Basis functions f_{P,Q,alpha} carry two multiindices and a level
alpha >= max(|P|, |Q|).  Their product has rational structure constants that
do not depend on the deformation parameter hbar: the closed form
(tilde_structure_constants) and an independent route through the unscaled
e-basis product (oracle_structure_constants) must agree.  Setting y = 1
quotients onto the unit disk, where classes reduce to pairs (P, Q) at the
minimal level; hbar reenters through the reduction and the evaluation
functionals.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .algebra import DomainError, Element, InfiniteFanError, multiply
from .models import BaseModel, _as_int
from .scalars import (
    GR_ONE,
    GaussianRational,
    MultiIndex,
    binomial,
    factorial,
    is_allowed_hbar,
    multi_binomial,
    multi_indices_up_to_degree,
    multi_range,
    pochhammer,
)
from .seminorms import DEFAULT_TOL, TAG_MAJORANT, Bracket, HTable, HVal

Triple = tuple  # (P: MultiIndex, Q: MultiIndex, alpha: int)
DiskIndex = tuple  # (P: MultiIndex, Q: MultiIndex)


def make_triple(P, Q, alpha) -> Triple:
    P, Q = MultiIndex(P), MultiIndex(Q)
    if len(P) != len(Q):
        raise DomainError("triple multiindices must share one dimension")
    alpha = _as_int(alpha, "triple level")
    if alpha < max(P.degree(), Q.degree()):
        raise DomainError(f"level {alpha} below max(|P|, |Q|)")
    return (P, Q, alpha)


def _falling(m: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= m - j
    return out


def _multi_falling(P: MultiIndex, K: MultiIndex) -> int:
    out = 1
    for p, k in zip(P, K, strict=True):
        out *= _falling(p, k)
    return out


# ---------------------------------------------------------------------------
# structure constants, two routes


def wick_monomial_product(t1: Triple, t2: Triple, hbar) -> Element:
    """e-basis product: the explicit (k, K) double sum with hbar powers."""
    (P, Q, alpha), (R, S, beta) = t1, t2
    two_h = 2 * Fraction(hbar)
    if two_h == 0:
        raise DomainError("hbar must be nonzero")
    acc: dict = {}
    kmax = min(alpha - P.degree(), beta - S.degree())
    for k in range(kmax + 1):
        for K in multi_range(P.meet(S)):
            coeff = (
                Fraction((-1) ** k)
                * two_h ** (k + K.degree())
                / (factorial(k) * K.factorial())
                * _falling(alpha - P.degree(), k)
                * _falling(beta - S.degree(), k)
                * _multi_falling(P, K)
                * _multi_falling(S, K)
            )
            tgt = ((P + R).minus(K), (Q + S).minus(K), alpha + beta - k - K.degree())
            acc[tgt] = acc.get(tgt, Fraction(0)) + coeff
    return Element({t: GaussianRational.coerce(c) for t, c in acc.items() if c})


def occupancy_count(t1: Triple, t2: Triple, target: Triple) -> int:
    """How many (k, K) cells of the e-basis double sum hit the target index.

    The closed-form constant carries this count as a factor; it only ever
    takes the values 0 and 1, which the test suite asserts."""
    (P, Q, alpha), (R, S, beta) = t1, t2
    I, J, gamma = target
    count = 0
    kmax = min(alpha - P.degree(), beta - S.degree())
    for k in range(kmax + 1):
        for K in multi_range(P.meet(S)):
            if (
                alpha + beta - k - K.degree() == gamma
                and (P + R).minus(K) == I
                and (Q + S).minus(K) == J
            ):
                count += 1
    return count


def _tilde_coefficient(t1: Triple, t2: Triple, target: Triple) -> Fraction:
    (P, Q, alpha), (R, S, beta) = t1, t2
    I, J, gamma = target
    Kp = (P + R).minus(I)
    if Kp is None or (Q + S).minus(J) != Kp:
        return Fraction(0)
    kp = alpha + beta - gamma - Kp.degree()
    if kp < 0:
        return Fraction(0)
    occ = occupancy_count(t1, t2, target)
    if occ == 0:
        return Fraction(0)
    sign = -1 if kp % 2 else 1
    c = Fraction(sign * occ, factorial(kp) * Kp.factorial())
    c *= multi_binomial(I, R) * multi_binomial(J, Q)
    c *= binomial(gamma - I.degree(), beta - R.degree())
    c *= binomial(gamma - J.degree(), alpha - Q.degree())
    return c


@lru_cache(maxsize=None)
def _tilde_pairs(t1: Triple, t2: Triple) -> dict:
    (P, Q, alpha), (R, S, beta) = t1, t2
    out = {}
    for Kp in multi_range(P.meet(S)):
        I = (P + R).minus(Kp)
        J = (Q + S).minus(Kp)
        for gamma in range(max(alpha, beta), alpha + beta - Kp.degree() + 1):
            c = _tilde_coefficient(t1, t2, (I, J, gamma))
            if c:
                out[(I, J, gamma)] = c
    return out


def tilde_structure_constants(t1: Triple, t2: Triple) -> dict:
    """Closed-form structure constants of the f-basis product; hbar-free."""
    return dict(_tilde_pairs(t1, t2))


def _f_scale(t: Triple, two_h: Fraction) -> Fraction:
    P, Q, alpha = t
    return (
        two_h**alpha
        * P.factorial()
        * factorial(alpha - P.degree())
        * Q.factorial()
        * factorial(alpha - Q.degree())
    )


def oracle_structure_constants(t1: Triple, t2: Triple, hbar) -> dict:
    """Independent route: unscale f to e, multiply there, rescale back.

    The hbar powers must cancel; the output is asserted real and rational."""
    hbar = Fraction(hbar)
    if not is_allowed_hbar(hbar):
        raise DomainError(f"hbar {hbar} is not an allowed value")
    two_h = 2 * hbar
    prod = wick_monomial_product(t1, t2, hbar)
    scale = _f_scale(t1, two_h) * _f_scale(t2, two_h)
    out = {}
    for t, c in prod.terms.items():
        if c.im != 0:
            raise DomainError("oracle constants must be real")
        val = c.re * _f_scale(t, two_h) / scale
        if val:
            out[t] = val
    return out


# ---------------------------------------------------------------------------
# recursion weights: both fans are finite on the cone


def cone_rowsum(t: Triple, out_t: Triple) -> Fraction:
    """Sum of |C| over the right partners mapping t into out_t."""
    P, Q, alpha = t
    I, J, gamma = out_t
    if alpha > gamma:
        return Fraction(0)
    total = Fraction(0)
    for Kp in multi_range(P):
        R = (I + Kp).minus(P)
        S = (J + Kp).minus(Q)
        if R is None or S is None or not Kp <= S:
            continue
        for beta in range(max(R.degree(), S.degree()), gamma + 1):
            c = _tilde_coefficient(t, (R, S, beta), out_t)
            if c:
                total += abs(c)
    return total


def cone_colsum(t: Triple, out_t: Triple) -> Fraction:
    """Sum of |C| over the left partners mapping t (as right factor) into out_t."""
    R, S, beta = t
    I, J, gamma = out_t
    if beta > gamma:
        return Fraction(0)
    total = Fraction(0)
    for Kp in multi_range(S):
        P = (I + Kp).minus(R)
        Q = (J + Kp).minus(S)
        if P is None or Q is None or not Kp <= P:
            continue
        for alpha in range(max(P.degree(), Q.degree()), gamma + 1):
            c = _tilde_coefficient((P, Q, alpha), t, out_t)
            if c:
                total += abs(c)
    return total


def cone_rowsum_gamma_total(t: Triple, gamma: int) -> Fraction:
    """Row sums of t against every target at one level, added up."""
    n = len(t[0])
    total = Fraction(0)
    for I in multi_indices_up_to_degree(n, gamma):
        for J in multi_indices_up_to_degree(n, gamma):
            total += cone_rowsum(t, (I, J, gamma))
    return total


class ConeModel(BaseModel):
    """Cone algebra in the level-filtered f-basis.

    Structure constants are hbar-free; the stored hbar only enters the
    evaluation functionals and the quotient machinery.  Both recursion fans
    are finite, so every seminorm value is exact."""

    commutative = False

    def __init__(self, n: int, hbar):
        super().__init__()
        n = _as_int(n, "dimension")
        if n < 1:
            raise DomainError("dimension must be >= 1")
        self.n = n
        self.hbar = Fraction(hbar)
        if self.hbar == 0:
            raise DomainError("hbar must be nonzero")
        self.name = "cone"

    def _pair(self, left, right):
        return _tilde_pairs(left, right)

    def _row(self, alpha_idx, gamma_idx):
        return cone_rowsum(alpha_idx, gamma_idx)

    def _col(self, beta_idx, gamma_idx):
        return cone_colsum(beta_idx, gamma_idx)

    def row_parents(self, gamma_idx):
        return self.indices_up_to(gamma_idx[2])

    def col_parents(self, gamma_idx):
        return self.indices_up_to(gamma_idx[2])

    # -- index plumbing -----------------------------------------------------
    def validate_index(self, idx):
        if not (isinstance(idx, tuple) and len(idx) == 3):
            raise DomainError("cone index must be a (P, Q, alpha) triple")
        t = make_triple(*idx)
        if len(t[0]) != self.n:
            raise DomainError(f"multiindex length must be {self.n}")
        return t

    def index_sort_key(self, idx):
        P, Q, alpha = idx
        return (alpha, tuple(P), tuple(Q))

    def index_rank(self, idx) -> int:
        return idx[2]

    def indices_up_to(self, rank: int) -> Iterator[Triple]:
        for alpha in range(rank + 1):
            for P in multi_indices_up_to_degree(self.n, alpha):
                for Q in multi_indices_up_to_degree(self.n, alpha):
                    yield (P, Q, alpha)

    def unit_index(self):
        z = MultiIndex.zero(self.n)
        return (z, z, 0)

    def index_to_json(self, idx):
        P, Q, alpha = idx
        return {"P": list(P), "Q": list(Q), "alpha": alpha}

    def index_from_json(self, data):
        if not (isinstance(data, dict) and {"P", "Q", "alpha"} <= set(data)):
            raise DomainError('cone index JSON must be {"P": [..], "Q": [..], "alpha": k}')
        return self.validate_index(
            (MultiIndex(data["P"]), MultiIndex(data["Q"]), data["alpha"])
        )

    def involution(self, a: Element) -> Element:
        return Element(
            {(Q, P, alpha): c.conjugate() for (P, Q, alpha), c in a.terms.items()}
        )

    def evaluate(self, a: Element, w) -> GaussianRational:
        return eval_upstairs(a, w, self.hbar)


# ---------------------------------------------------------------------------
# combined seminorms with certified factorial-weighted sums


def h_combined(
    model: ConeModel,
    a: Element,
    m: int,
    ell: int,
    gamma: int,
    table: HTable | None = None,
    tol: Fraction = DEFAULT_TOL,
) -> HVal:
    """Recursion value summed over every triple at one level; exact."""
    if table is None:
        table = HTable(model, a, tol)
    acc = HVal.zero()
    for P in multi_indices_up_to_degree(model.n, gamma):
        for Q in multi_indices_up_to_degree(model.n, gamma):
            acc = acc.plus(table.h(m, ell, (P, Q, gamma)))
    return acc


def _growth_certificate(model: ConeModel, a: Element, m: int):
    """(K, B, p) with h_combined(m, ell, gamma) <= K * B^gamma * (gamma+1)^p.

    Level 0 sums coefficient moduli, bounded via |c| <= (1 + |c|^2)/2;
    level 1 sums squared moduli against the crude row-sum bound
    (gamma+1)^(4n+1) * 4^gamma; each further level squares the sum and picks
    up one more row-sum bound and a level count."""
    n = model.n
    if m == 0:
        K = sum(((1 + c.abs_squared()) / 2 for c in a.terms.values()), Fraction(0))
        return K, Fraction(1), 0
    K = sum((c.abs_squared() for c in a.terms.values()), Fraction(0))
    B, p = Fraction(4), 4 * n + 1
    for _ in range(m - 1):
        K, B, p = K * K, 4 * B * B, 2 * p + 4 * n + 2
    return K, B, p


def seminorm_R(
    model: ConeModel,
    a: Element,
    m: int,
    ell: int,
    R,
    depth: int,
    tol: Fraction = DEFAULT_TOL,
) -> Bracket:
    """Certified value of sum_gamma R^gamma/gamma! * h_combined(m, ell, gamma).

    Partial sums up to the depth are exact; the tail uses the per-element
    growth certificate and closes with a geometric bound once the term ratio
    falls below 1/2.  The 2^m-th root is left to the caller."""
    R = Fraction(R)
    if R <= 0:
        raise DomainError("R must be positive")
    if a.is_zero():
        return Bracket.exact(Fraction(0))
    table = HTable(model, a, tol)
    partial = Bracket.exact(Fraction(0))
    for gamma in range(depth + 1):
        hv = h_combined(model, a, m, ell, gamma, table, tol)
        partial = partial + hv.to_bracket(tol).scale(R**gamma / factorial(gamma))
    K, B, p = _growth_certificate(model, a, m)

    def majorant(g: int) -> Fraction:
        return K * (R * B) ** g * Fraction(g + 1) ** p / factorial(g)

    def ratio(g: int) -> Fraction:
        return R * B * Fraction(g + 2, g + 1) ** p / (g + 1)

    g = depth + 1
    extra = Fraction(0)
    while ratio(g) >= Fraction(1, 2):
        extra += majorant(g)
        g += 1
    tail = extra + 2 * majorant(g)
    return Bracket(partial.lo, partial.hi.add(tail), depth, TAG_MAJORANT)


# ---------------------------------------------------------------------------
# evaluation functionals


def cone_y(w) -> Fraction:
    w = tuple(GaussianRational.coerce(c) for c in w)
    return w[0].abs_squared() - sum((c.abs_squared() for c in w[1:]), Fraction(0))


def _check_cone_point(w):
    w = tuple(GaussianRational.coerce(c) for c in w)
    y = cone_y(w)
    if y <= 0:
        raise DomainError(f"point outside the cone: y = {y}")
    return w, y


def _gr_power_multi(ws, I: MultiIndex) -> GaussianRational:
    out = GR_ONE
    for c, e in zip(ws, I, strict=True):
        out = out * c**e
    return out


def _gr_pochhammer(z: GaussianRational, r: int) -> GaussianRational:
    out = GR_ONE
    for j in range(r):
        out = out * (z + GaussianRational.of(j))
    return out


def _pref(P: MultiIndex, Q: MultiIndex, alpha: int) -> Fraction:
    return Fraction(
        1,
        P.factorial()
        * factorial(alpha - P.degree())
        * Q.factorial()
        * factorial(alpha - Q.degree()),
    )


def eval_upstairs(a: Element, w, hbar) -> GaussianRational:
    """Exact evaluation of a finite cone element at a rational cone point."""
    hbar = Fraction(hbar)
    if hbar == 0:
        raise DomainError("hbar must be nonzero")
    w, y = _check_cone_point(w)
    two_h = 2 * hbar
    w0 = w[0]
    ws = w[1:]
    wsc = tuple(c.conjugate() for c in ws)
    out = GaussianRational.of(0)
    for (P, Q, alpha), coeff in a.terms.items():
        val = (
            w0 ** (alpha - P.degree())
            * _gr_power_multi(ws, P)
            * w0.conjugate() ** (alpha - Q.degree())
            * _gr_power_multi(wsc, Q)
        )
        out = out + coeff * val * (pochhammer(y / two_h, alpha) * _pref(P, Q, alpha) / y**alpha)
    return out


def eval_pair(a: Element, u, v, hbar) -> GaussianRational:
    """Two-point extension: holomorphic in u, antiholomorphic in v.

    The rational y is replaced by the sesquilinear pairing
    yhat(u, v) = u0 conj(v0) - sum_i u_i conj(v_i), which must not vanish."""
    hbar = Fraction(hbar)
    if hbar == 0:
        raise DomainError("hbar must be nonzero")
    u = tuple(GaussianRational.coerce(c) for c in u)
    v = tuple(GaussianRational.coerce(c) for c in v)
    yhat = u[0] * v[0].conjugate()
    for ui, vi in zip(u[1:], v[1:], strict=True):
        yhat = yhat - ui * vi.conjugate()
    if yhat.is_zero():
        raise DomainError("pair evaluation needs yhat != 0")
    two_h = 2 * hbar
    u0 = u[0]
    us = u[1:]
    v0c = v[0].conjugate()
    vsc = tuple(c.conjugate() for c in v[1:])
    out = GaussianRational.of(0)
    for (P, Q, alpha), coeff in a.terms.items():
        val = (
            u0 ** (alpha - P.degree())
            * _gr_power_multi(us, P)
            * v0c ** (alpha - Q.degree())
            * _gr_power_multi(vsc, Q)
        )
        poch = _gr_pochhammer(yhat / two_h, alpha)
        out = out + coeff * poch * val * _pref(P, Q, alpha) / yhat**alpha
    return out


# ---------------------------------------------------------------------------
# the vanishing ideal of y = 1 and the quotient to the disk


def y_minus_one(n: int, hbar) -> Element:
    """The function y - 1 written in the level <= 1 basis."""
    hbar = Fraction(hbar)
    z = MultiIndex.zero(n)
    terms = {
        (z, z, 1): GaussianRational.coerce(2 * hbar),
        (z, z, 0): GaussianRational.of(-1),
    }
    for i in range(n):
        e = MultiIndex.unit(n, i)
        terms[(e, e, 1)] = GaussianRational.coerce(-2 * hbar)
    return Element(terms)


def vanishing_ideal_witness(b: Element, hbar, n: int | None = None) -> Element:
    """(y - 1) star b: an element vanishing at every y = 1 point."""
    if n is None:
        if b.is_zero():
            raise DomainError("cannot infer the dimension from the zero element")
        n = len(next(iter(b.terms))[0])
    model = ConeModel(n, hbar)
    return multiply(model, y_minus_one(n, hbar), b)


def _rank(rows: list[list[GaussianRational]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    r0 = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for r in range(r0, len(rows)):
            if not rows[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        pr = rows[r0]
        pv = pr[col]
        for r in range(r0 + 1, len(rows)):
            f = rows[r][col]
            if not f.is_zero():
                fac = f / pv
                rows[r] = [x - fac * y for x, y in zip(rows[r], pr)]
        rank += 1
        r0 += 1
        if r0 == len(rows):
            break
    return rank


def ideal_level_dimension(n: int, hbar, level_cap: int) -> int:
    """Exact dimension of the ideal piece supported in levels <= level_cap.

    Spanned by (y - 1) star f_t over triples t of level < level_cap; the rank
    is computed by Gaussian elimination over the exact coefficient field."""
    model = ConeModel(n, hbar)
    cols = {t: i for i, t in enumerate(model.indices_up_to(level_cap))}
    rows = []
    for t in model.indices_up_to(level_cap - 1):
        w = vanishing_ideal_witness(Element.basis(t), hbar, n)
        row = [GaussianRational.of(0)] * len(cols)
        for tt, c in w.terms.items():
            row[cols[tt]] = c
        rows.append(row)
    return _rank(rows)


@lru_cache(maxsize=None)
def _reduce_cached(t: Triple, hbar: Fraction) -> tuple:
    I, J, gamma = t
    n = len(I)
    nu = 1 / (2 * hbar)
    mx = max(I.degree(), J.degree())
    out = []
    for K in multi_indices_up_to_degree(n, gamma - mx):
        k = K.degree()
        cK = (
            _pref(I, J, gamma)
            / _pref(I + K, J + K, mx + k)
            * pochhammer(nu, gamma)
            / pochhammer(nu, k + mx)
            * binomial(gamma - mx, k)
            * Fraction(factorial(k), K.factorial())
        )
        if cK:
            out.append(((I + K, J + K), cK))
    return tuple(out)


def reduce_class(t: Triple, hbar) -> Element:
    """Disk-basis expansion of the class of f_t modulo the y = 1 ideal."""
    hbar = Fraction(hbar)
    if not is_allowed_hbar(hbar):
        raise DomainError(f"hbar {hbar} is not an allowed value")
    return Element(
        {idx: GaussianRational.coerce(c) for idx, c in _reduce_cached(t, hbar)}
    )


def disk_lift(a: Element) -> Element:
    """Lift each disk pair to its minimal-level triple."""
    return Element(
        {(P, Q, max(P.degree(), Q.degree())): c for (P, Q), c in a.terms.items()}
    )


def disk_reduce(a: Element, hbar) -> Element:
    """Reduce an upstairs element to its disk class, term by term."""
    out = Element.zero()
    for t, c in a.terms.items():
        out = out + reduce_class(t, hbar).scale(c)
    return out


def disk_multiply(a: Element, b: Element, hbar, n: int | None = None) -> Element:
    """Quotient product: lift at minimal levels, multiply upstairs, reduce."""
    if n is None:
        src = a if not a.is_zero() else b
        if src.is_zero():
            return Element.zero()
        n = len(next(iter(src.terms))[0])
    model = ConeModel(n, hbar)
    return disk_reduce(multiply(model, disk_lift(a), disk_lift(b)), hbar)


def eval_disk(a: Element, v, hbar) -> GaussianRational:
    """Exact evaluation of a disk element at a point with |v| < 1."""
    hbar = Fraction(hbar)
    if not is_allowed_hbar(hbar):
        raise DomainError(f"hbar {hbar} is not an allowed value")
    v = tuple(GaussianRational.coerce(c) for c in v)
    norm2 = sum((c.abs_squared() for c in v), Fraction(0))
    if norm2 >= 1:
        raise DomainError("point outside the unit disk")
    nu = 1 / (2 * hbar)
    vc = tuple(c.conjugate() for c in v)
    out = GaussianRational.of(0)
    for (P, Q), coeff in a.terms.items():
        alpha = max(P.degree(), Q.degree())
        val = _gr_power_multi(v, P) * _gr_power_multi(vc, Q)
        scal = pochhammer(nu, alpha) * _pref(P, Q, alpha) / (1 - norm2) ** alpha
        out = out + coeff * val * scal
    return out


def disk_coefficient_extraction(a: Element, R, S, hbar) -> GaussianRational:
    """One disk coefficient of the class of an upstairs element.

    Second route past the reduction expansion: a double sum over the support
    and the shared lowering multiindex, with a Pochhammer-ratio weight."""
    hbar = Fraction(hbar)
    if not is_allowed_hbar(hbar):
        raise DomainError(f"hbar {hbar} is not an allowed value")
    R, S = MultiIndex(R), MultiIndex(S)
    nu = 1 / (2 * hbar)
    M = max(R.degree(), S.degree())
    mdeg = min(R.degree(), S.degree())
    out = GaussianRational.of(0)
    for (P0, Q0, alpha), coeff in a.terms.items():
        I = R.minus(P0)
        if I is None or S.minus(Q0) != I or alpha < M:
            continue
        weight = Fraction(
            I.factorial() * factorial(M - mdeg),
            factorial(alpha - mdeg + I.degree()) * factorial(alpha - M),
        ) * (pochhammer(nu, alpha) / pochhammer(nu, M))
        out = out + coeff * (multi_binomial(R, I) * multi_binomial(S, I) * weight)
    return out


class DiskModel(BaseModel):
    """Quotient algebra on the unit disk: classes f_{P,Q} at minimal level.

    Unlike the cone constants, the product depends on hbar through the
    reduction, and hbar must be an allowed value.  Recursion fans are not
    finite here; seminorms live upstairs on the cone."""

    commutative = False

    def __init__(self, n: int, hbar):
        super().__init__()
        n = _as_int(n, "dimension")
        if n < 1:
            raise DomainError("dimension must be >= 1")
        self.n = n
        self.hbar = Fraction(hbar)
        if not is_allowed_hbar(self.hbar):
            raise DomainError(f"hbar {self.hbar} is not an allowed value")
        self.name = "disk"

    def _pair(self, left, right):
        (P, Q), (R, S) = left, right
        t1 = (P, Q, max(P.degree(), Q.degree()))
        t2 = (R, S, max(R.degree(), S.degree()))
        acc: dict = {}
        for t, c in _tilde_pairs(t1, t2).items():
            for idx, rc in _reduce_cached(t, self.hbar):
                val = acc.get(idx, Fraction(0)) + c * rc
                acc[idx] = val
        return {idx: c for idx, c in acc.items() if c}

    def _row(self, alpha, gamma):
        raise InfiniteFanError(
            "disk classes have no finite row sums; lift to the cone model"
        )

    def _col(self, alpha, gamma):
        raise InfiniteFanError(
            "disk classes have no finite column sums; lift to the cone model"
        )

    # -- index plumbing -----------------------------------------------------
    def validate_index(self, idx):
        if not (isinstance(idx, tuple) and len(idx) == 2):
            raise DomainError("disk index must be a (P, Q) pair")
        P, Q = MultiIndex(idx[0]), MultiIndex(idx[1])
        if len(P) != self.n or len(Q) != self.n:
            raise DomainError(f"multiindex length must be {self.n}")
        return (P, Q)

    def index_sort_key(self, idx):
        P, Q = idx
        return (max(P.degree(), Q.degree()), tuple(P), tuple(Q))

    def index_rank(self, idx) -> int:
        P, Q = idx
        return max(P.degree(), Q.degree())

    def indices_up_to(self, rank: int) -> Iterator[DiskIndex]:
        for P in multi_indices_up_to_degree(self.n, rank):
            for Q in multi_indices_up_to_degree(self.n, rank):
                yield (P, Q)

    def unit_index(self):
        z = MultiIndex.zero(self.n)
        return (z, z)

    def index_to_json(self, idx):
        P, Q = idx
        return {"P": list(P), "Q": list(Q)}

    def index_from_json(self, data):
        if not (isinstance(data, dict) and {"P", "Q"} <= set(data)):
            raise DomainError('disk index JSON must be {"P": [..], "Q": [..]}')
        return self.validate_index((MultiIndex(data["P"]), MultiIndex(data["Q"])))

    def involution(self, a: Element) -> Element:
        return Element({(Q, P): c.conjugate() for (P, Q), c in a.terms.items()})

    def evaluate(self, a: Element, v) -> GaussianRational:
        return eval_disk(a, v, self.hbar)
