"""Dynamical rational weight functions, their modifications and checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Sequence

from .combinatorics import (
    Perm,
    SubsetIndex,
    c_factor_ratf,
    ek_at_subset,
    ek_t,
    euler_factors,
    leq_sigma,
    rq_ratf,
    schubert_dim,
    subsets,
    wnum,
)
from .symalg import Poly, RatF, VarTable

# a term is (numerator linear factors, denominator linear factors)
Term = tuple[tuple[Poly, ...], tuple[Poly, ...]]


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _restrict_terms(vt: VarTable, terms: Sequence[Term], bindings: dict[int, Poly]) -> RatF:
    acc = RatF.zero(vt)
    for num, den in terms:
        factors = []
        for f in num:
            g = f.substitute(bindings)
            if g.is_zero():
                break
            factors.append(g)
        else:
            dens = [f.substitute(bindings) for f in den]
            acc = acc + RatF.from_factors(vt, factors, dens)
    return acc


def _bindings_for(vt: VarTable, J: SubsetIndex, lam_map: Poly | None) -> dict[int, Poly]:
    b = {vt.t(a): vt.poly(f"z{j}") for a, j in enumerate(J, start=1)}
    if lam_map is not None:
        b[vt.idx("lam")] = lam_map
    return b


@dataclass
class WeightFunction:
    """W_{sigma,I}(lam, t, z, y) kept as a list of factored terms."""

    n: int
    k: int
    sigma: Perm
    I: SubsetIndex
    terms: list[Term]
    assembly: str = "antisym"
    _value: Poly | None = field(default=None, repr=False)

    @property
    def vt(self) -> VarTable:
        return VarTable.get(self.n)

    @property
    def value(self) -> Poly:
        """The symmetrized polynomial; raises if t-denominators fail to clear."""
        if self._value is None:
            self._value = _assemble(self)
        return self._value

    def restrict(self, J: SubsetIndex, lam_map: Poly | None = None) -> RatF:
        """t_a -> z_{j_a}; optionally lam -> lam_map at the same time."""
        if J.k != self.k or J.n != self.n:
            raise ValueError(f"cannot restrict a weight-{self.k} function to {J}")
        return _restrict_terms(self.vt, self.terms, _bindings_for(self.vt, J, lam_map))

    def render(self, fmt: str = "text") -> str:
        if self.k == 1 and len(self.terms) == 1:
            return render_product(self.terms[0][0], fmt)
        return self.value.render(fmt)


def _assemble(W: WeightFunction) -> Poly:
    vt = W.vt
    k = W.k
    if k == 0:
        prod = Poly.constant(vt, 1)
        for f in W.terms[0][0]:
            prod = prod * f
        return prod
    if W.assembly == "sum":
        acc = RatF.zero(vt)
        for num, den in W.terms:
            acc = acc + RatF.from_factors(vt, num, den)
        if not acc.is_polynomial():
            raise ArithmeticError(f"symmetrization of W_{{{W.sigma},{W.I}}} left a denominator")
        return acc.num
    # antisymmetrize the identity term's numerator and divide by the Vandermonde
    num0, den0 = W.terms[0]
    P = Poly.constant(vt, 1)
    for f in num0:
        P = P * f
    tidx = [vt.t(a) for a in range(1, k + 1)]
    acc = Poly(vt)
    for p in permutations(range(k)):
        ren = {tidx[r]: tidx[p[r]] for r in range(k)}
        term = P.permute_vars(ren)
        acc = acc + term if _perm_sign(p) > 0 else acc - term
    for d in den0:
        q = acc.divide_exact(d)
        if q is None:
            raise ArithmeticError(f"W_{{{W.sigma},{W.I}}} is not a polynomial (internal error)")
        acc = q
    return acc


# --------------------------------------------------------------------------
# construction


def _l_factor(vt: VarTable, r_var: Poly, a: int, i_r: int, w: int, zmap: Callable[[int], int]) -> Poly:
    lam, y = vt.poly("lam"), vt.poly("y")
    z = vt.poly(f"z{zmap(a)}")
    if a < i_r:
        return r_var - z + y
    if a == i_r:
        return lam + r_var - z - y.scale(w)
    return r_var - z


@lru_cache(maxsize=None)
def weight(sigma: Perm, I: SubsetIndex) -> WeightFunction:
    """W_{sigma,I} = W_{sigma^{-1}(I)} with z_a -> z_{sigma(a)}."""
    n, k = I.n, I.k
    if sigma.n != n:
        raise ValueError("permutation and subset live in different S_n")
    vt = VarTable.get(n)
    y = vt.poly("y")
    J = I.image(sigma.inverse())
    els = J.elements
    ws = [wnum(i, J) for i in els]
    ts = [vt.poly(f"t{a}") for a in range(1, k + 1)]
    terms: list[Term] = []
    for p in permutations(range(k)):
        num = [y] * k
        den = []
        for r in range(k):
            tr = ts[p[r]]
            for a in range(1, n + 1):
                num.append(_l_factor(vt, tr, a, els[r], ws[r], sigma))
        for a in range(k):
            for b in range(a + 1, k):
                d = ts[p[a]] - ts[p[b]]
                num.append(d + y)
                den.append(d)
        terms.append((tuple(num), tuple(den)))
    return WeightFunction(n, k, sigma, I, terms)


@lru_cache(maxsize=None)
def diagram_weight(sigma: Perm, I: SubsetIndex) -> WeightFunction:
    """Independent route: sum over fillings of the two-column table.

    Rows are labelled by positions 1..n of sigma^{-1}(I); the second column holds
    z_{sigma(1)}..z_{sigma(n)} and a filling puts t's into the marked rows of the
    first column.
    """
    n, k = I.n, I.k
    vt = VarTable.get(n)
    lam, y = vt.poly("lam"), vt.poly("y")
    inv = sigma.inverse()
    marked = [False] * (n + 1)
    for i in I:
        marked[inv(i)] = True
    rows = [r for r in range(1, n + 1) if marked[r]]
    zcol = {r: vt.poly(f"z{sigma(r)}") for r in range(1, n + 1)}
    terms: list[Term] = []
    for filling in permutations(range(1, k + 1)):
        place = dict(zip(rows, filling))      # row -> index of t
        num: list[Poly] = [y] * k
        den: list[Poly] = []
        for row, ti in place.items():
            t = vt.poly(f"t{ti}")
            below_marked = sum(1 for r in range(row + 1, n + 1) if marked[r])
            below_plain = (n - row) - below_marked
            for r in range(1, n + 1):
                if r < row:
                    num.append(t - zcol[r] + y)                    # type 1
                elif r > row:
                    num.append(t - zcol[r])                        # type 2
                else:
                    num.append(lam + t - zcol[r] - y.scale(below_marked - below_plain))  # type 3
            for other_row, tj in place.items():
                if other_row > row:                                # type 4
                    d = t - vt.poly(f"t{tj}")
                    num.append(d + y)
                    den.append(d)
        terms.append((tuple(num), tuple(den)))
    return WeightFunction(n, k, sigma, I, terms, assembly="sum")


# --------------------------------------------------------------------------
# modifications


@dataclass
class ModifiedWeight:
    """scalar(lam, y) * W(lam -> lam_map) / e_k(t)."""

    variant: str
    base: WeightFunction
    scalar: RatF
    lam_map: Poly | None = None
    _value: RatF | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def value(self) -> RatF:
        if self._value is None:
            vt = self.base.vt
            w = RatF.from_poly(self.base.value)
            if self.lam_map is not None:
                w = w.substitute({"lam": self.lam_map})
            self._value = self.scalar * w / ek_t(vt, self.k)
        return self._value

    def restrict(self, J: SubsetIndex) -> RatF:
        r = self.base.restrict(J, self.lam_map)
        if r.is_zero():
            return r
        return self.scalar * r / ek_at_subset(J)

    def render(self, fmt: str = "text") -> str:
        if self.k == 1:
            vt = self.base.vt
            num, _ = self.base.terms[0]
            facs = list(num)
            if self.lam_map is not None:
                facs = [f.substitute({vt.idx("lam"): self.lam_map}) for f in facs]
            # e_1 = y cancels the y prefactor
            facs = facs[1:]
            head = self.scalar
            body = render_product(facs, fmt)
            if head.is_constant():
                c = head.constant_value()
                return body if c == 1 else ("-" + body if c == -1 else f"{c}*{body}")
            den = head.inverse()
            if den.is_polynomial():
                return f"{body}/({render_product_ratf(den, fmt)})"
            return f"({head.render(fmt)})*{body}"
        return self.value.render(fmt)


def modified(variant: str, sigma: Perm | None, I: SubsetIndex) -> ModifiedWeight:
    """variant in {tilde, minus, plus}; sigma is ignored for minus (always s_0)."""
    n, k = I.n, I.k
    vt = VarTable.get(n)
    lam, y = vt.poly("lam"), vt.poly("y")
    if variant == "tilde":
        return ModifiedWeight("tilde", weight(sigma, I), RatF.const(vt, 1))
    if variant == "minus":
        s0 = Perm.longest(n)
        return ModifiedWeight("minus", weight(s0, I), RatF.const(vt, (-1) ** k), -lam - y.scale(n - 2 * k))
    if variant == "plus":
        c = c_factor_ratf(sigma, I, 0) * c_factor_ratf(sigma, I, 1)
        return ModifiedWeight("plus", weight(sigma, I), c.inverse())
    raise ValueError(f"unknown variant {variant!r}")


def w_tilde(sigma: Perm, I: SubsetIndex) -> ModifiedWeight:
    return modified("tilde", sigma, I)


def w_minus(K: SubsetIndex) -> ModifiedWeight:
    return modified("minus", None, K)


def w_plus(sigma: Perm, J: SubsetIndex) -> ModifiedWeight:
    return modified("plus", sigma, J)


@lru_cache(maxsize=None)
def restrict_cached(variant: str, sigma: Perm | None, I: SubsetIndex, J: SubsetIndex) -> RatF:
    if variant == "plain":
        return weight(sigma, I).restrict(J)
    return modified(variant, sigma, I).restrict(J)


def restrict(f, J: SubsetIndex) -> RatF:
    return f.restrict(J)


# --------------------------------------------------------------------------
# scalar product and checks


def scalar_product(f, g, n: int, k: int) -> RatF:
    """sum_I f(z_I) g(z_I) / (R_I Q_I); f and g expose restrict(J)."""
    vt = VarTable.get(n)
    acc = RatF.zero(vt)
    for I in subsets(n, k):
        a = f.restrict(I)
        if a.is_zero():
            continue
        b = g.restrict(I)
        if b.is_zero():
            continue
        R, Q = rq_ratf(I)
        acc = acc + a * b / (R * Q)
    return acc


def check_recursion(I: SubsetIndex, a: int) -> bool:
    """The three cases of the recursion for W_I under z_a <-> z_{a+1}."""
    n = I.n
    if not 1 <= a < n:
        raise ValueError("need 1 <= a < n")
    vt = VarTable.get(n)
    ident = Perm.identity(n)
    lam, y = RatF.var(vt, "lam"), RatF.var(vt, "y")
    za, zb = RatF.var(vt, f"z{a}"), RatF.var(vt, f"z{a + 1}")
    sI = I.swap(a, a + 1)
    W = RatF.from_poly(weight(ident, I).value)
    if sI == I:
        return W.swap_z(a, a + 1) == W
    Ws = RatF.from_poly(weight(ident, sI).value)
    lhs = Ws.swap_z(a, a + 1)
    d = zb - za
    if a in I:
        w = wnum(a, I)
        c1 = d * (lam - (w + 2) * y) / ((d + y) * (lam - (w + 1) * y))
        c2 = y * (lam + d - (w + 1) * y) / ((d + y) * (lam - (w + 1) * y))
    else:
        w = wnum(a + 1, I)
        c1 = d * (lam - (w - 1) * y) / ((d + y) * (lam - w * y))
        # the sign of (z_{a+1} - z_a) is negative here; +(z_{a+1} - z_a) fails, as evaluation at
        # t = z_a, z_{a+1} for n = 2 forces the opposite sign
        c2 = y * (lam - d - w * y) / ((d + y) * (lam - w * y))
    return lhs == c1 * W + c2 * Ws


def orthogonality_I_value(J: SubsetIndex, K: SubsetIndex) -> RatF:
    n, k = J.n, J.k
    vt = VarTable.get(n)
    lam, y = vt.poly("lam"), vt.poly("y")
    ident, s0 = Perm.identity(n), Perm.longest(n)
    CJ = c_factor_ratf(ident, J, 0) * c_factor_ratf(ident, J, 1)
    WJ, WK = weight(ident, J), weight(s0, K)
    lam_map = -lam - y.scale(n - 2 * k)
    acc = RatF.zero(vt)
    for I in subsets(n, k):
        a = WJ.restrict(I)
        if a.is_zero():
            continue
        b = WK.restrict(I, lam_map)
        if b.is_zero():
            continue
        R, Q = rq_ratf(I)
        e = ek_at_subset(I)
        acc = acc + a * b / (CJ * e * e * R * Q)
    return acc


def check_orthogonality_I(J: SubsetIndex, K: SubsetIndex) -> bool:
    if J.k != K.k or J.n != K.n:
        raise ValueError("J and K must have the same size")
    expected = (-1) ** J.k if J == K else 0
    return orthogonality_I_value(J, K) == expected


def check_orthogonality_II(J: SubsetIndex, K: SubsetIndex) -> bool:
    val = scalar_product(w_plus(Perm.identity(J.n), J), w_minus(K), J.n, J.k)
    return val == (1 if J == K else 0)


def diagonal_value(sigma: Perm, I: SubsetIndex) -> RatF:
    """(-1)^{(n+1)k + l} C^{(0)} e^hor_- e^ver_- : the predicted W~_{sigma,I}(z_I)."""
    n, k = I.n, I.k
    sign = (-1) ** ((n + 1) * k + schubert_dim(sigma, I))
    return (
        c_factor_ratf(sigma, I, 0)
        * RatF.from_poly(euler_factors(sigma, I, "hor", "-"))
        * RatF.from_poly(euler_factors(sigma, I, "ver", "-"))
        * sign
    )


def check_interpolation(sigma: Perm, I: SubsetIndex, J: SubsetIndex) -> dict[str, bool]:
    """Interpolation properties of W_{sigma,I} at the fixed point J."""
    n, k = I.n, I.k
    vt = VarTable.get(n)
    raw = weight(sigma, I).restrict(J)
    report: dict[str, bool] = {}
    ek = ek_at_subset(J).num
    report["polynomial"] = raw.is_polynomial()
    report["divisible_by_ek"] = raw.is_polynomial() and raw.num.divide_exact(ek) is not None
    tilde = w_tilde(sigma, I).restrict(J)
    report["tilde_polynomial"] = tilde.is_polynomial()
    ever = euler_factors(sigma, J, "ver", "-")
    report["divisible_by_ever"] = tilde.is_polynomial() and tilde.num.divide_exact(ever) is not None
    if not leq_sigma(J, I, sigma):
        report["vanishing"] = tilde.is_zero()
    if J == I:
        report["diagonal_value"] = tilde == diagonal_value(sigma, I)
    if not tilde.is_zero() and tilde.is_polynomial():
        p = tilde.num
        report["degree"] = p.is_homogeneous() and p.total_degree() == k * (n - k) + k
        report["lambda_degree"] = p.degree("lam") <= k
        if J != I:
            report["y_divisible"] = p.divide_exact(vt.poly("y")) is not None
    return report


def lambda_leading(sigma: Perm, I: SubsetIndex, J: SubsetIndex) -> Poly:
    """Coefficient of lam^k in W~_{sigma,I}(z_J)."""
    p = w_tilde(sigma, I).restrict(J)
    if p.is_zero():
        return Poly(VarTable.get(I.n))
    coeffs = p.as_poly().coeffs_in("lam")
    return coeffs.get(I.k, Poly(p.vt))


# --------------------------------------------------------------------------
# display


def _linear_order(vt: VarTable, i: int) -> tuple:
    name = vt.names[i]
    rank = {"l": 0, "t": 1, "w": 2, "z": 3, "y": 4}[name[0]]
    return (rank, name)


def render_linear(p: Poly, fmt: str = "text") -> str:
    """A linear form written lam, t, w, z, y, constant (reading order of the formulas)."""
    from .symalg.poly import _var_name

    vt = p.vt
    parts = []
    const = p.terms.get(0)
    items = []
    for key, c in p.terms.items():
        if key == 0:
            continue
        exps = vt.unpack(key)
        i = next(j for j, e in enumerate(exps) if e)
        items.append((_linear_order(vt, i), vt.names[i], c))
    items.sort()
    for _, name, c in items:
        a = abs(c)
        coef = "" if a == 1 else (str(a) if a.denominator == 1 else f"({a})") + ("*" if fmt == "text" else " ")
        parts.append(("-" if c < 0 else "+", coef + _var_name(name, fmt)))
    if const:
        parts.append(("-" if const < 0 else "+", str(abs(const))))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out


def render_product(factors: Sequence[Poly], fmt: str = "text") -> str:
    sep = "*" if fmt == "text" else ("" if fmt == "unicode" else " ")
    consts = [f for f in factors if f.is_constant()]
    c = 1
    for f in consts:
        c *= f.constant_value()
    pieces = []
    for f in factors:
        if f.is_constant():
            continue
        body = render_linear(f, fmt) if f.total_degree() == 1 else f.render(fmt)
        pieces.append(body if len(f.terms) == 1 else f"({body})")
    head = "" if c == 1 else ("-" if c == -1 else str(c) + sep)
    return head + sep.join(pieces) if pieces else str(c)


def render_product_ratf(f: RatF, fmt: str = "text") -> str:
    facs = []
    for g, e in sorted(f.nf.items(), key=lambda ge: sorted(ge[0].terms.items(), reverse=True)):
        facs += [g] * e
    if not f.rest.is_constant():
        facs.append(f.rest)
    elif f.rest.constant_value() != 1:
        facs.insert(0, f.rest)
    return render_product(facs, fmt)
