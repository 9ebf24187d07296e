"""Exact rational functions over a VarTable.

A RatF is stored as  ``prod(nf) * rest / prod(df)``  where ``nf`` and ``df``
are multisets of monic (leading coefficient 1) polynomials and ``rest`` is an
expanded polynomial carrying the rational unit.  Almost every denominator met
in this library is a product of linear forms, so keeping denominators factored
turns lcm and cancellation into multiset operations and trial divisions by a
dictionary of linear factors; no multivariate gcd is ever computed.

Invariants of a reduced RatF:
  * ``nf`` and ``df`` share no key;
  * ``rest`` is not divisible by any key of ``df``;
  * linear numerator cofactors are moved into ``nf``;
  * the zero function has empty multisets and ``rest == 0``.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Iterable, Mapping

from gmpy2 import mpq

from .poly import MODULUS, Poly, VarTable

_ONE = mpq(1)


# --------------------------------------------------------------------------
# factor dictionary


def _register(vt: VarTable, f: Poly) -> None:
    if f.total_degree() == 1 and f not in vt._registry:
        vt._registry.add(f)
        vt._registry_by_support = None


def _vanishing_point(f: Poly) -> list[int]:
    """A random point (mod p) on the hyperplane f = 0; f is monic and linear."""
    cache = _POINTS
    pt = cache.get(f)
    if pt is not None:
        return pt
    vt = f.vt
    rng = vt._rng
    pt = [rng.randrange(1, MODULUS) for _ in range(vt.nvars)]
    lead = min(f.support())
    pt[lead] = 0
    # f = x_lead + g  with g free of x_lead, so x_lead := -g(pt)
    val = f.eval_mod(pt)
    pt[lead] = (-val) % MODULUS
    cache[f] = pt
    return pt


_POINTS: dict[Poly, list[int]] = {}


def _divide_out(p: Poly, f: Poly) -> Poly | None:
    """p / f when f divides p, else None.  Linear f gets a cheap modular pre-test."""
    if f.total_degree() == 1:
        if p.eval_mod(_vanishing_point(f)) != 0:
            return None
    return p.divide_exact(f)


def seed_factor_dictionary(vt: VarTable) -> None:
    """Linear factors harvested from the constructions of weight functions,
    R-matrices and L-operators."""
    P = vt.poly
    lam, y = P("lam"), P("y")
    n = vt.n
    zs = [P(f"z{i}") for i in range(1, n + 1)]
    ts = [P(f"t{a}") for a in range(1, vt.k + 1)]
    ws = [P("w"), P("w1"), P("w2")]
    span = 2 * n + 4
    cands: list[Poly] = [y]
    cands += [lam + m * y for m in range(-span, span + 1)]
    for i, zi in enumerate(zs):
        for j, zj in enumerate(zs):
            if i == j:
                continue
            for m in (-1, 0, 1):
                cands.append(zi - zj + m * y)
            for m in range(-n - 2, n + 3):
                cands.append(lam + zi - zj + m * y)
    for a, ta in enumerate(ts):
        for b, tb in enumerate(ts):
            if a != b:
                cands += [ta - tb, ta - tb + y, ta - tb - y]
        for zb in zs:
            cands += [ta - zb, ta - zb + y]
    for w in ws:
        for zi in zs:
            cands += [w - zi, w - zi - y, w - zi + y]
            for m in range(-n - 2, n + 3):
                cands += [lam + w - zi + m * y, lam - w + zi + m * y]
    w1, w2 = ws[1], ws[2]
    cands += [w1 - w2 + m * y for m in (-1, 0, 1)]
    for m in range(-n - 2, n + 3):
        cands += [lam + w1 - w2 + m * y, lam - w1 + w2 + m * y]
    for c in cands:
        if c:
            _register(vt, c.monic()[1])


def _candidates(vt: VarTable, support: frozenset[int]) -> list[Poly]:
    if vt._registry_by_support is None:
        idx: dict[frozenset, list[Poly]] = {}
        for f in vt._registry:
            idx.setdefault(f.support(), []).append(f)
        for lst in idx.values():
            lst.sort(key=lambda f: sorted(f.terms.items()))
        vt._registry_by_support = idx
    out = []
    for s, lst in vt._registry_by_support.items():
        if s <= support:
            out.extend(lst)
    return out


def factor_over_dictionary(p: Poly) -> tuple[mpq, Counter, Poly]:
    """Split p = unit * prod(linear factors) * cofactor using the dictionary.

    The cofactor is monic (or 1).  Linear factors are monic.
    """
    if p.is_zero():
        raise ZeroDivisionError("cannot factor the zero polynomial")
    unit, q = p.monic()
    found: Counter = Counter()
    if q.is_constant():
        return unit, found, q
    if q.total_degree() == 1:
        found[q] += 1
        return unit, found, Poly.constant(p.vt, 1)
    for f in _candidates(p.vt, q.support()):
        while True:
            r = _divide_out(q, f)
            if r is None:
                break
            found[f] += 1
            q = r
            if q.total_degree() <= 1:
                break
        if q.total_degree() <= 1:
            break
    if q.total_degree() == 1:
        c, m = q.monic()
        unit *= c
        found[m] += 1
        q = Poly.constant(p.vt, 1)
    elif q.is_constant():
        unit *= q.constant_value()
        q = Poly.constant(p.vt, 1)
    return unit, found, q


@lru_cache(maxsize=8192)
def _expand_items(items: frozenset) -> Poly:
    it = sorted(items, key=lambda fe: (fe[0].total_degree(), len(fe[0].terms), fe[1]))
    result = None
    for f, e in it:
        term = f if e == 1 else f ** e
        result = term if result is None else result * term
    return result


def _expand(vt: VarTable, factors: Mapping[Poly, int]) -> Poly:
    if not factors:
        return Poly.constant(vt, 1)
    return _expand_items(frozenset(factors.items()))


def _sub_multiset(a: Mapping, b: Mapping) -> Counter:
    out = Counter(a)
    out.subtract(b)
    return Counter({k: v for k, v in out.items() if v > 0})


# --------------------------------------------------------------------------


class RatF:
    """Immutable reduced rational function."""

    __slots__ = ("vt", "nf", "rest", "df", "_num", "_den", "_hash")

    def __init__(self, vt: VarTable, nf, rest: Poly, df):
        # use RatF._make / constructors; this stores without reducing
        self.vt = vt
        self.nf = nf
        self.rest = rest
        self.df = df
        self._num = None
        self._den = None
        self._hash = None

    # construction --------------------------------------------------------
    @classmethod
    def zero(cls, vt: VarTable) -> "RatF":
        return cls(vt, Counter(), Poly(vt), Counter())

    @classmethod
    def const(cls, vt: VarTable, c) -> "RatF":
        return cls(vt, Counter(), Poly.constant(vt, c), Counter())

    @classmethod
    def var(cls, vt: VarTable, name: str | int) -> "RatF":
        return cls.from_poly(vt.poly(name))

    @classmethod
    def from_poly(cls, p: Poly) -> "RatF":
        vt = p.vt
        if p.is_zero():
            return cls.zero(vt)
        if p.total_degree() == 1:
            unit, f = p.monic()
            _register(vt, f)
            return cls(vt, Counter({f: 1}), Poly.constant(vt, unit), Counter())
        return cls(vt, Counter(), p, Counter())

    @classmethod
    def from_factors(cls, vt: VarTable, num: Iterable[Poly] = (), den: Iterable[Poly] = (), unit=1) -> "RatF":
        """prod(num) * unit / prod(den), with factors given as polynomials."""
        u = mpq(unit)
        nf: Counter = Counter()
        rest = Poly.constant(vt, 1)
        for f in num:
            if f.is_zero():
                return cls.zero(vt)
            if f.is_constant():
                u *= f.constant_value()
            elif f.total_degree() == 1:
                c, m = f.monic()
                u *= c
                _register(vt, m)
                nf[m] += 1
            else:
                rest = rest * f
        df: Counter = Counter()
        for g in den:
            if g.is_zero():
                raise ZeroDivisionError("zero factor in denominator")
            c, found, cof = factor_over_dictionary(g)
            u /= c
            df.update(found)
            if not cof.is_constant():
                df[cof] += 1
        if u == 0:
            return cls.zero(vt)
        return cls._make(vt, nf, rest.scale(u), df)

    @classmethod
    def _make(cls, vt: VarTable, nf: Counter, rest: Poly, df: Counter, test=None) -> "RatF":
        if rest.is_zero():
            return cls.zero(vt)
        for f in [f for f in nf if f in df]:
            m = min(nf[f], df[f])
            nf[f] -= m
            df[f] -= m
        nf = Counter({f: e for f, e in nf.items() if e > 0})
        df = Counter({f: e for f, e in df.items() if e > 0})
        if df and not rest.is_constant():
            keys = df if test is None else [f for f in test if f in df]
            for f in list(keys):
                e = df[f]
                while e > 0:
                    q = _divide_out(rest, f)
                    if q is None:
                        break
                    rest = q
                    e -= 1
                if e:
                    df[f] = e
                else:
                    del df[f]
                if rest.is_constant():
                    break
        if rest.total_degree() == 1:
            unit, f = rest.monic()
            _register(vt, f)
            if f in df:
                df[f] -= 1
                if not df[f]:
                    del df[f]
            else:
                nf[f] += 1
            rest = Poly.constant(vt, unit)
        for f in df:
            _register(vt, f)
        for f in nf:
            _register(vt, f)
        return cls(vt, nf, rest, df)

    # access --------------------------------------------------------------
    @property
    def num(self) -> Poly:
        if self._num is None:
            self._num = _expand(self.vt, self.nf) * self.rest
        return self._num

    @property
    def den(self) -> Poly:
        if self._den is None:
            self._den = _expand(self.vt, self.df)
        return self._den

    def is_zero(self) -> bool:
        return self.rest.is_zero()

    def __bool__(self) -> bool:
        return not self.rest.is_zero()

    def is_polynomial(self) -> bool:
        return not self.df

    def as_poly(self) -> Poly:
        if self.df:
            raise ValueError("rational function has a nontrivial denominator")
        return self.num

    def is_constant(self) -> bool:
        return not self.nf and not self.df and self.rest.is_constant()

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.rest.constant_value()

    def _clean(self) -> bool:
        return all(f.total_degree() == 1 for f in self.df) and all(
            f.total_degree() == 1 for f in self.nf
        )

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "RatF":
        if isinstance(other, RatF):
            if other.vt is not self.vt:
                raise ValueError(f"variable tables differ: {self.vt!r} vs {other.vt!r}")
            return other
        if isinstance(other, Poly):
            if other.vt is not self.vt:
                raise ValueError("variable tables differ")
            return RatF.from_poly(other)
        if isinstance(other, (int, mpq)) or type(other).__name__ in ("Fraction", "mpz"):
            return RatF.const(self.vt, other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        a = self
        if a.is_zero():
            return b
        if b.is_zero():
            return a
        vt = a.vt
        common = a.nf & b.nf
        lcm = a.df | b.df
        pa = _expand(vt, _sub_multiset(a.nf, common)) * a.rest * _expand(vt, _sub_multiset(lcm, a.df))
        pb = _expand(vt, _sub_multiset(b.nf, common)) * b.rest * _expand(vt, _sub_multiset(lcm, b.df))
        return RatF._make(vt, Counter(common), pa + pb, Counter(lcm))

    __radd__ = __add__

    def __neg__(self) -> "RatF":
        return RatF(self.vt, self.nf, -self.rest, self.df)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        a = self
        if a.is_zero() or b.is_zero():
            return RatF.zero(a.vt)
        if a.is_constant():
            return RatF(a.vt, b.nf, b.rest.scale(a.rest.constant_value()), b.df)
        if b.is_constant():
            return RatF(a.vt, a.nf, a.rest.scale(b.rest.constant_value()), a.df)
        vt = a.vt
        nf = a.nf + b.nf
        df = a.df + b.df
        # cancel multisets first so that the trial divisions below see less
        for f in [f for f in nf if f in df]:
            m = min(nf[f], df[f])
            nf[f] -= m
            df[f] -= m
        ra = a.rest
        rb = b.rest
        if not ra.is_constant():
            ra, df = _strip(ra, df, b.df)
        if not rb.is_constant():
            rb, df = _strip(rb, df, a.df)
        return RatF._make(vt, nf, ra * rb, df, test=())

    __rmul__ = __mul__

    def inverse(self) -> "RatF":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        vt = self.vt
        unit, found, cof = factor_over_dictionary(self.rest)
        df = Counter(self.nf)
        df.update(found)
        if not cof.is_constant():
            df[cof] += 1
        return RatF._make(vt, Counter(self.df), Poly.constant(vt, 1 / unit), df)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        if b.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        if b.is_constant():
            return RatF(self.vt, self.nf, self.rest.scale(1 / b.rest.constant_value()), self.df)
        return self * b.inverse()

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return b * self.inverse()

    def __pow__(self, e: int) -> "RatF":
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero():
            return RatF.const(self.vt, 1) if e == 0 else self
        nf = Counter({f: m * e for f, m in self.nf.items()})
        df = Counter({f: m * e for f, m in self.df.items()})
        return RatF(self.vt, nf, self.rest ** e, df) if e else RatF.const(self.vt, 1)

    # equality --------------------------------------------------------------
    def __eq__(self, other) -> bool:
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return ratf_equal(self, b)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, frozenset(self.df.items())))
        return self._hash

    def eval_mod(self, point: list[int], p: int = MODULUS) -> int | None:
        """Value at a point mod p, or None when the denominator vanishes there."""
        den = 1
        for f, e in self.df.items():
            den = den * pow(f.eval_mod(point, p), e, p) % p
        if den == 0:
            return None
        num = self.rest.eval_mod(point, p)
        for f, e in self.nf.items():
            num = num * pow(f.eval_mod(point, p), e, p) % p
        return num * pow(den, -1, p) % p

    # substitutions ---------------------------------------------------------
    def substitute(self, bindings: Mapping) -> "RatF":
        """Simultaneous substitution; keys are variable names or indices,
        values are Poly, RatF or rational constants."""
        vt = self.vt
        polys: dict[int, Poly] = {}
        rats: dict[int, RatF] = {}
        for var, val in bindings.items():
            i = vt.idx(var)
            if isinstance(val, RatF):
                if val.vt is not vt:
                    raise ValueError("binding lives in a different variable table")
                if val.is_polynomial():
                    polys[i] = val.num
                else:
                    rats[i] = val
            elif isinstance(val, Poly):
                if val.vt is not vt:
                    raise ValueError("binding lives in a different variable table")
                polys[i] = val
            else:
                polys[i] = Poly.constant(vt, val)
        if rats:
            return _substitute_rational(self, polys, rats)
        return self._substitute_poly(polys)

    def _substitute_poly(self, polys: Mapping[int, Poly]) -> "RatF":
        vt = self.vt
        if not polys or self.is_zero():
            return self
        unit = mpq(1)
        nf: Counter = Counter()
        rest = self.rest.substitute(polys)
        extra = []
        for f, e in self.nf.items():
            g = f.substitute(polys) if f.support() & polys.keys() else f
            if g.is_zero():
                return RatF.zero(vt)
            if g.is_constant():
                unit *= g.constant_value() ** e
            elif g.total_degree() == 1:
                c, m = g.monic()
                unit *= c ** e
                nf[m] += e
            else:
                extra.append(g ** e)
        df: Counter = Counter()
        for f, e in self.df.items():
            g = f.substitute(polys) if f.support() & polys.keys() else f
            if g.is_zero():
                raise ZeroDivisionError("substitution makes the denominator identically zero")
            c, found, cof = factor_over_dictionary(g)
            unit /= c ** e
            for m, k in found.items():
                df[m] += k * e
            if not cof.is_constant():
                df[cof] += e
        for g in extra:
            rest = rest * g
        return RatF._make(vt, nf, rest.scale(unit), df)

    def permute_vars(self, perm: Mapping[int, int]) -> "RatF":
        """Rename variables (index -> index); cheap exact path for swaps."""
        vt = self.vt

        def ren(counter):
            out: Counter = Counter()
            u = mpq(1)
            for f, e in counter.items():
                g = f.permute_vars(perm)
                c, m = g.monic()
                u *= c ** e
                out[m] += e
            return u, out

        un, nf = ren(self.nf)
        ud, df = ren(self.df)
        rest = self.rest.permute_vars(perm).scale(un / ud)
        # renaming preserves reducedness
        for f in nf:
            _register(vt, f)
        for f in df:
            _register(vt, f)
        return RatF(vt, nf, rest, df)

    def shift_lambda(self, m: int) -> "RatF":
        """lam -> lam + m*y."""
        if m == 0:
            return self
        vt = self.vt
        return self._substitute_poly({vt.idx("lam"): vt.poly("lam") + vt.poly("y").scale(m)})

    def swap_z(self, i: int, j: int) -> "RatF":
        if i == j:
            raise ValueError("swap_z needs distinct indices")
        a, b = self.vt.z(i), self.vt.z(j)
        return self.permute_vars({a: b, b: a})

    def variables(self) -> frozenset[int]:
        s = set(self.rest.support())
        for f in self.nf:
            s |= f.support()
        for f in self.df:
            s |= f.support()
        return frozenset(s)

    def degree(self, var: str | int) -> tuple[int, int]:
        """(numerator degree, denominator degree) in one variable."""
        i = self.vt.idx(var)
        dn = max(self.rest.degree(i), 0) + sum(f.degree(i) * e for f, e in self.nf.items() if f.degree(i) > 0)
        dd = sum(f.degree(i) * e for f, e in self.df.items() if f.degree(i) > 0)
        return dn, dd

    # rendering ---------------------------------------------------------------
    def canonical(self) -> str:
        """Expanded num/den string; deterministic for equal reduced inputs."""
        if not self.df:
            return self.num.render("text")
        return f"({self.num.render('text')})/({self.den.render('text')})"

    def render(self, fmt: str = "text") -> str:
        return render_ratf(self, fmt)

    def __str__(self) -> str:
        return self.render("text")

    def __repr__(self) -> str:
        return f"RatF({self.canonical()})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping, vt: VarTable | None = None) -> "RatF":
        num = Poly.from_json(data["num"], vt)
        den = Poly.from_json(data["den"], num.vt)
        return cls.from_poly(num) / cls.from_poly(den)


def _strip(rest: Poly, df: Counter, keys) -> tuple[Poly, Counter]:
    for f in list(keys):
        e = df.get(f, 0)
        while e > 0:
            q = _divide_out(rest, f)
            if q is None:
                break
            rest = q
            e -= 1
            df[f] -= 1
        if rest.is_constant():
            break
    return rest, df


def _substitute_rational(f: RatF, polys: Mapping[int, Poly], rats: Mapping[int, RatF]) -> RatF:
    vt = f.vt
    g = f._substitute_poly({k: v for k, v in polys.items()}) if polys else f
    # remaining bindings have genuine denominators: evaluate term by term
    def sub_poly(p: Poly) -> RatF:
        acc = RatF.zero(vt)
        idxs = sorted(rats)
        for exps, c in p.decoded():
            term = RatF.from_poly(Poly(vt, {_strip_key(vt, exps, idxs): c}, _trusted=True))
            for i in idxs:
                if exps[i]:
                    term = term * rats[i] ** exps[i]
            acc = acc + term
        return acc

    out = sub_poly(g.rest)
    for h, e in g.nf.items():
        out = out * sub_poly(h) ** e
    for h, e in g.df.items():
        d = sub_poly(h)
        if d.is_zero():
            raise ZeroDivisionError("substitution makes the denominator identically zero")
        out = out / d ** e
    return out


def _strip_key(vt: VarTable, exps, idxs) -> int:
    e = list(exps)
    for i in idxs:
        e[i] = 0
    return vt.pack(e)


def ratf_equal(a: RatF, b: RatF) -> bool:
    """Exact equality a.num*b.den == b.num*a.den, with a modular fast reject."""
    if a.vt is not b.vt:
        raise ValueError("variable tables differ")
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    if a.nf == b.nf and a.df == b.df and a.rest == b.rest:
        return True
    pt = [a.vt._rng.randrange(1, MODULUS) for _ in range(a.vt.nvars)]
    va, vb = a.eval_mod(pt), b.eval_mod(pt)
    if va is not None and vb is not None and va != vb:
        return False
    if a._clean() and b._clean():
        return a.df == b.df and a.num == b.num
    vt = a.vt
    lcm = a.df | b.df
    lhs = _expand(vt, a.nf) * a.rest * _expand(vt, _sub_multiset(lcm, a.df))
    rhs = _expand(vt, b.nf) * b.rest * _expand(vt, _sub_multiset(lcm, b.df))
    return lhs == rhs


def ratf_arith(a: RatF, b: RatF, op: str) -> RatF:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def shift_lambda(f: RatF, m: int) -> RatF:
    return f.shift_lambda(m)


def swap_z(f: RatF, i: int, j: int) -> RatF:
    return f.swap_z(i, j)


def substitute(f: RatF, bindings: Mapping) -> RatF:
    return f.substitute(bindings)


def render_ratf(f: RatF, fmt: str = "text") -> str:
    """Factored rendering: unit, numerator factors, cofactor, then denominator."""
    if f.is_zero():
        return "0"
    if fmt not in ("text", "unicode", "latex"):
        raise ValueError(f"unknown format {fmt!r}")

    def wrap(p: Poly, e: int) -> str:
        body = p.render(fmt)
        if len(p.terms) > 1:
            body = rf"\left({body}\right)" if fmt == "latex" else f"({body})"
        if e > 1:
            body += f"^{{{e}}}" if fmt == "latex" else f"^{e}"
        return body

    sep = " " if fmt == "latex" else "*"
    order = lambda fe: sorted(fe[0].terms.items(), reverse=True)
    num_parts = [wrap(p, e) for p, e in sorted(f.nf.items(), key=order)]
    unit = mpq(1)
    if f.rest.is_constant():
        unit = f.rest.constant_value()
    else:
        unit, cof = f.rest.monic()
        num_parts.append(wrap(cof, 1))
    den_parts = [wrap(p, e) for p, e in sorted(f.df.items(), key=order)]
    sign = "-" if unit < 0 else ""
    a = abs(unit)
    if a.numerator != 1 or not num_parts:
        num_parts.insert(0, str(a.numerator))
    num = sep.join(num_parts)
    if a.denominator != 1:
        den_parts.insert(0, str(a.denominator))
    if not den_parts:
        return sign + num
    den = sep.join(den_parts)
    if fmt == "latex":
        return rf"{sign}\frac{{{num}}}{{{den}}}"
    if len(den_parts) > 1:
        den = f"({den})"
    return f"{sign}{num}/{den}"
