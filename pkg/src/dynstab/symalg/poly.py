"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are packed into a single Python int: one fixed-width field per
variable, with the total degree in the most significant field.  Comparing two
packed monomials as integers is therefore graded-lexicographic comparison in
VarTable order, and multiplying monomials is integer addition.
"""
from __future__ import annotations

import heapq
import random
from functools import lru_cache
from typing import Iterable, Mapping

import gmpy2
from gmpy2 import mpq

_BITS = 16                      # field width, top bit of each field is a guard bit
_FIELD = (1 << _BITS) - 1
_MAX_EXP = (1 << (_BITS - 1)) - 1

MODULUS = (1 << 61) - 1         # prime used for fast probabilistic rejection tests

GREEK = {"lam": "λ"}
SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


class VarTable:
    """Ordered variable registry: lam, y, w, w1, w2, z1..zn, t1..tk."""

    RESERVED = ("lam", "y", "w", "w1", "w2")

    def __init__(self, n: int, k: int | None = None):
        if n < 0:
            raise ValueError("n must be nonnegative")
        k = n if k is None else k
        if not 0 <= k <= max(n, 0):
            raise ValueError("k must lie in [0, n]")
        self.n = n
        self.k = k
        self.names: tuple[str, ...] = (
            self.RESERVED
            + tuple(f"z{i}" for i in range(1, n + 1))
            + tuple(f"t{a}" for a in range(1, k + 1))
        )
        self.index = {name: i for i, name in enumerate(self.names)}
        self.nvars = len(self.names)
        m = self.nvars
        self._shifts = tuple(_BITS * (m - 1 - i) for i in range(m))
        self._deg_shift = _BITS * m
        self._guard = sum(1 << (s + _BITS - 1) for s in self._shifts + (self._deg_shift,))
        self._var_mono = tuple((1 << s) + (1 << self._deg_shift) for s in self._shifts)
        self._registry: set[Poly] = set()
        self._registry_by_support: dict[frozenset, list[Poly]] | None = None
        self._rng = random.Random(0x5EED + n)

    # identity: one table per (n, k); tables are interned through get()
    _cache: dict[tuple[int, int], "VarTable"] = {}

    @classmethod
    def get(cls, n: int, k: int | None = None) -> "VarTable":
        key = (n, n if k is None else k)
        vt = cls._cache.get(key)
        if vt is None:
            vt = cls(n, k)
            cls._cache[key] = vt
            from .ratf import seed_factor_dictionary

            seed_factor_dictionary(vt)
        return vt

    def __repr__(self) -> str:
        return f"VarTable(n={self.n}, k={self.k})"

    def __reduce__(self):
        return (VarTable.get, (self.n, self.k))

    def idx(self, var: str | int) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise KeyError(var)
            return var
        try:
            return self.index[var]
        except KeyError:
            raise KeyError(f"unknown variable {var!r} in {self!r}") from None

    def z(self, i: int) -> int:
        return self.idx(f"z{i}")

    def t(self, a: int) -> int:
        return self.idx(f"t{a}")

    # monomial packing --------------------------------------------------
    def pack(self, exps: Iterable[int]) -> int:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        key = 0
        deg = 0
        for e, s in zip(exps, self._shifts):
            if e < 0 or e > _MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            key |= e << s
            deg += e
        if deg > _MAX_EXP:
            raise OverflowError("total degree out of range")
        return key | (deg << self._deg_shift)

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & _FIELD for s in self._shifts)

    def mono_degree(self, key: int) -> int:
        return key >> self._deg_shift

    def divides(self, small: int, big: int) -> bool:
        g = self._guard
        return ((big | g) - small) & g == g

    # constructors ------------------------------------------------------
    def poly(self, var: str | int) -> "Poly":
        return Poly(self, {self._var_mono[self.idx(var)]: mpq(1)})

    def const(self, c) -> "Poly":
        return Poly.constant(self, c)

    def symbols(self) -> dict[str, "Poly"]:
        return {name: self.poly(name) for name in self.names}


def _q(c) -> mpq:
    if isinstance(c, mpq):
        return c
    if isinstance(c, str):
        return mpq(c)
    return mpq(c)


class Poly:
    """Immutable sparse polynomial; ``terms`` maps packed monomial to mpq."""

    __slots__ = ("vt", "terms", "_hash", "_decoded", "_support")

    def __init__(self, vt: VarTable, terms: Mapping[int, mpq] | None = None, *, _trusted=False):
        self.vt = vt
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms
        else:
            self.terms = {k: _q(c) for k, c in terms.items() if c != 0}
        self._hash = None
        self._decoded = None
        self._support = None

    @classmethod
    def constant(cls, vt: VarTable, c) -> "Poly":
        c = _q(c)
        return cls(vt, {0: c} if c else {}, _trusted=True)

    @classmethod
    def from_terms(cls, vt: VarTable, pairs: Iterable[tuple[object, Iterable[int]]]) -> "Poly":
        acc: dict[int, mpq] = {}
        for c, exps in pairs:
            key = vt.pack(exps)
            acc[key] = acc.get(key, 0) + _q(c)
        return cls(vt, {k: c for k, c in acc.items() if c}, _trusted=True)

    # basic predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, mpq(0))

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: "Poly") -> None:
        if other.vt is not self.vt:
            raise ValueError(f"variable tables differ: {self.vt!r} vs {other.vt!r}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, mpq)) or type(other).__name__ in ("Fraction", "mpz"):
            return Poly.constant(self.vt, other)
        return NotImplemented

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for k, c in b.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Poly(self.vt, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.vt, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = -c
            else:
                v = v - c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Poly(self.vt, out, _trusted=True)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def scale(self, c) -> "Poly":
        c = _q(c)
        if not c:
            return Poly(self.vt)
        if c == 1:
            return self
        return Poly(self.vt, {k: v * c for k, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, mpq)) or type(other).__name__ in ("Fraction", "mpz"):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return Poly(self.vt)
        if len(b) == 1:
            (kb, cb), = b.items()
            if kb == 0:
                return self.scale(cb) if a is self.terms else other.scale(cb)
            return Poly(self.vt, {k + kb: c * cb for k, c in a.items()}, _trusted=True)
        out: dict[int, mpq] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return Poly(self.vt, {k: c for k, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.vt, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.vt is other.vt and self.terms == other.terms
        if isinstance(other, (int, mpq)):
            return self.terms == ({0: _q(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vt.n, self.vt.k, frozenset(self.terms.items())))
        return self._hash

    # structure -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[int, mpq]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def leading(self) -> tuple[int, mpq]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        k = max(self.terms)
        return k, self.terms[k]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return self.vt.mono_degree(max(self.terms))

    def decoded(self) -> list[tuple[tuple[int, ...], mpq]]:
        if self._decoded is None:
            unpack = self.vt.unpack
            self._decoded = [(unpack(k), c) for k, c in self.terms.items()]
        return self._decoded

    def support(self) -> frozenset[int]:
        """Indices of variables that occur."""
        if self._support is None:
            acc = [0] * self.vt.nvars
            for exps, _ in self.decoded():
                for i, e in enumerate(exps):
                    if e:
                        acc[i] = 1
            self._support = frozenset(i for i, f in enumerate(acc) if f)
        return self._support

    def degree(self, var: str | int) -> int:
        i = self.vt.idx(var)
        if not self.terms:
            return -1
        s = self.vt._shifts[i]
        return max((k >> s) & _FIELD for k in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        d = self.vt.mono_degree
        degs = {d(k) for k in self.terms}
        return len(degs) == 1

    def is_linear(self) -> bool:
        return bool(self.terms) and self.total_degree() == 1

    def coeffs_in(self, var: str | int) -> dict[int, "Poly"]:
        """Split as a polynomial in one variable: power -> coefficient poly."""
        i = self.vt.idx(var)
        s = self.vt._shifts[i]
        dshift = self.vt._deg_shift
        out: dict[int, dict[int, mpq]] = {}
        for k, c in self.terms.items():
            e = (k >> s) & _FIELD
            rest = k - (e << s) - (e << dshift)
            out.setdefault(e, {})[rest] = c
        return {e: Poly(self.vt, t, _trusted=True) for e, t in out.items()}

    def monic(self) -> tuple[mpq, "Poly"]:
        """(lc, self/lc) with lc the graded-lex leading coefficient."""
        _, lc = self.leading()
        if lc == 1:
            return lc, self
        inv = 1 / lc
        return lc, Poly(self.vt, {k: c * inv for k, c in self.terms.items()}, _trusted=True)

    # substitution --------------------------------------------------------
    def substitute(self, bindings: Mapping[int, "Poly"]) -> "Poly":
        """Simultaneous substitution var index -> Poly."""
        if not bindings:
            return self
        vt = self.vt
        idxs = sorted(bindings)
        shifts = vt._shifts
        dshift = vt._deg_shift
        pow_cache: dict[tuple[int, int], Poly] = {}
        groups: dict[tuple[int, ...], dict[int, mpq]] = {}
        for k, c in self.terms.items():
            es = []
            rest = k
            for i in idxs:
                e = (k >> shifts[i]) & _FIELD
                es.append(e)
                if e:
                    rest -= (e << shifts[i]) + (e << dshift)
            groups.setdefault(tuple(es), {})[rest] = c
        result: dict[int, mpq] = {}
        for es, part in groups.items():
            factor = None
            for i, e in zip(idxs, es):
                if not e:
                    continue
                p = pow_cache.get((i, e))
                if p is None:
                    p = bindings[i] ** e
                    pow_cache[(i, e)] = p
                factor = p if factor is None else factor * p
            if factor is None:
                prod = part
            else:
                prod = (Poly(vt, part, _trusted=True) * factor).terms
            for kk, cc in prod.items():
                v = result.get(kk)
                if v is None:
                    result[kk] = cc
                else:
                    v = v + cc
                    if v:
                        result[kk] = v
                    else:
                        del result[kk]
        return Poly(vt, result, _trusted=True)

    def permute_vars(self, perm: Mapping[int, int]) -> "Poly":
        """Rename variables: index i -> perm[i] (a bijection on the touched set)."""
        vt = self.vt
        shifts = vt._shifts
        moved = [(shifts[i], shifts[j]) for i, j in perm.items() if i != j]
        if not moved:
            return self
        out = {}
        for k, c in self.terms.items():
            nk = k
            for si, _ in moved:
                nk &= ~(_FIELD << si)
            for si, sj in moved:
                nk |= ((k >> si) & _FIELD) << sj
            out[nk] = c
        return Poly(vt, out, _trusted=True)

    # evaluation modulo a prime ------------------------------------------
    def eval_mod(self, point: list[int], p: int = MODULUS) -> int:
        acc = 0
        for exps, c in self.decoded():
            v = (int(c.numerator) * pow(int(c.denominator), -1, p)) % p
            for x, e in zip(point, exps):
                if e:
                    v = v * pow(x, e, p) % p
            acc += v
        return acc % p

    # division ------------------------------------------------------------
    def divide_exact(self, other: "Poly") -> "Poly | None":
        """Quotient q with self == other*q, or None when other does not divide self."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return Poly(self.vt)
        vt = self.vt
        divides = vt.divides
        if len(other.terms) == 1:
            (kb, cb), = other.terms.items()
            inv = 1 / cb
            out = {}
            for k, c in self.terms.items():
                if not divides(kb, k):
                    return None
                out[k - kb] = c * inv
            return Poly(vt, out, _trusted=True)
        lt, lc = other.leading()
        if not divides(lt, max(self.terms)):
            return None
        inv = 1 / lc
        tail = [(k, c) for k, c in other.terms.items() if k != lt]
        r = dict(self.terms)
        heap = [-k for k in r]
        heapq.heapify(heap)
        q: dict[int, mpq] = {}
        while heap:
            k = -heapq.heappop(heap)
            c = r.pop(k, None)
            if c is None:
                continue
            if not divides(lt, k):
                return None
            m = k - lt
            coef = c * inv
            q[m] = coef
            for kb, cb in tail:
                nk = m + kb
                old = r.get(nk)
                if old is None:
                    r[nk] = -coef * cb
                    heapq.heappush(heap, -nk)
                else:
                    nv = old - coef * cb
                    if nv:
                        r[nk] = nv
                    else:
                        del r[nk]
        return Poly(vt, q, _trusted=True)

    def divides(self, other: "Poly") -> bool:
        return other.divide_exact(self) is not None

    # rendering -----------------------------------------------------------
    def render(self, fmt: str = "text") -> str:
        if not self.terms:
            return "0"
        names = self.vt.names
        parts = []
        for k, c in self.sorted_terms():
            exps = self.vt.unpack(k)
            factors = []
            for name, e in zip(names, exps):
                if not e:
                    continue
                factors.append(_var_name(name, fmt) + (_power(e, fmt) if e > 1 else ""))
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if factors:
                mono = ("*" if fmt == "text" else " ").join(factors)
                if fmt == "latex":
                    mono = " ".join(factors)
                coeff = "" if a == 1 else _coeff(a, fmt) + ("*" if fmt == "text" else " ")
                body = coeff + mono
            else:
                body = _coeff(a, fmt)
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.render("text")

    def __repr__(self) -> str:
        return f"Poly({self.render('text')})"

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": list(self.vt.names),
            "terms": [
                {"coeff": str(c), "exps": list(self.vt.unpack(k))}
                for k, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, vt: VarTable | None = None) -> "Poly":
        names = tuple(data["vars"])
        if vt is None:
            vt = vartable_for_names(names)
        if tuple(vt.names) != names:
            raise ValueError("variable list does not match the table")
        return cls.from_terms(vt, ((mpq(t["coeff"]), t["exps"]) for t in data["terms"]))


def vartable_for_names(names: tuple[str, ...]) -> VarTable:
    n = sum(1 for s in names if s.startswith("z"))
    k = sum(1 for s in names if s.startswith("t"))
    vt = VarTable.get(n, k)
    if vt.names != names:
        raise ValueError(f"unrecognised variable list {names}")
    return vt


@lru_cache(maxsize=None)
def _var_name(name: str, fmt: str) -> str:
    if fmt == "text":
        return name
    if fmt == "latex":
        if name == "lam":
            return r"\lambda"
        if name[0] in "zwt" and name[1:]:
            return f"{name[0]}_{{{name[1:]}}}"
        return name
    # unicode
    if name in GREEK:
        return GREEK[name]
    if name[0] in "zwt" and name[1:]:
        return name[0] + name[1:].translate(SUBSCRIPTS)
    return name


def _power(e: int, fmt: str) -> str:
    if fmt == "latex":
        return f"^{{{e}}}"
    if fmt == "unicode":
        return str(e).translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹"))
    return f"^{e}"


def _coeff(a: mpq, fmt: str) -> str:
    if a.denominator == 1:
        return str(a.numerator)
    if fmt == "latex":
        return rf"\frac{{{a.numerator}}}{{{a.denominator}}}"
    return f"({a})"


__all__ = ["VarTable", "Poly", "MODULUS", "vartable_for_names"]
