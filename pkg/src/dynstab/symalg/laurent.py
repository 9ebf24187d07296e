"""Truncated Laurent expansions at w = infinity."""
from __future__ import annotations

from collections import Counter

from .poly import Poly
from .ratf import RatF, _expand


class PoleAtInfinity(ValueError):
    """The function grows at w = infinity."""


class LaurentAtInfinity:
    """sum_{s=0}^{S} c_s w^{-s}; coefficients are RatF free of ``var``."""

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, var: int, order: int, coeffs: list[RatF]):
        if len(coeffs) != order + 1:
            raise ValueError("need exactly order+1 coefficients")
        self.var = var
        self.order = order
        self.coeffs = list(coeffs)

    def __getitem__(self, s: int) -> RatF:
        return self.coeffs[s]

    def __len__(self) -> int:
        return len(self.coeffs)

    def _other(self, other: "LaurentAtInfinity") -> int:
        if other.var != self.var:
            raise ValueError("expansions in different variables")
        return min(self.order, other.order)

    def __add__(self, other: "LaurentAtInfinity") -> "LaurentAtInfinity":
        S = self._other(other)
        return LaurentAtInfinity(self.var, S, [self.coeffs[s] + other.coeffs[s] for s in range(S + 1)])

    def __sub__(self, other: "LaurentAtInfinity") -> "LaurentAtInfinity":
        S = self._other(other)
        return LaurentAtInfinity(self.var, S, [self.coeffs[s] - other.coeffs[s] for s in range(S + 1)])

    def __mul__(self, other: "LaurentAtInfinity") -> "LaurentAtInfinity":
        S = self._other(other)
        out = []
        for s in range(S + 1):
            acc = self.coeffs[0] * other.coeffs[s]
            for i in range(1, s + 1):
                acc = acc + self.coeffs[i] * other.coeffs[s - i]
            out.append(acc)
        return LaurentAtInfinity(self.var, S, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentAtInfinity):
            return NotImplemented
        S = self._other(other)
        return all(self.coeffs[s] == other.coeffs[s] for s in range(S + 1))

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*w^-{s}" for s, c in enumerate(self.coeffs) if not c.is_zero())
        return f"LaurentAtInfinity({body or '0'}; S={self.order})"


def _poly_in(p: Poly, var: int) -> tuple[int, dict[int, Poly]]:
    cs = p.coeffs_in(var)
    return max(cs), cs


def laurent_expand(f: RatF, S: int, var: str | int = "w") -> LaurentAtInfinity:
    """Coefficients c_0..c_S of f = sum c_s w^{-s}, by long division in 1/w."""
    if S < 0:
        raise ValueError("truncation order must be nonnegative")
    vt = f.vt
    v = vt.idx(var)
    zero = RatF.zero(vt)
    if f.is_zero():
        return LaurentAtInfinity(v, S, [zero] * (S + 1))
    # w-free denominator factors become a common scalar
    dw = Counter({g: e for g, e in f.df.items() if g.degree(v) > 0})
    d0 = Counter({g: e for g, e in f.df.items() if g.degree(v) <= 0})
    scalar = RatF(vt, Counter(), Poly.constant(vt, 1), d0) if d0 else RatF.const(vt, 1)
    num = f.num
    den = _expand(vt, dw)
    N, a = _poly_in(num, v)
    D, d = _poly_in(den, v)
    if N > D:
        raise PoleAtInfinity(f"pole at {vt.names[v]} = infinity (degree {N} > {D})")
    # f = u^{D-N} * A(u)/B(u) with u = 1/w, A_i = a_{N-i}, B_i = d_{D-i}
    A = [RatF.from_poly(a[N - i]) if (N - i) in a else zero for i in range(N + 1)]
    B = [RatF.from_poly(d[D - i]) if (D - i) in d else zero for i in range(D + 1)]
    inv_b0 = B[0].inverse()
    shift = D - N
    m = S - shift
    series: list[RatF] = []
    for i in range(max(m + 1, 0)):
        acc = A[i] if i < len(A) else zero
        for j in range(1, min(i, D) + 1):
            if not B[j].is_zero():
                acc = acc - B[j] * series[i - j]
        series.append(acc * inv_b0)
    coeffs = [zero] * shift + [c * scalar for c in series]
    return LaurentAtInfinity(v, S, coeffs[: S + 1])
