"""The dynamical R-matrix acting on tensor powers of C^2, and the s~_i operators."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .combinatorics import SubsetIndex
from .symalg import Poly, RatF, VarTable
from .symalg.linalg import RatMatrix

Scalar = Poly | RatF


def _r(vt: VarTable, x) -> RatF:
    if isinstance(x, RatF):
        return x
    if isinstance(x, Poly):
        return RatF.from_poly(x)
    return RatF.const(vt, x)


class TensorVector:
    """Vector in (C^2)^{otimes m} with RatF coefficients.

    Keys are bitmasks: bit p-1 set means position p carries v_1.  Positions
    beyond n are auxiliary spaces (their z-variables never get swapped).
    """

    __slots__ = ("vt", "m", "coeffs")

    def __init__(self, vt: VarTable, m: int, coeffs: Mapping[int, RatF] | None = None):
        self.vt = vt
        self.m = m
        self.coeffs: dict[int, RatF] = {}
        for key, c in (coeffs or {}).items():
            c = _r(vt, c)
            if not c.is_zero():
                self.coeffs[key] = c

    @classmethod
    def basis(cls, vt: VarTable, m: int, mask: int) -> "TensorVector":
        return cls(vt, m, {mask: RatF.const(vt, 1)})

    @classmethod
    def of(cls, I: SubsetIndex, c=1) -> "TensorVector":
        """c * v_I in (C^2)^{otimes n}."""
        vt = VarTable.get(I.n)
        return cls(vt, I.n, {I.mask: _r(vt, c)})

    @classmethod
    def from_subsets(cls, n: int, coeffs: Mapping[SubsetIndex, Scalar]) -> "TensorVector":
        vt = VarTable.get(n)
        return cls(vt, n, {I.mask: _r(vt, c) for I, c in coeffs.items()})

    def coeff(self, key: SubsetIndex | int) -> RatF:
        mask = key.mask if isinstance(key, SubsetIndex) else key
        return self.coeffs.get(mask, RatF.zero(self.vt))

    def subsets(self) -> dict[SubsetIndex, RatF]:
        return {SubsetIndex.from_mask(self.m, k): c for k, c in self.coeffs.items()}

    def weights(self) -> set[int]:
        return {bin(k).count("1") for k in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "TensorVector") -> None:
        if other.vt is not self.vt or other.m != self.m:
            raise ValueError("vectors live in different spaces")

    def __add__(self, other: "TensorVector") -> "TensorVector":
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return TensorVector(self.vt, self.m, out)

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorVector":
        c = _r(self.vt, c)
        if c.is_zero():
            return TensorVector(self.vt, self.m)
        return TensorVector(self.vt, self.m, {k: v * c for k, v in self.coeffs.items()})

    def map_coeffs(self, fn: Callable[[RatF], RatF]) -> "TensorVector":
        return TensorVector(self.vt, self.m, {k: fn(v) for k, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorVector):
            return NotImplemented
        if other.vt is not self.vt or other.m != self.m:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    def render(self, fmt: str = "text") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, key=lambda k: SubsetIndex.from_mask(self.m, k).colex_key()):
            S = SubsetIndex.from_mask(self.m, k)
            parts.append(f"{_wrap(self.coeffs[k].render(fmt))} v{S.short()}")
        return "\n+ ".join(parts)

    def __repr__(self) -> str:
        return f"TensorVector(m={self.m}, {len(self.coeffs)} terms)"


def _wrap(s: str) -> str:
    """Parenthesize unless s is a single token or already one bracketed group."""
    if " " not in s:
        return s
    if s.startswith("("):
        depth = 0
        for pos, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                if pos == len(s) - 1:
                    return s
                break
    return f"({s})"


# --------------------------------------------------------------------------
# the R-matrix


@lru_cache(maxsize=4096)
def _rmat_entries(lam: RatF, z: RatF) -> tuple[tuple[RatF, ...], ...]:
    vt = lam.vt
    one, zero = RatF.const(vt, 1), RatF.zero(vt)
    y = RatF.var(vt, "y")
    den = lam * (z - y)
    a = (lam + y) * z / den
    b = -(lam + z) * y / den
    c = -(lam - z) * y / den
    d = (lam - y) * z / den
    return (
        (one, zero, zero, zero),
        (zero, a, b, zero),
        (zero, c, d, zero),
        (zero, zero, zero, one),
    )


def rmat(lam: Scalar, z: Scalar) -> RatMatrix:
    """R(lam, z, y) in the basis v1v1, v1v2, v2v1, v2v2 (columns are images)."""
    vt = lam.vt
    return RatMatrix(vt, [list(r) for r in _rmat_entries(_r(vt, lam), _r(vt, z))])


def h_sum(v: SubsetIndex | int, positions: Iterable[int]) -> int:
    """Eigenvalue of sum_{p in positions} h^{(p)} on the basis vector v."""
    mask = v.mask if isinstance(v, SubsetIndex) else v
    return sum(1 if mask >> (p - 1) & 1 else -1 for p in positions)


@dataclass(frozen=True)
class DynArg:
    """lam-argument base - y * sum_p c_p h^{(p)}, resolved per basis vector."""

    base: RatF
    hcoeffs: tuple[tuple[int, int], ...] = ()

    @classmethod
    def shifted(cls, base: Scalar, positions: Iterable[int]) -> "DynArg":
        return cls(_r(base.vt, base), tuple((p, 1) for p in positions))

    def resolve(self, mask: int) -> RatF:
        s = sum(c * (1 if mask >> (p - 1) & 1 else -1) for p, c in self.hcoeffs)
        if s == 0:
            return self.base
        return self.base - RatF.var(self.base.vt, "y") * s


def _dyn(vt: VarTable, lam) -> DynArg:
    return lam if isinstance(lam, DynArg) else DynArg(_r(vt, lam))


def apply_R(i: int, j: int, lam: DynArg | Scalar, z: Scalar, v: TensorVector) -> TensorVector:
    """R^{(i,j)}(lam, z) acting on v; the first matrix factor is position i."""
    if i == j or not (1 <= i <= v.m and 1 <= j <= v.m):
        raise ValueError(f"bad positions ({i},{j}) for m={v.m}")
    vt = v.vt
    lam = _dyn(vt, lam)
    if any(p in (i, j) for p, _ in lam.hcoeffs):
        raise ValueError("the dynamical shift may not read the acted-on factors")
    zr = _r(vt, z)
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    out: dict[int, RatF] = {}
    for mask, c in v.coeffs.items():
        a = 0 if mask & bi else 1
        b = 0 if mask & bj else 1
        col = 2 * a + b
        if col in (0, 3):
            out[mask] = out[mask] + c if mask in out else c
            continue
        M = _rmat_entries(lam.resolve(mask), zr)
        rest = mask & ~(bi | bj)
        for row in (1, 2):
            e = M[row][col]
            if e.is_zero():
                continue
            ra, rb = divmod(row, 2)
            key = rest | (bi if ra == 0 else 0) | (bj if rb == 0 else 0)
            t = e * c
            out[key] = out[key] + t if key in out else t
    return TensorVector(vt, v.m, out)


def apply_P(i: int, j: int, v: TensorVector) -> TensorVector:
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    out = {}
    for mask, c in v.coeffs.items():
        si, sj = bool(mask & bi), bool(mask & bj)
        if si != sj:
            mask ^= bi | bj
        out[mask] = c
    return TensorVector(v.vt, v.m, out)


def apply_K(i: int, j: int, v: TensorVector) -> TensorVector:
    return v.map_coeffs(lambda c: c.swap_z(i, j))


def s_tilde(i: int, v: TensorVector) -> TensorVector:
    """R^{(i,i+1)}(lam - y sum_{k>=i+2} h^{(k)}, z_i - z_{i+1}) P K."""
    n = v.m
    if not 1 <= i < n:
        raise ValueError(f"s~_{i} needs 1 <= i < {n}")
    vt = v.vt
    lam = DynArg.shifted(vt.poly("lam"), range(i + 2, n + 1))
    z = vt.poly(f"z{i}") - vt.poly(f"z{i + 1}")
    return apply_R(i, i + 1, lam, z, apply_P(i, i + 1, apply_K(i, i + 1, v)))


def s_tilde_word(word: Iterable[int], v: TensorVector) -> TensorVector:
    """Apply s~ for the word right to left (the last letter acts first)."""
    for i in reversed(list(word)):
        v = s_tilde(i, v)
    return v


def s_hat(i: int, mu: Scalar, f: Scalar) -> RatF:
    vt = mu.vt
    mu, f = _r(vt, mu), _r(vt, f)
    y = RatF.var(vt, "y")
    if (mu - y).is_zero():
        raise ZeroDivisionError("s^_{i,mu} is undefined at mu = y")
    d = RatF.var(vt, f"z{i + 1}") - RatF.var(vt, f"z{i}")
    a = (mu + d) * y / ((mu - y) * d)
    b = mu * (d - y) / ((mu - y) * d)
    return a * f + b * f.swap_z(i, i + 1)


def s_hat_inverse(i: int, mu: Scalar, f: Scalar) -> RatF:
    """From (s+1)(s-c) = 0: s^{-1} = (s - (c-1)) / c with c = (mu+y)/(mu-y)."""
    vt = mu.vt
    mu, f = _r(vt, mu), _r(vt, f)
    y = RatF.var(vt, "y")
    c = (mu + y) / (mu - y)
    return (s_hat(i, mu, f) - (c - 1) * f) / c


# --------------------------------------------------------------------------
# checkers


def check_inversion() -> bool:
    """R^{(1,2)}(lam, z) R^{(2,1)}(lam, -z) = Id on C^2 x C^2."""
    vt = VarTable.get(2)
    lam, z = vt.poly("lam"), vt.poly("z1")
    for mask in range(4):
        e = TensorVector.basis(vt, 2, mask)
        if apply_R(1, 2, lam, z, apply_R(2, 1, lam, -z, e)) != e:
            return False
    return True


def ybe_sides(mask: int) -> tuple[TensorVector, TensorVector]:
    """Both sides of the dynamical Yang-Baxter equation on one basis vector."""
    vt = VarTable.get(3)
    lam = vt.poly("lam")
    z, w = vt.poly("z1"), vt.poly("z2")
    e = TensorVector.basis(vt, 3, mask)
    lhs = apply_R(2, 3, DynArg.shifted(lam, [1]), w, e)
    lhs = apply_R(1, 3, lam, z, lhs)
    lhs = apply_R(1, 2, DynArg.shifted(lam, [3]), z - w, lhs)
    rhs = apply_R(1, 2, lam, z - w, e)
    rhs = apply_R(1, 3, DynArg.shifted(lam, [2]), z, rhs)
    rhs = apply_R(2, 3, lam, w, rhs)
    return lhs, rhs


def check_ybe(masks: Iterable[int] = range(8)) -> bool:
    return all(l == r for l, r in (ybe_sides(m) for m in masks))


def check_coxeter(v: TensorVector) -> dict[str, bool]:
    """Coxeter relations and z-conjugation rules of the s~_i on one vector."""
    n = v.m
    vt = v.vt
    out: dict[str, bool] = {}
    for i in range(1, n):
        out[f"s{i}^2"] = s_tilde(i, s_tilde(i, v)) == v
        zi, zj = vt.poly(f"z{i}"), vt.poly(f"z{i + 1}")
        sv = s_tilde(i, v)
        out[f"s{i} z{i}"] = s_tilde(i, v.scale(zi)) == sv.scale(zj)
        out[f"s{i} z{i + 1}"] = s_tilde(i, v.scale(zj)) == sv.scale(zi)
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                zk = vt.poly(f"z{j}")
                out[f"s{i} z{j}"] = s_tilde(i, v.scale(zk)) == sv.scale(zk)
    for i in range(1, n - 1):
        out[f"braid {i}"] = s_tilde_word([i + 1, i, i + 1], v) == s_tilde_word([i, i + 1, i], v)
    for i in range(1, n):
        for j in range(i + 2, n):
            out[f"s{i}s{j}"] = s_tilde_word([i, j], v) == s_tilde_word([j, i], v)
    return out


def s_hat_invariance(i: int, mu: Scalar, f: Scalar) -> RatF:
    """The map f_I -> f_{s_i(I)} forced by s~_i-invariance when i not in I, i+1 in I.

    Equals f + mu (z_{i+1} - z_i - y)/(mu - y) * d_i f, i.e. c * s^_{i,mu}^{-1} f with
    c = (mu + y)/(mu - y).  Using s^ itself here fails already
    for xi_{1} + xi_{2} at n = 2.
    """
    vt = mu.vt
    mu, f = _r(vt, mu), _r(vt, f)
    y = RatF.var(vt, "y")
    d = RatF.var(vt, f"z{i + 1}") - RatF.var(vt, f"z{i}")
    return (mu - d) * y / ((mu - y) * d) * f + mu * (d - y) / ((mu - y) * d) * f.swap_z(i, i + 1)


def s_hat_invariance_inverse(i: int, mu: Scalar, f: Scalar) -> RatF:
    vt = mu.vt
    mu = _r(vt, mu)
    y = RatF.var(vt, "y")
    return s_hat(i, mu, f) * (mu - y) / (mu + y)


def invariance_conditions(v: TensorVector, j: int) -> bool:
    """The three componentwise criteria for s~_j-invariance of v (corrected form)."""
    n = v.m
    vt = v.vt
    lam, y = vt.poly("lam"), vt.poly("y")
    for mask in range(1 << n):
        I = SubsetIndex.from_mask(n, mask)
        f = v.coeff(mask)
        a, b = j in I, (j + 1) in I
        if a == b:
            if f.swap_z(j, j + 1) != f:
                return False
            continue
        nu = h_sum(mask, range(j + 2, n + 1))
        mu = lam - y.scale(nu)
        g = v.coeff(I.swap(j, j + 1))
        if not a and b:
            if g != s_hat_invariance(j, mu, f):
                return False
        elif g != s_hat_invariance_inverse(j, mu, f):
            return False
    return True


def operator_matrix(op: Callable[[TensorVector], TensorVector], n: int, k: int | None = None) -> RatMatrix:
    """Matrix of a linear (not semilinear) operator in the colex v_I basis."""
    from .combinatorics import subsets

    vt = VarTable.get(n)
    basis = [I for kk in range(n + 1) for I in subsets(n, kk)] if k is None else list(subsets(n, k))
    cols = [op(TensorVector.of(I)) for I in basis]
    return RatMatrix(vt, [[c.coeff(J) for c in cols] for J in basis])
