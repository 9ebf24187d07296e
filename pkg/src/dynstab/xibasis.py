"""The xi_I vectors: a triangular basis of each weight space."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

from .combinatorics import (
    Perm,
    SubsetIndex,
    c_factor_ratf,
    i_max,
    i_min,
    leq_sigma,
    rq_ratf,
    sigma_order,
    subsets,
)
from .rmatrix import TensorVector, s_tilde
from .symalg import RatF, VarTable
from .symalg.linalg import RatMatrix, solve_upper
from .weightfns import restrict_cached


@dataclass(frozen=True)
class XiVector:
    I: SubsetIndex
    vector: TensorVector

    def coeff(self, J: SubsetIndex) -> RatF:
        return self.vector.coeff(J)

    def render(self, fmt: str = "text") -> str:
        return f"xi{self.I.short()} = " + self.vector.render(fmt)


@lru_cache(maxsize=None)
def xi(I: SubsetIndex) -> XiVector:
    """xi_I = (1/Q_I) sum_J W~-_J(z_I) v_J."""
    n, k = I.n, I.k
    vt = VarTable.get(n)
    _, Q = rq_ratf(I)
    invQ = Q.inverse()
    coeffs = {}
    for J in subsets(n, k):
        c = restrict_cached("minus", None, J, I)
        if not c.is_zero():
            coeffs[J.mask] = c * invQ
    return XiVector(I, TensorVector(vt, n, coeffs))


def xi_basis(n: int, k: int) -> list[XiVector]:
    return [xi(I) for I in subsets(n, k)]


def xi_matrix(n: int, k: int) -> RatMatrix:
    """Columns are xi_I in the colex v-basis."""
    S = subsets(n, k)
    return RatMatrix(VarTable.get(n), [[xi(I).coeff(J) for I in S] for J in S])


def _order_indices(n: int, k: int, sigma: Perm) -> list[int]:
    S = list(subsets(n, k))
    pos = {I: a for a, I in enumerate(S)}
    return [pos[I] for I in sigma_order(S, sigma)]


def expand_in_xi(v: TensorVector, k: int) -> dict[SubsetIndex, RatF]:
    """Coefficients f_I with v = sum f_I xi_I, by back-substitution."""
    n = v.m
    if v.weights() - {k}:
        raise ValueError(f"vector has components outside weight {k}")
    S = subsets(n, k)
    vt = v.vt
    B = RatMatrix(vt, [[v.coeff(J)] for J in S])
    X = solve_upper(xi_matrix(n, k), B, _order_indices(n, k, Perm.identity(n)))
    return {I: X[a, 0] for a, I in enumerate(S) if not X[a, 0].is_zero()}


def combine(n: int, coeffs: Mapping[SubsetIndex, RatF]) -> TensorVector:
    """sum_I f_I xi_I."""
    vt = VarTable.get(n)
    out = TensorVector(vt, n)
    for I, f in coeffs.items():
        out = out + xi(I).vector.scale(f)
    return out


def basis_determinant(n: int, k: int) -> RatF:
    """Product of the diagonal coefficients; the xi matrix is triangular."""
    out = RatF.const(VarTable.get(n), 1)
    for I in subsets(n, k):
        out = out * xi(I).coeff(I)
    return out


# --------------------------------------------------------------------------
# checks


def predicted_diagonal(I: SubsetIndex) -> RatF:
    """C^{(1)}_{id,I} prod_{b<a, a in I, b not in I} (z_b - z_a)/(z_b - z_a - y)."""
    n = I.n
    vt = VarTable.get(n)
    y = vt.poly("y")
    num, den = [], []
    for a in I:
        for b in range(1, a):
            if b not in I:
                d = vt.poly(f"z{b}") - vt.poly(f"z{a}")
                num.append(d)
                den.append(d - y)
    return c_factor_ratf(Perm.identity(n), I, 1) * RatF.from_factors(vt, num, den)


def check_triangular(I: SubsetIndex) -> bool:
    ident = Perm.identity(I.n)
    return all(leq_sigma(SubsetIndex.from_mask(I.n, m), I, ident) for m in xi(I).vector.coeffs)


def check_diagonal(I: SubsetIndex) -> bool:
    return xi(I).coeff(I) == predicted_diagonal(I)


def check_extremes(n: int, k: int) -> dict[str, bool]:
    vt = VarTable.get(n)
    lam, y = vt.poly("lam"), vt.poly("y")
    lo, hi = i_min(n, k), i_max(n, k)
    c_lo = RatF.from_factors(vt, [lam + y.scale(n - k - i) for i in range(1, k + 1)])
    R, Q = rq_ratf(hi)
    c_hi = RatF.from_factors(vt, [lam - y.scale(i) for i in range(1, k + 1)]) * R / Q
    return {
        "xi_min": xi(lo).vector == TensorVector.of(lo, c_lo),
        "xi_max_diagonal": xi(hi).coeff(hi) == c_hi,
    }


def check_recursion(I: SubsetIndex, i: int) -> bool:
    """s~_i xi_I = xi_{s_i(I)}."""
    return s_tilde(i, xi(I).vector) == xi(I.swap(i, i + 1)).vector


def regenerate(n: int, k: int) -> dict[SubsetIndex, TensorVector]:
    """Build every xi_I from xi_{I^min} by s~ moves only."""
    start = i_min(n, k)
    out = {start: xi(start).vector}
    frontier = [start]
    while frontier:
        nxt = []
        for I in frontier:
            for i in range(1, n):
                J = I.swap(i, i + 1)
                if J not in out:
                    out[J] = s_tilde(i, out[I])
                    nxt.append(J)
        frontier = nxt
    return out


def equivariant_family(n: int, k: int, f: Callable[[SubsetIndex], RatF]) -> dict[SubsetIndex, RatF]:
    """Coefficients f_I meant to satisfy f_{sigma(I)} = f_I(z_sigma); f is evaluated per I."""
    return {I: f(I) for I in subsets(n, k)}


def is_equivariant(coeffs: Mapping[SubsetIndex, RatF], n: int, k: int) -> bool:
    """f_{s_i(I)} = K_i f_I for all simple reflections (they generate S_n)."""
    vt = VarTable.get(n)
    zero = RatF.zero(vt)
    for I in subsets(n, k):
        fI = coeffs.get(I, zero)
        for i in range(1, n):
            if coeffs.get(I.swap(i, i + 1), zero) != fI.swap_z(i, i + 1):
                return False
    return True


def is_invariant(v: TensorVector) -> bool:
    return all(s_tilde(i, v) == v for i in range(1, v.m))
