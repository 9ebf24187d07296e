"""Localized equivariant cohomology: kappa classes, Stab maps, nu and geometric R-matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

from .combinatorics import Perm, SubsetIndex, all_perms, leq_sigma, rq_ratf, sigma_order, subsets
from .rmatrix import DynArg, TensorVector, apply_R
from .symalg import RatF, VarTable
from .symalg.linalg import RatMatrix, solve_upper
from .weightfns import restrict_cached


@dataclass
class LocalizedClass:
    """A class on T*Gr_k(C^n) stored through its restrictions to the fixed points."""

    n: int
    k: int
    components: dict[SubsetIndex, RatF] = field(default_factory=dict)

    @property
    def vt(self) -> VarTable:
        return VarTable.get(self.n)

    def __getitem__(self, J: SubsetIndex) -> RatF:
        return self.components.get(J, RatF.zero(self.vt))

    @classmethod
    def from_function(cls, n: int, k: int, f: Callable[[SubsetIndex], RatF]) -> "LocalizedClass":
        return cls(n, k, {J: f(J) for J in subsets(n, k)})

    def __add__(self, other: "LocalizedClass") -> "LocalizedClass":
        self._check(other)
        return LocalizedClass(self.n, self.k, {J: self[J] + other[J] for J in subsets(self.n, self.k)})

    def scale(self, c) -> "LocalizedClass":
        return LocalizedClass(self.n, self.k, {J: v * c for J, v in self.components.items()})

    def _check(self, other: "LocalizedClass") -> None:
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("classes on different Grassmannians")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalizedClass):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k) and all(
            self[J] == other[J] for J in subsets(self.n, self.k)
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "components": {str(J): v.to_json() for J, v in self.components.items() if not v.is_zero()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LocalizedClass":
        n, k = int(data["n"]), int(data["k"])
        vt = VarTable.get(n)
        return cls(n, k, {SubsetIndex.parse(s): RatF.from_json(v, vt) for s, v in data["components"].items()})

    def render(self, fmt: str = "text") -> str:
        return "\n".join(f"{J.short()}: {self[J].render(fmt)}" for J in subsets(self.n, self.k))


def kappa(sigma: Perm, I: SubsetIndex) -> LocalizedClass:
    """kappa_{sigma,I}: restrictions of W~+_{sigma,I}."""
    return LocalizedClass.from_function(I.n, I.k, lambda J: restrict_cached("plus", sigma, I, J))


def stab(sigma: Perm, v: TensorVector) -> LocalizedClass:
    ks = v.weights()
    if len(ks) > 1:
        raise ValueError("Stab is applied per weight; split the vector first")
    n = v.m
    k = ks.pop() if ks else 0
    out = LocalizedClass(n, k, {J: RatF.zero(v.vt) for J in subsets(n, k)})
    for I, c in v.subsets().items():
        out = out + kappa(sigma, I).scale(c)
    return out


def nu(c: LocalizedClass) -> TensorVector:
    """sum_I c|_I / R_I * xi_I."""
    from .xibasis import xi

    out = TensorVector(c.vt, c.n)
    for I in subsets(c.n, c.k):
        v = c[I]
        if v.is_zero():
            continue
        R, _ = rq_ratf(I)
        out = out + xi(I).vector.scale(v / R)
    return out


@lru_cache(maxsize=None)
def stab_matrix(sigma: Perm, n: int, k: int) -> RatMatrix:
    """Rows J, columns I (colex): kappa_{sigma,I}|_J."""
    S = subsets(n, k)
    return RatMatrix(VarTable.get(n), [[restrict_cached("plus", sigma, I, J) for I in S] for J in S])


def check_stab_triangular(sigma: Perm, n: int, k: int) -> bool:
    from .weightfns import diagonal_value
    from .combinatorics import c_factor_ratf

    S = subsets(n, k)
    M = stab_matrix(sigma, n, k)
    for a, J in enumerate(S):
        for b, I in enumerate(S):
            e = M[a, b]
            if J == I:
                want = diagonal_value(sigma, I) / (c_factor_ratf(sigma, I, 0) * c_factor_ratf(sigma, I, 1))
                if e.is_zero() or e != want:
                    return False
            elif not leq_sigma(J, I, sigma) and not e.is_zero():
                return False
    return True


@lru_cache(maxsize=None)
def geometric_R_block(sigma2: Perm, sigma: Perm, k: int) -> RatMatrix:
    """Stab_{sigma2}^{-1} Stab_sigma on weight k, by back-substitution in <=_{sigma2} order."""
    n = sigma.n
    S = list(subsets(n, k))
    pos = {I: a for a, I in enumerate(S)}
    order = [pos[I] for I in sigma_order(S, sigma2)]
    if sigma2 == sigma:
        return RatMatrix.identity(VarTable.get(n), len(S))
    return solve_upper(stab_matrix(sigma2, n, k), stab_matrix(sigma, n, k), order)


def tensor_basis(n: int) -> list[int]:
    """Masks in the order v1..v1, ..., v2..v2 (lexicographic, v1 < v2, position 1 slowest)."""
    out = []
    for idx in range(1 << n):
        mask = 0
        for p in range(1, n + 1):
            if not idx >> (n - p) & 1:
                mask |= 1 << (p - 1)
        out.append(mask)
    return out


def geometric_R(sigma2: Perm, sigma: Perm) -> RatMatrix:
    """Full 2^n x 2^n matrix in the tensor_basis order."""
    n = sigma.n
    vt = VarTable.get(n)
    order = tensor_basis(n)
    where = {m: a for a, m in enumerate(order)}
    M = [[RatF.zero(vt)] * (1 << n) for _ in range(1 << n)]
    for k in range(n + 1):
        S = subsets(n, k)
        B = geometric_R_block(sigma2, sigma, k)
        for a, J in enumerate(S):
            for b, I in enumerate(S):
                M[where[J.mask]][where[I.mask]] = B[a, b]
    return RatMatrix(vt, M)


def apply_geometric_R(sigma2: Perm, sigma: Perm, v: TensorVector) -> TensorVector:
    out = TensorVector(v.vt, v.m)
    for I, c in v.subsets().items():
        S = subsets(v.m, I.k)
        B = geometric_R_block(sigma2, sigma, I.k)
        b = S.index(I)
        col = {J.mask: B[a, b] for a, J in enumerate(S)}
        out = out + TensorVector(v.vt, v.m, col).scale(c)
    return out


def check_coincidence(sigma: Perm, a: int) -> bool:
    """R_{sigma s_a, sigma} equals the dynamical R^{(sigma(a+1), sigma(a))} on every basis vector."""
    n = sigma.n
    vt = VarTable.get(n)
    sa = Perm.transposition(n, a, a + 1)
    lam = DynArg.shifted(vt.poly("lam"), [sigma(i) for i in range(a + 2, n + 1)])
    z = vt.poly(f"z{sigma(a + 1)}") - vt.poly(f"z{sigma(a)}")
    for mask in range(1 << n):
        e = TensorVector.basis(vt, n, mask)
        if apply_geometric_R(sigma * sa, sigma, e) != apply_R(sigma(a + 1), sigma(a), lam, z, e):
            return False
    return True


def check_cocycle(s3: Perm, s2: Perm, s1: Perm) -> bool:
    n = s1.n
    return all(
        geometric_R_block(s3, s2, k) @ geometric_R_block(s2, s1, k) == geometric_R_block(s3, s1, k)
        for k in range(n + 1)
    )


def in_loc_image(c: LocalizedClass) -> bool:
    """c|_I - c|_{s_ij I} vanishes at z_i = z_j, with no pole there, for all i < j."""
    vt = c.vt
    for i in range(1, c.n + 1):
        for j in range(i + 1, c.n + 1):
            bind = {vt.z(i): vt.poly(f"z{j}")}
            for I in subsets(c.n, c.k):
                J = I.swap(i, j)
                if J.colex_key() <= I.colex_key():
                    continue
                d = c[I] - c[J]
                if d.is_zero():
                    continue
                if d.den.substitute(bind).is_zero() or not d.num.substitute(bind).is_zero():
                    return False
    return True


def gln_symmetric(c: LocalizedClass) -> bool:
    """c|_{s_i(I)}(z) = c|_I(z with z_i, z_{i+1} swapped) for all i, I."""
    for I in subsets(c.n, c.k):
        for i in range(1, c.n):
            if c[I.swap(i, i + 1)] != c[I].swap_z(i, i + 1):
                return False
    return True


def stab_of_xi_expected(I: SubsetIndex) -> LocalizedClass:
    """The class prod_{i<=k} prod_{j not in I} (gamma_{1,i} - z_j), localized."""
    vt = VarTable.get(I.n)
    comp = I.complement()
    return LocalizedClass.from_function(
        I.n, I.k, lambda J: RatF.from_factors(vt, [vt.poly(f"z{a}") - vt.poly(f"z{j}") for a in J for j in comp])
    )


def check_nu_stab(K: SubsetIndex) -> bool:
    return nu(kappa(Perm.identity(K.n), K)) == TensorVector.of(K)


def check_stab_nu(c: LocalizedClass) -> bool:
    v = nu(c)
    if v.is_zero():
        return all(c[J].is_zero() for J in subsets(c.n, c.k))
    return stab(Perm.identity(c.n), v) == c
