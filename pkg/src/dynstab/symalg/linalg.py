"""Dense matrices over the rational-function field."""
from __future__ import annotations

from collections import Counter
from typing import Callable, Iterable, Sequence

from .poly import Poly, VarTable
from .ratf import RatF, _expand


class SingularMatrix(ZeroDivisionError):
    pass


def _as_ratf(vt: VarTable, x) -> RatF:
    if isinstance(x, RatF):
        return x
    if isinstance(x, Poly):
        return RatF.from_poly(x)
    return RatF.const(vt, x)


class RatMatrix:
    """Rectangular matrix of RatF sharing one VarTable."""

    __slots__ = ("vt", "rows", "nrows", "ncols")

    def __init__(self, vt: VarTable, rows: Sequence[Sequence[RatF]]):
        self.vt = vt
        self.rows = [[_as_ratf(vt, x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            for x in r:
                if x.vt is not vt:
                    raise ValueError("entry from a different variable table")

    @classmethod
    def identity(cls, vt: VarTable, n: int) -> "RatMatrix":
        one, zero = RatF.const(vt, 1), RatF.zero(vt)
        return cls(vt, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, vt: VarTable, r: int, c: int) -> "RatMatrix":
        zero = RatF.zero(vt)
        return cls(vt, [[zero] * c for _ in range(r)])

    @classmethod
    def diag(cls, vt: VarTable, entries: Iterable[RatF]) -> "RatMatrix":
        es = list(entries)
        m = cls.zeros(vt, len(es), len(es))
        for i, e in enumerate(es):
            m.rows[i][i] = e
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> RatF:
        i, j = ij
        return self.rows[i][j]

    def map(self, fn: Callable[[RatF], RatF]) -> "RatMatrix":
        return RatMatrix(self.vt, [[fn(x) for x in r] for r in self.rows])

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.vt, [list(c) for c in zip(*self.rows)])

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.vt, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.vt, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "RatMatrix":
        return self.map(lambda x: -x)

    def scale(self, c) -> "RatMatrix":
        return self.map(lambda x: x * c)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        zero = RatF.zero(self.vt)
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RatMatrix(self.vt, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == RatMatrix.identity(self.vt, self.nrows)

    def _same_shape(self, other: "RatMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def render(self, fmt: str = "text") -> str:
        cells = [[x.render(fmt) for x in r] for r in self.rows]
        if fmt == "latex":
            body = r" \\ ".join(" & ".join(r) for r in cells)
            return rf"\begin{{pmatrix}} {body} \end{{pmatrix}}"
        return "\n".join("[ " + " | ".join(r) + " ]" for r in cells)

    def __repr__(self) -> str:
        return f"RatMatrix{self.shape}"


def _row_denominator(row: Sequence[RatF]) -> Counter:
    lcm: Counter = Counter()
    for x in row:
        lcm |= x.df
    return lcm


def invert_matrix(M: RatMatrix) -> RatMatrix:
    """Exact inverse by fraction-free (Bareiss) Gauss-Jordan elimination.

    Rows are first cleared of denominators, so M = diag(1/D_i) A with A
    polynomial.  Elimination on [A | I] ends with [d I | d A^{-1}], every
    intermediate division being exact; only the final division by d = +-det A
    leaves the polynomial ring.
    """
    n = M.nrows
    if n != M.ncols:
        raise ValueError("only square matrices can be inverted")
    vt = M.vt
    if n == 0:
        return RatMatrix(vt, [])
    dens: list[Poly] = []
    A: list[list[Poly]] = []
    for i, row in enumerate(M.rows):
        lcm = _row_denominator(row)
        dens.append(_expand(vt, lcm))
        prow = []
        for x in row:
            if x.is_zero():
                prow.append(Poly(vt))
            else:
                rest = lcm.copy()
                rest.subtract(x.df)
                prow.append(x.num * _expand(vt, +rest))
        prow += [Poly.constant(vt, 1 if j == i else 0) for j in range(n)]
        A.append(prow)
    prev = Poly.constant(vt, 1)
    width = 2 * n
    for k in range(n):
        piv = next((r for r in range(k, n) if not A[r][k].is_zero()), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
        p = A[k][k]
        rk = A[k]
        for i in range(n):
            if i == k:
                continue
            ri = A[i]
            f = ri[k]
            new = []
            for j in range(width):
                v = p * ri[j]
                if not f.is_zero() and not rk[j].is_zero():
                    v = v - f * rk[j]
                if prev.is_constant():
                    q = v.scale(1 / prev.constant_value()) if not prev.is_zero() else v
                else:
                    q = v.divide_exact(prev)
                    if q is None:
                        raise ArithmeticError("inexact Bareiss step (internal error)")
                new.append(q)
            A[i] = new
        prev = p
    # every diagonal entry now equals the same +-det A
    out = []
    for i in range(n):
        d = RatF.from_poly(A[i][i]).inverse()
        out.append([RatF.from_poly(A[i][n + j]) * d * RatF.from_poly(dens[j]) if not A[i][n + j].is_zero() else RatF.zero(vt) for j in range(n)])
    return RatMatrix(vt, out)


def solve_upper(U: RatMatrix, B: RatMatrix, order: Sequence[int] | None = None) -> RatMatrix:
    """Solve U X = B for U triangular with respect to ``order``.

    ``order`` lists row indices so that U[order[a], order[b]] = 0 for b < a.
    """
    n = U.nrows
    order = list(range(n)) if order is None else list(order)
    vt = U.vt
    X: list[list[RatF | None]] = [[None] * B.ncols for _ in range(n)]
    for a in reversed(range(n)):
        i = order[a]
        piv = U.rows[i][i]
        if piv.is_zero():
            raise SingularMatrix("zero on the diagonal of a triangular system")
        inv = piv.inverse()
        for c in range(B.ncols):
            acc = B.rows[i][c]
            for b in range(a + 1, n):
                j = order[b]
                u = U.rows[i][j]
                if not u.is_zero() and not X[j][c].is_zero():
                    acc = acc - u * X[j][c]
            X[i][c] = acc * inv
    return RatMatrix(vt, X)


def determinant(M: RatMatrix) -> RatF:
    """Determinant by Gaussian elimination over the field."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    vt = M.vt
    rows = [list(r) for r in M.rows]
    det = RatF.const(vt, 1)
    for k in range(n):
        piv = next((r for r in range(k, n) if not rows[r][k].is_zero()), None)
        if piv is None:
            return RatF.zero(vt)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = -det
        p = rows[k][k]
        det = det * p
        inv = p.inverse()
        for i in range(k + 1, n):
            f = rows[i][k]
            if f.is_zero():
                continue
            c = f * inv
            rows[i] = [a - c * b for a, b in zip(rows[i], rows[k])]
    return det
