"""Subsets, permutations and the named scalar products attached to them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .symalg import Poly, RatF, VarTable


@dataclass(frozen=True, order=False)
class SubsetIndex:
    """A subset I of [n]; n is part of the value because w(i, I) depends on it."""

    n: int
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(sorted(self.elements))
        if len(set(els)) != len(els):
            raise ValueError(f"repeated element in {self.elements}")
        if els and (els[0] < 1 or els[-1] > self.n):
            raise ValueError(f"elements {els} not inside [1, {self.n}]")
        object.__setattr__(self, "elements", els)

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "SubsetIndex":
        return cls(n, tuple(elements))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SubsetIndex":
        return cls(n, tuple(j + 1 for j in range(n) if mask >> j & 1))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "SubsetIndex":
        """Accepts '{1,3}/4', '1,3' (n given) or '' for the empty set."""
        text = text.strip()
        if "/" in text:
            body, nn = text.rsplit("/", 1)
            n = int(nn)
            text = body
        if n is None:
            raise ValueError("ambient n is required")
        text = text.strip("{} ")
        els = tuple(int(t) for t in text.split(",") if t.strip())
        return cls(n, els)

    @property
    def k(self) -> int:
        return len(self.elements)

    @property
    def mask(self) -> int:
        m = 0
        for i in self.elements:
            m |= 1 << (i - 1)
        return m

    def complement(self) -> "SubsetIndex":
        s = set(self.elements)
        return SubsetIndex(self.n, tuple(j for j in range(1, self.n + 1) if j not in s))

    def __contains__(self, i: int) -> bool:
        return i in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def image(self, sigma: "Perm") -> "SubsetIndex":
        return SubsetIndex(self.n, tuple(sigma(i) for i in self.elements))

    def swap(self, i: int, j: int) -> "SubsetIndex":
        """s_{i,j}(I)."""
        t = {i: j, j: i}
        return SubsetIndex(self.n, tuple(t.get(a, a) for a in self.elements))

    def remove(self, i: int) -> "SubsetIndex":
        if i not in self.elements:
            raise ValueError(f"{i} is not in {self}")
        return SubsetIndex(self.n, tuple(a for a in self.elements if a != i))

    def add(self, i: int) -> "SubsetIndex":
        if i in self.elements:
            raise ValueError(f"{i} is already in {self}")
        return SubsetIndex(self.n, self.elements + (i,))

    def colex_key(self) -> tuple:
        return (self.k, tuple(reversed(self.elements)))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}/" + str(self.n)

    def short(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple[SubsetIndex, ...]:
    """All k-subsets of [n] in colex order."""
    if not 0 <= k <= n:
        return ()
    out = [SubsetIndex(n, c) for c in combinations(range(1, n + 1), k)]
    out.sort(key=SubsetIndex.colex_key)
    return tuple(out)


def i_min(n: int, k: int) -> SubsetIndex:
    return SubsetIndex(n, tuple(range(1, k + 1)))


def i_max(n: int, k: int) -> SubsetIndex:
    return SubsetIndex(n, tuple(range(n - k + 1, n + 1)))


@dataclass(frozen=True)
class Perm:
    """sigma in S_n in one-line notation: images[a-1] = sigma(a)."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> "Perm":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Perm":
        im = list(range(1, n + 1))
        im[i - 1], im[j - 1] = j, i
        return cls(tuple(im))

    @classmethod
    def parse(cls, text: str) -> "Perm":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for a, b in enumerate(self.images, start=1):
            inv[b - 1] = a
        return Perm(tuple(inv))

    def __mul__(self, other: "Perm") -> "Perm":
        """Composition (self o other)(i) = self(other(i))."""
        if other.n != self.n:
            raise ValueError("permutations of different sizes")
        return Perm(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def __str__(self) -> str:
        return ",".join(map(str, self.images))


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Perm, ...]:
    return tuple(Perm(p) for p in permutations(range(1, n + 1)))


# --------------------------------------------------------------------------
# integer statistics


def wnum(i: int, I: SubsetIndex) -> int:
    """w(i, I) = #{j > i in I} - #{j > i not in I}."""
    if i not in I:
        raise ValueError(f"{i} is not an element of {I}")
    above_in = sum(1 for j in I if j > i)
    above_out = (I.n - i) - above_in
    return above_in - above_out


def leq_sigma(J: SubsetIndex, I: SubsetIndex, sigma: Perm) -> bool:
    """J <=_sigma I: the sorted sigma^{-1}-images of J are entrywise below those of I."""
    if J.k != I.k or J.n != I.n:
        raise ValueError("subsets of different sizes cannot be compared")
    inv = sigma.inverse()
    js = sorted(inv(j) for j in J)
    is_ = sorted(inv(i) for i in I)
    return all(a <= b for a, b in zip(js, is_))


def sigma_order(subs: Sequence[SubsetIndex], sigma: Perm) -> list[SubsetIndex]:
    """A linear extension of <=_sigma."""
    inv = sigma.inverse()
    return sorted(subs, key=lambda S: (sum(inv(i) for i in S), sorted(inv(i) for i in S)))


def schubert_dim(sigma: Perm, I: SubsetIndex) -> int:
    """l_{sigma,I} = #{(i,j): i > j, sigma(i) in I, sigma(j) not in I}."""
    n = I.n
    return sum(
        1
        for i in range(1, n + 1)
        for j in range(1, i)
        if sigma(i) in I and sigma(j) not in I
    )


# --------------------------------------------------------------------------
# polynomial factors


def _vt(n: int) -> VarTable:
    return VarTable.get(n)


def euler_factors(sigma: Perm, I: SubsetIndex, kind: str, sign: str) -> Poly:
    """e^{hor/ver}_{sigma,I,+/-}."""
    if kind not in ("hor", "ver") or sign not in ("+", "-"):
        raise ValueError("kind must be hor/ver and sign +/-")
    n = I.n
    vt = _vt(n)
    z = [None] + [vt.poly(f"z{i}") for i in range(1, n + 1)]
    y = vt.poly("y")
    out = Poly.constant(vt, 1)
    # hor,+ and ver,- run over b < a; hor,- and ver,+ over b > a
    below = (kind == "hor") == (sign == "+")
    for a in range(1, n + 1):
        if sigma(a) not in I:
            continue
        for b in range(1, n + 1):
            if sigma(b) in I or (b < a) != below or a == b:
                continue
            if kind == "hor":
                out = out * (z[sigma(b)] - z[sigma(a)])
            else:
                out = out * (z[sigma(a)] - z[sigma(b)] + y)
    return out


def rq_products(I: SubsetIndex) -> tuple[Poly, Poly]:
    """(R_I, Q_I) = prod_{a in I, b not in I} (z_a - z_b), (z_a - z_b + y)."""
    vt = _vt(I.n)
    y = vt.poly("y")
    R = Poly.constant(vt, 1)
    Q = Poly.constant(vt, 1)
    for a in I:
        for b in I.complement():
            d = vt.poly(f"z{a}") - vt.poly(f"z{b}")
            R = R * d
            Q = Q * (d + y)
    return R, Q


def rq_ratf(I: SubsetIndex) -> tuple[RatF, RatF]:
    """R_I and Q_I kept in factored form."""
    vt = _vt(I.n)
    y = vt.poly("y")
    rs, qs = [], []
    for a in I:
        for b in I.complement():
            d = vt.poly(f"z{a}") - vt.poly(f"z{b}")
            rs.append(d)
            qs.append(d + y)
    return RatF.from_factors(vt, rs), RatF.from_factors(vt, qs)


def c_factor(sigma: Perm, I: SubsetIndex, r: int) -> Poly:
    """C^{(r)}_{sigma,I} = prod_{i in I} (lam - (w(sigma^{-1} i, sigma^{-1} I) + r) y)."""
    vt = _vt(I.n)
    lam, y = vt.poly("lam"), vt.poly("y")
    inv = sigma.inverse()
    J = I.image(inv)
    out = Poly.constant(vt, 1)
    for i in I:
        out = out * (lam - y.scale(wnum(inv(i), J) + r))
    return out


def c_factor_ratf(sigma: Perm, I: SubsetIndex, r: int) -> RatF:
    vt = _vt(I.n)
    lam, y = vt.poly("lam"), vt.poly("y")
    inv = sigma.inverse()
    J = I.image(inv)
    return RatF.from_factors(vt, [lam - y.scale(wnum(inv(i), J) + r) for i in I])


def ek_product(args: Sequence[Poly | RatF], vt: VarTable | None = None) -> Poly | RatF:
    """e_k(x, y) = prod_{a,b} (x_a - x_b + y) at the given arguments.

    Polynomial arguments give a Poly; any RatF argument gives a RatF.
    """
    if not args and vt is None:
        raise ValueError("empty argument list needs an explicit VarTable")
    vt = vt or args[0].vt
    if all(isinstance(a, Poly) for a in args):
        yp = vt.poly("y")
        prod = Poly.constant(vt, 1)
        for a in args:
            for b in args:
                prod = prod * (a - b + yp)
        return prod
    xs = [a if isinstance(a, RatF) else RatF.from_poly(a) for a in args]
    y = RatF.var(vt, "y")
    out = RatF.const(vt, 1)
    for a in xs:
        for b in xs:
            out = out * (a - b + y)
    return out


def ek_at_subset(J: SubsetIndex) -> RatF:
    """e_k(z_J, y) in factored form."""
    vt = _vt(J.n)
    y = vt.poly("y")
    zs = [vt.poly(f"z{j}") for j in J]
    return RatF.from_factors(vt, [a - b + y for a in zs for b in zs])


def ek_t(vt: VarTable, k: int) -> RatF:
    y = vt.poly("y")
    ts = [vt.poly(f"t{a}") for a in range(1, k + 1)]
    return RatF.from_factors(vt, [a - b + y for a in ts for b in ts])
