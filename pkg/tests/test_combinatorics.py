from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from dynstab.combinatorics import (
    Perm,
    SubsetIndex,
    all_perms,
    c_factor,
    euler_factors,
    leq_sigma,
    rq_products,
    schubert_dim,
    sigma_order,
    subsets,
    wnum,
)
from dynstab.symalg import VarTable


@st.composite
def perm_and_subsets(draw, count=3):
    n = draw(st.integers(1, 5))
    k = draw(st.integers(0, n))
    sigma = Perm(tuple(draw(st.permutations(range(1, n + 1)))))
    pool = subsets(n, k)
    return sigma, [draw(st.sampled_from(pool)) for _ in range(count)]


def test_wnum_examples():
    assert wnum(2, SubsetIndex.of(6, [1, 2, 4])) == -2
    assert wnum(2, SubsetIndex.of(7, [1, 2, 4])) == -3
    with pytest.raises(ValueError):
        wnum(3, SubsetIndex.of(6, [1, 2, 4]))


def test_subsets_are_counted_and_distinct():
    assert len(subsets(5, 2)) == 10
    assert len(set(subsets(5, 2))) == 10
    assert subsets(3, 0) == (SubsetIndex(3, ()),)
    assert subsets(2, 3) == ()


def test_subset_parse_and_mask():
    I = SubsetIndex.parse("{1,3}", 3)
    assert I == SubsetIndex.of(3, [3, 1])
    assert SubsetIndex.from_mask(3, I.mask) == I
    assert I.complement() == SubsetIndex.of(3, [2])
    assert I.swap(1, 2) == SubsetIndex.of(3, [2, 3])
    with pytest.raises(ValueError):
        SubsetIndex.parse("1,4", 3)


def test_perm_group_laws():
    for sigma in all_perms(4):
        assert (sigma * sigma.inverse()).is_identity()
        assert sigma * Perm.identity(4) == sigma
    s0 = Perm.longest(3)
    assert [s0(i) for i in (1, 2, 3)] == [3, 2, 1]
    assert len(all_perms(4)) == 24


@given(perm_and_subsets())
def test_sigma_order_is_partial_order(data):
    sigma, (A, B, C) = data
    assert leq_sigma(A, A, sigma)
    if leq_sigma(A, B, sigma) and leq_sigma(B, A, sigma):
        assert A == B
    if leq_sigma(A, B, sigma) and leq_sigma(B, C, sigma):
        assert leq_sigma(A, C, sigma)


@given(perm_and_subsets(count=1))
def test_sigma_order_is_linear_extension(data):
    sigma, (I,) = data
    order = sigma_order(subsets(I.n, I.k), sigma)
    pos = {J: a for a, J in enumerate(order)}
    for J in order:
        for K in order:
            if leq_sigma(J, K, sigma) and J != K:
                assert pos[J] < pos[K]


def test_identity_order_has_extremes():
    S = subsets(4, 2)
    ident = Perm.identity(4)
    lo, hi = SubsetIndex.of(4, [1, 2]), SubsetIndex.of(4, [3, 4])
    assert all(leq_sigma(lo, J, ident) and leq_sigma(J, hi, ident) for J in S)


def test_schubert_dim_brute_force():
    # count inversions directly from the definition on a few cases
    for sigma in all_perms(3):
        for k in range(4):
            for I in subsets(3, k):
                want = sum(1 for i in range(1, 4) for j in range(1, i) if sigma(i) in I and sigma(j) not in I)
                assert schubert_dim(sigma, I) == want
    assert schubert_dim(Perm.identity(2), SubsetIndex.of(2, [2])) == 1


def test_euler_factor_and_c_factor_examples():
    vt = VarTable.get(2)
    z1, z2, lam, y = (vt.poly(nm) for nm in ("z1", "z2", "lam", "y"))
    ident = Perm.identity(2)
    I = SubsetIndex.of(2, [1])
    assert euler_factors(ident, I, "hor", "-") == z2 - z1
    assert euler_factors(ident, I, "hor", "+") == vt.const(1)
    assert c_factor(ident, I, 0) == lam + y
    R, Q = rq_products(I)
    assert R == z1 - z2 and Q == z1 - z2 + y


def test_euler_factors_cover_all_pairs():
    # hor,+ times hor,- is +-prod over a in I, b not in I of (z_b - z_a)
    for sigma in all_perms(3):
        for I in subsets(3, 1) + subsets(3, 2):
            R, _ = rq_products(I)
            prod = euler_factors(sigma, I, "hor", "+") * euler_factors(sigma, I, "hor", "-")
            sign = (-1) ** (I.k * (3 - I.k))
            assert prod == R.scale(sign)
