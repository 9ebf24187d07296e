from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from dynstab.combinatorics import SubsetIndex
from dynstab.rmatrix import (
    DynArg,
    TensorVector,
    apply_P,
    apply_R,
    check_coxeter,
    check_inversion,
    check_ybe,
    h_sum,
    invariance_conditions,
    rmat,
    s_hat,
    s_hat_inverse,
    s_hat_invariance,
    s_hat_invariance_inverse,
    s_tilde,
    ybe_sides,
)
from dynstab.symalg import Poly, RatF, VarTable


def _linear(vt: VarTable, cs: list[int]) -> Poly:
    names = ["lam", "y"] + [f"z{i}" for i in range(1, vt.n + 1)]
    p = Poly.constant(vt, cs[-1])
    for nm, c in zip(names, cs):
        p = p + vt.poly(nm).scale(c)
    return p


@st.composite
def vectors(draw, n=3):
    vt = VarTable.get(n)
    ints = st.lists(st.integers(-3, 3), min_size=n + 3, max_size=n + 3)
    return TensorVector(vt, n, {m: RatF.from_poly(_linear(vt, draw(ints))) for m in range(1 << n)})


def test_rmatrix_entries():
    vt = VarTable.get(2)
    lam, y, z = (RatF.var(vt, nm) for nm in ("lam", "y", "z1"))
    M = rmat(lam, z)
    den = lam * (z - y)
    assert M[0, 0] == 1 and M[3, 3] == 1
    assert M[1, 1] == (lam + y) * z / den
    assert M[1, 2] == -(lam + z) * y / den
    assert M[2, 1] == -(lam - z) * y / den
    assert M[2, 2] == (lam - y) * z / den
    assert M[0, 1] == 0 and M[1, 3] == 0


def test_apply_R_matches_matrix_on_n2():
    vt = VarTable.get(2)
    lam, z = vt.poly("lam"), vt.poly("z1") - vt.poly("z2")
    M = rmat(lam, z)
    # local index 2a + b with a = 0 for v1 in position 1
    masks = [0b11, 0b01, 0b10, 0b00]
    for col, m in enumerate(masks):
        out = apply_R(1, 2, lam, z, TensorVector.basis(vt, 2, m))
        for row, r in enumerate(masks):
            assert out.coeff(r) == M[row, col]


def test_h_sum():
    I = SubsetIndex.of(4, [1, 3])
    assert h_sum(I, [1, 2, 3, 4]) == 0
    assert h_sum(I, [3]) == 1
    assert h_sum(I, [2, 4]) == -2


def test_dynarg_resolves_per_vector():
    vt = VarTable.get(3)
    arg = DynArg.shifted(vt.poly("lam"), [3])
    lam, y = RatF.var(vt, "lam"), RatF.var(vt, "y")
    assert arg.resolve(0b100) == lam - y
    assert arg.resolve(0b000) == lam + y


def test_dynamic_shift_may_not_read_acted_factors():
    vt = VarTable.get(3)
    with pytest.raises(ValueError):
        apply_R(1, 2, DynArg.shifted(vt.poly("lam"), [2]), vt.poly("z1"), TensorVector.basis(vt, 3, 1))


def test_inversion_relation():
    assert check_inversion()


def test_dynamical_ybe():
    assert check_ybe()
    lhs, rhs = ybe_sides(0b010)
    assert not lhs.is_zero() and lhs == rhs


def test_permutation_operator_is_involution():
    vt = VarTable.get(3)
    v = TensorVector.basis(vt, 3, 0b001)
    assert apply_P(1, 2, v) == TensorVector.basis(vt, 3, 0b010)
    assert apply_P(1, 2, apply_P(1, 2, v)) == v


@given(vectors())
@settings(max_examples=6, deadline=None)
def test_coxeter_relations_n3(v):
    rep = check_coxeter(v)
    assert rep and all(rep.values()), [k for k, ok in rep.items() if not ok]


@given(vectors(n=2), st.sampled_from(["lam", "lam - y", "lam + 2*y"]))
@settings(max_examples=15, deadline=None)
def test_s_hat_quadratic_relation(v, mu_text):
    vt = v.vt
    lam, y = RatF.var(vt, "lam"), RatF.var(vt, "y")
    mu = {"lam": lam, "lam - y": lam - y, "lam + 2*y": lam + 2 * y}[mu_text]
    f = v.coeff(0)
    c = (mu + y) / (mu - y)
    s = lambda g: s_hat(1, mu, g)
    # (s + 1)(s - c) = 0
    g = s(f) - c * f
    assert s(g) + g == 0
    assert s_hat_inverse(1, mu, s(f)) == f


@given(vectors())
@settings(max_examples=6, deadline=None)
def test_invariance_conditions_characterize_invariance(v):
    for j in (1, 2):
        inv = v + s_tilde(j, v)
        assert s_tilde(j, inv) == inv
        assert invariance_conditions(inv, j)
        assert invariance_conditions(v, j) == (s_tilde(j, v) == v)


def test_invariance_map_is_rescaled_inverse_of_s_hat():
    vt = VarTable.get(2)
    lam, y, z1, z2 = (RatF.var(vt, nm) for nm in ("lam", "y", "z1", "z2"))
    f = lam * z1 + z2 * z2 - y
    c = (lam + y) / (lam - y)
    assert s_hat_invariance(1, lam, f) == c * s_hat_inverse(1, lam, f)
    assert s_hat_invariance_inverse(1, lam, s_hat_invariance(1, lam, f)) == f


def test_plain_s_hat_criterion_fails_on_xi_sum():
    # xi_{1} + xi_{2} is invariant, yet its components are not related by s^ itself
    from dynstab.xibasis import xi

    one, two = SubsetIndex.of(2, [1]), SubsetIndex.of(2, [2])
    zeta = xi(one).vector + xi(two).vector
    assert s_tilde(1, zeta) == zeta
    lam = RatF.var(zeta.vt, "lam")
    assert zeta.coeff(one) != s_hat(1, lam, zeta.coeff(two))
    assert zeta.coeff(one) == s_hat_invariance(1, lam, zeta.coeff(two))
    assert invariance_conditions(zeta, 1)


def test_built_vector_is_invariant():
    # choose f on v{2} freely, fill v{1} from the criterion, symmetric f on v{} and v{1,2}
    vt = VarTable.get(2)
    lam, y, z1, z2 = (RatF.var(vt, nm) for nm in ("lam", "y", "z1", "z2"))
    f = lam * z2 + y * z1 + 3
    v = TensorVector.from_subsets(2, {
        SubsetIndex.of(2, [2]): f,
        SubsetIndex.of(2, [1]): s_hat_invariance(1, lam, f),
        SubsetIndex.of(2, []): z1 + z2,
        SubsetIndex.of(2, [1, 2]): z1 * z2 * lam,
    })
    assert invariance_conditions(v, 1)
    assert s_tilde(1, v) == v


def test_render_wraps_sums_once():
    vt = VarTable.get(2)
    v = TensorVector.of(SubsetIndex.of(2, [1]), RatF.var(vt, "lam") + RatF.var(vt, "y"))
    assert v.render() == "(lam + y) v{1}"
