from __future__ import annotations

import json

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dynstab.symalg import Poly, RatF, VarTable
from dynstab.symalg.laurent import PoleAtInfinity, laurent_expand
from dynstab.symalg.linalg import RatMatrix, SingularMatrix, determinant, invert_matrix, solve_upper

VT = VarTable.get(2)
NAMES = ("lam", "y", "w", "z1", "z2")
SYMS = {nm: sympy.Symbol(nm) for nm in NAMES}


def _exps(d: dict[str, int]) -> list[int]:
    return [d.get(nm, 0) for nm in VT.names]


monomial = st.fixed_dictionaries({nm: st.integers(0, 2) for nm in NAMES})
polys = st.lists(st.tuples(st.integers(-5, 5), monomial), max_size=4).map(
    lambda ts: Poly.from_terms(VT, [(c, _exps(m)) for c, m in ts])
)
linear = st.lists(st.integers(-2, 2), min_size=len(NAMES) + 1, max_size=len(NAMES) + 1).map(
    lambda cs: sum((VT.poly(nm).scale(c) for nm, c in zip(NAMES, cs)), Poly.constant(VT, cs[-1]))
).filter(lambda p: not p.is_constant())
ratfs = st.tuples(st.lists(linear, max_size=2), st.lists(linear, max_size=2), st.integers(-3, 3).filter(bool)).map(
    lambda t: RatF.from_factors(VT, t[0], t[1], t[2])
)


def to_sympy(p: Poly) -> sympy.Expr:
    out = sympy.Integer(0)
    for exps, c in p.decoded():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for nm, e in zip(VT.names, exps):
            if e:
                term *= SYMS[nm] ** e
        out += term
    return sympy.expand(out)


def ratf_to_sympy(f: RatF) -> sympy.Expr:
    return to_sympy(f.num) / to_sympy(f.den)


# ring axioms ---------------------------------------------------------------

@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.constant(VT, 0)
    assert a * Poly.constant(VT, 1) == a


@given(polys, polys)
def test_poly_matches_sympy(a, b):
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))
    assert to_sympy(a - b) == sympy.expand(to_sympy(a) - to_sympy(b))


@given(polys, polys)
def test_divide_exact_recovers_factor(a, b):
    if b.is_zero():
        return
    assert (a * b).divide_exact(b) == a


def test_divide_exact_refuses_non_divisor():
    z1, z2 = VT.poly("z1"), VT.poly("z2")
    assert (z1 * z1 + Poly.constant(VT, 1)).divide_exact(z1 - z2) is None


@given(polys)
def test_poly_json_round_trip(a):
    assert Poly.from_json(json.loads(json.dumps(a.to_json())), VT) == a


@given(ratfs, ratfs, ratfs)
@settings(max_examples=60, deadline=None)
def test_ratf_field_axioms(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a
    if not b.is_zero():
        assert (a / b) * b == a


@given(ratfs, ratfs)
@settings(max_examples=60, deadline=None)
def test_ratf_arithmetic_agrees_with_sympy(a, b):
    sa, sb = ratf_to_sympy(a), ratf_to_sympy(b)
    assert sympy.cancel(ratf_to_sympy(a + b) - sa - sb) == 0
    assert sympy.cancel(ratf_to_sympy(a * b) - sa * sb) == 0
    assert (a == b) == (sympy.cancel(sa - sb) == 0)


def test_ratf_cancellation_is_canonical():
    z1, z2, y = (VT.poly(nm) for nm in ("z1", "z2", "y"))
    f = RatF.from_factors(VT, [z1 - z2, z1 + y], [z1 - z2])
    assert f == RatF.from_poly(z1 + y)
    assert f.canonical() == RatF.from_poly(z1 + y).canonical()
    g = RatF.from_poly(z1 * z1 - z2 * z2) / RatF.from_poly(z1 - z2)
    assert g.is_polynomial() and g.as_poly() == z1 + z2


def test_ratf_shift_and_swap():
    lam, y, z1, z2 = (RatF.var(VT, nm) for nm in ("lam", "y", "z1", "z2"))
    f = (lam + z1) / (lam - z2)
    assert f.shift_lambda(2) == (lam + 2 * y + z1) / (lam + 2 * y - z2)
    assert f.swap_z(1, 2) == (lam + z2) / (lam - z1)
    assert f.substitute({"lam": RatF.var(VT, "y")}) == (y + z1) / (y - z2)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        RatF.var(VT, "y") / RatF.zero(VT)


# Laurent expansion at w = infinity -------------------------------------------

def test_laurent_geometric_series():
    w, z1 = RatF.var(VT, "w"), RatF.var(VT, "z1")
    ser = laurent_expand(w / (w - z1), 4)
    for s in range(5):
        assert ser[s] == z1 ** s


def test_laurent_pole_raises():
    w = RatF.var(VT, "w")
    with pytest.raises(PoleAtInfinity):
        laurent_expand(w * w / (w - RatF.var(VT, "z1")), 2)


w_ratfs = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)).map(
    lambda t: RatF.from_factors(
        VT,
        [VT.poly("w") - VT.poly("z1").scale(t[0]) + VT.poly("y").scale(t[2])],
        [VT.poly("w") - VT.poly("z2").scale(t[1]) - VT.poly("y")],
    )
)


@given(w_ratfs, w_ratfs)
@settings(max_examples=40, deadline=None)
def test_laurent_is_ring_homomorphism(f, g):
    S = 3
    assert laurent_expand(f * g, S) == laurent_expand(f, S) * laurent_expand(g, S)
    assert laurent_expand(f + g, S) == laurent_expand(f, S) + laurent_expand(g, S)


# matrices --------------------------------------------------------------------

def _mat(entries):
    return RatMatrix(VT, [[RatF.from_poly(e) if isinstance(e, Poly) else RatF.const(VT, e) for e in row] for row in entries])


@given(st.lists(linear, min_size=4, max_size=4))
@settings(max_examples=30, deadline=None)
def test_matrix_inverse_verifies(es):
    M = _mat([[es[0], es[1]], [es[2], es[3]]])
    if determinant(M).is_zero():
        with pytest.raises(SingularMatrix):
            invert_matrix(M)
        return
    Minv = invert_matrix(M)
    assert (M @ Minv).is_identity()
    assert (Minv @ M).is_identity()


def test_three_by_three_inverse_against_sympy():
    lam, y, z1, z2 = (VT.poly(nm) for nm in ("lam", "y", "z1", "z2"))
    M = _mat([[lam, y, 0], [z1 - z2, lam + y, z1], [1, z2, y]])
    Minv = invert_matrix(M)
    assert (M @ Minv).is_identity()
    S = sympy.Matrix(3, 3, lambda i, j: ratf_to_sympy(M[i, j]))
    want = S.inv()
    for i in range(3):
        for j in range(3):
            assert sympy.cancel(ratf_to_sympy(Minv[i, j]) - want[i, j]) == 0


def test_solve_upper_respects_order():
    y, z1 = VT.poly("y"), VT.poly("z1")
    U = _mat([[z1, 0], [y, 1]])  # lower triangular; upper once rows are reversed
    B = _mat([[z1, z1 * y], [y + 1, 2]])
    X = solve_upper(U, B, order=[1, 0])
    assert U @ X == B
