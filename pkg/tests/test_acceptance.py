"""Acceptance criteria 1-9, each timed from cold caches against its runtime limit.

Every criterion prints one line; under pytest the lines are also collected into
an "acceptance criteria" section of the terminal summary.  Running this file
directly executes the same checks without pytest.
"""
from __future__ import annotations

import sys
import time
from pathlib import Path
from typing import Callable

import pytest

from dynstab import cohomology, dynqg, rmatrix, weightfns, xibasis
from dynstab.combinatorics import Perm, SubsetIndex, all_perms, subsets
from dynstab.rmatrix import TensorVector
from dynstab.suites import clear_caches, random_vector
from dynstab.symalg import RatF, VarTable

Failures = list[str]


def _canon_eq(label: str, got: RatF, want: RatF, bad: Failures) -> None:
    if got.canonical() != want.canonical():
        bad.append(f"{label}: {got.canonical()} != {want.canonical()}")


def _vec_eq(label: str, got: TensorVector, want: TensorVector, bad: Failures) -> None:
    for m in set(got.coeffs) | set(want.coeffs):
        _canon_eq(f"{label} [{SubsetIndex.from_mask(got.m, m).short()}]", got.coeff(m), want.coeff(m), bad)


def _sym(n: int):
    vt = VarTable.get(n)
    r = lambda nm: RatF.var(vt, nm)
    return vt, r("lam"), r("w"), r("y"), r("t1"), [None] + [r(f"z{i}") for i in range(1, n + 1)]


def _prod(vt: VarTable, fs) -> RatF:
    out = RatF.const(vt, 1)
    for f in fs:
        out = out * f
    return out


# --------------------------------------------------------------------------
# criterion bodies: each returns the list of failing labels


def crit1_examples() -> Failures:
    bad: Failures = []
    vt, lam, w, y, t, z = _sym(2)
    ident, s = Perm.identity(2), Perm.parse("2,1")
    one, two = SubsetIndex.of(2, [1]), SubsetIndex.of(2, [2])
    table = {
        (ident, one): y * (lam + t - z[1] + y) * (t - z[2]),
        (ident, two): y * (t - z[1] + y) * (lam + t - z[2]),
        (s, one): y * (lam + t - z[1]) * (t - z[2] + y),
        (s, two): y * (t - z[1]) * (lam + t - z[2] + y),
    }
    for (sigma, I), want in table.items():
        _canon_eq(f"W_{sigma},{I}", RatF.from_poly(weightfns.weight(sigma, I).value), want, bad)

    for n in (1, 2, 3, 4):
        vt, lam, w, y, t, z = _sym(n)
        for i in range(1, n + 1):
            K = SubsetIndex.of(n, [i])
            general = y * _prod(vt, [t - z[a] + y for a in range(1, i)]) * (lam + t - z[i] + (n - i) * y) \
                * _prod(vt, [t - z[a] for a in range(i + 1, n + 1)])
            _canon_eq(f"W_{{{i}}} n={n}", RatF.from_poly(weightfns.weight(Perm.identity(n), K).value), general, bad)
            minus = -_prod(vt, [t - z[a] for a in range(1, i)]) * (-lam + t - z[i] + (i - n + 1) * y) \
                * _prod(vt, [t - z[a] + y for a in range(i + 1, n + 1)])
            _canon_eq(f"W-_{{{i}}} n={n}", weightfns.w_minus(K).value, minus, bad)
            plus = _prod(vt, [t - z[a] + y for a in range(1, i)]) * (lam + t - z[i] + (n - i) * y) \
                * _prod(vt, [t - z[a] for a in range(i + 1, n + 1)]) / ((lam + (n - i) * y) * (lam + (n - i - 1) * y))
            _canon_eq(f"W+_{{{i}}} n={n}", weightfns.w_plus(Perm.identity(n), K).value, plus, bad)

    vt, lam, w, y, t, z = _sym(2)
    _vec_eq("xi{1} n=2", xibasis.xi(one).vector, TensorVector.of(one, lam), bad)
    _vec_eq("xi{2} n=2", xibasis.xi(two).vector, TensorVector.from_subsets(2, {
        one: -(lam + z[1] - z[2]) * y / (z[1] - z[2] - y),
        two: (lam - y) * (z[1] - z[2]) / (z[1] - z[2] - y),
    }), bad)
    vt, lam, w, y, t, z = _sym(3)
    S = {i: SubsetIndex.of(3, [i]) for i in (1, 2, 3)}
    _vec_eq("xi{1} n=3", xibasis.xi(S[1]).vector, TensorVector.of(S[1], lam + y), bad)
    _vec_eq("xi{2} n=3", xibasis.xi(S[2]).vector, TensorVector.from_subsets(3, {
        S[1]: -(lam + z[1] - z[2] + y) * y / (z[1] - z[2] - y),
        S[2]: lam * (z[1] - z[2]) / (z[1] - z[2] - y),
    }), bad)
    _vec_eq("xi{3} n=3", xibasis.xi(S[3]).vector, TensorVector.from_subsets(3, {
        S[1]: -(lam + z[1] - z[3] + y) * y / (z[1] - z[3] - y),
        S[2]: -(lam + z[2] - z[3]) * (z[1] - z[3]) * y / ((z[1] - z[3] - y) * (z[2] - z[3] - y)),
        S[3]: (lam - y) * (z[1] - z[3]) * (z[2] - z[3]) / ((z[1] - z[3] - y) * (z[2] - z[3] - y)),
    }), bad)

    vt, lam, w, y, t, z = _sym(1)
    L = {(i, j): dynqg.L_entry(Perm.identity(1), i, j) for i in (1, 2) for j in (1, 2)}
    v1, v2 = TensorVector.basis(vt, 1, 1), TensorVector.basis(vt, 1, 0)
    den = lam * (w - z[1] - y)
    n1 = {
        "L11 v1": (L[1, 1].apply(v1), v1),
        "L11 v2": (L[1, 1].apply(v2), v2.scale((lam + y) * (w - z[1]) / den)),
        "L12 v1": (L[1, 2].apply(v1), v2.scale(-(lam + w - z[1]) * y / den)),
        "L12 v2": (L[1, 2].apply(v2), TensorVector(vt, 1)),
        "L21 v1": (L[2, 1].apply(v1), TensorVector(vt, 1)),
        "L21 v2": (L[2, 1].apply(v2), v1.scale(-(lam - w + z[1]) * y / den)),
        "L22 v1": (L[2, 2].apply(v1), v1.scale((lam - y) * (w - z[1]) / den)),
        "L22 v2": (L[2, 2].apply(v2), v2),
    }
    for label, (got, want) in n1.items():
        _vec_eq(f"n=1 {label}", got, want, bad)
    hv = RatF.var(vt, "y")
    for m, h in ((1, 1), (0, -1)):
        f = dynqg.ShiftOp.multiplication(1, lambda hh: lam * lam + hh * hv * lam)
        _vec_eq(f"n=1 f(lam,yh) on mask {m}", f.apply(TensorVector.basis(vt, 1, m)),
                TensorVector.basis(vt, 1, m).scale(lam * lam + h * y * lam), bad)

    vt, lam, w, y, t, z = _sym(2)
    L22 = dynqg.L_entry(Perm.identity(2), 2, 2)
    e = lambda m: TensorVector.basis(vt, 2, m)
    v11, v12, v21, v22 = e(0b11), e(0b01), e(0b10), e(0b00)
    _vec_eq("n=2 L22 v11", L22.apply(v11), v11.scale(
        (lam - y) * (lam - 2 * y) * (w - z[1]) * (w - z[2]) / (lam * (lam - y) * (w - z[1] - y) * (w - z[2] - y))), bad)
    _vec_eq("n=2 L22 v12", L22.apply(v12), v12.scale(lam * (w - z[1]) / ((lam + y) * (w - z[1] - y))), bad)
    _vec_eq("n=2 L22 v21", L22.apply(v21),
            v12.scale((lam + y - w + z[1]) * y / ((lam + y) * (w - z[1] - y)) * (lam + w - z[2]) * y / (lam * (w - z[2] - y)))
            + v21.scale((lam - y) * (w - z[2]) / (lam * (w - z[2] - y))), bad)
    _vec_eq("n=2 L22 v22", L22.apply(v22), v22, bad)
    return bad


def crit2_recursion() -> Failures:
    return [f"{I} a={a}" for n in (2, 3) for k in range(n + 1) for I in subsets(n, k)
            for a in range(1, n) if not weightfns.check_recursion(I, a)]


def crit3_orthogonality() -> Failures:
    bad: Failures = []
    for n in (1, 2, 3):
        for k in range(n + 1):
            for J in subsets(n, k):
                for K in subsets(n, k):
                    if not weightfns.check_orthogonality_I(J, K):
                        bad.append(f"I {J},{K}")
                    if not weightfns.check_orthogonality_II(J, K):
                        bad.append(f"II {J},{K}")
    return bad


def _interp(sigma: Perm, I: SubsetIndex, J: SubsetIndex, bad: Failures) -> None:
    rep = weightfns.check_interpolation(sigma, I, J)
    bad.extend(f"{sigma} {I} at {J}: {key}" for key, ok in rep.items() if not ok)


def crit4_interpolation() -> Failures:
    bad: Failures = []
    for n in (1, 2, 3):
        for sigma in all_perms(n):
            for k in range(n + 1):
                for I in subsets(n, k):
                    for J in subsets(n, k):
                        _interp(sigma, I, J, bad)
    for sigma in (Perm.identity(4), Perm.longest(4), Perm.parse("2,4,1,3")):
        for I in subsets(4, 2):
            for J in subsets(4, 2):
                _interp(sigma, I, J, bad)
    return bad


def crit5_rmatrix() -> Failures:
    bad: Failures = []
    if not rmatrix.check_inversion():
        bad.append("inversion")
    if not rmatrix.check_ybe():
        bad.append("dynamical YBE")
    for seed in range(3):
        rep = rmatrix.check_coxeter(random_vector(3, seed))
        bad.extend(f"Coxeter seed={seed} {key}" for key, ok in rep.items() if not ok)
    for n in (2, 3):
        for sigma in all_perms(n):
            for a in range(1, n):
                if not cohomology.check_coincidence(sigma, a):
                    bad.append(f"coincidence {sigma} a={a}")
    vt, lam, w, y, t, z = _sym(2)
    M = cohomology.geometric_R(Perm.identity(2), Perm.parse("2,1"))
    d = z[1] - z[2]
    zero, one = RatF.zero(vt), RatF.const(vt, 1)
    want = [
        [one, zero, zero, zero],
        [zero, (lam + y) * d / (lam * (d - y)), -(lam + d) * y / (lam * (d - y)), zero],
        [zero, -(lam - d) * y / (lam * (d - y)), (lam - y) * d / (lam * (d - y)), zero],
        [zero, zero, zero, one],
    ]
    for i in range(4):
        for j in range(4):
            _canon_eq(f"R_id,s [{i},{j}]", M[i, j], want[i][j], bad)
    return bad


def crit6_stab_inverse() -> Failures:
    bad: Failures = []
    for n in (1, 2, 3):
        ident = Perm.identity(n)
        for k in range(n + 1):
            for K in subsets(n, k):
                if not cohomology.check_nu_stab(K):
                    bad.append(f"nu Stab v{K}")
                if not cohomology.check_stab_nu(cohomology.kappa(ident, K)):
                    bad.append(f"Stab nu kappa{K}")
                if cohomology.stab(ident, xibasis.xi(K).vector) != cohomology.stab_of_xi_expected(K):
                    bad.append(f"Stab xi{K}")
    return bad


def crit7_quantum_group() -> Failures:
    bad: Failures = []
    for n in (1, 2):
        if not dynqg.check_RLL(n):
            bad.append(f"RLL n={n}")
        D = dynqg.det_element(n=n)
        if D != dynqg.scalar_op(n, dynqg.det_scalar(n)):
            bad.append(f"Det form 1 n={n}")
        if dynqg.det_element(n=n, form=2) != D:
            bad.append(f"Det form 2 n={n}")
        w2 = VarTable.get(n).poly("w2")
        for i in (1, 2):
            for j in (1, 2):
                L = dynqg.ltilde(i, j, n=n).subs_w(w2)
                if D @ L != L @ D:
                    bad.append(f"Det central vs L~{i}{j} n={n}")
    for n in (1, 2, 3):
        vt = VarTable.get(n)
        y, lam = RatF.var(vt, "y"), RatF.var(vt, "lam")
        if dynqg.c_F(vt) != -y or dynqg.c_E(vt) != -y / ((lam - y) * (lam - 2 * y)):
            bad.append(f"c_F/c_E n={n}")
        for k in range(n + 1):
            for I in subsets(n, k):
                if not dynqg.check_eigen(I):
                    bad.append(f"eigen xi{I}")
                if not dynqg.check_f_on_xi(I):
                    bad.append(f"F~ xi{I}")
                if not dynqg.check_e_on_xi(I):
                    bad.append(f"E~ xi{I}")
    return bad


def crit8_transport() -> Failures:
    bad: Failures = []
    for n in (1, 2, 3):
        ident = Perm.identity(n)
        S = n + 2
        for k in range(n + 1):
            for I in subsets(n, k):
                c = cohomology.kappa(ident, I)
                for which in ("L22", "Det"):
                    if not dynqg.check_gz_transport(c, which):
                        bad.append(f"{which} transport kappa{I}")
                    if not dynqg.check_gz_transport(c, which, S):
                        bad.append(f"{which}_{S} transport kappa{I}")
                for which in ("F", "E"):
                    if not dynqg.check_offdiag(c, which):
                        bad.append(f"{which} two routes kappa{I}")
    if not dynqg.check_submodule(2):
        bad.append("submodule n=2")
    return bad


def _property_tests() -> list[tuple[str, Callable[[], None]]]:
    here = str(Path(__file__).resolve().parent)
    if here not in sys.path:
        sys.path.insert(0, here)
    import test_cohomology as tc
    import test_combinatorics as tk
    import test_rmatrix as tr
    import test_symalg as ts
    import test_weightfns as tw
    import test_xibasis as tx

    out = [
        ("ring axioms", ts.test_poly_ring_axioms),
        ("field axioms", ts.test_ratf_field_axioms),
        ("arithmetic vs sympy", ts.test_ratf_arithmetic_agrees_with_sympy),
        ("Laurent homomorphism", ts.test_laurent_is_ring_homomorphism),
        ("matrix inverse", ts.test_matrix_inverse_verifies),
        ("partial order axioms", tk.test_sigma_order_is_partial_order),
        ("linear extension", tk.test_sigma_order_is_linear_extension),
        ("geometric R cocycle", tc.test_geometric_R_cocycle),
        ("Coxeter relations", tr.test_coxeter_relations_n3),
        ("s^ quadratic identity", tr.test_s_hat_quadratic_relation),
        ("invariance criteria", tr.test_invariance_conditions_characterize_invariance),
        ("restriction routes", tw.test_termwise_restriction_equals_expanded),
        ("xi expansion round trip", tx.test_expand_in_xi_round_trip),
    ]
    for n in (1, 2, 3):
        out.append((f"Stab triangular n={n}", lambda n=n: tc.test_stab_triangular_all_sigma(n)))
    out.append(("Stab triangular n=4 spot", tc.test_stab_triangular_n4_spot))
    for n in (1, 2, 3, 4):
        out.append((f"xi triangular n={n}", lambda n=n: tx.test_triangular_with_predicted_diagonal(n)))
    return out


def crit9_properties() -> Failures:
    bad: Failures = []
    for name, fn in _property_tests():
        try:
            fn()
        except Exception as exc:  # hypothesis re-raises the minimal failing example
            bad.append(f"{name}: {type(exc).__name__}: {exc}".splitlines()[0])
    return bad


CRITERIA: list[tuple[int, str, float | None, Callable[[], Failures]]] = [
    (1, "worked examples, canonical strings", 1.0, crit1_examples),
    (2, "recursion n=2,3", 10.0, crit2_recursion),
    (3, "orthogonality I/II n<=3", 30.0, crit3_orthogonality),
    (4, "interpolation n<=3 + n=4,k=2 spot", 120.0, crit4_interpolation),
    (5, "R-matrix: inversion, YBE, Coxeter, coincidence", 60.0, crit5_rmatrix),
    (6, "Stab inverse and Stab(xi)", 60.0, crit6_stab_inverse),
    (7, "RLL, determinant, eigen, F~/E~", 300.0, crit7_quantum_group),
    (8, "cohomology transport and submodule", 300.0, crit8_transport),
    (9, "property suites", None, crit9_properties),
]


def run_criterion(num: int) -> tuple[bool, str, Failures]:
    _, title, limit, body = CRITERIA[num - 1]
    clear_caches()
    t0 = time.perf_counter()
    bad = body()
    dt = time.perf_counter() - t0
    in_time = limit is None or dt < limit
    ok = not bad and in_time
    budget = f"limit {limit:g}s" if limit is not None else "no limit"
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {dt:7.2f}s ({budget})  {title}"
    if bad:
        line += f"  [{len(bad)} failing: {bad[0]}]"
    elif not in_time:
        line += "  [over time limit]"
    return ok, line, bad


@pytest.mark.parametrize("num", [c[0] for c in CRITERIA])
def test_criterion(num, acceptance):
    ok, line, bad = run_criterion(num)
    print(line)
    acceptance.append(line)
    assert not bad, bad[:10]
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(c[0]) for c in CRITERIA]
    for _, line, _ in results:
        print(line)
    sys.exit(0 if all(ok for ok, _, _ in results) else 1)
