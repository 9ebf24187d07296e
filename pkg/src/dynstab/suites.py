"""Named verification suites: lists of (check id, zero-argument check) pairs."""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

from . import cohomology, dynqg, rmatrix, weightfns, xibasis
from .combinatorics import Perm, SubsetIndex, all_perms, subsets
from .symalg import Poly, VarTable

Check = tuple[str, Callable[[], bool]]

# largest n each suite accepts without --unsafe
CAPS = {
    "recursion": 4, "orthogonality": 4, "interpolation": 4, "ybe": 3, "inversion": 4,
    "braid": 4, "stab-inverse": 3, "r-coincide": 3, "rll": 2, "determinant": 3,
    "eigen": 3, "offdiag": 3, "gz-cohomology": 3, "submodule": 3,
}
SUITES = tuple(CAPS) + ("all",)


@dataclass
class SuiteReport:
    suite: str
    n: int
    results: list[tuple[str, bool, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r[1] for r in self.results)

    def render(self) -> str:
        lines = [f"{cid:<48} {'pass' if ok else 'FAIL'} {dt:7.2f}s" for cid, ok, dt in self.results]
        passed = sum(1 for r in self.results if r[1])
        lines.append(f"{self.suite} n={self.n}: {passed}/{len(self.results)} checks pass")
        return "\n".join(lines)


def clear_caches() -> None:
    """Drop memoized weight functions, xi vectors, Stab matrices and L blocks.

    Used to time a check from a cold start.
    """
    for fn in (weightfns.weight, weightfns.diagram_weight, weightfns.restrict_cached, xibasis.xi,
               cohomology.stab_matrix, cohomology.geometric_R_block, dynqg.build_L,
               dynqg.l22_inverse_block, rmatrix._rmat_entries):
        fn.cache_clear()


def _all_true(report: dict) -> bool:
    return all(report.values())


def _interp(sigma: Perm, I: SubsetIndex, J: SubsetIndex) -> bool:
    return _all_true(weightfns.check_interpolation(sigma, I, J))


def random_vector(n: int, seed: int) -> rmatrix.TensorVector:
    """Vector with small random linear coefficients in lam, z, y."""
    vt = VarTable.get(n)
    rnd = random.Random(seed)
    names = ["lam", "y"] + [f"z{i}" for i in range(1, n + 1)]

    def coeff() -> Poly:
        p = Poly.constant(vt, rnd.randint(-4, 4))
        for nm in names:
            p = p + vt.poly(nm).scale(rnd.randint(-3, 3))
        return p

    return rmatrix.TensorVector(vt, n, {m: coeff() for m in range(1 << n)})


def _coxeter(n: int, seed: int) -> bool:
    return _all_true(rmatrix.check_coxeter(random_vector(n, seed)))


def _stab_xi(K: SubsetIndex) -> bool:
    return cohomology.stab(Perm.identity(K.n), xibasis.xi(K).vector) == cohomology.stab_of_xi_expected(K)


def _stab_nu_kappa(K: SubsetIndex) -> bool:
    return cohomology.check_stab_nu(cohomology.kappa(Perm.identity(K.n), K))


def _det_forms(n: int) -> bool:
    D = dynqg.det_element(n=n)
    return D == dynqg.scalar_op(n, dynqg.det_scalar(n)) and D == dynqg.det_element(n=n, form=2)


def _det_central(n: int) -> bool:
    D = dynqg.det_element(n=n)
    w2 = VarTable.get(n).poly("w2")
    ops = [dynqg.ltilde(i, j, n=n).subs_w(w2) for i in (1, 2) for j in (1, 2)]
    return all(D @ L == L @ D for L in ops)


def _gz(K: SubsetIndex, which: str, s: int | None) -> bool:
    return dynqg.check_gz_transport(cohomology.kappa(Perm.identity(K.n), K), which, s)


def _offdiag(K: SubsetIndex, which: str) -> bool:
    return dynqg.check_offdiag(cohomology.kappa(Perm.identity(K.n), K), which)


def checks(suite: str, n: int) -> list[Check]:
    out: list[Check] = []
    ident = Perm.identity(n)
    if suite == "recursion":
        for k in range(n + 1):
            for I in subsets(n, k):
                for a in range(1, n):
                    out.append((f"recursion {I} a={a}", partial(weightfns.check_recursion, I, a)))
    elif suite == "orthogonality":
        for k in range(n + 1):
            for J in subsets(n, k):
                for K in subsets(n, k):
                    out.append((f"orthogonality I {J.short()},{K.short()}", partial(weightfns.check_orthogonality_I, J, K)))
                    out.append((f"orthogonality II {J.short()},{K.short()}", partial(weightfns.check_orthogonality_II, J, K)))
    elif suite == "interpolation":
        for sigma in all_perms(n):
            for k in range(n + 1):
                for I in subsets(n, k):
                    for J in subsets(n, k):
                        out.append((f"interpolation {sigma} {I.short()} at {J.short()}", partial(_interp, sigma, I, J)))
    elif suite == "ybe":
        out.append(("dynamical Yang-Baxter", rmatrix.check_ybe))
    elif suite == "inversion":
        out.append(("inversion relation", rmatrix.check_inversion))
    elif suite == "braid":
        for seed in range(3):
            out.append((f"Coxeter relations n={n} seed={seed}", partial(_coxeter, n, seed)))
        for k in range(n + 1):
            for I in subsets(n, k):
                for i in range(1, n):
                    out.append((f"s~{i} xi{I.short()}", partial(xibasis.check_recursion, I, i)))
    elif suite == "stab-inverse":
        for k in range(n + 1):
            for K in subsets(n, k):
                out.append((f"nu Stab v{K.short()}", partial(cohomology.check_nu_stab, K)))
                out.append((f"Stab nu kappa{K.short()}", partial(_stab_nu_kappa, K)))
                out.append((f"Stab xi{K.short()}", partial(_stab_xi, K)))
    elif suite == "r-coincide":
        for sigma in all_perms(n):
            for a in range(1, n):
                out.append((f"R geometric=dynamical {sigma} a={a}", partial(cohomology.check_coincidence, sigma, a)))
    elif suite == "rll":
        out.append((f"RLL n={n}", partial(dynqg.check_RLL, n)))
    elif suite == "determinant":
        out.append((f"Det~ scalar, both forms n={n}", partial(_det_forms, n)))
        out.append((f"Det~ central n={n}", partial(_det_central, n)))
    elif suite == "eigen":
        for k in range(n + 1):
            for I in subsets(n, k):
                out.append((f"L~22 xi{I.short()}", partial(dynqg.check_eigen, I)))
    elif suite == "offdiag":
        for k in range(n + 1):
            for I in subsets(n, k):
                out.append((f"F~ xi{I.short()}", partial(dynqg.check_f_on_xi, I)))
                out.append((f"E~ xi{I.short()}", partial(dynqg.check_e_on_xi, I)))
                out.append((f"F on kappa{I.short()}", partial(_offdiag, I, "F")))
                out.append((f"E on kappa{I.short()}", partial(_offdiag, I, "E")))
    elif suite == "gz-cohomology":
        for k in range(n + 1):
            for I in subsets(n, k):
                for which in ("L22", "Det"):
                    out.append((f"{which} transport kappa{I.short()}", partial(_gz, I, which, None)))
                    out.append((f"{which}_{n + 2} transport kappa{I.short()}", partial(_gz, I, which, n + 2)))
    elif suite == "submodule":
        out.append((f"symmetric classes closed n={n}", partial(dynqg.check_submodule, n)))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return out


def _timed(check: Callable[[], bool]) -> tuple[bool, float]:
    t = time.perf_counter()
    try:
        ok = bool(check())
    except Exception:  # a crash inside a check counts as a failure
        ok = False
    return ok, time.perf_counter() - t


def run_suite(suite: str, n: int, jobs: int = 1) -> SuiteReport:
    names = [s for s in CAPS if s != "all"] if suite == "all" else [suite]
    report = SuiteReport(suite, n)
    todo: list[Check] = []
    for name in names:
        todo += checks(name, min(n, CAPS[name]) if suite == "all" else n)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_timed, [c for _, c in todo]))
    else:
        results = [_timed(c) for _, c in todo]
    report.results = [(cid, ok, dt) for (cid, _), (ok, dt) in zip(todo, results)]
    return report
