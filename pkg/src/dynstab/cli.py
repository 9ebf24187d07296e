"""dynstab command line: compute objects and run verification suites."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .combinatorics import Perm, SubsetIndex

OBJECTS = ("weight", "wtilde", "wplus", "wminus", "kappa", "xi", "rmatrix", "loperator", "det")
FORMATS = ("text", "unicode", "json", "latex")


class UsageError(Exception):
    pass


def _max_n() -> int:
    try:
        return int(os.environ.get("DYNSTAB_MAX_N", "4"))
    except ValueError:
        raise UsageError("DYNSTAB_MAX_N must be an integer")


def _params(args) -> tuple[int, Perm, SubsetIndex | None]:
    n = args.n
    if n < 1 or (n > _max_n() and not args.unsafe):
        raise UsageError(f"--n must be between 1 and {_max_n()} (set DYNSTAB_MAX_N or pass --unsafe)")
    try:
        sigma = Perm.parse(args.sigma) if args.sigma else Perm.identity(n)
    except ValueError as e:
        raise UsageError(str(e))
    if sigma.n != n:
        raise UsageError(f"--sigma must be a permutation of 1..{n}")
    I = None
    if args.I is not None or args.k is not None:
        try:
            I = SubsetIndex.parse(args.I or "", n)
        except ValueError as e:
            raise UsageError(str(e))
        if args.k is not None and I.k != args.k:
            raise UsageError(f"--I has {I.k} elements but --k is {args.k}")
    return n, sigma, I


def _need_I(I):
    if I is None:
        raise UsageError("this object needs --I (or --k 0)")
    return I


def _emit_vector(v, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({str(I): c.to_json() for I, c in sorted(v.subsets().items(), key=lambda kv: kv[0].colex_key())},
                          indent=2, sort_keys=True)
    return v.render(fmt)


def compute(args) -> str:
    from . import cohomology, dynqg, rmatrix, weightfns, xibasis
    from .symalg import VarTable

    n, sigma, I = _params(args)
    fmt = args.format
    obj = args.object
    if obj in ("weight", "wtilde", "wplus", "wminus"):
        I = _need_I(I)
        if obj == "weight":
            f = weightfns.weight(sigma, I)
            if fmt == "json":
                return json.dumps({"sigma": str(sigma), "I": str(I), "value": f.value.to_json()}, indent=2, sort_keys=True)
        else:
            f = weightfns.modified({"wtilde": "tilde", "wplus": "plus", "wminus": "minus"}[obj], sigma, I)
            if fmt == "json":
                return json.dumps({"variant": f.variant, "I": str(I), "value": f.value.to_json()}, indent=2, sort_keys=True)
        return f.render(fmt)
    if obj == "kappa":
        c = cohomology.kappa(sigma, _need_I(I))
        return json.dumps(c.to_json(), indent=2, sort_keys=True) if fmt == "json" else c.render(fmt)
    if obj == "xi":
        v = xibasis.xi(_need_I(I)).vector
        return _emit_vector(v, fmt)
    if obj == "rmatrix":
        vt = VarTable.get(max(n, 2))
        M = rmatrix.rmat(vt.poly("lam"), vt.poly("z1") - vt.poly("z2"))
        if fmt == "json":
            return json.dumps([[x.to_json() for x in row] for row in M.rows], indent=2, sort_keys=True)
        return M.render(fmt)
    if obj in ("loperator", "det"):
        if obj == "det":
            op = dynqg.det_element(sigma)
            if args.trunc is not None:
                op = op.laurent(args.trunc)[args.trunc]
            return json.dumps(op.to_json(), indent=2, sort_keys=True) if fmt == "json" else op.render(fmt)
        parts = {}
        for i in (1, 2):
            for j in (1, 2):
                op = dynqg.ltilde(i, j, sigma)
                if args.trunc is not None:
                    op = op.laurent(args.trunc)[args.trunc]
                parts[f"L~{i}{j}"] = op
        if fmt == "json":
            return json.dumps({k: v.to_json() for k, v in parts.items()}, indent=2, sort_keys=True)
        return "\n".join(f"{k}:\n{v.render(fmt)}" for k, v in parts.items())
    raise UsageError(f"unknown object {obj}")


def verify(args) -> int:
    from .suites import CAPS, run_suite

    n = args.n
    cap = _max_n() if args.suite == "all" else min(CAPS[args.suite], _max_n())
    if n < 1 or (n > cap and not args.unsafe):
        raise UsageError(f"suite {args.suite} is capped at n={cap}; pass --unsafe to override")
    report = run_suite(args.suite, n, jobs=args.jobs)
    print(report.render())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    p = argparse.ArgumentParser(prog="dynstab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="render one object")
    c.add_argument("object", choices=OBJECTS)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int)
    c.add_argument("--sigma", help="one-line notation, e.g. 2,1,3")
    c.add_argument("--I", help="comma-separated subset, e.g. 1,3")
    c.add_argument("--format", choices=FORMATS, default="text")
    c.add_argument("--trunc", type=int, help="Laurent coefficient index for loperator/det")
    c.add_argument("--unsafe", action="store_true")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--unsafe", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            print(compute(args))
            return 0
        return verify(args)
    except UsageError as e:
        print(f"dynstab: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
