"""Command line front end: verification suites, Gram tables, Mehler reports, dumps.

Exit status is 0 when every requested identity holds, 1 when one fails (the
first counterexample goes to stderr) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__, mehler, suites
from .errors import SuperharmError

VERIFY = ("sl2", "fischer", "adjoints", "orthogonality", "pizzetti", "dunkl", "kernels",
          "fermionic", "nogo", "appendix", "cartesian")


class UsageError(Exception):
    pass


def _point(args, default_grid):
    if args.m is None and args.n is None:
        return list(default_grid)
    if args.m is None or args.n is None:
        raise UsageError("--m and --n must be given together")
    return [(args.m, args.n)]


def _verify_tasks(args):
    """(callable, kwargs) per grid point so that they can run independently."""
    name = args.target
    deg = args.deg
    tasks = []
    if name == "sl2":
        for p in _point(args, suites.SL2_GRID):
            tasks.append((suites.suite_sl2, {"grid": [p], "deg": 8 if deg is None else deg}))
    elif name == "fischer":
        for p in _point(args, suites.FISCHER_GRID):
            tasks.append((suites.suite_fischer, {"grid": [p], "deg": 8 if deg is None else deg}))
    elif name == "pizzetti":
        for p in _point(args, suites.PIZZETTI_GRID):
            tasks.append((suites.suite_integration, {"grid": [p], "deg": 8 if deg is None else deg,
                                                     "seed": args.seed}))
    elif name == "adjoints":
        inner = args.inner
        if inner == "f":
            ns = (args.n,) if args.n is not None else (1, 2, 3)
            tasks.append((suites.suite_adjoints, {"grid": (), "ns": ns}))
        else:
            for p in _point(args, [(3, 1)]):
                tasks.append((suites.suite_adjoints, {"grid": [p], "deg": 6 if deg is None else deg, "ns": ()}))
    elif name == "orthogonality":
        for p in _point(args, suites.INNER2_GRID):
            tasks.append((suites.suite_inner, {"grid": [p], "kmax": 4 if deg is None else deg,
                                               "bij": ((p[0], p[1], 3, 4 if deg is None else deg),)
                                               if args.inner == "1" else ()}))
    elif name == "dunkl":
        tasks.append((suites.suite_dunkl, {"seed": args.seed, "deg": 6 if deg is None else deg}))
    elif name == "kernels":
        if args.m is None and args.n is not None:
            tasks.append((suites.suite_kernels, {"ns": (args.n,), "grid": ()}))
        else:
            grid = _point(args, suites.KERNEL_GRID)
            tasks.append((suites.suite_kernels, {"ns": (1, 2, 3) if args.m is None else (),
                                                 "grid": grid, "kmax": 3 if deg is None else deg}))
    elif name == "fermionic":
        tasks.append((suites.suite_fermionic, {"ns": (args.n,) if args.n is not None else (1, 2, 3)}))
    elif name == "nogo":
        tasks.append((suites.suite_nogo, {"grid": _point(args, suites.NOGO_GRID)}))
    elif name == "appendix":
        tasks.append((suites.suite_appendix, {"top": 8 if deg is None else deg}))
    elif name == "cartesian":
        tasks.append((suites.suite_cartesian, {"grid": _point(args, [(1, 1), (2, 1)]),
                                               "total": 4 if deg is None else deg}))
    return tasks


def _call(task):
    fn, kw = task
    return fn(**kw)


def _run_tasks(tasks, jobs):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_call, tasks))
    else:
        parts = [_call(t) for t in tasks]
    return [c for part in parts for c in part]


def _params(args):
    keys = ("m", "n", "deg", "inner", "slow", "jmax")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _report(suite, args, checks):
    return {"suite": suite, "params": _params(args), "checks": checks, "seed": args.seed, "version": __version__}


def _emit(text, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _emit_report(rep, args):
    if args.format == "json":
        _emit(json.dumps(rep, indent=1, default=str), args)
    else:
        lines = [f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}" for c in rep["checks"]]
        _emit("\n".join(lines), args)
    failed = [c for c in rep["checks"] if not c["pass"]]
    if failed:
        print(f"first failure: {failed[0]['name']}: {failed[0]['witness']}", file=sys.stderr)
        return 1
    return 0


# -- gram ----------------------------------------------------------------------------------


def _gram(args):
    from .products import bijnaorth_report, cartesian_gram, fermionic_gram, spherical_gram_inner2
    kind = args.target
    if kind == "fermionic":
        n = 2 if args.n is None else args.n
        rep = fermionic_gram(n)
    elif kind == "cartesian":
        m = 2 if args.m is None else args.m
        n = 1 if args.n is None else args.n
        rep = cartesian_gram(m, n, 4 if args.deg is None else args.deg)
    else:
        m = 3 if args.m is None else args.m
        n = 1 if args.n is None else args.n
        kmax = 4 if args.deg is None else args.deg
        jmax = 3 if args.jmax is None else args.jmax
        if args.inner == "1":
            rep = bijnaorth_report(m, n, jmax, kmax)["gram"]
        else:
            rep = spherical_gram_inner2(m, n, jmax, kmax).dense()
    ok = True
    if args.predict:
        if rep.diagonal_prediction is None:
            raise UsageError("no diagonal prediction is available for this Gram matrix")
        ok = rep.off_diagonal_zero and rep.diagonal_matches()
    if args.format == "csv":
        _emit(rep.to_csv(), args)
    elif args.format == "json":
        d = rep.to_dict()
        d.update({"kind": kind, "params": _params(args), "seed": args.seed, "version": __version__})
        _emit(json.dumps(d, indent=1), args)
    else:
        lines = []
        for i, l in enumerate(rep.labels):
            pred = f"  predicted {rep.diagonal_prediction[i]}" if rep.diagonal_prediction is not None else ""
            lines.append(f"{l}: {rep.matrix[i][i]}{pred}")
        lines.append(f"off-diagonal zero: {rep.off_diagonal_zero}")
        _emit("\n".join(lines), args)
    if not ok:
        print("Gram matrix does not match its diagonal prediction", file=sys.stderr)
        return 1
    return 0


# -- mehler --------------------------------------------------------------------------------


def _mehler(args):
    kind = args.target
    if kind == "fermionic":
        ns = [args.n] if args.n is not None else ([1, 2, 3] if args.slow else [1, 2])
        reps = []
        for n in ns:
            reps.append(mehler.mehler_fermionic_verify(n))
            reps.extend(mehler.fourier_point_verify(n, s) for s in (1, -1))
    elif kind == "super":
        grid = [(args.m, args.n, 6 if args.deg is None else args.deg)] if args.m is not None else \
            suites.MEHLER_SUPER_GRID
        if args.m is not None and args.n is None:
            raise UsageError("--m and --n must be given together")
        reps = [mehler.mehler_super_verify(m, n, D) for m, n, D in grid]
    else:
        ms = [args.m] if args.m is not None else [3, 4, 5]
        D = 6 if args.deg is None else args.deg
        reps = [mehler.mehler_classical_verify(m, d) for m in ms for d in range(0, D + 1, 2)]
    checks = [suites.check(f"{r['identity']} {tuple(r['dims'])}" + ("" if r["degree"] is None else f" D={r['degree']}"),
                           r["equal"], r["first_diff"]) for r in reps]
    rep = _report(f"mehler {kind}", args, checks)
    rep["reports"] = reps
    return _emit_report(rep, args)


# -- dump ----------------------------------------------------------------------------------


def _dump(args):
    from .harmonics import orthogonal_fermionic_basis, super_harmonic_basis
    from .hermite import spherical_hermite
    m = 3 if args.m is None else args.m
    n = 1 if args.n is None else args.n
    k = 2 if args.deg is None else args.deg
    items = []
    if args.target == "harmonics":
        if m == 0:
            for H, nrm in orthogonal_fermionic_basis(n, k):
                items.append({"label": None, "poly": str(H), "normsq": str(nrm)})
        else:
            for b in super_harmonic_basis(m, n, k):
                items.append({"label": list(b.label), "poly": str(b.assemble()),
                              "predicted_ss_norm": str(b.predicted_ss_norm())})
    elif args.target == "hermite":
        for kk in range(k + 1):
            for b in super_harmonic_basis(m, n, kk):
                for j in range((k - kk) // 2 + 1):
                    phi = spherical_hermite(j, b)
                    items.append({"j": j, "k": kk, "label": list(b.label), "poly": str(phi.poly),
                                  "gaussian": "exp(-R^2/2)"})
    else:
        K = mehler.fermionic_kernel(n, k) if m == 0 else mehler.super_kernel(m, n, k)
        items.append({"m": m, "n": n, "k": k, "kernel": str(K)})
    if args.format == "json":
        _emit(json.dumps({"dump": args.target, "params": _params(args), "items": items,
                          "version": __version__}, indent=1), args)
    elif args.format == "csv":
        keys = list(items[0]) if items else []
        lines = [",".join(keys)] + [",".join(json.dumps(str(it[kk])) for kk in keys) for it in items]
        _emit("\n".join(lines), args)
    else:
        _emit("\n".join("  ".join(f"{kk}={v}" for kk, v in it.items()) for it in items), args)
    return 0


# -- parser --------------------------------------------------------------------------------


def _common(p):
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--deg", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--inner", choices=("1", "2", "f"), default="2")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--slow", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--predict", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="superharm", description="Exact harmonic analysis on superspace")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, choices in (("verify", VERIFY), ("gram", ("cartesian", "spherical", "fermionic")),
                         ("mehler", ("fermionic", "super", "classical")),
                         ("dump", ("harmonics", "hermite", "kernel"))):
        p = sub.add_parser(cmd)
        p.add_argument("target", choices=choices)
        _common(p)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    random.seed(args.seed)
    try:
        if args.command == "verify":
            checks = _run_tasks(_verify_tasks(args), args.jobs)
            return _emit_report(_report(f"verify {args.target}", args, checks), args)
        if args.command == "gram":
            return _gram(args)
        if args.command == "mehler":
            return _mehler(args)
        return _dump(args)
    except (UsageError, SuperharmError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


__all__ = ["build_parser", "main", "run"]
