"""Command-line front end: ``mixvol <command> ...``.

Every command prints sorted-key JSON on stdout that carries the method, the
tolerance, the seed, and an ``anchor`` naming the statement it reproduces.
Exit codes: 0 success, 1 a check whose condition is not met, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from . import linalg as la
from .polytope import DEFAULT_TOL, GeometryError

EXIT_OK, EXIT_NOT_MET, EXIT_INPUT = 0, 1, 2


def default_tol() -> float:
    raw = os.environ.get("MIXVOL_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise io.InputError(f"MIXVOL_TOL must be a number, got {raw!r}") from None
    if not tol > 0:
        raise io.InputError("MIXVOL_TOL must be positive")
    return tol


def _vector(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(la.to_fraction(c) for c in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise io.InputError(f"bad vector {text!r}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return la.to_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise io.InputError(f"bad number {text!r}") from exc


def _write_csv(path, header, rows) -> None:
    if not path:
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([str(c) if isinstance(c, Fraction) else c for c in row])


def _emit(payload: dict, args) -> None:
    payload.setdefault("seed", getattr(args, "seed", None))
    sys.stdout.write(io.dumps(payload) + "\n")


# -- commands -----------------------------------------------------------------

def cmd_compute(args) -> int:
    from .mixed import METHOD_ALIASES, MethodNotApplicable, applicable_methods, compute, relative_gap

    bodies = [io.load_body(b) for b in args.bodies]
    tol = args.tol if args.tol is not None else default_tol()
    if args.method == "all":
        methods = applicable_methods(bodies) if len(bodies) == bodies[0].dim else []
    else:
        methods = [METHOD_ALIASES[args.method]]
    if len(bodies) != bodies[0].dim:
        raise GeometryError(f"mixed volume in R^{bodies[0].dim} takes {bodies[0].dim} bodies, "
                            f"got {len(bodies)}")
    results = {}
    for m in methods:
        try:
            results[m] = compute(bodies, m).value
        except MethodNotApplicable as exc:
            raise io.InputError(str(exc)) from exc
    vals = list(results.values())
    gap = max((relative_gap(a, b) for i, a in enumerate(vals) for b in vals[i + 1:]), default=0.0)
    first = methods[0]
    _emit({
        "anchor": "mixed_volume",
        "method": first,
        "value": results[first],
        "value_float": float(results[first]),
        "results": results,
        "discrepancy": gap,
        "tolerance": tol,
    }, args)
    return EXIT_OK if gap <= tol else EXIT_NOT_MET


def cmd_isop(args) -> int:
    from .isoperimetric import facet_ratios, isop

    P = io.load_body(args.body)
    out = {"anchor": "isoperimetric_ratio", "method": "facet_triangulation",
           "tolerance": default_tol(), "isop": isop(P), "volume": P.volume,
           "surface_area": P.surface_area}
    if args.facets:
        rep = facet_ratios(P)
        out["facets"] = [{"normal": list(r.normal), "isop": r.isop, "ratio": r.ratio}
                         for r in rep.per_facet]
        out["max_ratio"] = rep.max_ratio
        out["witness_normal"] = list(rep.witness_normal)
        _write_csv(args.csv, ["normal", "isop_F", "ratio"],
                   ([" ".join(map(str, r.normal)), r.isop, r.ratio] for r in rep.per_facet))
    return _emit(out, args) or EXIT_OK


def cmd_exclude(args) -> int:
    from .isoperimetric import EXCLUDED, excluding_check

    P = io.load_body(args.body)
    v = excluding_check(P, args.tol)
    out = {"anchor": "excluding_condition", "method": "facet_isop_ratio",
           "tolerance": args.tol, "status": v.status, "max_ratio": v.max_ratio,
           "witness_normal": list(v.witness_normal), "isop_K": v.report.isop_K}
    status = v.status
    if args.search_affine:
        from .search import affine_search

        res = affine_search(P, budget=args.budget, seed=args.seed, restarts=args.restarts,
                            facet_normal=_vector(args.facet_normal) if args.facet_normal else None,
                            jobs=args.jobs)
        out["anchor"] = "excluding_condition_affine"
        out["search"] = {
            "best_ratio": res.best_ratio, "search_ratio": res.search_ratio,
            "best_T": [[float(c) for c in row] for row in res.best_T.matrix],
            "witness_normal": list(res.witness_normal), "evaluations": res.evaluations,
            "budget": res.budget, "restarts": res.restarts,
            "optimizer": "nelder-mead, log-cholesky SPD, unit determinant",
        }
        if res.best_ratio > 1 + args.tol:
            status = EXCLUDED
        _write_csv(args.csv, ["restart", "evaluation", "ratio", "best"],
                   ([r.restart, r.evaluation, repr(r.ratio), repr(r.best)] for r in res.trace))
        if args.plot_dir:
            from .plotting import plot_search_trace

            out["figures"] = [plot_search_trace(res.trace, args.plot_dir)]
    out["verdict"] = status
    _emit(out, args)
    return EXIT_OK if status == EXCLUDED else EXIT_NOT_MET


def cmd_probe(args) -> int:
    from .search import affine_probe

    rep = affine_probe(args.generator, trials=args.trials, budget=args.budget, seed=args.seed,
                          n=args.n, points=args.points, jobs=args.jobs)
    rep["anchor"] = "affine_position_question"
    rep["method"] = "affine_search"
    cols = ["trial", "seed", "status", "n_vertices", "n_facets", "initial_ratio", "best_ratio"]
    _write_csv(args.csv, cols, ([r.get(c, "") for c in cols] for r in rep["trials"]))
    if args.plot_dir:
        from .plotting import plot_probe

        rep["figures"] = [plot_probe(rep, args.plot_dir)]
    _emit(rep, args)
    return EXIT_OK


def _witness_json(w) -> dict:
    d = io.to_jsonable(w)
    if w.directions is not None:
        d["directions"] = [[str(c) for c in u] for u in w.directions]
    d["ratio_float"] = None if w.ratio is None else float(w.ratio)
    return d


def cmd_bezout(args) -> int:
    from .bezout import b2_lower_bound

    K = io.load_body(args.body)
    r = b2_lower_bound(K, grid=args.grid, budget=args.budget, seed=args.seed, jobs=args.jobs)
    _emit({
        "anchor": "bezout_constant",
        "method": "segment_projection+inclusion_exclusion",
        "tolerance": 0,
        "witness": _witness_json(r.witness),
        "certified": r.certified,
        "pairs_evaluated": r.pairs_evaluated,
        "refinement_evaluations": r.refinement_evaluations,
        "grid": r.grid,
        "fenchel_bound_holds": r.fenchel_ok,
        "b2_exceeds_one": r.witness.ratio is not None and r.witness.ratio > 1,
    }, args)
    return EXIT_OK if r.witness.ratio is not None and r.witness.ratio > 1 else EXIT_NOT_MET


def cmd_bezout_form(args) -> int:
    from .bezout import bezout_form

    K, A, B = (io.load_body(p) for p in (args.body, args.A, args.B))
    w = bezout_form(A, B, K, args.method)
    _emit({"anchor": "bezout_form", "method": w.method, "tolerance": 0,
           "witness": _witness_json(w), "negative": w.f_value < 0}, args)
    return EXIT_OK


def cmd_wulff(args) -> int:
    from .mixed import SumCache, mixed_volume
    from .wulff import SphereFunction, WulffFamily, alexandrov_check, family_at, pointwise_check

    K = io.load_body(args.body)
    if args.f:
        f = io.sphere_function_from_json(args.f)
    elif args.indicator:
        f = SphereFunction.indicator(_vector(args.indicator), K.normals())
    else:
        raise io.InputError("give --f FILE or --indicator u")
    fam = WulffFamily(K, f)
    ts = [_fraction(t) for t in args.t_values.split(",")] if args.t_values else []
    out = {"anchor": "wulff_variation", "tolerance": args.tol,
           "t_min_estimate": fam.t_min_estimate}
    ok = True
    if args.check == "alexandrov":
        r = alexandrov_check(fam)
        out["method"] = "exact_interpolation"
        out["alexandrov"] = io.to_jsonable(r)
        ok = r.agrees(args.tol)
    else:
        normals = [la.integer_direction(_vector(args.normal))] if args.normal else fam.omega
        out["method"] = "exact_support"
        checks = []
        for u in normals:
            p = pointwise_check(fam, u, ts)
            checks.append({"normal": list(p.normal), "f": p.f_value, "all_match": p.all_match,
                           "concave": p.concave,
                           "rows": [{"t": r.t, "quotient": r.quotient, "active": r.active,
                                     "matches": r.matches} for r in p.rows]})
            ok &= p.all_match and p.concave
        out["pointwise"] = checks
    sweep = []
    cache = SumCache()
    n = K.dim
    for t in sorted(set(ts) | {Fraction(0)}):
        W = family_at(fam, t)
        sweep.append((t, W.volume, mixed_volume([W] + [K] * (n - 1), cache)))
    out["sweep"] = [{"t": t, "volume": v, "mixed": m} for t, v, m in sweep]
    _write_csv(args.csv, ["t", "volume", "mixed_volume"], sweep)
    if args.plot_dir:
        from .plotting import plot_wulff_sweep

        out["figures"] = [plot_wulff_sweep([float(s[0]) for s in sweep],
                                           [float(s[1]) for s in sweep],
                                           [float(s[2]) for s in sweep], args.plot_dir)]
    out["agrees"] = ok
    _emit(out, args)
    return EXIT_OK if ok else EXIT_NOT_MET


def cmd_counterexample(args) -> int:
    from .wulff import counterexample_construct

    K = io.load_body(args.body)
    r = counterexample_construct(K, _vector(args.normal), _fraction(args.t), args.sphere_res,
                                 seed=args.seed)
    payload = io.to_jsonable(r)
    payload["witness"] = _witness_json(r.witness)
    payload.update(anchor="facet_isoperimetric_counterexample", method="inclusion_exclusion",
                   tolerance=0, negative=r.witness.f_value < 0,
                   f_value_float=float(r.witness.f_value), c_exceeds_2c0=r.c_exceeds_2c0)
    _emit(payload, args)
    return EXIT_OK if r.witness.f_value < 0 else EXIT_NOT_MET


def cmd_ellipsoid(args) -> int:
    from .special import half_ellipsoid_isop

    r = half_ellipsoid_isop(args.n, args.a, args.tol)
    out = {"anchor": "half_ellipsoid", "method": "adaptive_simpson", "tolerance": args.tol,
           "n": args.n, "a": args.a, "lambda": r.lam.value,
           "lambda_error_estimate": r.lam.abs_error_estimate, "evaluations": r.lam.evaluations,
           "isop": r.value, "surface_area": r.surface_area,
           "area_lambda": r.area_lambda.value, "true_surface_area": r.true_surface_area,
           "true_isop": r.true_value, "isop_below_one": r.value < 1}
    if args.sweep:
        a_vals = [float(a) for a in args.sweep.split(",")]
        rows = [(a, half_ellipsoid_isop(args.n, a, args.tol)) for a in a_vals]
        out["sweep"] = [{"a": a, "lambda": x.lam.value, "isop": x.value, "true_isop": x.true_value}
                        for a, x in rows]
        _write_csv(args.csv, ["a", "lambda", "isop", "area_lambda", "true_isop"],
                   ([a, x.lam.value, x.value, x.area_lambda.value, x.true_value] for a, x in rows))
        if args.plot_dir:
            from .plotting import plot_ellipsoid_sweep

            out["figures"] = [plot_ellipsoid_sweep(args.n, a_vals, [x.lam.value for _, x in rows],
                                                   [x.value for _, x in rows],
                                                   [x.true_value for _, x in rows],
                                                   args.plot_dir)]
    _emit(out, args)
    return EXIT_OK


def cmd_examples(args) -> int:
    from .examples import examples_table, table_markdown

    tol = args.tol if args.tol is not None else default_tol()
    rows = examples_table(tol, args.half_ball_res)
    _write_csv(args.csv, ["body", "quantity", "pipeline", "closed_form", "formula", "abs_error", "ok"],
               ([r.name, r.quantity, repr(r.pipeline), repr(r.closed_form), r.formula,
                 repr(r.error), r.ok] for r in rows))
    figures = []
    if args.plot_dir:
        from .plotting import plot_examples

        figures.append(plot_examples(rows, args.plot_dir))
    if args.format == "markdown":
        sys.stdout.write(table_markdown(rows) + "\n")
    else:
        _emit({"anchor": "closed_form_examples", "method": "generic_pipeline", "tolerance": tol,
               "rows": [{"body": r.name, "quantity": r.quantity, "pipeline": r.pipeline,
                         "closed_form": r.closed_form, "formula": r.formula, "error": r.error,
                         "tolerance": r.tolerance, "ok": r.ok} for r in rows],
               "figures": figures, "all_ok": all(r.ok for r in rows)}, args)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_NOT_MET


def cmd_make(args) -> int:
    from .bodies import parse_body_spec

    try:
        P = parse_body_spec(args.spec)
    except ValueError as exc:
        raise io.InputError(str(exc)) from exc
    sys.stdout.write(io.dumps(io.polytope_to_json(P)) + "\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mixvol", description="Mixed volumes, Bezout ratios and "
                                "facet isoperimetric checks on exact rational polytopes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--csv", help="write a per-row CSV table to this path")
        sp.add_argument("--plot-dir", help="render figures into this directory")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = common(sub.add_parser("compute", help="mixed volume of n bodies"))
    sp.add_argument("--bodies", nargs="+", required=True, help="JSON files or specs like cube:3")
    sp.add_argument("--method", choices=["ie", "sam", "proj", "all"], default="ie")
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(func=cmd_compute)

    sp = common(sub.add_parser("isop", help="isoperimetric ratio of a body"))
    sp.add_argument("body")
    sp.add_argument("--facets", action="store_true", help="also list every facet ratio")
    sp.set_defaults(func=cmd_isop)

    sp = common(sub.add_parser("exclude", help="facet isoperimetric excluding check"))
    sp.add_argument("body")
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--search-affine", action="store_true")
    sp.add_argument("--budget", type=int, default=500)
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--facet-normal", help="track one facet, e.g. 0,0,-1")
    sp.set_defaults(func=cmd_exclude)

    sp = common(sub.add_parser("probe", help="affine search over random polytopes"))
    sp.add_argument("--generator", choices=["hull", "simplex", "zonotope"], default="hull")
    sp.add_argument("--points", type=int, default=8)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--n", type=int, default=3)
    sp.set_defaults(func=cmd_probe)

    sp = common(sub.add_parser("bezout", help="certified lower bound on the Bezout constant"))
    sp.add_argument("body")
    sp.add_argument("--grid", type=int, default=3)
    sp.add_argument("--budget", type=int, default=0)
    sp.set_defaults(func=cmd_bezout)

    sp = common(sub.add_parser("bezout-form", help="F_K(A, B) for given bodies"))
    sp.add_argument("body")
    sp.add_argument("A")
    sp.add_argument("B")
    sp.add_argument("--method", choices=["ie", "proj"], default="ie")
    sp.set_defaults(func=cmd_bezout_form)

    sp = common(sub.add_parser("wulff", help="Wulff family checks"))
    sp.add_argument("body")
    sp.add_argument("--f", help="sphere function JSON")
    sp.add_argument("--indicator", help="use the indicator of this facet normal as f")
    sp.add_argument("--t-values", default="1/64,-1/64,1/128,-1/128")
    sp.add_argument("--check", choices=["alexandrov", "pointwise"], default="alexandrov")
    sp.add_argument("--normal", help="restrict the pointwise check to one normal")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_wulff)

    sp = common(sub.add_parser("counterexample", help="build F_K(L_t, M) < 0 from a large-Isop facet"))
    sp.add_argument("body")
    sp.add_argument("--normal", required=True)
    sp.add_argument("--t", default="1/20")
    sp.add_argument("--sphere-res", type=int, default=200)
    sp.set_defaults(func=cmd_counterexample)

    sp = common(sub.add_parser("ellipsoid", help="half-ellipsoid quadrature"), seed=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--sweep", help="comma-separated a values for a sweep table")
    sp.set_defaults(func=cmd_ellipsoid)

    sp = common(sub.add_parser("examples", help="closed-form golden table"), seed=False)
    sp.add_argument("--paper", action="store_true", help="closed-form table for the standard bodies (the default)")
    sp.add_argument("--format", choices=["json", "markdown"], default="json")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--half-ball-res", type=int, default=200)
    sp.set_defaults(func=cmd_examples)

    sp = sub.add_parser("make", help="write a standard body as polytope JSON")
    sp.add_argument("spec", help="e.g. cube:3, box:2,1,1, cross_polytope:3, half_ball:3,200")
    sp.set_defaults(func=cmd_make)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if getattr(args, "jobs", 1) < 1:
        print("mixvol: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (io.InputError, GeometryError, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else exc.__class__.__name__
        print(f"mixvol: error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
