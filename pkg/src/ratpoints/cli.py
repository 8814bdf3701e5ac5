"""Command line interface.

Subcommands: count, slice, conic-param, project, detmethod, fit.  All
output is CSV or JSON with sorted keys so reruns are byte-identical.
Environment overrides: RATPOINTS_THREADS, RATPOINTS_SEED.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .curves import EmptyParam, conic_parameterize, count_class_points, plane_eliminate
from .detmethod import (AuxiliaryForm, build_determinant,
                        curve_section_degree, extract_auxiliary_form,
                        partition_by_residue, prime_window, select_monomials)
from .enumeration import count_affine_surface
from .geometry import (build_projection_setup, find_projection_center,
                       project_point, sample_birationality_check)
from .enumeration import enumerate_projective_variety
from .harness import ExperimentConfig, fit_exponent, run_experiment
from .enumeration import CountSeries
from .poly import parse_poly, format_poly


def _read_poly_arg(text: str) -> str:
    if os.path.exists(text):
        with open(text) as fh:
            return fh.read().strip()
    return text


def _emit(obj, out=None):
    rendered = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(rendered)
    sys.stdout.write(rendered)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ratpoints")
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="counting campaign over a B-grid")
    p_count.add_argument("--variety", required=True,
                         help="polynomial text or a file containing it")
    p_count.add_argument("--function", choices=["N", "M", "Naff"], default="N")
    p_count.add_argument("--bmax", type=int, required=True)
    p_count.add_argument("--grid", default="geometric:5",
                         help="geometric:k for k powers of two up to bmax")
    p_count.add_argument("--filter", action="append", default=[],
                         help="p:r1,r2,r3 residue filter (repeatable)")
    p_count.add_argument("--out", default=None)
    p_count.add_argument("--points", action="store_true",
                         help="also write points.csv with the points at bmax")
    p_count.add_argument("--threads", type=int, default=1)
    p_count.add_argument("--seed", type=int, default=0)
    p_count.add_argument("--target", type=float, default=None)
    p_count.add_argument("--tol", type=float, default=0.25)

    p_slice = sub.add_parser("slice", help="substitute x0 = b")
    p_slice.add_argument("--form", required=True)
    p_slice.add_argument("--b", type=int, required=True)

    p_conic = sub.add_parser("conic-param",
                             help="parameterize a tangent plane conic")
    p_conic.add_argument("--plane", required=True, help="a0,a1,a2,a3")
    p_conic.add_argument("--quadric", required=True)
    p_conic.add_argument("--bound", type=int, default=100)
    p_conic.add_argument("--out", default=None)

    p_proj = sub.add_parser("project", help="project a variety from a center")
    p_proj.add_argument("--gens", required=True,
                        help="semicolon-separated generator polynomials")
    p_proj.add_argument("--center", default=None, help="c0,c1,...")
    p_proj.add_argument("--bound", type=int, default=20)
    p_proj.add_argument("--fiber-bound", type=int, default=3)
    p_proj.add_argument("--out", default=None)

    p_det = sub.add_parser("detmethod", help="residue classes and auxiliary forms")
    p_det.add_argument("--form", required=True)
    p_det.add_argument("--bound", type=int, required=True)
    p_det.add_argument("--epsilon", type=float, default=0.05)
    p_det.add_argument("--min-primes", type=int, default=3)
    p_det.add_argument("--max-aux-degree", type=int, default=6)
    p_det.add_argument("--out", default=None)

    p_fit = sub.add_parser("fit", help="log-log slope of a series CSV")
    p_fit.add_argument("--series", required=True)
    p_fit.add_argument("--target", type=float, default=None)
    p_fit.add_argument("--tol", type=float, default=0.25)

    args = parser.parse_args(argv)
    if args.command == "count":
        return _cmd_count(args)
    if args.command == "slice":
        return _cmd_slice(args)
    if args.command == "conic-param":
        return _cmd_conic(args)
    if args.command == "project":
        return _cmd_project(args)
    if args.command == "detmethod":
        return _cmd_detmethod(args)
    if args.command == "fit":
        return _cmd_fit(args)
    return 2


def _cmd_count(args) -> int:
    grid_count = 5
    if args.grid:
        kind, _, num = args.grid.partition(":")
        if kind != "geometric":
            raise SystemExit(f"unsupported grid {args.grid!r}")
        grid_count = int(num or 5)
    filters = []
    for spec in args.filter:
        p, _, rest = spec.partition(":")
        residues = tuple(int(r) for r in rest.split(","))
        filters.append((int(p), residues))
    config = ExperimentConfig(
        poly=_read_poly_arg(args.variety),
        function=args.function,
        bmax=args.bmax,
        grid_count=grid_count,
        filters=filters,
        out_dir=args.out,
        threads=args.threads,
        seed=args.seed,
        target_exponent=args.target,
        tolerance=args.tol,
    )
    report = run_experiment(config)
    if args.points and args.out:
        from .enumeration import ResidueFilter, count_affine, count_projective
        from .poly import parse_poly as _pp

        F = _pp(config.poly)
        if config.function == "N":
            _, pts = count_projective(F, config.bmax, collect=True)
        elif config.function == "M":
            _, pts = count_affine(F, config.bmax, collect=True)
        else:
            flts = [ResidueFilter(p, rs) for p, rs in config.filters]
            _, pts = count_affine_surface(F, config.bmax, filters=flts)
        with open(os.path.join(args.out, "points.csv"), "w") as fh:
            for pt in pts:
                fh.write(",".join(str(c) for c in pt) + "\n")
    _emit(report)
    return 0


def _cmd_slice(args) -> int:
    F = parse_poly(_read_poly_arg(args.form))
    from .enumeration import slice_form

    sliced = slice_form(F, args.b)
    print(format_poly(sliced, "t") if not sliced.is_zero() else "0")
    return 0


def _cmd_conic(args) -> int:
    plane = tuple(int(v) for v in args.plane.split(","))
    Q = parse_poly(_read_poly_arg(args.quadric))
    data = plane_eliminate(plane, Q)
    out = {
        "plane": list(data.plane),
        "eliminated": data.elim_index,
        "ternary": format_poly(data.q),
        "gram_det": data.gram_det,
    }
    if not data.is_integral:
        out["verdict"] = "not integral: singular ternary form"
        _emit(out, args.out)
        return 0
    from .curves import tangency_rank

    rank = tangency_rank(data.q)
    out["tangency_rank"] = rank
    if rank != 1:
        out["verdict"] = "not tangent to the plane at infinity"
        _emit(out, args.out)
        return 0
    param = conic_parameterize(data, args.bound)
    if isinstance(param, EmptyParam):
        out["verdict"] = "empty"
        out["search_window"] = param.search_window
        out["classes"] = []
        out["count"] = 0
    else:
        out["verdict"] = "parameterized"
        out["denominator"] = param.denominator
        out["kappa_empirical"] = param.kappa_empirical
        out["classes"] = [
            {
                "lambda": cls.lam,
                "modulus": cls.modulus,
                "base": cls.base,
                "double_r": [format_poly(p, "t") for p in cls.double_r],
                "count": count_class_points(cls, args.bound),
            }
            for cls in param.classes
        ]
        from .curves import conic_points

        out["count"] = len(conic_points(param, args.bound))
    _emit(out, args.out)
    return 0


def _cmd_project(args) -> int:
    gens = [parse_poly(g, num_vars=4) for g in _read_poly_arg(args.gens).split(";")]
    points = enumerate_projective_variety(gens, args.bound)
    if args.center:
        center = tuple(int(v) for v in args.center.split(","))
        setup = build_projection_setup([center])
        report = sample_birationality_check(setup, points, args.fiber_bound)
    else:
        found = find_projection_center(gens, args.fiber_bound, 3, points)
        if found is None:
            _emit({"verdict": "no admissible center up to height 3"}, args.out)
            return 1
        setup, report = found
    images = sorted({project_point(setup, p).coords for p in points})
    out = {
        "center": [list(h) for h in setup.h_list],
        "duals": [list(g) for g in setup.g_list],
        "c": setup.c,
        "source_points": len(points),
        "images": [list(v) for v in images],
        "fiber_histogram": {str(k): v for k, v in report.fiber_histogram.items()},
        "passed": report.passed,
    }
    _emit(out, args.out)
    return 0


def _cmd_detmethod(args) -> int:
    F = parse_poly(_read_poly_arg(args.form))
    window = prime_window(args.bound, F.degree, args.epsilon, args.min_primes)
    _, points = count_affine_surface(F, args.bound)
    records = []
    for p in window.primes[: args.min_primes]:
        classes = partition_by_residue(points, p, F)
        for residue, (members, classification) in classes.items():
            rec = {
                "p": p,
                "residue": list(residue),
                "class_size": len(members),
                "classification": classification.value,
            }
            if len(members) >= 2:
                outcome = None
                try:
                    for D in range(2, args.max_aux_degree + 1):
                        result = extract_auxiliary_form(members, D, F, p=p,
                                                        residue=residue)
                        if isinstance(result, AuxiliaryForm):
                            outcome = result
                            break
                except ValueError as err:
                    rec["aux_error"] = str(err)
                if outcome is None:
                    rec["aux_form"] = None
                    rec.setdefault("rank", "full at every degree tried")
                else:
                    rec["aux_form"] = format_poly(outcome.form)
                    rec["aux_degree"] = outcome.degree
                    rec["rank"] = outcome.rank
                    rec["delta"] = _delta_stats(F, outcome.form, members, p)
            records.append(rec)
    out = {
        "form": format_poly(F),
        "bound": args.bound,
        "window": list(window.window),
        "primes": window.primes[: args.min_primes],
        "points": len(points),
        "classes": records,
    }
    _emit(out, args.out)
    return 0


def _delta_stats(F, G, members, p):
    """Exact determinant statistics for the curve cut by F and the class's
    auxiliary form, at the first few class points."""
    try:
        gens = [F, G]
        e, _ = curve_section_degree(gens)
        k = min(len(members), 4)
        sel = select_monomials(gens, e, k)
        cert = build_determinant(members[:k], sel, p=p)
        return {
            "k": k,
            "curve_degree": e,
            "det_zero": cert.det == 0,
            "vp": cert.vp,
            "beta_required": cert.beta_required,
        }
    except (ValueError, AssertionError) as err:
        return {"error": str(err)}


def _cmd_fit(args) -> int:
    entries = []
    with open(args.series) as fh:
        header = fh.readline()
        for line in fh:
            if line.strip():
                b, c = line.strip().split(",")
                entries.append((int(b), int(c)))
    series = CountSeries(tag=args.series, entries=entries)
    fit = fit_exponent(series, args.target, args.tol)
    _emit({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "points_used": fit.points_used,
        "target": fit.target,
        "margin": fit.margin,
        "verdict": fit.verdict,
    })
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
