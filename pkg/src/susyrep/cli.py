"""Command-line front end: ``susyrep <subcommand> ...``.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or file
errors. All output is JSON, NDJSON, DOT or CSV.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from numbers import Integral
from pathlib import Path

from . import adinkra, dimred, enumeration, garden, solver
from .signed_perm import CycleParseError, parse_cycles, quartet_of, star, star_quartet, to_cycles


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj) + "\n"


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _load_rep(path: str) -> garden.GardenRep:
    try:
        return garden.GardenRep.from_json(_read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: not a garden matrix file ({exc})") from None


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("SUSYREP_JOBS", "1")))
    except ValueError:
        return 1


def classify_permutation(text: str) -> dict:
    p = parse_cycles(text, 4)
    k = quartet_of(p)
    s = star(p)
    return {
        "permutation": to_cycles(p),
        "images": p.images1,
        "quartet": k,
        "star": to_cycles(s),
        "star_quartet": star_quartet(k),
    }


def classify_rep(rep: garden.GardenRep) -> dict:
    colors = []
    for m in rep.L:
        sp = garden.decompose_sp(m)
        entry = {"perm": to_cycles(sp.perm), "signs": list(sp.signs)}
        if rep.d == 4:
            entry["quartet"] = quartet_of(sp.perm)
            entry["star_quartet"] = star_quartet(entry["quartet"])
        colors.append(entry)
    out = {"N": rep.N, "d": rep.d, "colors": colors}
    if rep.N == 4 and rep.d == 4:
        out["closure_quartet"] = enumeration.closure_quartet(rep)
    return out


def _json_number(x):
    """Exact residuals stay exact: ints as ints, fractions as "p/q"."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Integral):
        return int(x)
    return float(x)


def verify_rep(rep: garden.GardenRep, tol: float) -> dict:
    residual = garden.garden_residual(rep)
    ok = garden.is_garden_rep(rep, tol)
    clifford_tol = 0.0 if rep.exact and tol == 0 else garden.clifford_tolerance(tol)
    out = {
        "residual": _json_number(residual),
        "tol": tol,
        "garden": ok,
        "clifford": garden.clifford_check(garden.build_gamma_hats(rep), clifford_tol),
        "adinkra": None,
    }
    try:
        out["adinkra"] = adinkra.validate(adinkra.from_rep(rep)).to_json()
    except garden.NotSignedPermutation:
        pass
    return out


def _cmd_enumerate(args, out) -> int:
    if args.count_only:
        out.write(f"{enumeration.count_distinct_matrices(args.d)}\n")
        return 0
    if args.ndjson:
        for rep in enumeration.enumerate_garden_tuples(args.n, args.d, jobs=args.jobs):
            out.write(_dump(rep.to_json()))
        return 0
    report = enumeration.enumeration_report(args.n, args.d, jobs=args.jobs).to_json()
    if not args.quartet_histogram:
        report.pop("quartet_histogram", None)
    out.write(_dump(report))
    return 0 if report.get("quartet_closure", True) else 1


def _cmd_classify(args, out) -> int:
    if args.target.lstrip().startswith("("):
        out.write(_dump(classify_permutation(args.target)))
        return 0
    rep = _load_rep(args.target)
    try:
        result = classify_rep(rep)
    except garden.NotSignedPermutation as exc:
        out.write(_dump({"error": str(exc)}))
        return 1
    out.write(_dump(result))
    return 0


def _cmd_verify(args, out) -> int:
    result = verify_rep(_load_rep(args.file), args.tol)
    out.write(_dump(result))
    ok = result["garden"] and (result["adinkra"] is None or result["adinkra"]["ok"])
    return 0 if ok else 1


def _conventions(args):
    return dimred.load_conventions(args.conventions) if args.conventions else dimred.load_conventions()


def _cmd_reduce(args, out) -> int:
    g = _conventions(args)
    if args.multiplet in ("chiral", "vector"):
        spec = dimred.load_multiplet(args.multiplet)
    else:
        spec = dimred.MultipletSpec.from_json(_read_json(args.multiplet))
    red = dimred.reduce_custom(spec, g)
    out.write(_dump(red.to_json() if args.provenance else red.rep.to_json()))
    return 0 if red.rep.verified else 1


def _cmd_solve(args, out) -> int:
    settings = dict(max_iter=args.max_iter, threshold=args.threshold, round_tol=args.round_tol)
    if args.mask:
        problem = solver.problem_from_mask(_read_json(args.mask), **settings)
    else:
        if args.n is None or args.d is None:
            raise UsageError("solve needs --n and --d (or --mask)")
        problem = solver.SolveProblem(args.n, args.d, **settings)
    seeds = range(args.seed, args.seed + args.seeds)
    reports = solver.solve_batch(problem, seeds, jobs=args.jobs)
    if args.trace_csv:
        Path(args.trace_csv).write_text(solver.trace_csv(reports))
    if len(reports) == 1:
        out.write(_dump(reports[0].to_json()))
    else:
        summary = {
            "seeds": len(reports),
            "converged": sum(r.converged for r in reports),
            "verified": sum(r.verified for r in reports),
            "best_cost": min(r.final_cost for r in reports),
        }
        out.write(_dump({"summary": summary, "runs": [r.to_json() for r in reports]}))
    return 0 if any(r.converged for r in reports) else 1


def _cmd_export(args, out) -> int:
    rep = _load_rep(args.file)
    try:
        a = adinkra.from_rep(rep)
    except garden.NotSignedPermutation as exc:
        out.write(_dump({"error": str(exc)}))
        return 1
    out.write(adinkra.export(a, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="susyrep", description=__doc__.splitlines()[0])
    parser.add_argument("--conventions", help="gamma-matrix convention file for reduce")
    parser.add_argument("--jobs", type=int, default=_default_jobs(), help="worker processes")
    parser.add_argument("-o", "--output", help="write to this path instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="BC_d elements and Garden tuples")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=1, help="number of colors")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--ndjson", action="store_true", help="stream every valid tuple")
    p.add_argument("--quartet-histogram", action="store_true")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("classify", help="quartet and star dual of a permutation or rep file")
    p.add_argument("target", help='cycle string such as "(134)" or a rep JSON file')
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify", help="residual, Clifford and adinkra checks for a rep file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=garden.DEFAULT_TOL)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("reduce", help="reduce a 4D multiplet to a 1D rep")
    p.add_argument("--multiplet", required=True, help="chiral, vector or a multiplet JSON file")
    p.add_argument("--provenance", action="store_true")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("solve", help="numerical search for Garden reps")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--mask", help="mask JSON with fixed entries")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--threshold", type=float, default=1e-18)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--round-tol", type=float, default=1e-6)
    p.add_argument("--trace-csv", help="write per-iteration costs here")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("export", help="adinkra of a rep file as DOT or JSON")
    p.add_argument("file")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.set_defaults(func=_cmd_export)
    return parser


def main(argv=None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = stdout or sys.stdout
    try:
        if args.output:
            with open(args.output, "w") as fh:
                return args.func(args, fh)
        return args.func(args, out)
    except (UsageError, CycleParseError, dimred.ConventionError, dimred.ReductionError, ValueError) as exc:
        print(f"susyrep: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except OSError as exc:
        print(f"susyrep: error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
