"""Command-line interface.

Every subcommand builds a plain dict report; ``--json`` prints it as sorted
JSON, otherwise a flat ``key: value`` listing of the same dict is printed.
Exit codes: 0 ok, 2 parse/map error, 3 precondition violation, 4 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .bounds import PROOF, STATEMENT, bounds_report, int_to_str
from .dynamics import (
    bad_places_simple,
    has_simple_good_reduction_outside,
    improve_reduction,
    isotriviality_diagnostic,
)
from .errors import CapExceededError, MapError, ParseError, PreconditionError
from .orbits import (
    DEFAULT_HEIGHT_CAP,
    DEFAULT_MAX_ITER,
    DEFAULT_PERIOD_CAP,
    classify,
    orbit,
    periodic_points,
    preimages,
    preper_set,
)
from .parsing import parse_element, parse_map, parse_place, parse_places, parse_point
from .suites import SUITES, run_suite, s_min
from .sunits import nondegenerate_count, solve_unit_equation

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_CAP = 4


def _bounds_block(d: int, s: int, variant: str = STATEMENT, exact: bool = False) -> dict:
    return bounds_report(d, s, variant, exact=exact)


def _places_or_none(args):
    return parse_places(args.places) if args.places else None


def cmd_analyze(args) -> dict:
    phi = parse_map(args.map)
    S = _places_or_none(args)
    bad = bad_places_simple(phi)
    report = {
        "map": str(phi),
        "degree": phi.degree,
        "resultant": str(phi.resultant()),
        "bad_places": bad.to_json(),
        "infinity_bad": bad.infinity_bad,
        "s_min": s_min(phi),
    }
    improvements = {}
    for place in bad.all_rational():
        imp = improve_reduction(phi, place)
        improvements[str(place)] = imp.to_json() if imp else None
    report["improvements"] = improvements
    if S is not None:
        report["places"] = str(S)
        report["good_reduction_outside_S"] = has_simple_good_reduction_outside(phi, S)
    report["isotriviality"] = isotriviality_diagnostic(phi).to_json()
    s = S.s if S is not None else report["s_min"]
    report["bounds"] = _bounds_block(phi.degree, s)
    if args.preper:
        report["preper"] = preper_set(phi, period_cap=args.period_cap).to_json()
    return report


def cmd_orbit(args) -> dict:
    phi, P = parse_map(args.map), parse_point(args.point)
    return orbit(phi, P, args.max_iter, args.height_cap).to_json()


def cmd_classify(args) -> dict:
    phi, P = parse_map(args.map), parse_point(args.point)
    cl = classify(phi, P, args.max_iter, args.height_cap)
    out = cl.to_json()
    out["orbit"] = cl.record.to_json()
    return out


def cmd_preper(args) -> dict:
    phi = parse_map(args.map)
    verdict = isotriviality_diagnostic(phi)
    S = _places_or_none(args)
    s = S.s if S is not None else s_min(phi)
    bound = 2 if phi.degree == 1 else None  # B(d, s) is only materializable for d = 1
    graph = preper_set(phi, period_cap=args.period_cap, bound=bound)
    out = graph.to_json()
    out["s"] = s
    if verdict.kind == "IsotrivialOverK":
        out["warning"] = "map is isotrivial; the preperiodic set over K may be infinite"
    return out


def cmd_periodic(args) -> dict:
    phi = parse_map(args.map)
    pts = periodic_points(phi, args.n)
    return {"n": args.n, "points": [str(P) for P in pts]}


def cmd_preimages(args) -> dict:
    phi, Q = parse_map(args.map), parse_point(args.point)
    return {"point": str(Q), "preimages": [str(P) for P in preimages(phi, Q)]}


def cmd_bounds(args) -> dict:
    variant = PROOF if args.variant == PROOF else STATEMENT
    return bounds_report(args.d, args.s, variant, exact=not args.digits)


def cmd_sunit_solve(args) -> dict:
    if not args.places:
        raise PreconditionError("--places is required")
    S = parse_places(args.places)
    lam, mu = parse_element(args.lam), parse_element(args.mu)
    res = solve_unit_equation(lam, mu, S, args.box)
    return {
        "lambda": str(lam),
        "mu": str(mu),
        "places": str(S),
        "box": args.box,
        "pairs_examined": res.pairs_examined,
        "solutions": [sol.to_json() for sol in res],
        "nondegenerate_count": nondegenerate_count(res),
    }


def cmd_improve_reduction(args) -> dict:
    phi = parse_map(args.map)
    place = parse_place(args.place)
    imp = improve_reduction(phi, place)
    out = {"map": str(phi), "place": str(place)}
    if imp is None:
        out["result"] = "no improvement found"
    else:
        out["result"] = imp.to_json()
    return out


def cmd_verify(args) -> dict:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(name, args.count, args.seed).to_json() for name in names]
    if len(results) == 1:
        return results[0]
    return {"seed": args.seed, "suites": results,
            "failures": sum(r["failures"] for r in results)}


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--json", action="store_true", default=default(False), help="emit JSON")
    p.add_argument("--seed", type=int, default=default(0))
    p.add_argument("--max-iter", type=int, default=default(DEFAULT_MAX_ITER))
    p.add_argument("--height-cap", type=int, default=default(DEFAULT_HEIGHT_CAP))
    p.add_argument("--box", type=int, default=default(2), help="exponent box for S-unit search")
    p.add_argument("--period-cap", type=int, default=default(DEFAULT_PERIOD_CAP))
    p.add_argument("--places", default=default(None), help="comma list, e.g. 0,1,inf")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffdyn", description="Preperiodic points of rational maps over Q(t).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full report for a map")
    p.add_argument("--map", required=True)
    p.add_argument("--preper", action="store_true", help="include the preperiodic graph")
    p.set_defaults(func=cmd_analyze)

    for name, func, helptext in (("orbit", cmd_orbit, "forward orbit of a point"),
                                 ("classify", cmd_classify, "preperiodicity of a point")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--map", required=True)
        p.add_argument("--point", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("preper", parents=[common], help="backward closure of small-period points")
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_preper)

    p = sub.add_parser("periodic", parents=[common], help="K-rational points of exact period n")
    p.add_argument("--map", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_periodic)

    p = sub.add_parser("preimages", parents=[common], help="K-rational preimages of a point")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_preimages)

    p = sub.add_parser("bounds", parents=[common], help="explicit bounds for (d, s)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="print exact values (default)")
    g.add_argument("--digits", action="store_true", help="print digit counts only for large values")
    p.add_argument("--variant", choices=(STATEMENT, PROOF), default=STATEMENT)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sunit-solve", parents=[common], help="lambda*x + mu*y = 1 in S-units")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_sunit_solve)

    p = sub.add_parser("improve-reduction", parents=[common], help="conjugation search at a place")
    p.add_argument("--map", required=True)
    p.add_argument("--place", required=True)
    p.set_defaults(func=cmd_improve_reduction)

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_verify)
    return parser


def _flatten(obj, prefix="") -> List[str]:
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            lines.extend(_flatten(obj[k], f"{prefix}{k}."))
        return lines
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        lines = []
        for i, v in enumerate(obj):
            lines.extend(_flatten(v, f"{prefix}{i}."))
        return lines
    val = ", ".join(map(str, obj)) if isinstance(obj, list) else obj
    return [f"{prefix[:-1]}: {val}"]


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, indent=2)
    return "\n".join(_flatten(report))


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
        code = EXIT_OK
        if args.command == "verify" and report.get("failures"):
            code = 1
    except (ParseError, MapError) as exc:
        report, code = _error(exc, "parse"), EXIT_PARSE
    except PreconditionError as exc:
        report, code = _error(exc, "precondition"), EXIT_PRECONDITION
    except CapExceededError as exc:
        report, code = _error(exc, "cap"), EXIT_CAP
    text = render(report, args.json)
    stream = sys.stdout if code in (EXIT_OK, 1) or args.json else sys.stderr
    print(text, file=stream)
    return code


def _error(exc: Exception, kind: str) -> dict:
    return {"error": {"kind": kind, "type": type(exc).__name__, "message": str(exc)}}


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
