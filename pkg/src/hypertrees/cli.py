"""Command-line front end; every command prints one JSON document."""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback

from . import constructions as cons
from . import divisor, enumerate as enum, pullback
from .realize import RealizeConfig, equation_residual, realize, verify_realization
from .core import Hypertree, gieseker_violation, is_generic, stable_model, validate, valences, wheels
from .errors import BudgetExceeded, HypertreeError, InputError
from .poly import to_text

SCHEMA = "hypertrees/1"


def _budget():
    raw = os.environ.get("HYPERTREE_BUDGET_TERMS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"HYPERTREE_BUDGET_TERMS must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError("HYPERTREE_BUDGET_TERMS must be positive")
    return value


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _hypertree(path):
    obj = _read_json(path)
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise InputError(f"{path} must hold an object with 'n' and 'edges'")
    return Hypertree.from_json(obj)


def _triangulation(path):
    return cons.BicoloredTriangulation.from_json(_read_json(path))


def _ht_json(h):
    return {"n": h.n, "edges": [list(e) for e in h.edges]}


# -- commands ---------------------------------------------------------------------

def cmd_check(args):
    h = _hypertree(args.file)
    rep = validate(h)
    generic = None
    if rep.irreducible and all(len(e) == 3 for e in h.edges):
        generic = is_generic(h)
    return {
        "hypertree": _ht_json(h),
        "validation": rep.to_json(),
        "valences": {str(k): v for k, v in sorted(valences(h).items())},
        "wheels": [list(w) for w in wheels(h)],
        "generic": generic,
    }


def cmd_enumerate(args):
    classes = enum.enumerate_irreducible(args.n, order=args.order, allow_large=args.allow_large)
    out = {"n": args.n, "count": len(classes), "classes": [c.to_json() for c in classes]}
    if args.out:
        out["written"] = enum.write_catalog(classes, args.out)
    return out


def cmd_sphere(args):
    if args.octahedron:
        tri = cons.octahedron()
    elif args.bipyramid is not None:
        tri = cons.bipyramid(args.bipyramid)
    elif args.quadruple:
        tri = cons.quadruple(_triangulation(args.quadruple))
    else:
        tri = _triangulation(args.split)
    rep = cons.validate_triangulation(tri)
    out = {"triangulation": tri.to_json(), "validation": rep.to_json()}
    if rep.valid:
        black, white = cons.black_white_hypertrees(tri)
        out["black"] = _ht_json(black)
        out["white"] = _ht_json(white)
        out["irreducible"] = validate(black).irreducible
    return out


def cmd_assemble(args):
    tri = cons.assemble_triangulation(_hypertree(args.black), _hypertree(args.white))
    return {"assembled": tri is not None, "triangulation": tri.to_json() if tri else None}


def cmd_fib(args):
    h = _hypertree(args.file)
    out = cons.fibonacci_extend(h, args.vertex, args.partner, args.role)
    return {"hypertree": _ht_json(out), "validation": validate(out).to_json()}


def cmd_class(args):
    return divisor.class_coefficients(_hypertree(args.file)).to_json()


def cmd_equation(args):
    h = _hypertree(args.file)
    eq = divisor.hypertree_equation(h, alpha=args.row, budget=_budget())
    return {"hypertree": _ht_json(h), "terms": len(eq), "degree": eq.total_degree(),
            "equation": to_text(eq)}


def cmd_compare(args):
    return divisor.same_divisor(_hypertree(args.first), _hypertree(args.second)).to_json()


def cmd_realize(args):
    h = _hypertree(args.file)
    cfg = RealizeConfig(precision_bits=args.bits, tol_col=args.tol_col, tol_gen=args.tol_gen,
                        max_retries=args.retries)
    R = realize(h, seed=args.seed, config=cfg, free_vertex=args.free_vertex)
    out = R.to_json()
    out["verification"] = verify_realization(h, R, cfg.tol_col, cfg.tol_gen).to_json()
    if all(len(e) == 3 for e in h.edges):
        out["equation_residual"] = float(equation_residual(h, R))
    return out


def cmd_pullback(args):
    name = "trigonal" if args.example == "transversal" else args.example
    budget = _budget()
    if args.emit == "poly":
        F = pullback.EXAMPLES[name][0]() if name != "trigonal" else pullback.transversal_polynomial(budget)
        if budget is not None and len(F) > budget:
            raise BudgetExceeded(f"polynomial has {len(F)} terms, over the budget {budget}")
        return {"example": name, "variables": list(F.ctx.names), "terms": len(F),
                "degree": F.total_degree(), "polynomial": to_text(F)}
    F, table, cls = pullback.run_example(name, method=args.method, seed=args.seed, budget=budget)
    if args.emit == "table":
        return {"example": name, "table": table.to_json()}
    expected = pullback.EXAMPLES[name][1]()
    return {"example": name, "class": cls.to_json(), "text": cls.to_text(),
            "matches_printed": cls.m == expected.m and cls.d == expected.d}


def cmd_stability(args):
    h = _hypertree(args.file)
    if not validate(h).irreducible:
        raise InputError("stability is checked for irreducible hypertrees")
    g = stable_model(h)
    bad = gieseker_violation(g)
    return {"components": len(g.components), "nodes": len(g.nodes),
            "stable": bad is None, "violating_subcurve": list(bad) if bad else None}


# -- parser -----------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="hypertrees", description="Hypertrees and their divisors.")
    p.add_argument("--threads", type=int, default=1,
                   help="parallelism cap (computations here run single-threaded)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate a hypertree JSON file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("enumerate", help="irreducible hypertrees up to relabeling")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", help="write a catalog under this directory")
    s.add_argument("--order", choices=["lex", "colex"], default="lex")
    s.add_argument("--allow-large", action="store_true", help="permit n = 11, 12 (long runs)")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("sphere", help="bicolored triangulations and their hypertrees")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--octahedron", action="store_true")
    g.add_argument("--bipyramid", type=int, metavar="K")
    g.add_argument("--quadruple", metavar="FILE")
    g.add_argument("--split", metavar="FILE")
    s.set_defaults(func=cmd_sphere)

    s = sub.add_parser("assemble", help="glue black and white hypertrees into a sphere")
    s.add_argument("black")
    s.add_argument("white")
    s.set_defaults(func=cmd_assemble)

    s = sub.add_parser("fib", help="extend a hypertree by one label")
    s.add_argument("file")
    s.add_argument("--vertex", type=int, required=True, help="valence-2 label")
    s.add_argument("--partner", type=int, required=True, help="label joined to the vertex and the new label")
    s.add_argument("--role", type=int, help="label picking the modified triple through the vertex")
    s.set_defaults(func=cmd_fib)

    s = sub.add_parser("class", help="Kapranov class coefficients")
    s.add_argument("file")
    s.set_defaults(func=cmd_class)

    s = sub.add_parser("equation", help="determinantal equation")
    s.add_argument("file")
    s.add_argument("--row", type=int, default=0)
    s.set_defaults(func=cmd_equation)

    s = sub.add_parser("compare", help="do two hypertrees give the same divisor")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("realize", help="planar realization")
    s.add_argument("file")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--bits", type=int, default=256)
    s.add_argument("--tol-col", type=float, default=1e-9)
    s.add_argument("--tol-gen", type=float, default=1e-6)
    s.add_argument("--retries", type=int, default=20)
    s.add_argument("--free-vertex", type=int)
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("pullback", help="classes of the pulled-back examples")
    s.add_argument("--example", required=True,
                   choices=["weierstrass", "bitangent", "trigonal", "transversal"])
    s.add_argument("--emit", choices=["poly", "table", "class"], default="class")
    s.add_argument("--method", choices=["fast", "exact"], default="fast")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_pullback)

    s = sub.add_parser("stability", help="basic inequality on the stable model")
    s.add_argument("file")
    s.set_defaults(func=cmd_stability)
    return p


def run(argv=None, stream=None):
    """Parse, dispatch, print the JSON result and return the exit code."""
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    result = {"schema": SCHEMA, "command": args.command, "status": "ok", "payload": None,
              "diagnostics": []}
    code = 0
    try:
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        result["payload"] = args.func(args)
    except HypertreeError as exc:
        code = exc.exit_code
        result["status"] = "error"
        result["payload"] = {"error": type(exc).__name__, "message": str(exc)}
    except Exception as exc:  # pragma: no cover - defensive
        code = 5
        result["status"] = "error"
        result["payload"] = {"error": type(exc).__name__, "message": str(exc)}
        result["diagnostics"] = traceback.format_exc().splitlines()
    json.dump(result, stream, indent=1, sort_keys=False, default=str)
    stream.write("\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
