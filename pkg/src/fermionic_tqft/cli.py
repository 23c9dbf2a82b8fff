"""Command-line front end.

Every command taking a manifold accepts either a builtin example name
(``tet``, ``s3``, ``s3-big``, ``solid-torus``, ``pretzel``) or a path to a
triangulation JSON file.  Exit codes: 0 pass, 1 failed mathematical check,
2 bad input.
"""

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .chain_complex import ComplexError, admissible_sets, verify_all_marked_sets
from .exact_linalg import LinalgError
from .genfun import InvariantFunction, check_pentagon, generating_function, state_sum
from .grassmann import (GrassmannElement, eq_up_to_sign, identify_generators, relative_sign,
                        rename_generators, render, sign_normalized, to_json)
from .homology import edge_cycle, is_null_homologous
from .library import EXAMPLES, example
from .surgery import (MoveError, build_triangle_tree, connected_sum, fuzz_invariance,
                      glue_with_info, glued_generating_function, gluing_vertex_maps,
                      transport_zetas)
from .torsion import TorsionError, invariant_I_D
from .triangulation import Triangulation, TriangulationError, load, to_dict

PASS, FAIL, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def _emit(args, text, data):
    if args.json:
        print(json.dumps(data, indent=1, sort_keys=True))
    else:
        print(text)


def default_seed() -> int:
    raw = os.environ.get("TQFT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError("TQFT_SEED must be an integer, got %r" % raw)


def load_manifold(source: str) -> Triangulation:
    if source in EXAMPLES:
        t = example(source)
    elif os.path.exists(source):
        t = load(source, name=os.path.basename(source))
    else:
        raise InputError("%r is neither a builtin example (%s) nor a file"
                         % (source, ", ".join(EXAMPLES)))
    t.validate()
    return t


def _function(t: Triangulation, raw: bool) -> InvariantFunction:
    f = generating_function(t)
    return f if raw else f.normalized()


# -- commands -------------------------------------------------------------------

def cmd_validate(args) -> int:
    t = load_manifold(args.source)
    d = t.validate()
    check = verify_all_marked_sets(t)
    data = d.as_dict()
    data["complex"] = bool(check)
    lines = ["%s: valid" % (t.name or args.source)]
    lines += ["  %s = %s" % kv for kv in d.as_dict().items()]
    lines.append("  complex property: %s" % ("ok" if check else check.failure))
    _emit(args, "\n".join(lines), data)
    return PASS if check else FAIL


def _parse_tags(items):
    out = []
    for item in items:
        for part in str(item).split(","):
            if part.strip():
                try:
                    out.append(int(part))
                except ValueError:
                    raise InputError("edge tags must be integers, got %r" % part)
    return out


def _one_invariant(job):
    t, D = job
    return invariant_I_D(t, D)


def cmd_invariant(args) -> int:
    t = load_manifold(args.source)
    if args.d is not None:
        D = _parse_tags(args.d)
        value = invariant_I_D(t, D)
        _emit(args, "I_%s = %s" % (D, _fmt(value)), {"D": D, "value": _fmt(value)})
        return PASS
    if args.all:
        sets = list(admissible_sets(t))
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                values = list(pool.map(_one_invariant, [(t, D) for D in sets]))
        else:
            values = [invariant_I_D(t, D) for D in sets]
        rows = [(D, v) for D, v in zip(sets, values) if v or args.zeros]
        text = "\n".join("I_%s = %s" % (D, _fmt(v)) for D, v in rows) or "all invariants vanish"
        _emit(args, text, [{"D": D, "value": _fmt(v)} for D, v in rows])
        return PASS
    f = _function(t, args.raw)
    status = PASS
    data = {"name": t.name, "degree": f.degree, "function": to_json(f.element)}
    lines = ["I = " + f.render()]
    if args.check_meridian:
        p, q = args.check_meridian
        try:
            bounds = is_null_homologous(t, edge_cycle(t, [p, q]))
        except (KeyError, ValueError) as exc:
            raise InputError("edges %d, %d do not form a boundary circle: %s" % (p, q, exc))
        vanishes = identify_generators(f.element, q, p).is_zero()
        lines.append("a[%d] := a[%d] gives %s; circle bounds in M: %s"
                     % (q, p, "0" if vanishes else "nonzero", "yes" if bounds else "no"))
        data["meridian"] = {"edges": [p, q], "vanishes": vanishes, "bounds": bounds}
        if bounds and not vanishes:
            status = FAIL
    _emit(args, "\n".join(lines), data)
    return status


def cmd_genfun(args) -> int:
    t = load_manifold(args.source)
    f = generating_function(t, method=args.method)
    status, data = PASS, {"name": t.name, "degree": f.degree, "function": to_json(f.element)}
    lines = ["I = " + render(f.element), "degree %d, %d terms" % (f.degree, len(f.element.terms))]
    if args.verify:
        bad = [D for D in admissible_sets(t) if f.coefficient(D) != invariant_I_D(t, D)]
        other = generating_function(t, method="subsets" if args.method == "integral" else "integral")
        agree = other.element == f.element
        lines.append("coefficients vs torsion: %s" % ("ok" if not bad else "mismatch at %s" % bad[:5]))
        lines.append("integral vs subsets: %s" % ("ok" if agree else "mismatch"))
        data["verify"] = {"coefficients": not bad, "methods": agree}
        if bad or not agree:
            status = FAIL
    _emit(args, "\n".join(lines), data)
    return status


def _distinct_rationals(rng, n):
    out = []
    while len(out) < n:
        z = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
        if z not in out:
            out.append(z)
    return out


def cmd_pentagon(args) -> int:
    cases = []
    if args.zeta:
        try:
            z = [Fraction(x) for x in args.zeta]
        except (ValueError, ZeroDivisionError):
            raise InputError("coordinates must be rationals like 3 or -2/5")
        if len(set(z)) != 5:
            raise InputError("the five coordinates must be distinct")
        cases.append(z)
    elif not args.random:
        cases.append([Fraction(k) for k in range(5)])
    if args.random:
        rng = random.Random(args.seed if args.seed is not None else default_seed())
        cases += [_distinct_rationals(rng, 5) for _ in range(args.random)]
    failed = [z for z in cases if not check_pentagon(z)]
    text = "pentagon: %d/%d pass" % (len(cases) - len(failed), len(cases))
    if failed:
        text += "\nfirst failure at zeta = %s" % [_fmt(x) for x in failed[0]]
    _emit(args, text, {"cases": len(cases), "failed": [[_fmt(x) for x in z] for z in failed]})
    return FAIL if failed else PASS


def cmd_fuzz(args) -> int:
    t = load_manifold(args.source)
    seed = args.seed if args.seed is not None else default_seed()
    rep = fuzz_invariance(t, args.moves, random.Random(seed), max_tets=args.max_tets)
    start = generating_function(t)
    lines = ["%d moves applied, %d steps skipped (no applicable site)" % (len(rep.applied), rep.skipped)]
    lines += ["  %s at %r" % m for m in rep.applied] if args.verbose else []
    lines.append("function %s up to one overall sign" % ("unchanged" if rep.ok else "CHANGED"))
    lines.append("normalized value: " + render(sign_normalized(start.element)))
    if rep.failure:
        lines.append(rep.failure)
    _emit(args, "\n".join(lines), {"ok": rep.ok, "moves": [[k, repr(s)] for k, s in rep.applied],
                                   "skipped": rep.skipped, "signs": rep.signs})
    return PASS if rep.ok else FAIL


def _parse_map(text):
    vmap = {}
    for part in text.split(","):
        try:
            a, b = part.split(":")
            vmap[int(a)] = int(b)
        except ValueError:
            raise InputError("vertex map must look like 1:2,2:1,3:3 (got %r)" % text)
    return vmap


def _offset_function(M2: Triangulation, offset: int, x: GrassmannElement) -> GrassmannElement:
    return rename_generators(x, {g: g + offset for g in M2.boundary_tags})


def cmd_glue(args) -> int:
    M1, M2 = load_manifold(args.first), load_manifold(args.second)
    c1, c2 = args.component
    for M, c in ((M1, c1), (M2, c2)):
        if not 0 <= c < len(M.components):
            raise InputError("%s has no boundary component %d" % (M.name, c))
    if args.match:
        vmap = _parse_map(args.match)
    else:
        vmap = next(gluing_vertex_maps(M1, c1, M2, c2, match_zeta=not args.transport_zeta), None)
        if vmap is None:
            raise InputError("no orientation-reversing matching of the boundary components found")
    if args.transport_zeta:
        M2 = transport_zetas(M1, M2, vmap)
    M, info = glue_with_info(M1, c1, M2, c2, vmap, name="glued")
    direct = generating_function(M)
    lines = ["glued manifold: %s" % (M.validate(),), "I = " + render(sign_normalized(direct.element))]
    data = {"vertex_map": {str(k): v for k, v in vmap.items()},
            "function": to_json(sign_normalized(direct.element))}
    status = PASS
    if args.verify:
        tree = build_triangle_tree(M1, c1)
        I1, I2 = generating_function(M1), generating_function(M2)
        g = glued_generating_function(I1, I2, M1, c1, M2, c2, vmap, tree)
        ok = eq_up_to_sign(g, direct.element)
        lines.append("gluing formula vs direct computation: %s" % ("agree up to sign" if ok else "DIFFER"))
        data["verify"] = ok
        status = PASS if ok else FAIL
    _emit(args, "\n".join(lines), data)
    return status


def cmd_consum(args) -> int:
    M1, M2 = load_manifold(args.first), load_manifold(args.second)
    M, B2, info = connected_sum(M1, M2, name="sum")
    direct = generating_function(M)
    lines = ["connected sum: %s" % (M.validate(),), "I = " + render(sign_normalized(direct.element))]
    data = {"function": to_json(sign_normalized(direct.element))}
    status = PASS
    if args.verify:
        x1 = generating_function(M1).element
        x2 = _offset_function(B2, info.tag_offset, generating_function(B2).element)
        ok = eq_up_to_sign(x1 * x2, direct.element)
        lines.append("product of the summands' functions: %s" % ("agree up to sign" if ok else "DIFFER"))
        data["verify"] = ok
        status = PASS if ok else FAIL
    _emit(args, "\n".join(lines), data)
    return status


def cmd_statesum(args) -> int:
    t = load_manifold(args.source)
    s = state_sum(t)
    lines = ["state sum = " + render(s)]
    data = {"state_sum": to_json(s)}
    if t.inner_vertices or len(t.components) != 1:
        expect, ok = "0", s.is_zero()
    else:
        expect = "2 I"
        ok = relative_sign(s, 2 * generating_function(t).element) != 0
    lines.append("expected %s: %s" % (expect, "ok" if ok else "MISMATCH"))
    data["expected"], data["ok"] = expect, ok
    _emit(args, "\n".join(lines), data)
    return PASS if ok else FAIL


def cmd_example(args) -> int:
    if args.name is None:
        for ex in EXAMPLES.values():
            print("%-12s %s" % (ex.name, ex.description))
        return PASS
    if args.name not in EXAMPLES:
        raise InputError("unknown example %r (choose from %s)" % (args.name, ", ".join(EXAMPLES)))
    t = example(args.name)
    print(json.dumps(to_dict(t), indent=1))
    return PASS


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tqft", description="Exact fermionic invariants of triangulated 3-manifolds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse and validate a triangulation")
    s.add_argument("source")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invariant", parents=[common], help="invariants I_D or the full function")
    s.add_argument("source")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--d", nargs="*", metavar="TAG", help="marked boundary edges (tags)")
    g.add_argument("--all", action="store_true", help="list I_D for every admissible D")
    s.add_argument("--zeros", action="store_true", help="with --all, list vanishing values too")
    s.add_argument("--jobs", type=int, default=1, help="worker processes for --all")
    s.add_argument("--check-meridian", nargs=2, type=int, metavar=("P", "Q"),
                   help="identify a[Q] with a[P] and report whether the result vanishes")
    s.add_argument("--raw", action="store_true", help="keep the raw overall sign")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("genfun", parents=[common], help="generating function (raw sign)")
    s.add_argument("source")
    s.add_argument("--method", choices=("integral", "subsets"), default="integral")
    s.add_argument("--verify", action="store_true", help="cross-check coefficients and methods")
    s.set_defaults(func=cmd_genfun)

    s = sub.add_parser("pentagon", parents=[common], help="check the 2-3 relation of tetrahedron functions")
    s.add_argument("--zeta", nargs=5, metavar="Z")
    s.add_argument("--random", type=int, default=0, metavar="N")
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_pentagon)

    s = sub.add_parser("fuzz", parents=[common], help="random interior moves keep the function")
    s.add_argument("source")
    s.add_argument("--moves", type=int, default=20)
    s.add_argument("--seed", type=int)
    s.add_argument("--max-tets", type=int, default=14)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("glue", parents=[common], help="glue two manifolds over boundary components")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--component", nargs=2, type=int, default=[0, 0], metavar=("K1", "K2"))
    s.add_argument("--match", help="vertex map, e.g. 1:2,2:1,3:3,4:4")
    s.add_argument("--transport-zeta", action="store_true",
                   help="give matched vertices of the second manifold the coordinates of the first")
    s.add_argument("--verify", action="store_true", help="compare the gluing formula with the direct result")
    s.set_defaults(func=cmd_glue)

    s = sub.add_parser("consum", parents=[common], help="connected sum")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--verify", action="store_true", help="compare with the product of the two functions")
    s.set_defaults(func=cmd_consum)

    s = sub.add_parser("statesum", parents=[common], help="raw state sum")
    s.add_argument("source")
    s.set_defaults(func=cmd_statesum)

    s = sub.add_parser("example", help="list builtin examples or print one as JSON")
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_example, json=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, TriangulationError, ComplexError, MoveError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return INPUT_ERROR
    except (TorsionError, LinalgError) as exc:
        print("error: degenerate input: %s" % exc, file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
