"""Command-line interface.

Exit codes: 0 pass, 1 fail, 2 error (bad input, parse failure, limits).
Matrix and pair arguments are file paths or inline text.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any

from . import constructors as cons
from .boxenum import Parallelepiped, Topology, enumerate_points
from .errors import LatPairError, ParseError
from .goodpair import CheckReport, WitnessCandidate, check_single, check_witness
from .lattice import Lattice, lattices_equal
from .oracle import McConfig, mc_tiling_check, notgood_scan
from .svg import SvgScene, emit_svg
from .textio import matrix_to_obj, pair_to_obj, parse_matrix, parse_pair, parse_scalar

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _read(arg: str) -> str:
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def load_matrix(arg: str, radicand: int = 0):
    return parse_matrix(_read(arg), radicand)


def load_pair(arg: str, radicand: int = 0):
    return parse_pair(_read(arg), radicand)


def _vector(text: str, radicand: int) -> list:
    return [parse_scalar(x, radicand) for x in text.split(",")]


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _emit(obj: Any, args) -> None:
    if args.pretty:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(json.dumps(obj, sort_keys=True))


def _report(report: CheckReport, args) -> int:
    _emit(report.to_dict(), args)
    return EXIT_PASS if report.passed else EXIT_FAIL


# -- construction specs -------------------------------------------------------

def _opt_matrix(value, radicand):
    return None if value is None else load_matrix(str(value), radicand)


def build_constructed(spec: dict, radicand: int = 0, max_cells=None) -> cons.ConstructedPair:
    """Build a family member from a flat dict of CLI-style options."""
    family = spec.get("family")
    if family == "unipotent":
        if spec.get("t") is None:
            raise ValueError("unipotent needs --t")
        return cons.unipotent_pair(
            load_matrix(str(spec["t"]), radicand),
            _opt_matrix(spec.get("P"), radicand),
            _opt_matrix(spec.get("Q"), radicand),
            max_cells=max_cells,
        )
    if family == "cascade":
        if spec.get("p") is None:
            raise ValueError("cascade needs --p")
        p = [Fraction(x) for x in str(spec["p"]).split(",")]
        params = cons.CascadeParams(p, _opt_matrix(spec.get("P"), 0), _opt_matrix(spec.get("Q"), 0))
        return cons.cascade_pair(params, max_cells=max_cells)
    if family == "diagonal":
        if spec.get("m") is None:
            raise ValueError("diagonal needs --m")
        params = cons.DiagParams(
            _int_list(str(spec["m"])), _opt_matrix(spec.get("P"), 0), _opt_matrix(spec.get("Q"), 0)
        )
        return cons.diagonal_pair(params, max_cells=max_cells)
    if family == "coprime2":
        if spec.get("m") is None or spec.get("n") is None:
            raise ValueError("coprime2 needs --m and --n")
        params = cons.CoprimeParams(
            int(spec["m"]),
            int(spec["n"]),
            U=_opt_matrix(spec.get("U"), 0),
            V=_opt_matrix(spec.get("V"), 0),
        )
        return cons.coprime_pair(params, max_cells=max_cells)
    if family == "direct_sum":
        if spec.get("a") is None or spec.get("b") is None:
            raise ValueError("direct_sum needs --a and --b (JSON family specs)")
        a = build_constructed(_spec_obj(spec["a"]), radicand, max_cells)
        b = build_constructed(_spec_obj(spec["b"]), radicand, max_cells)
        return cons.direct_sum_pair(a, b, max_cells=max_cells)
    if family == "tensor":
        if spec.get("base") is None or spec.get("N") is None:
            raise ValueError("tensor needs --base (JSON family spec) and --N")
        base = build_constructed(_spec_obj(spec["base"]), radicand, max_cells)
        return cons.tensor_pair(base, load_matrix(str(spec["N"]), 0), max_cells=max_cells)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(cons.FAMILIES)}")


def _spec_obj(value) -> dict:
    if isinstance(value, dict):
        return value
    try:
        obj = json.loads(_read(str(value)))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid family spec: {exc.msg}", row=exc.lineno, column=exc.colno) from None
    if not isinstance(obj, dict):
        raise ParseError("family spec must be a JSON object")
    return obj


def constructed_to_obj(c: cons.ConstructedPair) -> dict:
    return {
        "family": c.family,
        "params": c.params,
        "pair": pair_to_obj(c.pair),
        "witness": matrix_to_obj(c.witness.n),
    }


# -- commands -------------------------------------------------------------

def cmd_check_witness(args) -> int:
    pair = load_pair(args.pair, args.radicand)
    w = WitnessCandidate(load_matrix(args.witness, args.radicand or pair.radicand))
    return _report(check_witness(w, pair, all_failures=args.all_failures, max_cells=args.max_cells), args)


def cmd_check_single(args) -> int:
    latt = Lattice(load_matrix(args.lattice, args.radicand))
    w = WitnessCandidate(load_matrix(args.witness, args.radicand or latt.radicand))
    return _report(check_single(w, latt, max_cells=args.max_cells), args)


def cmd_construct(args) -> int:
    spec = {k: getattr(args, k) for k in ("t", "p", "m", "n", "P", "Q", "U", "V", "a", "b", "base", "N")}
    spec["family"] = args.family
    c = build_constructed(spec, args.radicand, args.max_cells)
    _emit(constructed_to_obj(c), args)
    return EXIT_PASS


def cmd_enumerate(args) -> int:
    latt = Lattice(load_matrix(args.lattice, args.radicand))
    box = Parallelepiped(load_matrix(args.box, args.radicand or latt.radicand), Topology(args.topology))
    translate = _vector(args.translate, args.radicand or latt.radicand) if args.translate else None
    res = enumerate_points(latt, box, max_cells=args.max_cells, translate=translate)
    if args.json or args.pretty:
        _emit({"points": [list(k) for k in res.points], "images": [[str(x) for x in y] for y in res.images]}, args)
    else:
        for k in res.points:
            print(",".join(str(x) for x in k))
    return EXIT_PASS


def cmd_verify_mc(args) -> int:
    latt = Lattice(load_matrix(args.lattice, args.radicand))
    w = WitnessCandidate(load_matrix(args.witness, args.radicand or latt.radicand))
    cfg = McConfig(args.samples, args.seed, args.denbound, Fraction(args.radius))
    return _report(mc_tiling_check(w, latt, cfg, max_cells=args.max_cells), args)


def cmd_notgood_scan(args) -> int:
    return _report(notgood_scan(args.r, args.count, args.seed, max_cells=args.max_cells), args)


def cmd_equal_lattices(args) -> int:
    a = Lattice(load_matrix(args.a, args.radicand))
    b = Lattice(load_matrix(args.b, args.radicand or a.radicand))
    equal = lattices_equal(a, b)
    _emit({"equal": equal}, args)
    return EXIT_PASS if equal else EXIT_FAIL


def cmd_emit_svg(args) -> int:
    lattices = []
    if args.pair:
        pair = load_pair(args.pair, args.radicand)
        lattices = [pair.gamma1, pair.gamma2]
    for item in args.lattice or []:
        lattices.append(Lattice(load_matrix(item, args.radicand)))
    if not lattices:
        raise ValueError("emit-svg needs --pair or at least one --lattice")
    radicand = args.radicand or max(l.radicand for l in lattices)
    scene = SvgScene(load_matrix(args.witness, radicand), lattices, Fraction(args.window))
    text = emit_svg(scene)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radicand", type=int, default=0, help="r for the field Q(sqrt r); 0 for Q")
    common.add_argument("--max-cells", type=int, default=None, help="enumeration cell limit")
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--pretty", action="store_true", help="indented JSON output")

    parser = argparse.ArgumentParser(prog="latpair", description="Exact checks for common fundamental domains of lattice pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-witness", parents=[common], help="test N[0,1)^d against a pair")
    p.add_argument("--pair", required=True)
    p.add_argument("--witness", required=True)
    p.add_argument("--all-failures", action="store_true")
    p.set_defaults(func=cmd_check_witness)

    p = sub.add_parser("check-single", parents=[common], help="test N[0,1)^d against one lattice")
    p.add_argument("--lattice", required=True)
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_check_single)

    p = sub.add_parser("construct", parents=[common], help="build a pair with its witness")
    p.add_argument("--family", required=True, choices=cons.FAMILIES)
    p.add_argument("--t", help="unit-triangular matrix (unipotent)")
    p.add_argument("--p", help="comma-separated nonzero rationals (cascade)")
    p.add_argument("--m", help="integers (diagonal) or one integer (coprime2)")
    p.add_argument("--n", help="integer (coprime2)")
    p.add_argument("--P")
    p.add_argument("--Q")
    p.add_argument("--U")
    p.add_argument("--V")
    p.add_argument("--a", help="JSON family spec (direct_sum)")
    p.add_argument("--b", help="JSON family spec (direct_sum)")
    p.add_argument("--base", help="JSON family spec (tensor)")
    p.add_argument("--N", help="integral unimodular matrix (tensor)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("enumerate", parents=[common], help="lattice points in a parallelepiped")
    p.add_argument("--lattice", required=True)
    p.add_argument("--box", required=True)
    p.add_argument("--topology", default=Topology.OPEN_PM1.value, choices=[t.value for t in Topology])
    p.add_argument("--translate", help="comma-separated shift")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-mc", parents=[common], help="exact Monte-Carlo tiling counts")
    p.add_argument("--witness", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--denbound", type=int, default=97)
    p.add_argument("--radius", default="2")
    p.set_defaults(func=cmd_verify_mc)

    p = sub.add_parser("notgood-scan", parents=[common], help="random search against (R(r) Z^2, Z^2)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_notgood_scan)

    p = sub.add_parser("equal-lattices", parents=[common], help="do two bases span the same lattice")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_equal_lattices)

    p = sub.add_parser("emit-svg", parents=[common], help="draw a planar tiling")
    p.add_argument("--witness", required=True)
    p.add_argument("--pair")
    p.add_argument("--lattice", action="append")
    p.add_argument("--window", default="2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit_svg)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LatPairError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
