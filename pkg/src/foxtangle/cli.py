"""Command-line interface.

Exit status: 0 for success or a positive verdict, 1 for a negative verdict
(not realizable, not equivalent, coloring rejected), 2 for usage and input
errors.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import List, Optional

from . import diagram as dg
from . import hurwitz, realize
from .errors import FoxTangleError, NotEquivalent, NotRealizable
from .vectors import RingSpec, Z, invariants, parse_vector

PROG = "foxtangle"

# a vector literal such as "-1,7,-5" would otherwise be taken for an option
_VECTOR_LITERAL = re.compile(r"^\s*[-(\[]?\s*-?\d+(\s*,\s*-?\d+)*\s*[)\]]?\s*$")


class _Outcome(Exception):
    def __init__(self, code: int):
        self.code = code


def _ring(args) -> RingSpec:
    if args.ring == "z":
        if args.p is not None:
            raise FoxTangleError("--p is only meaningful with --ring zp")
        return Z
    if args.p is None:
        raise FoxTangleError("--ring zp needs --p")
    return RingSpec.mod(args.p)


def _emit(args, payload: dict, text: str):
    if args.json:
        sys.stdout.write(dg.dumps(payload))
    else:
        print(text)


def _fmt_vec(entries) -> str:
    return "(" + ",".join(str(x) for x in entries) + ")"


def cmd_invariants(args) -> int:
    v = parse_vector(args.vector, _ring(args))
    rep = invariants(v)
    if rep.trivial or rep.d is None:
        text = f"Δ={rep.delta} trivial={str(rep.trivial).lower()}"
    else:
        res = ",".join(str(x) for x in rep.m_multiset)
        text = f"Δ={rep.delta} d={rep.d} k={rep.k} M=[{res}]@mod{rep.modulus}"
    _emit(args, {"vector": list(v.entries), "ring": v.ring.to_json(), **rep.to_json()}, text)
    return 0


def cmd_realizable(args) -> int:
    v = parse_vector(args.vector, _ring(args))
    if args.trace:
        if not v.ring.is_integers or args.loops or args.classical:
            raise FoxTangleError("--trace applies to the virtual decision over Z only")
        verdict = realize.reduce_trace(v)
    else:
        verdict = realize.realizable(v, loops=args.loops, classical=args.classical)
    lines = [f"{'yes' if verdict.realizable else 'no'} ({verdict.reason.value})"]
    lines += ["  -> " + _fmt_vec(t) for t in verdict.trace]
    _emit(args, {"vector": list(v.entries), "ring": v.ring.to_json(), **verdict.to_json()}, "\n".join(lines))
    return 0 if verdict.realizable else 1


def cmd_realize(args) -> int:
    v = parse_vector(args.vector, _ring(args))
    try:
        w = realize.realize(v, loops=args.loops, classical=args.classical)
    except NotRealizable as exc:
        print(f"no: {exc}", file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    files = {
        "recipe.json": w.recipe,
        "diagram.json": w.diagram,
        "coloring.json": w.coloring,
    }
    for name, obj in files.items():
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(dg.dumps(obj))
    summary = {
        "vector": list(v.entries),
        "ring": v.ring.to_json(),
        "crossings": len(w.diagram.crossings),
        "virtual": w.diagram.count_virtual(),
        "loops": len(w.diagram.strings.loops),
        "properties": sorted(w.properties),
        "files": sorted(files),
    }
    text = (f"wrote {', '.join(sorted(files))} to {args.out}: "
            f"{summary['crossings']} crossings, {summary['virtual']} virtual, {summary['loops']} loops")
    _emit(args, summary, text)
    return 0


def cmd_verify(args) -> int:
    d = dg.load_diagram(args.diagram)
    c = dg.load_coloring(args.coloring)
    ok = dg.verify(d, c)
    payload = {"valid": ok, "virtual": d.count_virtual()}
    text = "valid" if ok else "invalid"
    if ok:
        v = dg.boundary_vector(d, c)
        payload["boundary"] = list(v.entries)
        text += " boundary=" + _fmt_vec(v.entries)
        if args.expect is not None:
            want = parse_vector(args.expect, c.ring)
            payload["matches"] = want == v
            ok = want == v
            text += " matches" if ok else f" differs from {_fmt_vec(want.entries)}"
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_solve(args) -> int:
    d = dg.load_diagram(args.diagram)
    mod = dg.solve(d, _ring(args))
    lines = [f"arcs={d.num_arcs} generators={mod.rank}"]
    for g, order in zip(mod.generators, mod.orders):
        lines.append("  " + _fmt_vec(g) + ("" if order is None else f" order {order}"))
    _emit(args, {"arcs": d.num_arcs, **mod.to_json()}, "\n".join(lines))
    return 0


def cmd_act(args) -> int:
    v = parse_vector(args.vector)
    w = hurwitz.parse_word(args.word, len(v))
    u = hurwitz.act(v, w)
    _emit(args, {"vector": list(v.entries), "word": hurwitz.format_word(w), "result": list(u.entries)},
          _fmt_vec(u.entries))
    return 0


def cmd_equiv(args) -> int:
    v, u = parse_vector(args.v), parse_vector(args.u)
    ok = hurwitz.orbit_equivalent(v, u)
    _emit(args, {"v": list(v.entries), "u": list(u.entries), "equivalent": ok}, "yes" if ok else "no")
    return 0 if ok else 1


def cmd_connect(args) -> int:
    v, u = parse_vector(args.v), parse_vector(args.u)
    try:
        w = hurwitz.connect(v, u)
    except NotEquivalent as exc:
        print(f"no: {exc}", file=sys.stderr)
        return 1
    _emit(args, {"v": list(v.entries), "u": list(u.entries), "word": hurwitz.format_word(w),
                 "length": len(w)}, hurwitz.format_word(w) or "(empty word)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", choices=["z", "zp"], default="z", help="coefficient ring (default z)")
    common.add_argument("--p", type=int, help="modulus for --ring zp (odd, >= 3)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    plain = argparse.ArgumentParser(add_help=False)
    plain.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog=PROG, description="Fox-colored tangle diagrams and boundary vectors.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="alternating sum, d, k and residues")
    p.add_argument("vector")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("realizable", parents=[common], help="decide realizability")
    p.add_argument("vector")
    p.add_argument("--trace", action="store_true", help="show the parity reduction steps")
    p.add_argument("--loops", action="store_true", help="allow loop components")
    p.add_argument("--classical", action="store_true", help="classical diagrams only")
    p.set_defaults(func=cmd_realizable)

    p = sub.add_parser("realize", parents=[common], help="build a witness diagram")
    p.add_argument("vector")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--loops", action="store_true", help="allow loop components")
    p.add_argument("--classical", action="store_true", help="classical diagrams only")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", parents=[plain], help="check a coloring of a diagram")
    p.add_argument("diagram")
    p.add_argument("coloring")
    p.add_argument("--expect", help="boundary vector the coloring should produce")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="all colorings of a diagram")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_solve)

    hp = sub.add_parser("hurwitz", help="braid group action on integer vectors")
    hsub = hp.add_subparsers(dest="hurwitz_command", required=True)
    p = hsub.add_parser("act", parents=[plain], help="apply a braid word")
    p.add_argument("vector")
    p.add_argument("word", help='letters such as "s1 s2^-1"')
    p.set_defaults(func=cmd_act)
    p = hsub.add_parser("equiv", parents=[plain], help="same orbit?")
    p.add_argument("v")
    p.add_argument("u")
    p.set_defaults(func=cmd_equiv)
    p = hsub.add_parser("connect", parents=[plain], help="a word taking v to u")
    p.add_argument("v")
    p.add_argument("u")
    p.set_defaults(func=cmd_connect)
    return parser


def _protect_vectors(argv: List[str]) -> List[str]:
    # argparse reads a leading '-' as an option; a leading space keeps it positional
    return [" " + a if a.startswith("-") and _VECTOR_LITERAL.match(a) and "," in a else a for a in argv]


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_protect_vectors(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FoxTangleError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
