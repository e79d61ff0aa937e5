"""``hardlink`` command line.

Exit status: 0 when every checked property holds, 1 when one fails, 2 for
unusable input (bad file, parse error, enumeration guard exceeded).
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path

from . import diagram as dg
from . import hamlink, manifold, satlink
from .graphs import GraphError, parse_graph

DEFAULT_SEED = 20240229


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)


def _emit(report: dict, as_json: bool):
    if as_json:
        print(json.dumps(report, sort_keys=True))
    else:
        for k, v in report.items():
            print(f"{k}: {v}")


def _instance(path):
    try:
        return satlink.parse_instance(_read(path))
    except satlink.InstanceError as e:
        raise InputError(f"{path}: {e}") from None


def _graph(path):
    try:
        return parse_graph(_read(path))
    except GraphError as e:
        raise InputError(f"{path}: {e}") from None


def _fmt_assignment(a):
    return "".join("T" if x else "F" for x in a)


# -- subcommands --------------------------------------------------------------


def cmd_sat2link(args) -> int:
    sl = satlink.build_link(_instance(args.input))
    d = sl.diagram
    _write(args.out, dg.to_json(d))
    if args.svg:
        _write(args.svg, dg.render_svg(d))
    rep = dg.validate(d)
    _emit(
        {
            "components": d.n_components,
            "crossings": len(d.crossings),
            "crossing_bound": satlink.crossing_bound(sl.n, sl.m),
            "companion": f"(2,{sl.companion_q})",
            "valid": rep.ok,
        },
        args.json,
    )
    return 0 if rep.ok else 1


def cmd_sat_verify(args) -> int:
    ins = _instance(args.input)
    if ins.n > satlink.SOLVE_GUARD:
        raise InputError(f"n = {ins.n} exceeds the enumeration guard {satlink.SOLVE_GUARD}")
    if args.exhaustive and ins.n > satlink.BALANCE_GUARD:
        raise InputError(f"n = {ins.n} exceeds the enumeration guard {satlink.BALANCE_GUARD}")
    sl = satlink.build_link(ins)
    sols = satlink.solve_bruteforce(ins)
    failures = []
    if not dg.validate(sl.diagram).ok:
        failures.append("diagram does not validate")
    if sl.diagram.n_components != ins.n + 1:
        failures.append("component count is not n + 1")
    for a in sorted(sols):
        o = satlink.encode(sl, a)
        if not satlink.is_balanced(sl, o):
            failures.append(f"solution {_fmt_assignment(a)} encodes to an unbalanced orientation")
        if satlink.decode(sl, o) != a:
            failures.append(f"decode(encode({_fmt_assignment(a)})) differs")
    report = {"solutions": len(sols)}
    if args.exhaustive:
        balanced = satlink.balanced_bruteforce(sl)
        expected = {satlink.encode(sl, a) for a in sols}
        expected |= {o.reversed() for o in expected}
        if balanced != expected:
            failures.append("balanced orientations differ from the encoded solutions")
        report["balanced"] = len(balanced)
    else:
        rng = random.Random(args.seed)
        for _ in range(64):
            o = dg.Orientation(tuple(rng.choice((1, -1)) for _ in range(ins.n + 1)))
            if satlink.is_balanced(sl, o) and satlink.decode(sl, o) not in sols:
                failures.append("a sampled balanced orientation decodes to a non-solution")
                break
    for a in sorted(sols)[:1]:
        o = satlink.encode(sl, a)
        if satlink.slot_signs(sl, o) != satlink.traced_slot_signs(sl, o):
            failures.append("slot signs disagree with the traced diagram")
    report["solution_list"] = [_fmt_assignment(a) for a in sorted(sols, reverse=True)]
    report["failures"] = failures
    _emit(report, args.json)
    return 1 if failures else 0


def cmd_graph2manifold(args) -> int:
    g = _graph(args.input)
    t = manifold.build_manifold(g)
    _write(args.out, manifold.to_text(t))
    rep = manifold.validate(t)
    report = {
        "tets": t.tet_count,
        "closed": rep.closed,
        "orientable": rep.orientable,
        "euler": rep.euler,
    }
    ok = rep.ok and rep.closed and rep.euler == 0
    if args.invariants:
        h = manifold.h1(t)
        report["h1_free_rank"] = h.free_rank
        report["h1_torsion"] = list(h.torsion)
        perm = list(range(g.n))
        random.Random(args.seed).shuffle(perm)
        again = manifold.invariants(manifold.build_manifold(g.relabel(perm)))
        report["relabel_invariant"] = again == (t.tet_count, h.free_rank, h.torsion)
        ok = ok and report["relabel_invariant"]
    _emit(report, args.json)
    return 0 if ok else 1


def cmd_graph2sublink(args) -> int:
    g = hamlink.simplify(_graph(args.input))
    if args.find_string and g.n > hamlink.PATH_GUARD:
        raise InputError(f"n = {g.n} exceeds the enumeration guard {hamlink.PATH_GUARD}")
    hl = hamlink.build_link(g)
    d = hl.diagram
    _write(args.out, dg.to_json(d))
    report = {"components": d.n_components, "crossings": len(d.crossings)}
    ok = dg.validate(d).ok
    bold = ()
    if args.find_string:
        path = hamlink.hamiltonian_bruteforce(g)
        sub = hamlink.find_string_sublink(hl)
        report["hamiltonian_path"] = None if path is None else [v + 1 for v in path]
        report["string_sublink"] = None if sub is None else [d.roles[c] for c in sorted(sub)]
        if sub is not None:
            ok = ok and hamlink.check_string_of_trefoils(hl, sub)
            bold = tuple(sorted(sub))
    if args.svg:
        _write(args.svg, dg.render_svg(d, bold=bold))
    _emit(report, args.json)
    return 0 if ok else 1


def cmd_ham_verify(args) -> int:
    g = hamlink.simplify(_graph(args.input))
    if g.n > min(args.max_n, hamlink.PATH_GUARD):
        raise InputError(f"n = {g.n} exceeds the guard --max-n {args.max_n}")
    hl = hamlink.build_link(g)
    d = hl.diagram
    failures = []
    if not dg.validate(d).ok:
        failures.append("diagram does not validate")
    ok, msg = hamlink.verify_incidence_linking(g, hl)
    if not ok:
        failures.append(msg)
    loose, tight = hamlink.crossing_bounds(g.n)
    if len(d.crossings) > tight or (g.n >= 3 and len(d.crossings) > loose):
        failures.append("crossing bound exceeded")
    path = hamlink.hamiltonian_bruteforce(g)
    sub = hamlink.find_string_sublink(hl)
    if (path is None) != (sub is None):
        failures.append("Hamiltonian path and string sublink disagree")
    if sub is not None and not (
        len(sub) == 2 * g.n - 1 and hamlink.check_string_of_trefoils(hl, sub)
    ):
        failures.append("returned sublink is not a string of trefoils")
    if g.n <= 4:
        for subset in itertools.combinations(range(d.n_components), 2 * g.n - 1):
            seq = hamlink.decode(hl, subset)
            if seq is not None and not hamlink.is_hamiltonian_path(g, seq):
                failures.append(f"string sublink {subset} is not a Hamiltonian path")
                break
    _emit(
        {
            "vertices": g.n,
            "edges": len(g.edges),
            "crossings": len(d.crossings),
            "hamiltonian_path": None if path is None else [v + 1 for v in path],
            "failures": failures,
        },
        args.json,
    )
    return 1 if failures else 0


def cmd_check(args) -> int:
    text = _read(args.input)
    if text.startswith("tets"):
        try:
            t = manifold.from_text(text)
        except manifold.TriangulationError as e:
            raise InputError(str(e)) from None
        rep = manifold.validate(t)
        ok = rep.ok
        report = {"kind": "triangulation", "valid": ok, "closed": rep.closed,
                  "euler": rep.euler, "failures": list(rep.failures)}
    else:
        try:
            d = dg.from_json(text)
        except (ValueError, KeyError, TypeError) as e:
            raise InputError(f"{args.input}: not a diagram file ({e})") from None
        rep = dg.validate(d)
        ok = rep.ok
        report = {"kind": "diagram", "valid": ok, "faces": rep.faces,
                  "failures": list(rep.failures)}
    _emit(report, args.json)
    return 0 if ok else 1


def cmd_render(args) -> int:
    try:
        d = dg.from_json(_read(args.input))
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{args.input}: not a diagram file ({e})") from None
    bold = tuple(int(x) for x in args.bold.split(",")) if args.bold else ()
    try:
        svg = dg.render_svg(d, bold=bold)
    except ValueError as e:
        raise InputError(str(e)) from None
    if args.out:
        _write(args.out, svg)
    else:
        sys.stdout.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p = argparse.ArgumentParser(prog="hardlink", description="Build and verify reduction gadgets.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sat2link", parents=[common], help="1-in-3-SAT instance to link diagram")
    s.add_argument("input")
    s.add_argument("--out")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_sat2link)

    s = sub.add_parser("sat-verify", parents=[common], help="check balanced orientations against solutions")
    s.add_argument("input")
    s.add_argument("--exhaustive", action="store_true")
    s.set_defaults(func=cmd_sat_verify)

    s = sub.add_parser("graph2manifold", parents=[common], help="graph to triangulated graph manifold")
    s.add_argument("input")
    s.add_argument("--out")
    s.add_argument("--invariants", action="store_true")
    s.set_defaults(func=cmd_graph2manifold)

    s = sub.add_parser("graph2sublink", parents=[common], help="graph to trefoil-and-loop link")
    s.add_argument("input")
    s.add_argument("--out")
    s.add_argument("--svg")
    s.add_argument("--find-string", action="store_true")
    s.set_defaults(func=cmd_graph2sublink)

    s = sub.add_parser("ham-verify", parents=[common], help="check Hamiltonian paths against string sublinks")
    s.add_argument("input")
    s.add_argument("--max-n", type=int, default=6)
    s.set_defaults(func=cmd_ham_verify)

    s = sub.add_parser("check", parents=[common], help="validate a diagram or triangulation file")
    s.add_argument("input")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("render", parents=[common], help="diagram file to SVG")
    s.add_argument("input")
    s.add_argument("--out")
    s.add_argument("--bold", help="comma-separated component ids")
    s.set_defaults(func=cmd_render)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"hardlink: error: {e}", file=sys.stderr)
        return 2
    except dg.InvalidDiagram as e:
        print(f"hardlink: error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
