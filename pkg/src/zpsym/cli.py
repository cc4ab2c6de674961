"""Command-line front end.

Every subcommand prints either a plain-text rendering or a JSON document
with a top-level ``"schema"`` field.  Rationals are written as strings.

Exit status: 0 on success, 1 for inputs outside a computation's domain (and
for scenarios whose expected verdict is not reproduced), 2 for usage and
input-format errors, 3 if two computation paths disagree.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from . import __version__
from .defects import (
    GroupType,
    DefectPath,
    dedekind_sum,
    defect_point,
    defect_surface,
    defect_value,
    fmt_rational,
    group_defect,
    group_slack,
)
from .errors import ConsistencyError, DomainError, InputFormatError
from .formats import parse_fixed_point_data, parse_graph, to_dot
from .gsig import GroupCensus, ManifoldInvariants, feasibility_solver, gsig_residual
from .localrep import Component, component_fixed_data
from .plumbing import (
    apply,
    atilde,
    atilde_fixed_congruence,
    atilde_rotation_sequences,
    chain_transfer,
    classify,
    dtilde,
    dtilde_congruence,
    dtilde_transfer,
    etilde,
)
from .replay import reproduce_all, summary_json, summary_text
from .scenarios import (
    EXAMPLE_310_CASES,
    K3_SIGNATURE,
    example_39,
    example_310,
    scan_primes,
    scan_to_json,
    scan_to_text,
    theorem_a,
)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _schema(kind: str) -> str:
    return f"zpsym.{kind}/1"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# Each handler returns (exit status, JSON document, text rendering).
Result = tuple[int, dict, str]


def cmd_defect(args: argparse.Namespace) -> Result:
    if args.batch:
        rows = []
        for lineno, line in enumerate(_read(args.batch).splitlines(), 1):
            tokens = line.split("#", 1)[0].split()
            if not tokens:
                continue
            if len(tokens) != 2:
                raise InputFormatError(f"line {lineno}: expected 'p q'")
            try:
                p, q = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise InputFormatError(f"line {lineno}: expected integers") from None
            rows.append({"p": p, "q": q, "value": fmt_rational(defect_point(p, q))})
        text = "\n".join(f"I({r['p']},{r['q']}) = {r['value']}" for r in rows)
        return EXIT_OK, {"schema": _schema("defect-batch"), "rows": rows}, text
    if args.p is None:
        raise UsageError("--p is required")
    if args.selfint is not None:
        value = fmt_rational(defect_surface(args.p, args.selfint))
        doc = {"schema": _schema("surface-defect"), "p": args.p, "selfint": args.selfint, "value": value}
        return EXIT_OK, doc, f"def_Y(p={args.p}, Y.Y={args.selfint}) = {value}"
    if args.q is None:
        raise UsageError("one of --q or --selfint is required")
    result = defect_value(args.p, args.q, args.path)
    value = repr(result.value) if result.path is DefectPath.ORACLE else fmt_rational(result.value)
    doc: dict[str, Any] = {"schema": _schema("defect"), "p": args.p, "q": args.q, "value": value}
    if result.path is not DefectPath.CLOSED_FORM:
        doc["path"] = result.path.value
    return EXIT_OK, doc, f"I({args.p},{args.q}) = {value}"


def cmd_dedekind(args: argparse.Namespace) -> Result:
    value = fmt_rational(dedekind_sum(args.q, args.p))
    doc = {"schema": _schema("dedekind"), "p": args.p, "q": args.q, "value": value}
    return EXIT_OK, doc, f"s({args.q},{args.p}) = {value}"


def cmd_group_defect(args: argparse.Namespace) -> Result:
    t = GroupType.parse(args.type)
    value, slack = group_defect(t, args.p), group_slack(t, args.p)
    doc = {"schema": _schema("group-defect"), "p": args.p, "type": t.value, "size": t.size,
           "value": fmt_rational(value), "slack": fmt_rational(slack)}
    text = f"def_({t.value})(p={args.p}) = {fmt_rational(value)}  [{t.size} points, slack {fmt_rational(slack)}]"
    return EXIT_OK, doc, text


def cmd_residual(args: argparse.Namespace) -> Result:
    data = parse_fixed_point_data(_read(args.data))
    sign_mg = args.sign_MG if args.sign_MG is not None else args.sign_M
    res = gsig_residual(data.p, args.sign_M, sign_mg, data)
    doc = {
        "schema": _schema("residual"),
        "p": data.p,
        "sign_M": args.sign_M,
        "sign_MG": sign_mg,
        "points": len(data.isolated),
        "surfaces": len(data.surfaces),
        "fixed_euler": data.euler,
        "point_defects": fmt_rational(data.point_defects()),
        "surface_defects": fmt_rational(data.surface_defects()),
        "residual": fmt_rational(res),
        "consistent": res == 0,
    }
    text = "\n".join([
        f"p = {data.p}, {len(data.isolated)} points, {len(data.surfaces)} surfaces, chi(M^G) = {data.euler}",
        f"sum def_m = {doc['point_defects']}",
        f"sum def_Y = {doc['surface_defects']}",
        f"residual {doc['residual']}: {'CONSISTENT' if res == 0 else 'INCONSISTENT'}",
    ])
    return EXIT_OK, doc, text


def cmd_solve(args: argparse.Namespace) -> Result:
    report = feasibility_solver(args.p, ManifoldInvariants(args.sign, args.c1_squared))
    lines = [f"p = {report.p}, chi = {report.chi}, sign = {report.sign}"]
    lines += [f"slack {t.value}: {fmt_rational(v)}" for t, v in report.slack_table.items()]
    lines += [f"solution {c}" for c in report.solutions]
    lines.append("forced trivial" if report.forced_trivial else f"{len(report.solutions)} solution(s)")
    return EXIT_OK, report.to_json(), "\n".join(lines)


def cmd_scan(args: argparse.Namespace) -> Result:
    rows = scan_primes(args.p_max, args.sign)
    return EXIT_OK, scan_to_json(rows, args.p_max, args.sign), scan_to_text(rows)


_FAMILIES: dict[str, Callable[[int], Any]] = {"A": atilde, "D": dtilde, "E": etilde}


def cmd_classify(args: argparse.Namespace) -> Result:
    if args.graph is not None:
        named = parse_graph(_read(args.graph))
        graph, names = named.graph, named.names
    elif args.family is not None:
        if args.n is None:
            raise UsageError("--family needs --n")
        graph, names = _FAMILIES[args.family](args.n), None
    else:
        raise UsageError("one of --graph or --family is required")
    cls = classify(graph)
    mults = list(cls.multiplicities) if cls.multiplicities else None
    doc = {"schema": _schema("classify"), "vertices": graph.vertex_count,
           "kind": cls.name, "affine": cls.affine, "multiplicities": mults}
    if args.dot:
        return EXIT_OK, doc, to_dot(graph, names, mults).rstrip("\n")
    text = cls.name if mults is None else f"{cls.name} multiplicities {tuple(mults)}"
    return EXIT_OK, doc, text


def _matrix_text(m) -> str:
    return f"[[{m[0][0]}, {m[0][1]}], [{m[1][0]}, {m[1][1]}]]"


def cmd_plumb(args: argparse.Namespace) -> Result:
    if args.action == "transfer":
        m = dtilde_transfer(args.i) if args.dtilde else chain_transfer(args.i)
        doc = {"schema": _schema("transfer"), "i": args.i, "dtilde": args.dtilde,
               "matrix": [list(r) for r in m]}
        text = _matrix_text(m)
        if args.seed:
            image = apply(m, tuple(args.seed))
            doc["seed"], doc["image"] = list(args.seed), list(image)
            text += f"\n{tuple(args.seed)} -> {image}"
        return EXIT_OK, doc, text
    if args.action == "dtilde":
        ok = dtilde_congruence(args.n, args.p)
        doc = {"schema": _schema("dtilde-congruence"), "n": args.n, "p": args.p, "holds": ok}
        return EXIT_OK, doc, f"D-tilde({args.n}) with fixed end sphere at p={args.p}: {'admissible' if ok else 'excluded'}"
    if args.action == "cycle":
        ok = atilde_fixed_congruence((args.u, args.v), args.k, args.p)
        doc = {"schema": _schema("cycle-congruence"), "u": args.u, "v": args.v,
               "k": args.k, "p": args.p, "holds": ok}
        return EXIT_OK, doc, f"k(u+v) = {args.k * (args.u + args.v)} mod {args.p}: {'closes' if ok else 'does not close'}"
    seqs = atilde_rotation_sequences(args.p, args.k)
    doc = {"schema": _schema("rotation-sequences"), "p": args.p, "k": args.k,
           "sequences": [list(s) for s in seqs]}
    text = "\n".join(" ".join(map(str, s)) for s in seqs) or "no admissible sequence"
    return EXIT_OK, doc, text


def cmd_component_data(args: argparse.Namespace) -> Result:
    alternatives = component_fixed_data(args.component, args.p)
    docs, lines = [], []
    for n, data in enumerate(alternatives, 1):
        points = [{"label": pt.label, "rotations": [list(r.as_tuple()) for r in pt.rotations],
                   "q": pt.rep.q, "defect": fmt_rational(pt.rep.defect())} for pt in data.points]
        spheres = [{"label": s.label, "points": [lbl for lbl, _ in s.fixed]} for s in data.spheres]
        surfaces = [{"genus": s.genus, "selfint": s.self_intersection} for s in data.surfaces]
        docs.append({"points": points, "spheres": spheres, "surfaces": surfaces,
                     "constraints": list(data.constraints)})
        if len(alternatives) > 1:
            lines.append(f"alternative {n}")
        for pt in points:
            rots = " ".join(f"({a},{b})" for a, b in pt["rotations"])
            lines.append(f"  point {pt['label']}: rotations {rots}, q = {pt['q']}, defect {pt['defect']}")
        for s in spheres:
            lines.append(f"  sphere {s['label']}: through {', '.join(s['points'])}")
        for s in surfaces:
            lines.append(f"  fixed surface: genus {s['genus']}, self-intersection {s['selfint']}")
        lines += [f"  {c}" for c in data.constraints]
    doc = {"schema": _schema("component-data"), "component": Component(args.component).value,
           "p": args.p, "alternatives": docs}
    return EXIT_OK, doc, "\n".join(lines)


def _parse_census(text: str) -> GroupCensus:
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"census must be comma-separated integers, got {text!r}") from None
    if len(values) not in (4, 5):
        raise UsageError("census is d1,d2,d3,d4[,special]")
    return GroupCensus.of(*values)


def cmd_scenario(args: argparse.Namespace) -> Result:
    if args.name == "theorem-a":
        report = theorem_a(args.p if args.p is not None else 5, args.sign)
    elif args.name == "example-3.9":
        census = _parse_census(args.census) if args.census else None
        report = example_39(args.p if args.p is not None else 5, census)
    else:
        if args.case is None:
            raise UsageError("example-3.10 needs --case")
        report = example_310(args.case, args.p)
    status = EXIT_OK if report.reproduced else EXIT_DOMAIN
    return status, report.to_json(), report.to_text()


def cmd_reproduce_all(args: argparse.Namespace) -> Result:
    results = reproduce_all()
    status = EXIT_OK if all(r.ok for r in results) else EXIT_DOMAIN
    return status, summary_json(results), summary_text(results)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zpsym",
        description="Exact invariants for prime-order cyclic actions on 4-manifolds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, handler: Callable[[argparse.Namespace], Result], help: str,
            formatted: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[fmt] if formatted else [], help=help, description=help)
        p.set_defaults(handler=handler)
        return p

    p = add("defect", cmd_defect, "signature defect I(p,q) of a fixed point, or def_Y of a fixed surface")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--selfint", type=int, help="self-intersection of a fixed surface")
    p.add_argument("--path", choices=[d.value for d in DefectPath], default=DefectPath.CLOSED_FORM.value)
    p.add_argument("--batch", metavar="FILE", help="file of 'p q' lines ('-' for stdin)")

    p = add("dedekind", cmd_dedekind, "Dedekind sum s(q,p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = add("group-defect", cmd_group_defect, "total defect of one fixed-point group")
    p.add_argument("--type", required=True, choices=[t.value for t in GroupType])
    p.add_argument("--p", type=int, required=True)

    p = add("residual", cmd_residual, "G-signature residual of a fixed-point data file")
    p.add_argument("--data", required=True, metavar="FILE")
    p.add_argument("--sign-M", dest="sign_M", type=int, required=True)
    p.add_argument("--sign-MG", dest="sign_MG", type=int,
                   help="signature of the quotient (default: sign(M), homologically trivial)")

    p = add("solve", cmd_solve, "all group censuses solving the G-signature equation")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--sign", type=int, default=K3_SIGNATURE)
    p.add_argument("--c1-squared", dest="c1_squared", type=int, default=0)

    p = add("scan", cmd_scan, "run the feasibility solver over all primes up to a bound")
    p.add_argument("--p-max", dest="p_max", type=int, required=True)
    p.add_argument("--sign", type=int, default=K3_SIGNATURE)

    p = add("classify", cmd_classify, "affine type and multiplicities of a (-2)-sphere configuration")
    p.add_argument("--graph", metavar="FILE", help="edge-list file ('-' for stdin)")
    p.add_argument("--family", choices=sorted(_FAMILIES))
    p.add_argument("--n", type=int)
    p.add_argument("--dot", action="store_true", help="emit DOT instead of the text summary")

    p = add("plumb", cmd_plumb, "equivariant plumbing recursion", formatted=False)
    actions = p.add_subparsers(dest="action", required=True, metavar="action")
    a = actions.add_parser("transfer", parents=[fmt], help="transfer matrix at index i")
    a.add_argument("--i", type=int, required=True)
    a.add_argument("--dtilde", action="store_true", help="D-tilde seed indexing")
    a.add_argument("--seed", type=int, nargs=2, metavar=("U", "V"))
    a = actions.add_parser("dtilde", parents=[fmt], help="fixed end sphere congruence on D-tilde(n)")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--p", type=int, required=True)
    a = actions.add_parser("cycle", parents=[fmt], help="closing congruence on a cycle of k spheres")
    a.add_argument("--u", type=int, required=True)
    a.add_argument("--v", type=int, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--p", type=int, required=True)
    a = actions.add_parser("sequences", parents=[fmt], help="admissible rotation sequences on a cycle")
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--k", type=int, required=True)

    p = add("component-data", cmd_component_data, "fixed points and rotation numbers of a canonical-curve component")
    p.add_argument("--component", required=True, choices=[c.value for c in Component])
    p.add_argument("--p", type=int, required=True)

    p = add("scenario", cmd_scenario, "replay one argument; exit 0 iff its expected verdict is reproduced")
    p.add_argument("name", choices=("theorem-a", "example-3.9", "example-3.10"))
    p.add_argument("--p", type=int)
    p.add_argument("--sign", type=int, default=K3_SIGNATURE)
    p.add_argument("--case", choices=EXAMPLE_310_CASES)
    p.add_argument("--census", help="d1,d2,d3,d4[,special] for example-3.9")

    add("reproduce-all", cmd_reproduce_all, "every scenario plus the invariant quick-suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, doc, text = args.handler(args)
    except (UsageError, InputFormatError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConsistencyError as exc:
        print(f"{parser.prog}: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
