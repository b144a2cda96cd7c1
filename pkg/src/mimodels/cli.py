"""Command line interface: ``mimodels <subcommand> ...``.

Exit codes: 0 success, 1 a negative answer (non-member, failed check),
2 bad usage or unparsable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional, Sequence

from . import census as census_mod
from .closure import StatementSet, closure, member
from .equations import maximal_equations, statement_set_equations
from .markov import (
    BidirectedGraph,
    SimplicialComplex,
    complement_is_cliques,
    graph_ideal,
    graph_statements,
    models_coincide,
    sigma_of_graph,
    simplicial_ideal,
)
from .parametrization import check_model, param_matrix
from .partitions import ParseError, format_partition, parse
from .tensors import StateShape
from .toric import geometry

SCHEMA = 1
THREADS_ENV = "MIMODELS_THREADS"


def _dump(obj: dict) -> str:
    return json.dumps({**obj, "schema": SCHEMA}, separators=(",", ":"), ensure_ascii=False)


def _shape(args) -> StateShape:
    if args.states is None:
        return StateShape.binary(args.n)
    shape = StateShape.parse(args.states)
    if shape.n != args.n:
        raise ParseError(f"--states has {shape.n} entries but -n is {args.n}")
    return shape


def _gens(args) -> StatementSet:
    return StatementSet.parse(args.gens, args.n)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# --- subcommands ----------------------------------------------------------


def cmd_closure(args, out) -> int:
    I = closure(_gens(args))
    elems = [format_partition(p) for p in I]
    gens = [format_partition(p) for p in I.maximal_generators().sorted()]
    if args.format == "json":
        print(_dump({"n": args.n, "size": len(elems), "elements": elems, "maximal_generators": gens}), file=out)
        return 0
    print(f"{len(elems)} elements", file=out)
    for e in elems:
        print(e, file=out)
    print("maximal generators: " + (",".join(gens) if gens else "∅"), file=out)
    return 0


def cmd_member(args, out) -> int:
    C = _gens(args)
    q = parse(args.query, args.n)
    ans = member(q, C)
    if args.format == "json":
        print(_dump({"query": format_partition(q), "member": ans}), file=out)
    else:
        print("yes" if ans else "no", file=out)
    return 0 if ans else 1


def cmd_generators(args, out) -> int:
    I = closure(_gens(args))
    shape = _shape(args)
    eqs = [f.to_text(shape) for f in maximal_equations(I, shape)]
    minors = [m.to_text(shape) for m in statement_set_equations(I, shape)] if args.minors else []
    if args.format == "json":
        payload = {"maximal_equations": eqs}
        if args.minors:
            payload["minors"] = minors
        print(_dump(payload), file=out)
        return 0
    for e in eqs + minors:
        print(e, file=out)
    return 0


def cmd_matrix(args, out) -> int:
    A = param_matrix(closure(_gens(args)), _shape(args))
    if args.format == "csv":
        out.write(A.to_csv())
    elif args.format == "plain":
        out.write(A.to_plain())
    elif args.format == "json":
        print(_dump(A.to_json()), file=out)
    else:
        width = max(len(s) for s in A.row_labels)
        cols = A.column_labels
        print(" " * width + "  " + " ".join(cols), file=out)
        for lab, row in zip(A.row_labels, A.matrix):
            cells = " ".join(str(int(x)).rjust(len(c)) for x, c in zip(row, cols))
            print(lab.ljust(width) + "  " + cells, file=out)
    return 0


def cmd_geometry(args, out) -> int:
    geo = geometry(param_matrix(closure(_gens(args)), _shape(args)))
    if args.format == "text":
        print(" ".join(f"{k}={v}" for k, v in geo.items()), file=out)
    else:
        print(_dump(geo), file=out)
    return 0


def _ideal_report(I, extra: dict, args, out) -> int:
    gens = [format_partition(p) for p in I.maximal_generators().sorted()]
    if args.format == "json":
        print(_dump({**extra, "size": len(I), "maximal_generators": gens}), file=out)
        return 0
    for k, v in extra.items():
        if isinstance(v, list):
            v = ",".join(v) if v else "∅"
        print(f"{k}: {v}", file=out)
    print(f"ideal size: {len(I)}", file=out)
    print("maximal generators: " + (",".join(gens) if gens else "∅"), file=out)
    return 0


def cmd_graph(args, out) -> int:
    G = BidirectedGraph.parse(args.edges, args.n)
    stmts = [format_partition(p) for p in graph_statements(G).sorted()]
    extra = {
        "statements": stmts,
        "complex": str(sigma_of_graph(G)),
        "complete_multipartite": complement_is_cliques(G),
        "coincides_with_complex": models_coincide(G),
    }
    return _ideal_report(graph_ideal(G), extra, args, out)


def cmd_simplicial(args, out) -> int:
    S = SimplicialComplex.parse(args.faces, args.n)
    extra = {"maximal_faces": ["".join(map(str, sorted(f))) for f in S.maximal_faces()]}
    return _ideal_report(simplicial_ideal(S), extra, args, out)


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in r.items()})
    return buf.getvalue()


def cmd_census(args, out) -> int:
    if args.emit == "table1":
        rows = census_mod.table1()
        if args.format == "json":
            print(_dump({"table1": rows}), file=out)
        else:
            out.write(_rows_csv(rows))
        return 0
    if args.emit == "table2":
        rows = [r.to_json() for r in census_mod.table2(args.n, _shape(args), args.cls, jobs=args.threads)]
        if args.format == "json":
            print(_dump({"n": args.n, "class": args.cls, "rows": rows}), file=out)
        elif args.format == "csv":
            out.write(_rows_csv(rows))
        else:
            for r in rows:
                flags = ("G" if r["graphical"] else "-") + ("S" if r["simplicial"] else "-")
                print(f"{r['generators']:<40} degree={r['degree']:<3} dim={r['dimension']:<3} "
                      f"{flags} orbit={r['orbit_size']}", file=out)
        return 0
    total, orbits = census_mod.class_census(args.n, args.cls)
    if args.format == "json":
        print(_dump({"n": args.n, "class": args.cls, "total": total, "orbits": orbits}), file=out)
    elif args.up_to_symmetry:
        print(orbits, file=out)
    else:
        print(f"total={total} orbits={orbits}", file=out)
    return 0


def cmd_verify(args, out) -> int:
    I = closure(_gens(args))
    shape = _shape(args)
    rep = check_model(I, shape, seed=args.seed, draws=args.draws)
    if args.format == "json":
        print(_dump({
            "ok": rep.ok,
            "equations_checked": rep.equations_checked,
            "nonzero_equations": rep.nonzero_equations,
            "distribution_ok": rep.distribution_ok,
            "witnesses": rep.witnesses,
            "missing_witnesses": rep.missing_witnesses,
            "retries": rep.retries,
        }), file=out)
    else:
        print(f"equations checked: {rep.equations_checked}", file=out)
        print(f"nonzero in-model equations: {len(rep.nonzero_equations)}", file=out)
        print(f"generic point is a distribution: {'yes' if rep.distribution_ok else 'no'}", file=out)
        for name, w in sorted(rep.witnesses.items()):
            print(f"not implied {name}: {w} != 0", file=out)
        for name in rep.missing_witnesses:
            print(f"no witness for {name}", file=out)
        print("ok" if rep.ok else "FAILED", file=out)
    return 0 if rep.ok else 1


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mimodels", description="Marginal independence models on partial set partitions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, formats=("text", "json"), default=None, gens=True, states=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-n", type=int, required=True, help="number of random variables")
        if gens:
            sp.add_argument("--gens", required=True, help='statements, e.g. "1|23,2|3"')
        if states:
            sp.add_argument("--states", help="comma separated state counts, default binary")
        sp.add_argument("--format", choices=formats, default=default or formats[0])
        sp.set_defaults(func=func)
        return sp

    add("closure", cmd_closure, "split closure of a set of statements")
    sp = add("member", cmd_member, "is a statement implied? exit 0 yes, 1 no")
    sp.add_argument("--query", required=True)
    sp = add("generators", cmd_generators, "maximal factorization equations", states=True)
    sp.add_argument("--minors", action="store_true", help="also list 2x2 minors of every Q_pi")
    add("matrix", cmd_matrix, "parametrization matrix", formats=("text", "csv", "json", "plain"), states=True)
    add("geometry", cmd_geometry, "dimension and degree of the model variety", default="json", states=True)
    sp = add("graph", cmd_graph, "model of a bidirected graph", gens=False)
    sp.add_argument("--edges", required=True, help='e.g. "1-2,2-3"; empty for no edges')
    sp = add("simplicial", cmd_simplicial, "model of a simplicial complex", gens=False)
    sp.add_argument("--faces", required=True, help='maximal faces, e.g. "12,13,23"')
    sp = add("census", cmd_census, "counts and tables for all models on n <= 4", formats=("text", "csv", "json"),
             gens=False, states=True)
    sp.add_argument("--class", dest="cls", choices=census_mod.CLASSES, default="general")
    sp.add_argument("--up-to-symmetry", action="store_true", help="print only the orbit count")
    sp.add_argument("--emit", choices=("table1", "table2"))
    sp.add_argument("--threads", type=int, default=_default_threads(),
                    help=f"worker processes for table2 (default ${THREADS_ENV} or 1)")
    sp = add("verify", cmd_verify, "sample the parametrization and check it realizes the model", states=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--draws", type=int, default=10)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if args.n < 1:
        print("error: -n must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except (ParseError, census_mod.CensusRangeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
