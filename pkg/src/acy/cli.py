"""Command-line front end.

    acy graphs list
    acy compute --graph E8* --cells builtin --format json
    acy verify  --graph A5 --check duality

Exit codes: 0 all checks pass; 2 input/schema error; 3 mathematical check
failure; 4 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .algebra import AlgebraError, GradedAlgebra
from .cells import (builtin_cells, cells_from_doc, derive_relations,
                    verify_type_I, verify_type_II)
from .homology import Homology, build_report, verify_resolution
from .quiver import GraphError, build_family, family_catalog, parse_graph_spec
from .series import euler_characteristic_hc
from .solver import SolverError, solve_cells

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_SOLVER = 0, 2, 3, 4


def _worker_cap() -> int:
    # ACY_THREADS caps worker parallelism; the exact pipeline runs a single
    # deterministic worker, which every cap admits.
    try:
        return max(1, int(os.environ.get("ACY_THREADS", "1")))
    except ValueError:
        return 1


def _emit(doc, args, text: str | None = None):
    if args.format == "json":
        payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        payload = (text if text is not None else json.dumps(doc, indent=2)) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _load_cells(graph, spec: str, seed: int, precision: int):
    if spec == "builtin":
        return builtin_cells(graph)
    if spec == "solve":
        from .cells import orbifold_cells, unfold_cells

        name = graph.name
        if name.startswith("D") and name.endswith("*"):
            base = build_family("A*", int(name[1:-1]))
            return unfold_cells(graph, solve_cells(base, seed=seed, digits=precision))
        if name.startswith("D"):
            base = build_family("A", int(name[1:]))
            return orbifold_cells(graph, solve_cells(base, seed=seed, digits=precision))
        if name == "E8":
            base = build_family("E8*")
            return unfold_cells(graph, solve_cells(base, seed=seed, digits=precision))
        return solve_cells(graph, seed=seed, digits=precision)
    if spec.startswith("file:"):
        with open(spec[5:], "r", encoding="utf-8") as fh:
            return cells_from_doc(graph, json.load(fh))
    raise GraphError(f"unknown cells spec {spec!r} (use builtin, solve, or file:PATH)")


def _tool_meta(seed: int, tower) -> dict:
    return {
        "name": "acy",
        "version": __version__,
        "seed": seed,
        "basis_order": "echelon over lexicographic path order (edge ids)",
        "tower": tower.describe(),
        "workers": _worker_cap(),
    }


def cmd_graphs_list(args) -> int:
    rows = family_catalog()
    if args.format == "json":
        _emit({"schema": "acy-graphs/1", "families": rows}, args)
    else:
        lines = []
        for r in rows:
            ex = r["example"]
            if ex:
                lines.append(f"{r['family']:<6} {r['constraint'] or '':<22} {r['note']}")
                lines.append(f"       e.g. {ex['name']}: h={ex['h']}, |V|={ex['vertices']}, "
                             f"|E|={ex['edges']}, P={ex['P']}")
            else:
                lines.append(f"{r['family']:<6} {'':<22} {r['note']}")
        _emit({}, args, "\n".join(lines))
    return EXIT_OK


def cmd_compute(args) -> int:
    graph = parse_graph_spec(args.graph)
    if args.cutoff_degree is not None and args.cutoff_degree < 3 * graph.h:
        raise GraphError(f"--cutoff-degree must be >= 3h = {3 * graph.h} "
                         "when cyclic homology is requested")
    cells = _load_cells(graph, args.cells, args.seed, args.precision)
    r1 = verify_type_I(cells)
    r2 = verify_type_II(cells)
    if not (r1.ok and r2.ok):
        _emit({"schema": "acy-report/1", "graph": graph.name, "failed_gate": "cells",
               "type_I_failures": r1.failures[:10], "type_II_failures": r2.failures[:10]},
              args, f"FAIL cells: type I/II verification failed for {graph.name}")
        return EXIT_MATH
    try:
        A = GradedAlgebra(graph, derive_relations(cells))
    except AlgebraError as exc:
        _emit({"schema": "acy-report/1", "graph": graph.name, "failed_gate": "hilbert",
               "error": str(exc)}, args, f"FAIL hilbert: {exc}")
        return EXIT_MATH
    max_index = 12 * args.periods + 1
    rep = build_report(A, cells, max_index=max_index, cutoff=args.cutoff_degree)
    from .algebra import spot_checks

    rep.checks.update(spot_checks(A, args.seed))
    doc = rep.to_doc()
    doc["tool"] = _tool_meta(args.seed, cells.tower)
    _emit(doc, args, rep.render_text())
    return EXIT_OK if rep.ok else EXIT_MATH


def cmd_verify(args) -> int:
    graph = parse_graph_spec(args.graph)
    checks = {}
    details = {}
    want = args.check
    cells = None
    if want in ("cells", "all", "duality", "euler", "resolution", "d2", "hh0"):
        cells = _load_cells(graph, args.cells, args.seed, args.precision)
    if want in ("cells", "all"):
        r1 = verify_type_I(cells)
        r2 = verify_type_II(cells)
        checks["cells_type_I"] = r1.ok
        checks["cells_type_II"] = r2.ok
        details["frames"] = {"type_I": r1.frames, "type_II": r2.frames}
    if want in ("hilbert", "all", "duality", "euler", "resolution", "d2", "hh0"):
        if cells is None:
            cells = _load_cells(graph, args.cells, args.seed, args.precision)
        try:
            A = GradedAlgebra(graph, derive_relations(cells))
            checks["hilbert"] = True
        except AlgebraError as exc:
            checks["hilbert"] = False
            details["hilbert_error"] = str(exc)
            A = None
    if want in ("duality", "euler", "resolution", "d2", "hh0", "all") and checks.get("hilbert"):
        hom = Homology(A, cells)
        if want in ("duality", "all"):
            bad = hom.verify_duality()
            checks["duality"] = not bad
            if bad:
                details["duality_failures"] = bad[:10]
        if want in ("d2", "all"):
            checks["d2"] = not hom.check_d_squared(14, 4 * graph.h)
        if want in ("euler", "all"):
            from .homology import cyclic_from_hh, euler_from_hc, _shift_hom

            cutoff = 4 * graph.h
            i_full = 13
            while _shift_hom(i_full + 1, graph.h) <= cutoff:
                i_full += 1
            hh = hom.hh_table(i_full, cutoff)
            hc = cyclic_from_hh(hom.reduced(hh), cutoff, i_full)
            checks["euler"] = euler_from_hc(hc, cutoff) == euler_characteristic_hc(graph, cutoff)
        if want in ("hh0", "all"):
            from .homology import hh0_direct

            hh0 = hh0_direct(A)
            hh0_complex = {d: hom.hh_dim(0, d) for d in range(4 * graph.h + 1)}
            hh0_complex = {d: v for d, v in hh0_complex.items() if v}
            checks["hh0_cross"] = hh0_complex == hh0
        if want in ("resolution", "all"):
            res = verify_resolution(hom)
            checks["resolution"] = res["ok"]
            if not res["ok"]:
                details["resolution_failures"] = res["failures"][:10]
    ok = all(checks.values()) if checks else False
    doc = {"schema": "acy-verify/1", "graph": graph.name, "checks": checks,
           "details": details}
    text = f"graph {graph.name}\n" + "\n".join(
        f"  {k}: {'pass' if v else 'FAIL'}" for k, v in sorted(checks.items()))
    _emit(doc, args, text)
    return EXIT_OK if ok else EXIT_MATH


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="acy", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"acy {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graphs", help="built-in graph families")
    gsub = g.add_subparsers(dest="graphs_command", required=True)
    glist = gsub.add_parser("list", help="list built-in families")
    _common_output(glist)

    c = sub.add_parser("compute", help="full pipeline: cells, algebra, HH/HC/HH*")
    c.add_argument("--graph", required=True, help="family spec (A4, A7*, D9, E8*) or file:PATH")
    c.add_argument("--cells", default="builtin", help="builtin | solve | file:PATH")
    c.add_argument("--cutoff-degree", type=int, default=None, help="degree cutoff (default 4h)")
    c.add_argument("--periods", type=int, default=1, help="periods of the complex (index 12p+1)")
    c.add_argument("--precision", type=int, default=70, help="solver digits")
    c.add_argument("--seed", type=int, default=0, help="seed for solver and spot checks")
    _common_output(c)

    v = sub.add_parser("verify", help="run selected verifications only")
    v.add_argument("--graph", required=True)
    v.add_argument("--cells", default="builtin")
    v.add_argument("--check", default="all",
                   choices=["cells", "hilbert", "duality", "euler", "resolution",
                            "d2", "hh0", "all"])
    v.add_argument("--precision", type=int, default=70)
    v.add_argument("--seed", type=int, default=0)
    _common_output(v)

    args = ap.parse_args(argv)
    try:
        if args.command == "graphs":
            return cmd_graphs_list(args)
        if args.command == "compute":
            return cmd_compute(args)
        return cmd_verify(args)
    except (GraphError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except AlgebraError as exc:
        print(f"mathematical check failed: {exc}", file=sys.stderr)
        return EXIT_MATH


def _common_output(p):
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--out", default=None, help="write output to a file")


if __name__ == "__main__":
    sys.exit(main())
