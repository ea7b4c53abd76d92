"""Command line front end for constructing, bounding, and verifying codes.

One process per command; every stochastic subroutine draws from the single
global --seed, so reruns with the same flags reproduce the same artifacts.
Reports go to stdout as JSON (tables as CSV); verification failures exit
nonzero so shell pipelines can gate on them.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import bounds
from .codefile import read_code_file, write_code_file
from .config import DEFAULT_SEED
from .construct import (aq_lower, assemble_named, coset_packing,
                        greedy_partition, linkage_bound, multilevel_construct,
                        named_symbolic, packed_scheme_5_2, pivot_coset_data,
                        table1_rows, NAMED_ASSEMBLIES)
from .qpoly import PolyQ, poly_print
from .registry import registry_lookup
from .skeleton import (clique_search, ef_weight, skeleton_from_json,
                       skeleton_to_json, vertex_from_vec)
from .subspace import all_pivot_vectors
from .verify import verify_exhaustive, verify_hierarchical, verify_sampled

REPORT_SCHEMA = 1


def _sanitize(obj):
    """JSON-ready copy: sets sorted, tuples listed, exotic scalars printed."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_sanitize(v) for v in obj)
    if isinstance(obj, PolyQ):
        return poly_print(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, float, str)):
        return obj
    return str(obj)


def _emit(report: dict) -> None:
    report = dict(report)
    report.setdefault("schema", REPORT_SCHEMA)
    print(json.dumps(_sanitize(report), indent=2, sort_keys=True))


# -- bound ------------------------------------------------------------------------


def _bound_symbolic(args, report: dict) -> int:
    method = args.method
    if method in ("anticode", "all"):
        report["anticode"] = str(bounds.anticode_bound_ratio(args.n, args.d, args.k))
    if method in ("registry", "all"):
        for kind in ("lower", "upper"):
            bv = registry_lookup(args.n, args.d, args.k, None, kind=kind)
            if bv is not None:
                report[kind] = bv.report(f"A(n,d;k) {kind}")
    if method in ("johnson", "ilp", "linkage"):
        print(f"method {method!r} needs a numeric field order", file=sys.stderr)
        return 2
    _emit(report)
    return 0


def cmd_bound(args) -> int:
    report: dict = {"command": "bound", "n": args.n, "d": args.d, "k": args.k,
                    "method": args.method}
    if args.symbolic:
        report["q"] = "symbolic"
        return _bound_symbolic(args, report)
    n, d, k, q = args.n, args.d, args.k, args.q
    report["q"] = q
    method = args.method
    if method in ("anticode", "all"):
        report["anticode"] = bounds.anticode_bound(n, d, k, q)
    if method in ("johnson", "all"):
        report["johnson"] = bounds.johnson_bound(n, d, k, q)
    if method in ("registry", "all"):
        try:
            report["lower"] = aq_lower(n, d, k, q)
        except LookupError:
            report["lower"] = None
        report["best_upper"] = bounds.best_known_upper(n, d, k, q)
    if method == "ilp":
        rep = bounds.ilp_pivot_bound(n, d, k, q)
        report["ilp"] = rep.as_dict()
    if method == "linkage":
        best = None
        deltas = [args.delta] if args.delta is not None else range(1, n)
        for delta in deltas:
            for improved in (False, True):
                try:
                    bv = linkage_bound(n, d, k, delta, q, improved=improved)
                except (ValueError, LookupError):
                    continue
                if best is None or bv.value > best[0].value:
                    best = (bv, delta)
        if best is None:
            print("no linkage split has stored ingredient bounds", file=sys.stderr)
            return 2
        report["linkage"] = best[0].report("two-block linkage")
        report["delta"] = best[1]
    _emit(report)
    return 0


# -- construct --------------------------------------------------------------------


def cmd_construct(args) -> int:
    name = args.name
    if name == "multilevel":
        if not args.skeleton:
            print("construct --name multilevel needs --skeleton", file=sys.stderr)
            return 2
        with open(args.skeleton) as fh:
            S = skeleton_from_json(fh.read())
        art = multilevel_construct(S, args.q, seed=args.seed)
        symbolic = None
    else:
        bv, art = assemble_named(name, args.q, seed=args.seed)
        symbolic = poly_print(named_symbolic(name).value)
    report: dict = {
        "command": "construct", "name": name, "q": args.q,
        "n": art.n, "k": art.k, "d": art.d, "size": art.size,
        "components": [{"label": c.label, "kind": c.kind, "size": c.size}
                       for c in art.components],
        "size_only": art.size_only,
    }
    if symbolic is not None:
        report["symbolic"] = symbolic
    if args.out:
        if art.size_only:
            print("assembly contains stored-size components with no word "
                  "lists; nothing to write", file=sys.stderr)
            return 2
        wrep = write_code_file(art, args.out)
        report["code_file"] = wrep["path"]
        report["sidecar"] = wrep.get("sidecar")
    _emit(report)
    return 0


# -- verify -----------------------------------------------------------------------


def cmd_verify(args) -> int:
    art = read_code_file(args.infile)
    if args.mode == "exhaustive":
        rep = verify_exhaustive(art, args.d)
    elif args.mode == "hierarchical":
        rep = verify_hierarchical(art, args.d)
    else:
        rep = verify_sampled(art, args.d, pairs=args.pairs, seed=args.seed)
    _emit(rep)
    return 0 if rep.get("pass") else 1


# -- skeleton ---------------------------------------------------------------------


def cmd_skeleton(args) -> int:
    vecs = all_pivot_vectors(args.n, args.k)
    vertices = [vertex_from_vec(v) for v in vecs]
    weights = [ef_weight(v, args.q, args.d, mode=args.weights) for v in vecs]
    result = clique_search(vertices, weights, args.d, budget=args.budget)
    skel_json = json.loads(skeleton_to_json(result.skeleton))
    report = {
        "command": "skeleton", "n": args.n, "d": args.d, "k": args.k,
        "q": args.q, "weights": args.weights, "vertex_count": len(vertices),
        "clique_value": result.weight, "value_kind": result.kind,
        "search_complete": result.complete,
        "chosen": len(result.indices),
        "skeleton": skel_json,
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(skeleton_to_json(result.skeleton))
            fh.write("\n")
        report["skeleton_file"] = args.out
    _emit(report)
    return 0


# -- pack -------------------------------------------------------------------------


def cmd_pack(args) -> int:
    result = greedy_partition(args.n1, args.a1, args.q, args.dprime,
                              seed=args.seed, restarts=args.restarts)
    report = {
        "command": "pack", "n1": args.n1, "a1": args.a1, "q": args.q,
        "dprime": args.dprime,
        "sum_sizes": result.sum_sizes,
        "sum_squares": result.sum_squares,
        "part_sizes": sorted(result.sizes, reverse=True),
        "part_cap": result.part_cap,
        "squares_cap": result.squares_cap,
        "restarts_used": result.restarts_used,
        "seed": result.seed,
    }
    _emit(report)
    return 0


# -- table ------------------------------------------------------------------------


def _pivot_str(v) -> str:
    return "".join(str(e) for e in v)


def cmd_table(args) -> int:
    w = csv.writer(sys.stdout)
    if args.name == "table1":
        w.writerow(["pivot", "coset_size", "coset_count"])
        for v, size, count in table1_rows():
            w.writerow([_pivot_str(v), poly_print(size), poly_print(count)])
        return 0
    if args.name == "table2":
        scheme = packed_scheme_5_2()
        w.writerow(["pivots", "cosets_used", "welded_size", "contribution"])
        total = PolyQ(0)
        for row in scheme.rows:
            size = PolyQ(0)
            for v in row.pivots:
                s, _ = pivot_coset_data(v, scheme.dprime)
                size = size + s
            contrib = row.used * size * size
            total = total + contrib
            w.writerow([" ".join(_pivot_str(v) for v in row.pivots),
                        poly_print(row.used), poly_print(size),
                        poly_print(contrib)])
        w.writerow(["total", "", "", poly_print(total)])
        check = coset_packing(scheme)
        assert check.value == total
        return 0
    if args.name == "mrd-distributions":
        from .rankmetric import mrd_rank_distribution, small_mrd_tuples
        w.writerow(["q", "m", "n", "dr", "rank", "count"])
        for (q, m, n, dr) in small_mrd_tuples():
            for r, c in sorted(mrd_rank_distribution(q, m, n, dr).items()):
                w.writerow([q, m, n, dr, r, c])
        return 0
    print(f"unknown table {args.name!r}", file=sys.stderr)
    return 2


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdcw",
        description="constant dimension code workbench")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for every stochastic subroutine")
    common.add_argument("--threads", type=int, default=1,
                        help="reserved; commands currently run single-threaded")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common],
                       help="lower and upper bounds for A_q(n, d; k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--symbolic", action="store_true",
                   help="polynomial-in-q forms instead of one field order")
    p.add_argument("--method", default="all",
                   choices=["anticode", "johnson", "ilp", "linkage",
                            "registry", "all"])
    p.add_argument("--delta", type=int,
                   help="linkage split position; default scans all")
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("construct", parents=[common],
                       help="build a named code and optionally write it out")
    p.add_argument("--name", required=True,
                   choices=sorted(NAMED_ASSEMBLIES) + ["multilevel"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out", help="code file path")
    p.add_argument("--skeleton", help="skeleton JSON (multilevel only)")
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("verify", parents=[common],
                       help="check a code file's minimum distance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", default="hierarchical",
                   choices=["exhaustive", "hierarchical", "sampled"])
    p.add_argument("--pairs", type=int, default=10**6,
                   help="sample count for --mode sampled")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("skeleton", parents=[common],
                       help="search a maximum weight pivot skeleton")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--weights", default="upper",
                   choices=["upper", "constructive"])
    p.add_argument("--budget", type=int, default=1_000_000,
                   help="branch and bound node budget")
    p.add_argument("--out", help="write the chosen skeleton JSON here")
    p.set_defaults(fn=cmd_skeleton)

    p = sub.add_parser("pack", parents=[common],
                       help="greedy partition of subspaces into spread parts")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--a1", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dprime", type=int, required=True)
    p.add_argument("--restarts", type=int, default=0)
    p.set_defaults(fn=cmd_pack)

    p = sub.add_parser("table", parents=[common],
                       help="reference tables as CSV")
    p.add_argument("--name", required=True,
                   choices=["table1", "table2", "mrd-distributions"])
    p.set_defaults(fn=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bound" and args.symbolic == (args.q is not None):
        parser.error("bound needs exactly one of --q and --symbolic")
    try:
        return args.fn(args)
    except BrokenPipeError:
        # downstream consumer closed the pipe; nothing left to report
        import os
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
