"""Command line interface.

Exit status: 0 found / property holds, 1 well-formed NOT_FOUND / property
fails, 2 usage or I/O error.  Certificates and reports go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import embedders, generators, lab
from .digraph import (
    BudgetExceeded,
    GraphError,
    PreconditionError,
    format_edge_list,
    read_edge_list,
    to_dot,
)
from .trees import OrientedTree, classify, is_grounded

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return value


def _read_graph(path: str):
    return read_edge_list(path)


def _read_tree(path: str) -> OrientedTree:
    G = read_edge_list(path)
    try:
        return OrientedTree.from_digraph(G)
    except GraphError as exc:
        raise UsageError(f"{path}: not an oriented tree ({exc})") from exc


def _write(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    budget = args.budget_vertices
    fam = args.family
    if fam == "level":
        G, meta = generators.level_digraph(args.k, args.d, budget=budget)
        _write(meta.to_text() if args.meta else format_edge_list(G), args.output)
        return EXIT_OK
    if fam == "spider":
        G = generators.spider(args.k, args.l, budget=budget)
    elif fam == "branching":
        G = generators.out_branching(args.k, args.l, budget=budget)
    elif fam == "ttree":
        G = generators.t_tree(args.k, args.l, budget=budget)
    elif fam == "complete":
        G = generators.complete_digraph(args.n)
    elif fam == "tournament":
        G = generators.regular_tournament(args.n)
    else:
        G = generators.random_min_outdegree(args.n, args.d, args.seed, budget=budget)
    if G.vertex_count > budget:
        raise BudgetExceeded(f"{G.vertex_count} vertices exceed budget {budget}")
    _write(format_edge_list(G), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    T = _read_tree(args.tree)
    sys.stdout.write(classify(T).to_text())
    return EXIT_OK


def cmd_embed(args) -> int:
    pattern = _read_tree(args.pattern)
    host = _read_graph(args.host)
    if args.greedy:
        emb = embedders.greedy_out_arborescence(host, pattern)
    else:
        emb = embedders.brute_force_embed(host, pattern)
    if emb is None:
        print("NOT_FOUND", file=sys.stderr)
        return EXIT_NOT_FOUND
    sys.stdout.write(emb.to_text(pattern))
    return EXIT_OK


def cmd_spider2(args) -> int:
    host = _read_graph(args.host)
    cert, trace = embedders.spider2_search(host, args.l)
    print(
        f"route={trace.route} d={trace.d} hub={trace.hub} halted_s={trace.halted_s} "
        f"extend={trace.extend_moves} exchange={trace.exchange_moves}",
        file=sys.stderr,
    )
    if cert is None:
        print("NOT_FOUND", file=sys.stderr)
        return EXIT_NOT_FOUND
    sys.stdout.write(cert.to_text())
    return EXIT_OK


def cmd_branch(args) -> int:
    host = _read_graph(args.host)
    prop = {"trivial": embedders.TRIVIAL_PROPERTY}[args.property]
    emb = embedders.branching_with_property(host, prop, args.k, args.l)
    if emb is None:
        print("NOT_FOUND", file=sys.stderr)
        return EXIT_NOT_FOUND
    sys.stdout.write(emb.to_text(generators.out_branching(args.k, args.l)))
    return EXIT_OK


def cmd_ttree(args) -> int:
    host = _read_graph(args.host)
    oracle = {"brute": embedders.brute_spider_oracle, "instar": embedders.instar_oracle}[args.oracle]
    emb = embedders.find_t_tree(host, args.k, args.l, oracle)
    if emb is None:
        print("NOT_FOUND", file=sys.stderr)
        return EXIT_NOT_FOUND
    sys.stdout.write(emb.to_text(generators.t_tree(args.k, args.l)))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    sys.stdout.write(to_dot(_read_graph(args.graph)))
    return EXIT_OK


def cmd_lab(args) -> int:
    return args.lab_func(args)


def lab_level_check(args) -> int:
    trees = [
        T for n in range(1, args.n_max + 1) for T in lab.oriented_trees(n) if not is_grounded(T)
    ]
    lines = [f"experiment: level-check", f"n_max: {args.n_max}", f"d: {args.d}",
             f"non_grounded_trees: {len(trees)}"]
    blocked = 0
    for T in trees:
        ok = lab.verify_level_blocks(T, args.d, budget=args.budget_vertices)
        blocked += ok
        edges = " ".join(f"{u}>{v}" for u, v in T.sorted_edges())
        lines.append(f"tree: {'blocked' if ok else 'EMBEDS'} {edges}")
    lines.append(f"blocked: {blocked}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if blocked == len(trees) else EXIT_NOT_FOUND


def lab_spider_scan(args) -> int:
    params = {"n": args.n, "n_max": args.n_max, "d": args.d, "count": args.count,
              "base_seed": args.seed}
    needed = {"tournaments": ("n_max",), "complete": ("n",), "regular-tournament": ("n",),
              "random": ("n", "d")}[args.family]
    for key in needed:
        if params[key] is None:
            raise UsageError(f"--family {args.family} needs --{key.replace('_', '-')}")
    hosts = lab.host_family(args.family, **{k: v for k, v in params.items() if v is not None})
    report = lab.spider_scan(args.k, args.l, hosts, args.delta_target, out_dir=args.out_dir)
    report.parameters["family"] = args.family
    _emit_report(report, args)
    if args.figure:
        from .plotting import plot_spider_scan

        plot_spider_scan(report, args.figure)
    return EXIT_OK if not report.failures else EXIT_NOT_FOUND


def lab_trials(args) -> int:
    params = {"n": args.n}
    if args.which == "T18":
        params["l"] = args.l
        if args.d is not None:
            params["d"] = args.d
    else:
        if args.k is None or args.d is None:
            raise UsageError(f"--which {args.which} needs --k and --d")
        params.update(k=args.k, l=args.l, d=args.d)
        if args.which == "T33":
            params["oracle"] = args.oracle
    report = lab.theorem_trials(args.which, params, args.trials, args.seed, jobs=args.jobs,
                                out_dir=args.out_dir)
    _emit_report(report, args)
    if args.figure:
        from .plotting import plot_trials

        plot_trials(report, args.figure)
    alarm = report.failures and report.parameters["hypothesis_met"] is not False
    return EXIT_NOT_FOUND if alarm else EXIT_OK


def lab_census(args) -> int:
    records = lab.tree_census(args.n_max)
    tally = lab.census_tally(records)
    lines = ["experiment: census", f"n_max: {args.n_max}", f"trees: {len(records)}"]
    for n in sorted(tally):
        row = tally[n]
        lines.append(
            f"n={n}: {lab.ENFORCIBLE_KNOWN}={row[lab.ENFORCIBLE_KNOWN]} "
            f"{lab.OPEN}={row[lab.OPEN]} {lab.NOT_ENFORCIBLE}={row[lab.NOT_ENFORCIBLE]}"
        )
    sys.stdout.write("\n".join(lines) + "\n")
    if args.table:
        header = "n\tstatus\tgrounded\thubs\thub_class\tedges\n"
        _write(header + "".join(r.to_text() + "\n" for r in records), args.table)
    if args.figure:
        from .plotting import plot_census

        plot_census(records, args.figure)
    return EXIT_OK


def _emit_report(report: lab.TrialReport, args) -> None:
    sys.stdout.write(report.to_text())
    print(f"wall_time: {report.wall_time:.3f}", file=sys.stderr)
    if args.table:
        _write(report.table(), args.table)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treeforce", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a graph family as an edge list")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    specs = {
        "level": ("k", "d"),
        "spider": ("k", "l"),
        "branching": ("k", "l"),
        "ttree": ("k", "l"),
        "complete": ("n",),
        "tournament": ("n",),
        "random": ("n", "d", "seed"),
    }
    for fam, flags in specs.items():
        p = gen_sub.add_parser(fam)
        for flag in flags:
            kind = _seed if flag == "seed" else _nonneg
            p.add_argument(f"--{flag}", type=kind, required=True)
        if fam == "level":
            p.add_argument("--meta", action="store_true", help="emit 'vertex level index' lines")
        p.add_argument("--budget-vertices", type=_nonneg, default=generators.DEFAULT_BUDGET)
        p.add_argument("-o", "--output")
        p.set_defaults(func=cmd_gen)

    p = sub.add_parser("classify", help="classify an oriented tree")
    p.add_argument("tree")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("embed", help="embed a tree into a host")
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--brute", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("spider2", help="find a spider with l rays of length 2")
    p.add_argument("--host", required=True)
    p.add_argument("--l", type=_nonneg, required=True)
    p.set_defaults(func=cmd_spider2)

    p = sub.add_parser("branch", help="find a complete l-ary out-tree whose leaves satisfy a property")
    p.add_argument("--host", required=True)
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--l", type=_nonneg, required=True)
    p.add_argument("--property", choices=["trivial"], default="trivial")
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("ttree", help="find T(k, l)")
    p.add_argument("--host", required=True)
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--l", type=_nonneg, required=True)
    p.add_argument("--oracle", choices=["brute", "instar"], default="brute")
    p.set_defaults(func=cmd_ttree)

    p = sub.add_parser("export-dot", help="write a graph in DOT format")
    p.add_argument("graph")
    p.set_defaults(func=cmd_export_dot)

    labp = sub.add_parser("lab", help="experiments")
    lab_sub = labp.add_subparsers(dest="experiment", required=True)

    def reporting(q):
        q.add_argument("--table", help="write the tab-separated table here")
        q.add_argument("--figure", help="render a figure to this path")
        q.add_argument("--jobs", type=_nonneg, default=1)

    q = lab_sub.add_parser("level-check")
    q.add_argument("--n-max", type=_nonneg, default=5)
    q.add_argument("--d", type=_nonneg, default=2)
    q.add_argument("--budget-vertices", type=_nonneg, default=generators.DEFAULT_BUDGET)
    q.add_argument("--jobs", type=_nonneg, default=1)
    q.set_defaults(func=cmd_lab, lab_func=lab_level_check)

    q = lab_sub.add_parser("spider-scan")
    q.add_argument("--k", type=_nonneg, required=True)
    q.add_argument("--l", type=_nonneg, required=True)
    q.add_argument("--family", choices=["tournaments", "complete", "regular-tournament", "random"],
                   required=True)
    q.add_argument("--delta-target", type=_nonneg, required=True)
    q.add_argument("--n", type=_nonneg)
    q.add_argument("--n-max", type=_nonneg)
    q.add_argument("--d", type=_nonneg)
    q.add_argument("--count", type=_nonneg)
    q.add_argument("--seed", type=_seed, default=0)
    q.add_argument("--out-dir")
    reporting(q)
    q.set_defaults(func=cmd_lab, lab_func=lab_spider_scan)

    q = lab_sub.add_parser("trials")
    q.add_argument("--which", choices=["T18", "T34", "T33"], required=True)
    q.add_argument("--k", type=_nonneg)
    q.add_argument("--l", type=_nonneg, required=True)
    q.add_argument("--d", type=_nonneg)
    q.add_argument("--n", type=_nonneg, required=True)
    q.add_argument("--oracle", choices=["brute", "instar"], default="instar")
    q.add_argument("--trials", type=_nonneg, default=100)
    q.add_argument("--seed", type=_seed, default=0)
    q.add_argument("--out-dir")
    reporting(q)
    q.set_defaults(func=cmd_lab, lab_func=lab_trials)

    q = lab_sub.add_parser("census")
    q.add_argument("--n-max", type=_nonneg, required=True)
    reporting(q)
    q.set_defaults(func=cmd_lab, lab_func=lab_census)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, GraphError, PreconditionError, BudgetExceeded, OSError) as exc:
        print(f"treeforce: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
