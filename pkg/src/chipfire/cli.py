"""Command-line front end.

Exit codes: 0 success (including WARN bands), 2 usage or parse errors,
3 graph preconditions (disconnected input), 4 domain preconditions.
All output has stable field ordering so runs are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import arith, critgrp, divisors, graphs, randomlab
from .exactla import snf_diagonal
from .errors import (
    DisconnectedError,
    GraphParseError,
    GuardError,
    InvalidStructureError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GRAPH = 3
EXIT_DOMAIN = 4


def _load_graph(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc}") from exc
    return graphs.parse_graph(text)


def _require_undirected(G):
    if isinstance(G, graphs.DirectedMultigraph):
        raise GraphParseError("this command needs an undirected graph file")
    return G


def cmd_group(args) -> int:
    G = _load_graph(args.graph)
    if args.directed:
        if not isinstance(G, graphs.DirectedMultigraph):
            raise GraphParseError("--directed given but the file is undirected")
        result = critgrp.directed_critical_group(G)
        diag = snf_diagonal(graphs.directed_laplacian(G))
        print(f"group: {result.torsion.render()}")
        print(f"free_rank: {result.free_rank}")
        print("snf:", " ".join(str(d) for d in diag))
        return EXIT_OK
    G = _require_undirected(G)
    if not graphs.is_connected(G):
        raise DisconnectedError("input graph is disconnected")
    group = critgrp.critical_group(G)
    if args.reduced_at is not None:
        i = G.index(args.reduced_at)
        diag = snf_diagonal(graphs.reduced_laplacian(G, i, i))
    else:
        diag = snf_diagonal(graphs.laplacian(G))
    print(f"group: {group.render()}")
    print("snf:", " ".join(str(d) for d in diag))
    print(f"spanning_trees: {critgrp.spanning_tree_count(G)}")
    print(f"genus: {graphs.genus(G)}")
    return EXIT_OK


def cmd_tree_count(args) -> int:
    G = _require_undirected(_load_graph(args.graph))
    print(critgrp.spanning_tree_count(G))
    return EXIT_OK


def cmd_divisor(args) -> int:
    G = _require_undirected(_load_graph(args.graph))
    if not graphs.is_connected(G):
        raise DisconnectedError("input graph is disconnected")
    q = args.q if args.q is not None else G.labels[-1]
    if args.subverb == "reduce":
        D = divisors.divisor_from_text(G, args.divisor)
        reduced = divisors.q_reduce(G, D, q)
        print(divisors.divisor_to_text(G, reduced))
        return EXIT_OK
    if args.subverb == "order":
        D = divisors.divisor_from_text(G, args.divisor)
        if divisors.degree(D) != 0:
            raise ValueError("order needs a degree-0 divisor")
        print(critgrp.element_order(G, D, q))
        return EXIT_OK
    if args.subverb == "pairing":
        D1 = divisors.divisor_from_text(G, args.d1)
        D2 = divisors.divisor_from_text(G, args.d2)
        value = divisors.monodromy_pairing(G, D1, D2, q)
        print(f"{value.numerator}/{value.denominator}")
        return EXIT_OK
    if args.subverb == "gonality":
        gon, witness = divisors.gonality(G)
        print(f"gonality: {gon}")
        print(f"witness: {divisors.divisor_to_text(G, witness)}")
        return EXIT_OK
    raise GraphParseError(f"unknown divisor subcommand {args.subverb!r}")


def _parse_r(G, text: str):
    try:
        r = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise InvalidStructureError(f"bad r-vector {text!r}") from None
    if len(r) != G.n:
        raise InvalidStructureError(
            f"r-vector has {len(r)} entries for a graph on {G.n} vertices"
        )
    return r


def cmd_arith(args) -> int:
    G = _require_undirected(_load_graph(args.graph))
    if args.subverb == "enumerate":
        found = arith.enumerate_structures(G, args.rmax)
        print(f"structures: {len(found)}")
        print(f"r_max: {args.rmax}")
        print("complete_only_up_to_r_max: true")
        for s in found:
            print(arith.structure_to_text(s))
        return EXIT_OK
    if args.subverb == "validate":
        s = arith.validate(G, _parse_r(G, args.r))
        print("d=(%s)" % ",".join(str(x) for x in s.d))
        return EXIT_OK
    if args.subverb == "smooth":
        s = arith.validate(G, _parse_r(G, args.r))
        if args.vertex is None:
            spots = arith.smoothable_vertices(G, s)
            print(f"smooth: {'true' if not spots else 'false'}")
            if spots:
                print("smoothable_at:", " ".join(G.labels[v] for v in spots))
            return EXIT_OK
        newG, news = arith.smooth_at(G, s, args.vertex)
        print("vertices:", " ".join(newG.labels))
        print(arith.structure_to_text(news))
        sys.stdout.write(graphs.graph_to_text(newG))
        return EXIT_OK
    raise GraphParseError(f"unknown arith subcommand {args.subverb!r}")


def cmd_random(args) -> int:
    try:
        q = Fraction(args.q)
    except (ValueError, ZeroDivisionError):
        raise GraphParseError(f"bad probability {args.q!r}") from None
    config = randomlab.ExperimentConfig(
        n=args.n, q=q, samples=args.samples, p=args.p, seed=args.seed
    )
    report = randomlab.run_experiment(config, jobs=args.jobs)
    print(report.to_json())
    freq = report.frequencies()["connected"]
    expected = randomlab.wood_probability(critgrp.AbelianGroup(), config.p)
    observed = freq["sylow"].get("trivial", 0.0)
    if abs(observed - expected) > 0.05:
        print(
            f"WARN: trivial Sylow-{config.p} frequency {observed:.6f} "
            f"is outside +/-0.05 of the predicted {expected:.6f}",
            file=sys.stderr,
        )
    cyc_expected = randomlab.cyclic_constant(10)
    if abs(freq["cyclic"] - cyc_expected) > 0.05:
        print(
            f"WARN: cyclic frequency {freq['cyclic']:.6f} is outside +/-0.05 "
            f"of the conjectured {cyc_expected:.6f}",
            file=sys.stderr,
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chipfire",
        description="Critical groups, chip-firing divisors, arithmetical "
        "structures and random-graph experiments on graph files.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_group = sub.add_parser("group", help="critical group, SNF, trees, genus")
    p_group.add_argument("graph")
    p_group.add_argument("--reduced-at", metavar="VERTEX", default=None)
    p_group.add_argument("--directed", action="store_true")
    p_group.set_defaults(func=cmd_group)

    p_trees = sub.add_parser("tree-count", help="number of spanning trees")
    p_trees.add_argument("graph")
    p_trees.set_defaults(func=cmd_tree_count)

    p_div = sub.add_parser("divisor", help="divisor calculus")
    p_div.add_argument("graph")
    p_div.add_argument("subverb", choices=["reduce", "order", "pairing", "gonality"])
    p_div.add_argument("--divisor", default="", help="label:value pairs")
    p_div.add_argument("--d1", default="", help="first divisor for pairing")
    p_div.add_argument("--d2", default="", help="second divisor for pairing")
    p_div.add_argument("--q", default=None, help="base vertex (default: last)")
    p_div.set_defaults(func=cmd_divisor)

    p_arith = sub.add_parser("arith", help="arithmetical structures")
    p_arith.add_argument("graph")
    p_arith.add_argument("subverb", choices=["enumerate", "validate", "smooth"])
    p_arith.add_argument("--rmax", type=int, default=12)
    p_arith.add_argument("--r", default="", help="comma-separated r entries")
    p_arith.add_argument("--vertex", default=None, help="vertex to smooth at")
    p_arith.set_defaults(func=cmd_arith)

    p_rand = sub.add_parser("random", help="Erdos-Renyi experiment report")
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--q", required=True, help="edge probability, e.g. 1/2")
    p_rand.add_argument("--p", type=int, required=True, help="prime for Sylow tallies")
    p_rand.add_argument("--samples", type=int, required=True)
    p_rand.add_argument("--seed", type=int, default=0)
    p_rand.add_argument("--jobs", type=int, default=1)
    p_rand.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except GraphParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DisconnectedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    except (InvalidStructureError, GuardError, ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
