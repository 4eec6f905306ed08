"""Command-line interface.

Machine-readable results go to stdout (TSV by default, JSON via
``--format json``); diagnostics go to stderr. Exit codes: 0 success,
1 usage error, 2 data or validation error, 3 resource limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bayes, circuit, classify, formats, generator, propagate, scoring
from .errors import (
    CybagError,
    CycleLimitError,
    GraphCyclicError,
    TooLargeError,
    WidthLimitError,
)
from .graph import AttackGraph, convert_plain, find_cycles, validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_LIMIT = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}f}"


def _load_graph(path) -> AttackGraph:
    graph = formats.read_json(path)
    report = validate(graph)
    if not report.ok:
        details = "; ".join(f"{i.code} {i.subject}" for i in report.errors)
        raise CybagError(f"invalid graph {path}: {details}")
    return graph


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    graph = _load_graph(args.infile)
    if args.node is not None:
        values = {args.node: propagate.solve_node(graph, args.node)}
    else:
        values = propagate.solve_all(graph, threads=args.threads)
    if args.format == "json":
        payload = [
            {"node": v, "probability": _fmt(p, args.precision)}
            for v, p in sorted(values.items())
        ]
        text = json.dumps({"probabilities": payload}, indent=2) + "\n"
    else:
        text = "".join(
            f"{v}\t{_fmt(p, args.precision)}\n" for v, p in sorted(values.items())
        )
    _emit(text, args.out)
    return EXIT_OK


def _cmd_ve(args) -> int:
    graph = _load_graph(args.infile)
    value = bayes.eliminate(bayes.to_bayes_net(graph), args.node)
    sys.stdout.write(f"{args.node}\t{_fmt(value, args.precision)}\n")
    return EXIT_OK


def _cmd_circuit(args) -> int:
    graph = _load_graph(args.infile)
    if args.mc:
        est = circuit.reachability_mc(graph, args.node, args.mc, args.seed)
    else:
        est = circuit.reachability_exact(graph, args.node)
    if args.format == "json":
        payload = {
            "node": args.node,
            "probability": _fmt(est.probability, args.precision),
            "method": est.method,
            "samples": est.samples,
            "std_error": _fmt(est.std_error, args.precision),
        }
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(
            f"{args.node}\t{_fmt(est.probability, args.precision)}\t{est.method}"
            f"\t{est.samples}\t{_fmt(est.std_error, args.precision)}\n"
        )
    return EXIT_OK


def _cmd_compare(args) -> int:
    graph = _load_graph(args.infile)
    p = args.precision
    algorithm = propagate.solve_node(graph, args.node)
    exact = circuit.reachability_exact(graph, args.node).probability
    try:
        ve = bayes.eliminate(bayes.to_bayes_net(graph), args.node)
    except GraphCyclicError:
        ve = None
        print("graph is cyclic; variable elimination unavailable", file=sys.stderr)
    rows = [
        ("algorithm", _fmt(algorithm, p)),
        ("ve", _fmt(ve, p) if ve is not None else "NA"),
        ("circuit", _fmt(exact, p)),
        ("delta_algorithm_ve", _fmt(algorithm - ve, p) if ve is not None else "NA"),
        ("delta_algorithm_circuit", _fmt(algorithm - exact, p)),
    ]
    if args.format == "json":
        sys.stdout.write(json.dumps(dict(rows), indent=2) + "\n")
    else:
        sys.stdout.write("".join(f"{k}\t{v}\n" for k, v in rows))
    return EXIT_OK


def _cmd_cycles(args) -> int:
    graph = _load_graph(args.infile)
    found = find_cycles(graph, args.max)
    rows = []
    for cyc in found:
        entry = {"cycle": ",".join(str(v) for v in cyc.nodes)}
        if args.target is not None:
            report = classify.classify_cycle(graph, cyc, args.target)
            entry["type"] = report.cycle_type.name.lower()
            if report.witness is not None:
                _, node_j, k = report.witness
                entry["witness_node"] = str(node_j)
                entry["witness_k"] = str(k)
        else:
            try:
                report = classify.classify_cycle(graph, cyc, None)
                entry["type"] = report.cycle_type.name.lower()
            except CybagError:
                entry["type"] = "needs-target"
        rows.append(entry)
    if args.format == "json":
        sys.stdout.write(json.dumps({"cycles": rows}, indent=2) + "\n")
    else:
        for entry in rows:
            fields = [
                entry["cycle"],
                entry.get("type", ""),
                entry.get("witness_node", ""),
                entry.get("witness_k", ""),
            ]
            sys.stdout.write("\t".join(fields).rstrip("\t") + "\n")
    return EXIT_OK


def _parse_ratio(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"ratio must look like 50:35:15, got {text!r}")
    try:
        ratio = tuple(float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"ratio must be numeric, got {text!r}") from None
    if abs(sum(ratio) - 100.0) > 1e-9:
        raise _UsageError(f"ratio must sum to 100, got {text!r}")
    return ratio  # type: ignore[return-value]


def _cmd_generate(args) -> int:
    if args.n < 3:
        raise _UsageError("--n must be at least 3")
    if not 0 <= args.cyclicity <= 100:
        raise _UsageError("--cyclicity must be between 0 and 100")
    params = generator.GenParams(
        n=args.n,
        cyclicity=args.cyclicity,
        ratio=_parse_ratio(args.ratio),
        seed=args.seed,
        max_parents=args.max_parents,
    )
    graph = generator.generate(params)
    formats.write_json(graph, args.out)
    print(f"wrote {len(graph.nodes)} nodes, {len(graph.edges)} edges", file=sys.stderr)
    return EXIT_OK


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise _UsageError(f"{flag} must be a comma-separated integer list") from None


def _cmd_bench(args) -> int:
    sizes = _parse_int_list(args.sizes, "--sizes")
    cyclicities = _parse_int_list(args.cyclicities, "--cyclicities")
    if not sizes or not cyclicities:
        raise _UsageError("--sizes and --cyclicities must be non-empty")
    if any(c < 0 or c > 100 for c in cyclicities):
        raise _UsageError("--cyclicities entries must be between 0 and 100")
    if args.reps < 1:
        raise _UsageError("--reps must be at least 1")
    rows = generator.bench(sizes, cyclicities, args.reps, args.seed, threads=args.threads)
    generator.write_bench_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_score(args) -> int:
    graph = _load_graph(args.infile)
    records = scoring.import_feed(args.feed)
    formats.write_json(scoring.apply_scores(graph, records), args.out)
    return EXIT_OK


def _cmd_convert(args) -> int:
    plain = formats.read_plain_json(args.plain)
    formats.write_json(convert_plain(plain), args.out)
    return EXIT_OK


def _cmd_dot(args) -> int:
    graph = _load_graph(args.infile)
    probs = propagate.solve_all(graph) if args.probs else None
    formats.write_dot(graph, args.out, probs)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="cybag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, node_required=False, with_format=True):
        p.add_argument("--in", dest="infile", required=True, help="graph JSON file")
        p.add_argument(
            "--node", type=int, required=node_required, help="node id to query"
        )
        p.add_argument("--precision", type=int, default=6)
        if with_format:
            p.add_argument("--format", choices=("tsv", "json"), default="tsv")

    p = sub.add_parser("solve", help="recursive propagation over all or one node")
    common(p)
    p.add_argument("--out", help="write output to a file instead of stdout")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("ve", help="variable-elimination marginal (acyclic only)")
    common(p, node_required=True, with_format=False)
    p.set_defaults(func=_cmd_ve)

    p = sub.add_parser("circuit", help="circuit reachability, exact or Monte Carlo")
    common(p, node_required=True)
    p.add_argument("--mc", type=int, default=0, help="sample count; 0 means exact")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_circuit)

    p = sub.add_parser("compare", help="all three engines side by side")
    common(p, node_required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("cycles", help="find and classify simple cycles")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--max", type=int, default=10_000)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser("generate", help="synthesize a random cyclic graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cyclicity", type=float, required=True)
    p.add_argument("--ratio", default="50:35:15")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-parents", type=int, default=4, dest="max_parents")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="timing benchmark over generated graphs")
    p.add_argument("--sizes", required=True)
    p.add_argument("--cyclicities", required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("score", help="apply CVSS feed probabilities to leaves")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--feed", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("convert", help="bipartite exploit/condition graph to typed graph")
    p.add_argument("--plain", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("dot", help="GraphViz export")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--probs", action="store_true", help="annotate access probabilities")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_dot)
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TooLargeError, WidthLimitError, CycleLimitError) as exc:
        print(f"limit exceeded [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except CybagError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error [IO_ERROR]: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
