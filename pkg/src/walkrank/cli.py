"""Command-line interface.

Subcommands:

* ``compute``       — one measure on one graph, scores as CSV/JSON
* ``sweep``         — parameter sweep with intersection-distance columns
                      and a convergence report
* ``compare``       — intersection distance between two score files
* ``pagerank-demo`` — self-checking reproduction of the bundled six-node
                      PageRank example

Exit codes: 0 success; 1 demo mismatch; 2 invalid input or parameters
(message names the violated bound); 3 an iteration or series failed to
converge within its cap.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .datasets import (
    SIX_NODE_ALPHAS,
    SIX_NODE_H_ROWSUMS,
    SIX_NODE_PAGERANK_TABLE,
    SIX_NODE_PAGERANK_TOL,
    SIX_NODE_RANKING_LABELS,
    karate,
    six_node_digraph,
)
from .errors import (
    ConvergenceError,
    TruncationError,
    ValidationError,
    WalkrankError,
)
from .generators import erdos_renyi, ring, star
from .graph import Graph, load_edge_list, load_matrix_market
from .measures import (
    degree_centrality,
    eigenvector_centrality,
    exp_subgraph,
    hits,
    katz,
    resolvent_subgraph,
    total_communicability,
)
from .pagerank import (
    build_model,
    heat_kernel_rowsums,
    pagerank_power,
    small_alpha_limit,
)
from .ranking import convergence_report, intersection_distance, limit_sweep, rank

MEASURES = ("degree", "eigenvector", "katz", "resolvent-subgraph",
            "exp-subgraph", "total-communicability", "hits", "pagerank",
            "heat-kernel")
SWEEPABLE = ("katz", "resolvent-subgraph", "exp-subgraph",
             "total-communicability", "pagerank")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkrank",
        description="Walk-based centrality, PageRank, and ranking sweeps "
                    "for sparse graphs.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(p):
        p.add_argument("--input",
                       help="edge-list or Matrix Market file; "
                            "'builtin:karate' and 'builtin:six-node' load "
                            "the bundled graphs")
        p.add_argument("--format", choices=("edgelist", "mtx"),
                       help="input format (default: inferred from the file "
                            "extension)")
        p.add_argument("--directed", action="store_true",
                       help="treat an edge list as directed (Matrix Market "
                            "symmetry is taken from the header)")
        p.add_argument("--synth", choices=("er", "ring", "star"),
                       help="generate a graph instead of reading one")
        p.add_argument("--n", type=int, help="node count for --synth")
        p.add_argument("--p", type=float,
                       help="edge probability for --synth er")
        p.add_argument("--seed", type=int,
                       help="RNG seed, required for --synth er")

    pc = sub.add_parser("compute", help="compute one centrality measure")
    add_input_flags(pc)
    pc.add_argument("--measure", required=True, choices=MEASURES)
    pc.add_argument("--side", choices=("broadcast", "receive"),
                    default="broadcast",
                    help="role to score on directed graphs (hits: broadcast "
                         "prints hubs, receive prints authorities)")
    pc.add_argument("--alpha", type=float,
                    help="resolvent/Katz/PageRank parameter")
    pc.add_argument("--beta", type=float,
                    help="exponential-family inverse temperature")
    pc.add_argument("--t", type=float, help="heat-kernel time")
    pc.add_argument("--preference", default="uniform",
                    help="PageRank preference: 'uniform' or a file with one "
                         "weight per line")
    pc.add_argument("--tol", type=float, default=1e-10)
    pc.add_argument("--out", help="write output here instead of stdout")
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(func=cmd_compute)

    ps = sub.add_parser("sweep",
                        help="trace a measure across its parameter grid")
    add_input_flags(ps)
    ps.add_argument("--measure", required=True, choices=SWEEPABLE)
    ps.add_argument("--side", choices=("broadcast", "receive"),
                    default="broadcast")
    ps.add_argument("--grid",
                    help="comma-separated parameter values (default: a "
                         "family-specific grid inside the feasible interval)")
    ps.add_argument("--k", type=int,
                    help="intersection-distance depth (default: all nodes)")
    ps.add_argument("--tol", type=float, default=1e-10)
    ps.add_argument("--out",
                    help="write the sweep CSV here (report still goes to "
                         "stdout)")
    ps.add_argument("--json", action="store_true",
                    help="emit sweep rows and report as one JSON document")
    ps.set_defaults(func=cmd_sweep)

    pp = sub.add_parser("compare",
                        help="intersection distance between two score files")
    pp.add_argument("file_a")
    pp.add_argument("file_b")
    pp.add_argument("--k", type=int,
                    help="comparison depth (default: all nodes)")
    pp.add_argument("--json", action="store_true")
    pp.set_defaults(func=cmd_compare)

    pd = sub.add_parser("pagerank-demo",
                        help="reproduce and verify the bundled six-node "
                             "PageRank example")
    pd.set_defaults(func=cmd_demo_pagerank)

    return parser


# ---------------------------------------------------------------------------
# input plumbing
# ---------------------------------------------------------------------------

def _detect_index_base(text: str) -> int:
    """Use 0-based ids iff a node id 0 appears; classic files are 1-based."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped[0] in "#%":
            continue
        parts = stripped.split()
        if len(parts) < 2:
            continue
        try:
            if int(parts[0]) == 0 or int(parts[1]) == 0:
                return 0
        except ValueError:
            continue
    return 1


def _load_graph(args) -> Graph:
    if args.synth:
        if args.n is None:
            raise ValidationError("--synth requires --n")
        if args.synth == "er":
            if args.p is None:
                raise ValidationError("--synth er requires --p")
            if args.seed is None:
                raise ValidationError("--synth er requires --seed (runs "
                                      "must be reproducible)")
            return erdos_renyi(args.n, args.p, args.seed,
                               directed=args.directed)
        if args.synth == "ring":
            return ring(args.n, directed=args.directed)
        return star(args.n, directed=args.directed)

    if not args.input:
        raise ValidationError("either --input or --synth is required")
    if args.input == "builtin:karate":
        return karate()
    if args.input == "builtin:six-node":
        return six_node_digraph()
    if args.input.startswith("builtin:"):
        raise ValidationError(
            f"unknown builtin graph {args.input!r} (have builtin:karate, "
            "builtin:six-node)")

    fmt = args.format
    if fmt is None:
        fmt = "mtx" if args.input.lower().endswith((".mtx", ".mm")) else \
            "edgelist"
    if fmt == "mtx":
        if args.directed:
            print("note: --directed ignored for Matrix Market input; the "
                  "header symmetry governs", file=sys.stderr)
        return load_matrix_market(args.input)
    with open(args.input, encoding="utf-8") as fh:
        text = fh.read()
    base = _detect_index_base(text)
    if base == 0:
        print("note: node id 0 found, reading ids as 0-based",
              file=sys.stderr)
    return load_edge_list(io.StringIO(text), directed=args.directed,
                          index_base=base)


def _load_preference(spec: str, n: int) -> np.ndarray | None:
    if spec == "uniform":
        return None
    with open(spec, encoding="utf-8") as fh:
        values = [float(line.strip()) for line in fh if line.strip()]
    v = np.asarray(values, dtype=np.float64)
    if v.shape[0] != n:
        raise ValidationError(
            f"preference file has {v.shape[0]} entries for a graph with "
            f"{n} nodes")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValidationError("preference entries must be finite and >= 0")
    total = float(v.sum())
    if total <= 0:
        raise ValidationError("preference must have positive total mass")
    if abs(total - 1.0) > 1e-12:
        print(f"note: preference rescaled by 1/{total:.12g} to sum to 1",
              file=sys.stderr)
        v = v / total
    return v


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _require(args, name: str, measure: str) -> float:
    value = getattr(args, name.lstrip("-").replace("-", "_"))
    if value is None:
        raise ValidationError(f"--measure {measure} requires {name}")
    return value


def cmd_compute(args) -> int:
    g = _load_graph(args)
    measure = args.measure
    tol = args.tol
    preference_desc = None

    if measure == "degree":
        cv = degree_centrality(g, side=args.side)
    elif measure == "eigenvector":
        cv = eigenvector_centrality(g, side=args.side, tol=tol)
    elif measure == "katz":
        cv = katz(g, args.alpha, side=args.side, tol=tol)
    elif measure == "resolvent-subgraph":
        cv = resolvent_subgraph(g, args.alpha, tol=tol)
    elif measure == "exp-subgraph":
        cv = exp_subgraph(g, args.beta if args.beta is not None else 1.0,
                          tol=tol)
    elif measure == "total-communicability":
        cv = total_communicability(
            g, args.beta if args.beta is not None else 1.0,
            side=args.side, tol=tol)
    elif measure == "hits":
        hubs, authorities = hits(g, tol=tol)
        cv = authorities if (g.directed and args.side == "receive") else hubs
    elif measure == "pagerank":
        alpha = args.alpha if args.alpha is not None else 0.85
        v = _load_preference(args.preference, g.n)
        model = build_model(g, alpha, v)
        scores = pagerank_power(model, tol=tol)
        preference_desc = args.preference
        cv = _Plain("pagerank", "broadcast", alpha, scores)
    else:  # heat-kernel
        t = _require(args, "--t", measure)
        alpha = args.alpha if args.alpha is not None else 0.85
        v = _load_preference(args.preference, g.n)
        model = build_model(g, alpha, v)
        scores = heat_kernel_rowsums(model, t, tol=tol)
        preference_desc = args.preference
        cv = _Plain("heat-kernel", "broadcast", t, scores)

    ranking = rank(cv.scores)
    position = np.empty(g.n, dtype=np.int64)
    position[ranking.order] = np.arange(1, g.n + 1)
    labels = g.node_labels

    if args.json:
        payload = {
            "measure": cv.measure,
            "side": cv.side,
            "parameter": cv.parameter,
            "preference": preference_desc,
            "scores": [
                {"node": int(labels[i]), "score": float(cv.scores[i]),
                 "rank": int(position[i])}
                for i in ranking.order
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["node,score,rank"]
        for i in ranking.order:
            lines.append(f"{labels[i]},{cv.scores[i]:.12g},{position[i]}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


class _Plain:
    """Minimal stand-in for measures computed outside measures.py."""

    def __init__(self, measure, side, parameter, scores):
        self.measure = measure
        self.side = side
        self.parameter = parameter
        self.scores = scores


def cmd_sweep(args) -> int:
    g = _load_graph(args)
    grid = None
    if args.grid:
        try:
            grid = [float(x) for x in args.grid.split(",") if x.strip()]
        except ValueError:
            raise ValidationError(
                f"--grid must be comma-separated numbers, got {args.grid!r}"
            ) from None
    sweep = limit_sweep(g, args.measure, side=args.side, grid=grid,
                        k=args.k, tol=args.tol)
    report = convergence_report(sweep)
    if args.json:
        payload = {"sweep": sweep.to_json_dict(),
                   "report": report.to_json_dict()}
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return 0
    _emit(sweep.to_csv(), args.out)
    if args.out:
        print(f"sweep CSV written to {args.out}")
    print(report.render())
    return 0


def _read_score_file(path: str) -> tuple[np.ndarray, np.ndarray]:
    nodes: list[int] = []
    scores: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p for p in line.replace(",", " ").split() if p]
            if len(parts) < 2:
                raise ValidationError(
                    f"{path}:{lineno}: expected 'node score' columns")
            try:
                node = int(parts[0])
                score = float(parts[1])
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise ValidationError(
                    f"{path}:{lineno}: expected 'node score' columns, got "
                    f"{line!r}") from None
            nodes.append(node)
            scores.append(score)
    if not nodes:
        raise ValidationError(f"{path}: no score rows found")
    return np.asarray(nodes, dtype=np.int64), np.asarray(scores)


def cmd_compare(args) -> int:
    nodes_a, scores_a = _read_score_file(args.file_a)
    nodes_b, scores_b = _read_score_file(args.file_b)
    order_a = nodes_a[rank(scores_a).order]
    order_b = nodes_b[rank(scores_b).order]
    value = intersection_distance(order_a, order_b, args.k)
    if args.json:
        k = args.k if args.k is not None else len(order_a)
        print(json.dumps({"isim": value, "k": k}))
    else:
        print(f"{value:.12g}")
    return 0


def cmd_demo_pagerank(args) -> int:
    g = six_node_digraph()
    model = build_model(g, 0.85)
    n = g.n
    failures: list[str] = []

    print("six-node digraph: edges "
          + ", ".join(f"{int(g.node_labels[u])}->{int(g.node_labels[v])}"
                      for u, v, _ in g.edge_tuples()))
    print()
    print("H (column j spreads node j's mass over its out-neighbors):")
    h_dense = np.zeros((n, n))
    rows = np.repeat(np.arange(n), np.diff(model.h_indptr))
    h_dense[rows, model.h_indices] = model.h_data
    for i in range(n):
        cells = []
        for j in range(n):
            frac = Fraction(h_dense[i, j]).limit_denominator(1000)
            cells.append(f"{str(frac):>4s}")
        print("  [" + " ".join(cells) + "]")

    rowsums = small_alpha_limit(g)
    expected_rowsums = np.array([float(f) for f in SIX_NODE_H_ROWSUMS])
    print("\nH row sums (alpha -> 0 limit): "
          + "  ".join(f"{x:.12g}" for x in rowsums))
    if np.max(np.abs(rowsums - expected_rowsums)) > 1e-12:
        failures.append("H row sums deviate from the reference rationals")
    limit_order = tuple(int(g.node_labels[i])
                        for i in rank(rowsums).order)
    print(f"limit ranking: {' '.join(map(str, limit_order))} "
          "(nodes 2 and 5 tied for third place)")

    for alpha in SIX_NODE_ALPHAS:
        p = pagerank_power(build_model(g, alpha))
        table = SIX_NODE_PAGERANK_TABLE[alpha]
        tolerances = SIX_NODE_PAGERANK_TOL[alpha]
        print(f"\nalpha = {alpha}")
        print("  p        = " + "  ".join(f"{x:.7f}" for x in p))
        print("  expected = " + "  ".join(f"{x:.7f}" for x in table))
        diffs = np.abs(p - table)
        for j in range(n):
            if diffs[j] > tolerances[j]:
                failures.append(
                    f"alpha={alpha}: node {j + 1} expected {table[j]!r} got "
                    f"{p[j]:.9f} (|diff| {diffs[j]:.2e} > tol "
                    f"{tolerances[j]:.0e})")
        order = tuple(int(g.node_labels[i]) for i in rank(p).order)
        print("  ranking: " + " ".join(map(str, order)))
        if order != SIX_NODE_RANKING_LABELS:
            failures.append(
                f"alpha={alpha}: ranking {order} != "
                f"{SIX_NODE_RANKING_LABELS}")

    print()
    if failures:
        print(f"MISMATCH ({len(failures)} divergent entries):")
        for f in failures:
            print(f"  - {f}")
        return 1
    print("all values match the reference tables")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConvergenceError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except WalkrankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
