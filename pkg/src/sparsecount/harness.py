"""Command line interface, instance generators, and the benchmark driver.

Subcommands: count-hom, count-sub, analyze, gen, verify, bench. Edge
lists are the only ingestion format and JSON the only structured output.
Exit codes: 2 usage error, 1 verify mismatch, 3 no width-1 decomposition
without --exact-fallback.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .counting import (NoWidth1Decomposition, brute_force_hom,
                       count_hom_extension, count_homomorphisms,
                       count_subgraphs, resolve_threads)
from .degeneracy import degeneracy_order
from .fraternal import enumerate_pattern_extensions, optimal_extension
from .graph_core import (GraphFormatError, UndirectedGraph, load_edge_list,
                         max_outdegree)
from .hub_decomp import (find_width1_decomposition, hubset,
                         unique_reachability_graph)
from .pattern_tools import (connected_components, licl, min_extension_depth,
                            spasm)
from .product import label_pattern, pattern_product

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_NO_DECOMPOSITION = 3


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def generate_subdivision(g: UndirectedGraph, t: int) -> UndirectedGraph:
    """G_t: every edge becomes a path of t+1 edges through t new vertices.

    Original vertices keep their ids; triangle counting in g reduces to
    counting C_{3(t+1)} subgraph copies in the output.
    """
    if t < 1:
        raise ValueError("subdivision needs t >= 1")
    edges = []
    nxt = g.n
    for u, v in g.edge_list():
        chain = [u] + list(range(nxt, nxt + t)) + [v]
        nxt += t
        edges.extend(zip(chain, chain[1:]))
    return UndirectedGraph(nxt, edges)


def generate_double_subdivision(g: UndirectedGraph, t: int) -> UndirectedGraph:
    """G_t': per edge, two internally disjoint paths of t+1 and t+2 edges."""
    if t < 2:
        raise ValueError("double subdivision needs t >= 2")
    edges = []
    nxt = g.n
    for u, v in g.edge_list():
        for extra in (t, t + 1):
            chain = [u] + list(range(nxt, nxt + extra)) + [v]
            nxt += extra
            edges.extend(zip(chain, chain[1:]))
    return UndirectedGraph(nxt, edges)


def generate_bounded_degeneracy(n: int, c: int, seed: int) -> UndirectedGraph:
    """Random graph with degeneracy <= c: vertex i picks min(c, i) distinct
    earlier neighbors uniformly."""
    if c < 1:
        raise ValueError("c must be >= 1")
    rng = random.Random(seed)
    edges = []
    for i in range(1, n):
        for j in rng.sample(range(i), min(c, i)):
            edges.append((j, i))
    return UndirectedGraph(n, edges)


def generate_gnp(n: int, p: float, seed: int) -> UndirectedGraph:
    """Erdos-Renyi G(n, p) with an explicit seed."""
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return UndirectedGraph(n, edges)


# ---------------------------------------------------------------------------
# instrumented pipeline
# ---------------------------------------------------------------------------

@dataclass
class RunReport:
    """Everything one counting run learned, for text or JSON output."""

    count: int
    licl: int
    t: int
    n_extensions: int
    spasm_size: int | None
    n: int
    m: int
    kappa: int
    delta_plus: int
    stage_timings_ms: dict = field(default_factory=dict)
    fallback: bool = False

    def to_json(self) -> str:
        payload = {
            "count": self.count,
            "licl": self.licl,
            "t": self.t,
            "n_extensions": self.n_extensions,
            "n": self.n,
            "m": self.m,
            "kappa": self.kappa,
            "delta_plus": self.delta_plus,
            "stage_timings_ms": {k: round(v, 3)
                                 for k, v in self.stage_timings_ms.items()},
        }
        if self.spasm_size is not None:
            payload["spasm_size"] = self.spasm_size
        if self.fallback:
            payload["fallback"] = True
        return json.dumps(payload)


def _induced(h: UndirectedGraph, comp) -> UndirectedGraph:
    verts = sorted(comp)
    remap = {v: i for i, v in enumerate(verts)}
    return UndirectedGraph(len(verts),
                           [(remap[u], remap[v]) for u, v in h.edge_list()
                            if u in remap and v in remap])


def run_count_hom(g: UndirectedGraph, h: UndirectedGraph,
                  t: int | None = None, threads: int | None = None,
                  exact_fallback: bool = False) -> RunReport:
    """count_homomorphisms with per-stage wall-clock accounting."""
    base_licl = licl(h)
    depth = t if t is not None else min_extension_depth(base_licl)
    timings = {"product": 0.0, "host_extension": 0.0, "dp": 0.0}
    total = 1
    n_ext = 0
    delta_plus = 0
    fallback = False
    try:
        for comp in connected_components(h):
            hc = _induced(h, comp)
            comp_t = (t if t is not None
                      else min_extension_depth(licl(hc)))
            hl = label_pattern(hc)
            t0 = time.perf_counter()
            product = pattern_product(hl, g)
            t1 = time.perf_counter()
            host_ext = optimal_extension(product, comp_t)
            t2 = time.perf_counter()
            pattern_exts = enumerate_pattern_extensions(hl, comp_t)
            workers = resolve_threads(threads)
            if workers > 1 and len(pattern_exts) > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    part = sum(pool.map(
                        lambda pe: count_hom_extension(pe, host_ext),
                        pattern_exts))
            else:
                part = sum(count_hom_extension(pe, host_ext)
                           for pe in pattern_exts)
            t3 = time.perf_counter()
            timings["product"] += (t1 - t0) * 1e3
            timings["host_extension"] += (t2 - t1) * 1e3
            timings["dp"] += (t3 - t2) * 1e3
            n_ext += len(pattern_exts)
            delta_plus = max(delta_plus, max_outdegree(host_ext.graph))
            total *= part
    except NoWidth1Decomposition:
        if not exact_fallback:
            raise
        fallback = True
        print("warning: no width-1 decomposition at the chosen depth; "
              "falling back to brute force", file=sys.stderr)
        t0 = time.perf_counter()
        total = brute_force_hom(g, h, cap=g.n)
        timings["brute_force"] = (time.perf_counter() - t0) * 1e3
    kappa = degeneracy_order(g).kappa
    return RunReport(total, base_licl, depth, n_ext, None, g.n, g.m,
                     kappa, delta_plus, timings, fallback)


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _edge_lines(g: UndirectedGraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edge_array)


def _write_graph(g: UndirectedGraph, out: str | None):
    text = _edge_lines(g)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_count_hom(args) -> int:
    g = load_edge_list(args.host)
    h = load_edge_list(args.pattern)
    try:
        report = run_count_hom(g, h, t=args.t, threads=args.threads,
                               exact_fallback=args.exact_fallback)
    except NoWidth1Decomposition as exc:
        print(f"error: {exc}", file=sys.stderr)
        _dump_extension(exc.extension)
        return EXIT_NO_DECOMPOSITION
    if args.json:
        print(report.to_json())
    else:
        print(report.count)
    return EXIT_OK


def _cmd_count_sub(args) -> int:
    g = load_edge_list(args.host)
    h = load_edge_list(args.pattern)
    entries = spasm(h)
    t0 = time.perf_counter()
    try:
        value = count_subgraphs(g, h, threads=args.threads)
    except NoWidth1Decomposition as exc:
        print(f"error: {exc}", file=sys.stderr)
        _dump_extension(exc.extension)
        return EXIT_NO_DECOMPOSITION
    elapsed = (time.perf_counter() - t0) * 1e3
    if args.json:
        base = licl(h)
        report = RunReport(value, base, min_extension_depth(base), 0,
                           len(entries), g.n, g.m,
                           degeneracy_order(g).kappa, 0,
                           {"total": elapsed})
        print(report.to_json())
    else:
        print(value)
    return EXIT_OK


def _dump_extension(ext) -> None:
    g = ext.graph
    print(f"offending extension (depth {ext.depth}):", file=sys.stderr)
    for u, v, w in zip(g.src, g.dst, g.wgt):
        print(f"  {u} -> {v}  weight {w}", file=sys.stderr)


def _cmd_analyze(args) -> int:
    h = load_edge_list(args.pattern)
    base = licl(h)
    t_min = min_extension_depth(base)
    depth = args.t if args.t is not None else t_min
    entries = spasm(h)
    hl = label_pattern(h)
    extensions = enumerate_pattern_extensions(hl, depth)
    witnesses = []
    for ext in extensions:
        tree = find_width1_decomposition(ext.graph)
        hubs = hubset(ext.graph)
        ur = unique_reachability_graph(ext.graph, hubs)
        witnesses.append({
            "arcs": [[int(u), int(v), int(w)] for u, v, w in
                     zip(ext.graph.src, ext.graph.dst, ext.graph.wgt)],
            "hubset": [int(x) for x in hubs],
            "ur_edges": [[int(a), int(b)] for a, b in ur.edges],
            "width1": tree is not None,
            "tree": None if tree is None else {
                "bags": [int(b) for b in tree.bags],
                "parent": [int(p) for p in tree.parent],
            },
        })
    payload = {
        "n": h.n,
        "m": h.m,
        "licl": base,
        "t_min": t_min,
        "t": depth,
        "spasm": [{"n": e.quotient.n,
                   "edges": e.quotient.edge_list(),
                   "coefficient": str(e.coefficient)} for e in entries],
        "n_extensions": len(extensions),
        "extensions": witnesses,
    }
    if args.json:
        print(json.dumps(payload))
        return EXIT_OK
    print(f"pattern: n={h.n} m={h.m}")
    print(f"licl: {base}")
    print(f"t_min: {t_min}  (analyzing at t={depth})")
    print(f"spasm ({len(entries)} classes):")
    for e in entries:
        print(f"  {e.coefficient!s:>8}  *  Hom(G, quotient n={e.quotient.n} "
              f"edges={e.quotient.edge_list()})")
    print(f"|Frat(H,{depth})| = {len(extensions)}")
    width1 = sum(1 for w in witnesses if w["width1"])
    print(f"width-1 witnesses: {width1}/{len(witnesses)}")
    for i, w in enumerate(witnesses):
        tree = w["tree"]
        shape = ("absent" if tree is None else
                 f"bags={tree['bags']} parent={tree['parent']}")
        print(f"  extension {i}: hubset={w['hubset']} "
              f"ur={w['ur_edges']} tree: {shape}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.kind == "degen":
        g = generate_bounded_degeneracy(args.n, args.c, args.seed)
    elif args.kind == "gnp":
        g = generate_gnp(args.n, args.p, args.seed)
    else:
        base = load_edge_list(args.input)
        if args.kind == "subdiv":
            g = generate_subdivision(base, args.t)
        else:
            g = generate_double_subdivision(base, args.t)
    _write_graph(g, args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = load_edge_list(args.host)
    h = load_edge_list(args.pattern)
    fast = count_homomorphisms(g, h, threads=args.threads)
    slow = brute_force_hom(g, h, cap=g.n)
    if fast != slow:
        print(f"MISMATCH: pipeline={fast} brute_force={slow}")
        return EXIT_MISMATCH
    print(f"OK: {fast}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    h = load_edge_list(args.pattern)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    for i, m in enumerate(sizes):
        n = max(args.c + 1, round((m + args.c * (args.c + 1) / 2) / args.c))
        g = generate_bounded_degeneracy(n, args.c, args.seed + i)
        t0 = time.perf_counter()
        value = count_homomorphisms(g, h, threads=args.threads)
        elapsed = time.perf_counter() - t0
        rows.append({"target_m": m, "n": g.n, "m": g.m,
                     "seconds": elapsed, "count": value})
    for i, row in enumerate(rows):
        row["ratio"] = (None if i == 0 or rows[i - 1]["seconds"] == 0
                        else rows[i]["seconds"] / rows[i - 1]["seconds"])
    if args.json:
        print(json.dumps(rows))
    else:
        for row in rows:
            ratio = "" if row["ratio"] is None else f"  x{row['ratio']:.2f}"
            print(f"m={row['m']:>9}  count={row['count']}  "
                  f"{row['seconds'] * 1e3:10.1f} ms{ratio}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsecount",
        description="Count pattern homomorphisms and subgraph copies in "
                    "sparse host graphs in near-linear time.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-hom", help="count Hom(host, pattern)")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--t", type=int, default=None,
                   help="extension depth (default: minimal for the pattern)")
    p.add_argument("--exact-fallback", action="store_true",
                   help="fall back to brute force when no width-1 "
                        "decomposition exists")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_count_hom)

    p = sub.add_parser("count-sub", help="count Sub(host, pattern)")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_count_sub)

    p = sub.add_parser("analyze", help="static pattern analysis")
    p.add_argument("pattern")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("gen", help="write a generated edge list")
    gsub = p.add_subparsers(dest="kind", required=True)
    d = gsub.add_parser("degen", help="random bounded-degeneracy graph")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--c", type=int, required=True)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("-o", "--output", default=None)
    d.set_defaults(func=_cmd_gen)
    d = gsub.add_parser("gnp", help="Erdos-Renyi G(n,p)")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--p", type=float, required=True)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("-o", "--output", default=None)
    d.set_defaults(func=_cmd_gen)
    d = gsub.add_parser("subdiv", help="replace edges by (t+1)-edge paths")
    d.add_argument("input")
    d.add_argument("--t", type=int, required=True)
    d.add_argument("-o", "--output", default=None)
    d.set_defaults(func=_cmd_gen)
    d = gsub.add_parser("subdiv2", help="two disjoint paths per edge")
    d.add_argument("input")
    d.add_argument("--t", type=int, required=True)
    d.add_argument("-o", "--output", default=None)
    d.set_defaults(func=_cmd_gen)

    p = sub.add_parser("verify", help="pipeline vs brute force on one pair")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="near-linear scaling measurement")
    p.add_argument("pattern")
    p.add_argument("--sizes", required=True,
                   help="comma-separated target edge counts")
    p.add_argument("--c", type=int, default=3)
    p.add_argument("--seed", type=int, default=20260811)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_bench)

    return parser


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (GraphFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
