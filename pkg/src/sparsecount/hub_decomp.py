"""Hubsets, reachability, unique reachability graphs, and width-1
hub-tree decompositions.

A hubset generalizes DAG sources to cyclic digraphs: a set of pairwise
mutually unreachable vertices that jointly reach everything. We fix a
canonical choice (the lowest-id vertex of every source component of the
SCC condensation); for fraternal extensions of DAG orientations this is
exactly the in-degree-0 set. Width-1 decompositions are grown hub by hub
via the good-pair insertion, with exhaustive search over labeled trees
as a completeness backstop.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import product as iter_product

from .graph_core import DirWLGraph


def reach(g: DirWLGraph, s) -> frozenset:
    """Vertices with a directed path from some member of s (s included).

    Accepts a single vertex or an iterable; per-vertex results are
    memoized on the graph behind a lock.
    """
    if isinstance(s, (int,)) or hasattr(s, "__index__"):
        return _reach_one(g, int(s))
    out: frozenset = frozenset()
    for v in sorted(s):
        out |= _reach_one(g, int(v))
    return out


def _reach_one(g: DirWLGraph, s: int) -> frozenset:
    cached = g._reach_cache.get(s)
    if cached is not None:
        return cached
    seen = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for u in g.out_arcs(v)[0]:
            u = int(u)
            if u not in seen:
                seen.add(u)
                stack.append(u)
    result = frozenset(seen)
    with g._reach_lock:
        g._reach_cache[s] = result
    return result


def _condensation(g: DirWLGraph) -> list[int]:
    """Component id per vertex via iterative Tarjan."""
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            outs = g.out_arcs(v)[0]
            descended = False
            while pi < outs.shape[0]:
                u = int(outs[pi])
                pi += 1
                if index[u] == -1:
                    work.append((v, pi))
                    work.append((u, 0))
                    descended = True
                    break
                if on_stack[u]:
                    low[v] = min(low[v], index[u])
            if descended:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
    return comp


def hubset(g: DirWLGraph) -> tuple[int, ...]:
    """Canonical hubset: lowest-id member of each source SCC, ascending.

    The result is pairwise mutually unreachable and jointly reaches every
    vertex; for fraternal extensions of acyclic orientations it equals
    the unique in-degree-0 set.
    """
    comp = _condensation(g)
    ncomp = max(comp, default=-1) + 1
    has_in = [False] * ncomp
    for u, v in zip(g.src, g.dst):
        if comp[u] != comp[v]:
            has_in[comp[v]] = True
    rep = [None] * ncomp
    for v in range(g.n):
        c = comp[v]
        if rep[c] is None:
            rep[c] = v  # vertices scanned ascending, so first hit is lowest
    return tuple(sorted(rep[c] for c in range(ncomp) if not has_in[c]))


@dataclass(frozen=True)
class URGraph:
    """Unique reachability graph over a hub subset."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def is_forest(self) -> bool:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True


def unique_reachability_graph(g: DirWLGraph, sp) -> URGraph:
    """Edge {s1, s2} iff some vertex is reached by s1 and s2 and by no
    other hub of sp."""
    hubs = tuple(sorted(sp))
    reaches = {s: reach(g, s) for s in hubs}
    edges = []
    for i, s1 in enumerate(hubs):
        for s2 in hubs[i + 1:]:
            others = frozenset()
            for s3 in hubs:
                if s3 != s1 and s3 != s2:
                    others |= reaches[s3]
            if (reaches[s1] & reaches[s2]) - others:
                edges.append((s1, s2))
    return URGraph(hubs, tuple(edges))


@dataclass(frozen=True)
class HubTree:
    """Rooted tree of singleton hub bags (bags[i] is the hub of node i)."""

    bags: tuple[int, ...]
    parent: tuple[int, ...]
    root: int

    def children(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, p in enumerate(self.parent) if p == i)

    def path(self, i: int, j: int) -> list[int]:
        """Node indices on the unique i-j path, endpoints included."""
        anc_i = [i]
        while self.parent[anc_i[-1]] != -1:
            anc_i.append(self.parent[anc_i[-1]])
        seen = {v: d for d, v in enumerate(anc_i)}
        up_j = [j]
        while up_j[-1] not in seen:
            up_j.append(self.parent[up_j[-1]])
        meet = up_j[-1]
        return anc_i[:seen[meet] + 1] + up_j[:-1][::-1]

    def postorder(self) -> list[int]:
        out = []
        stack = [self.root]
        while stack:
            b = stack.pop()
            out.append(b)
            stack.extend(self.children(b))
        return out[::-1]


def validate_decomposition(g: DirWLGraph, tree: HubTree) -> bool:
    """True iff bags are hubs covering the hubset and every bag on a
    tree path contains the endpoints' shared reach."""
    hubs = set(hubset(g))
    bags = tree.bags
    b = len(bags)
    if b == 0 or len(tree.parent) != b:
        return False
    if tree.parent[tree.root] != -1:
        return False
    if sum(1 for p in tree.parent if p == -1) != 1:
        return False
    for i, p in enumerate(tree.parent):
        if i != tree.root and not (0 <= p < b):
            return False
    # parent pointers must form a tree (every node walks up to the root)
    for i in range(b):
        seen = set()
        v = i
        while v != tree.root:
            if v in seen:
                return False
            seen.add(v)
            v = tree.parent[v]
    if not set(bags) <= hubs:
        return False
    if set(bags) != hubs:
        return False
    reaches = [reach(g, x) for x in bags]
    for i in range(b):
        for j in range(i + 1, b):
            shared = reaches[i] & reaches[j]
            for k in tree.path(i, j):
                if not shared <= reaches[k]:
                    return False
    return True


def _property_holds(reaches: list[frozenset], tree: HubTree) -> bool:
    b = len(tree.bags)
    for i in range(b):
        for j in range(i + 1, b):
            shared = reaches[i] & reaches[j]
            if not shared:
                continue
            for k in tree.path(i, j):
                if not shared <= reaches[k]:
                    return False
    return True


def _prufer_trees(b: int):
    """Parent arrays (rooted at node 0) of all labeled trees on b nodes."""
    if b == 1:
        yield (-1,)
        return
    for seq in iter_product(range(b), repeat=b - 2):
        degree = [1] * b
        for x in seq:
            degree[x] += 1
        edges = []
        heap = [v for v in range(b) if degree[v] == 1]
        heapq.heapify(heap)
        for x in seq:
            leaf = heapq.heappop(heap)
            edges.append((leaf, x))
            degree[x] -= 1
            if degree[x] == 1:
                heapq.heappush(heap, x)
        u, v = heapq.heappop(heap), heapq.heappop(heap)
        edges.append((u, v))
        adj = [[] for _ in range(b)]
        for x, y in edges:
            adj[x].append(y)
            adj[y].append(x)
        parent = [-2] * b
        parent[0] = -1
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if parent[y] == -2:
                    parent[y] = x
                    stack.append(y)
        yield tuple(parent)


def find_width1_decomposition(g: DirWLGraph,
                              exhaustive_cap: int = 8) -> HubTree | None:
    """A width-1 hub-tree decomposition of g, or None when none exists.

    Grows the tree one hub at a time (hubs by descending reach size),
    attaching each new hub as a leaf under a bag that covers all its
    pairwise shared reaches. When the greedy insertion stalls, falls back
    to exhaustive search over labeled trees on the hubset; None is
    returned only after that search is complete.
    """
    hubs = hubset(g)
    if not hubs:
        return None
    reaches = {s: reach(g, s) for s in hubs}
    if len(hubs) == 1:
        return HubTree((hubs[0],), (-1,), 0)
    order = sorted(hubs, key=lambda s: (-len(reaches[s]), s))
    bags = [order[0]]
    parent = [-1]
    stalled = False
    for s in order[1:]:
        attach = None
        for d_idx, d in enumerate(bags):
            if all(reaches[s] & reaches[x] <= reaches[d] for x in bags):
                attach = d_idx
                break
        if attach is None:
            stalled = True
            break
        bags.append(s)
        parent.append(attach)
    if not stalled:
        tree = HubTree(tuple(bags), tuple(parent), 0)
        if validate_decomposition(g, tree):
            return tree
    b = len(hubs)
    if b > exhaustive_cap:
        raise RuntimeError(
            f"greedy construction stalled and the hubset has {b} hubs, "
            f"past the exhaustive-search cap {exhaustive_cap}")
    ordered_reaches = [reaches[s] for s in hubs]
    for parent_arr in _prufer_trees(b):
        tree = HubTree(hubs, parent_arr, 0)
        if _property_holds(ordered_reaches, tree):
            return tree
    return None
