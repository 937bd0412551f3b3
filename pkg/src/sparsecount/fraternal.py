"""Fraternal extension machinery.

One round of the extension procedure links the endpoints of every
out-out wedge whose weight sum hits the round number. Pattern-side we
branch over all orientations of each new layer (Frat(H, t)); host-side
each layer is oriented by its own degeneracy orientation (MinFrat(F, t))
so the max outdegree stays bounded. A weighted digraph is a valid
t-fraternal extension exactly when its weights form a t-fraternity
function, which ``validate_fraternity`` checks clause by clause.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .degeneracy import degeneracy_orient
from .graph_core import DirWLGraph, EdgeSet, UndirectedGraph
from .pattern_tools import acyclic_orientations
from .product import LabeledPattern, ProductHost

DEFAULT_FRAT_CAP = 10 ** 6


class ExtensionBlowupError(RuntimeError):
    """|Frat(H, t)| would exceed the configured cap."""


@dataclass(frozen=True)
class FraternalExtension:
    """A weighted digraph whose weight-i arcs form extension layer i."""

    graph: DirWLGraph
    depth: int
    layers: tuple[np.ndarray, ...]


def _wedge_pairs(g: DirWLGraph, t: int) -> np.ndarray:
    """Unordered endpoint pairs of out-out wedges with weight sum t."""
    n = g.n
    by_weight = {}
    for a in set(int(w) for w in g.wgt):
        mask = g.wgt == a
        by_weight[a] = (g.src[mask], g.dst[mask])  # still sorted by src
    chunks = []
    for a in range(1, t // 2 + 1):
        b = t - a
        if a not in by_weight or b not in by_weight:
            continue
        src_a, dst_a = by_weight[a]
        src_b, dst_b = by_weight[b]
        cb = np.bincount(src_b, minlength=n + 1)
        bstart = np.concatenate(([0], np.cumsum(cb)))
        rep = cb[src_a]
        total = int(rep.sum())
        if total == 0:
            continue
        u = np.repeat(dst_a, rep)
        base = np.repeat(bstart[src_a], rep)
        excl = np.cumsum(rep) - rep
        within = np.arange(total) - np.repeat(excl, rep)
        w = dst_b[base + within]
        if a == b:
            keep = u < w
            u, w = u[keep], w[keep]
        chunks.append(np.column_stack((np.minimum(u, w), np.maximum(u, w))))
    if not chunks:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.unique(np.concatenate(chunks), axis=0)
    return pairs


def extension_edges(g: DirWLGraph, t: int) -> EdgeSet:
    """One Extension round: pairs {u, w} closed at depth t.

    Emits each unordered pair once (lower id first) where some center v
    carries arcs v->u and v->w with weight sum exactly t and the pair is
    not yet linked in either direction. The input should be a
    (t-1)-fraternal extension; that precondition is not re-verified here.
    """
    if t < 2:
        raise ValueError("extension rounds start at t = 2")
    pairs = _wedge_pairs(g, t)
    if pairs.shape[0] and g.arc_count:
        existing = np.minimum(g.src, g.dst) * g.n + np.maximum(g.src, g.dst)
        existing = np.unique(existing)
        codes = pairs[:, 0] * g.n + pairs[:, 1]
        pos = np.searchsorted(existing, codes)
        pos_c = np.minimum(pos, existing.size - 1)
        hit = (pos < existing.size) & (existing[pos_c] == codes)
        pairs = pairs[~hit]
    return EdgeSet(g.n, pairs, t)


def _with_layer(ext: FraternalExtension, arcs: np.ndarray, weight: int,
                labels) -> FraternalExtension:
    g = ext.graph
    src = np.concatenate((g.src, arcs[:, 0]))
    dst = np.concatenate((g.dst, arcs[:, 1]))
    wgt = np.concatenate((g.wgt, np.full(arcs.shape[0], weight, dtype=np.int64)))
    graph = DirWLGraph.from_arrays(g.n, src, dst, wgt, labels)
    return FraternalExtension(graph, weight, ext.layers + (arcs,))


def enumerate_pattern_extensions(hl: LabeledPattern, t: int,
                                 cap: int = DEFAULT_FRAT_CAP
                                 ) -> list[FraternalExtension]:
    """Frat(H, t): every t-fraternal extension over every acyclic
    orientation of the labeled pattern.

    Round i >= 2 computes the extension edges of each member and branches
    over all 2^|E^i| orientations of the new layer; members are distinct
    as arc-weight sets, never deduplicated up to isomorphism. Aborts with
    ExtensionBlowupError if the member count would pass ``cap``.
    """
    if t < 1:
        raise ValueError("extension depth must be >= 1")
    labels = np.asarray(hl.labels, dtype=np.int64)
    members = [FraternalExtension(g, 1, (np.column_stack((g.src, g.dst)),))
               for g in acyclic_orientations(hl)]
    if len(members) > cap:
        raise ExtensionBlowupError(f"|Frat(H,1)| = {len(members)} exceeds cap {cap}")
    for i in range(2, t + 1):
        nxt: list[FraternalExtension] = []
        for ext in members:
            pairs = extension_edges(ext.graph, i).pairs
            p = pairs.shape[0]
            if len(nxt) + (1 << p) > cap:
                raise ExtensionBlowupError(
                    f"|Frat(H,{i})| exceeds cap {cap}; "
                    f"raise the cap or lower the depth")
            for bits in range(1 << p):
                arcs = pairs.copy()
                for j in range(p):
                    if bits >> j & 1:
                        arcs[j, 0], arcs[j, 1] = pairs[j, 1], pairs[j, 0]
                nxt.append(_with_layer(ext, arcs, i, labels))
        members = nxt
    return members


def optimal_extension(f, t: int) -> FraternalExtension:
    """MinFrat(F, t): each layer oriented by its own degeneracy peel.

    Layer 1 is the degeneracy orientation of F with unit weights; layer
    i orients the round-i extension edges on their own, so every layer is
    an acyclic bounded-outdegree DAG (the union may still be cyclic).
    Accepts a ProductHost or a bare UndirectedGraph (trivial labels).
    """
    if t < 1:
        raise ValueError("extension depth must be >= 1")
    if isinstance(f, ProductHost):
        base, labels = f.graph, f.labels
    elif isinstance(f, UndirectedGraph):
        base, labels = f, None
    else:
        base, labels = f.graph, np.asarray(f.labels, dtype=np.int64)
    layer1 = degeneracy_orient(base, 1)
    ones = np.ones(layer1.arcs.shape[0], dtype=np.int64)
    graph = DirWLGraph.from_arrays(base.n, layer1.arcs[:, 0],
                                   layer1.arcs[:, 1], ones, labels)
    ext = FraternalExtension(graph, 1, (layer1.arcs,))
    for i in range(2, t + 1):
        edges = extension_edges(ext.graph, i)
        layer = degeneracy_orient(edges, i)
        ext = _with_layer(ext, layer.arcs, i, labels)
    return FraternalExtension(ext.graph, t, ext.layers)


def validate_fraternity(ext, t: int | None = None, size_cap: int = 4096) -> bool:
    """Check the three t-fraternity clauses on a weighted digraph.

    For every vertex pair, with absent arcs read as infinity: the pair's
    minimum weight is 1, or it equals the minimum wedge sum
    min_z w(z,x) + w(z,y), or both exceed t. Only pairs that carry an arc
    or a wedge can violate a clause, so the scan is over arcs and
    out-pairs instead of all n^2 pairs. Intended for tests and debugging;
    the cost is quadratic in the outdegrees.
    """
    g = ext.graph if isinstance(ext, FraternalExtension) else ext
    if t is None:
        if isinstance(ext, FraternalExtension):
            t = ext.depth
        else:
            t = int(g.wgt.max()) if g.arc_count else 1
    if g.n > size_cap:
        raise ValueError(f"validate_fraternity capped at {size_cap} vertices")
    pairw: dict[tuple[int, int], int] = {}
    for u, v, w in zip(g.src, g.dst, g.wgt):
        pairw[(min(int(u), int(v)), max(int(u), int(v)))] = int(w)
    wedge: dict[tuple[int, int], float] = {}
    for v in range(g.n):
        dst, wt = g.out_arcs(v)
        for i in range(dst.shape[0]):
            for j in range(i + 1, dst.shape[0]):
                key = (int(dst[i]), int(dst[j]))
                s = int(wt[i]) + int(wt[j])
                if s < wedge.get(key, math.inf):
                    wedge[key] = s
    for key in pairw.keys() | wedge.keys():
        mw = pairw.get(key, math.inf)
        zm = wedge.get(key, math.inf)
        if mw == 1 or mw == zm or (mw > t and zm > t):
            continue
        return False
    return True
