"""Stable graphs: enumeration up to isomorphism, automorphisms, pairings.

A graph stores vertex genera, the vertex of every leg, and a list of edges as
vertex pairs.  Half-edges are numbered with legs first (leg i is half-edge i,
0-based), then edge e contributes half-edges ``n + 2e`` (at ``edges[e][0]``)
and ``n + 2e + 1`` (at ``edges[e][1]``).  Markings are 1-based in text dumps.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Mapping, Sequence

from .errors import UnstableInput
from .psi import psi_integral

__all__ = [
    "StableGraph",
    "aut_order",
    "enumerate_graphs",
    "enumerate_trees",
    "graph_key",
    "pair_decorated",
    "smooth_graph",
]


@dataclass(frozen=True)
class StableGraph:
    genera: tuple
    legs: tuple
    edges: tuple

    @property
    def n(self) -> int:
        return len(self.legs)

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_half_edges(self) -> int:
        return self.n + 2 * len(self.edges)

    @property
    def h1(self) -> int:
        return len(self.edges) - len(self.genera) + 1

    @property
    def genus(self) -> int:
        return self.h1 + sum(self.genera)

    @property
    def is_tree(self) -> bool:
        return self.h1 == 0

    def vertex_of(self, h: int) -> int:
        if h < self.n:
            return self.legs[h]
        e, side = divmod(h - self.n, 2)
        return self.edges[e][side]

    def edge_half_edges(self, e: int) -> tuple:
        return (self.n + 2 * e, self.n + 2 * e + 1)

    def half_edges_at(self, v: int) -> list:
        return [h for h in range(self.num_half_edges) if self.vertex_of(h) == v]

    def valence(self, v: int) -> int:
        return len(self.half_edges_at(v))

    def check(self):
        """Raise ValueError unless stable, connected and well formed."""
        nv = self.num_vertices
        if nv == 0:
            raise ValueError("graph has no vertices")
        if any(not 0 <= v < nv for v in self.legs):
            raise ValueError("leg attached to a missing vertex")
        if any(not (0 <= a < nv and 0 <= b < nv) for a, b in self.edges):
            raise ValueError("edge attached to a missing vertex")
        for v in range(nv):
            if 2 * self.genera[v] - 2 + self.valence(v) <= 0:
                raise ValueError(f"vertex {v} is unstable")
        seen, stack = {0}, [0]
        adj = [[] for _ in range(nv)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != nv:
            raise ValueError("graph is disconnected")

    def dump(self) -> str:
        """Text form ``V:(g0,...) E:((u,v),...) L:(1→v,...)``.

        Each edge is written as the pair of vertices carrying its two
        half-edges.
        """
        verts = ",".join(str(g) for g in self.genera)
        edges = ",".join(f"({a},{b})" for a, b in self.edges)
        legs = ",".join(f"{i + 1}→{v}" for i, v in enumerate(self.legs))
        return f"V:({verts}) E:({edges}) L:({legs})"

    def __str__(self):
        return self.dump()


def smooth_graph(g: int, n: int) -> StableGraph:
    return StableGraph((g,), (0,) * n, ())


def _vertex_invariants(G: StableGraph) -> list:
    nv = G.num_vertices
    legs_at = [[] for _ in range(nv)]
    for i, v in enumerate(G.legs):
        legs_at[v].append(i)
    loops = Counter(a for a, b in G.edges if a == b)
    inv = [(G.genera[v], tuple(legs_at[v]), loops[v], G.valence(v)) for v in range(nv)]

    colors = _color(inv)
    while True:
        nbrs = [[] for _ in range(nv)]
        for a, b in G.edges:
            if a != b:
                nbrs[a].append(colors[b])
                nbrs[b].append(colors[a])
        refined = _color([(colors[v], tuple(sorted(nbrs[v]))) for v in range(nv)])
        if len(set(refined)) == len(set(colors)):
            return refined
        colors = refined


def _color(invariants) -> list:
    ranks = {x: i for i, x in enumerate(sorted(set(invariants)))}
    return [ranks[x] for x in invariants]


def _encode(G: StableGraph, pos) -> tuple:
    genera = [0] * G.num_vertices
    for v, p in enumerate(pos):
        genera[p] = G.genera[v]
    legs = tuple(pos[v] for v in G.legs)
    edges = tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in G.edges))
    return (tuple(genera), legs, edges)


def _canonical(G: StableGraph):
    """Minimal encoding over refinement-compatible relabelings, and how many hit it."""
    colors = _vertex_invariants(G)
    classes = [[v for v in range(G.num_vertices) if colors[v] == c] for c in sorted(set(colors))]
    slots = []
    start = 0
    for cls in classes:
        slots.append(list(range(start, start + len(cls))))
        start += len(cls)

    best, hits = None, 0
    for choice in product(*(permutations(s) for s in slots)):
        pos = [0] * G.num_vertices
        for cls, targets in zip(classes, choice):
            for v, p in zip(cls, targets):
                pos[v] = p
        enc = _encode(G, pos)
        if best is None or enc < best:
            best, hits = enc, 1
        elif enc == best:
            hits += 1
    return best, hits


def graph_key(G: StableGraph) -> str:
    """Label equal for two graphs iff they are isomorphic with markings fixed."""
    return repr(_canonical(G)[0])


def canonical_graph(G: StableGraph) -> StableGraph:
    genera, legs, edges = _canonical(G)[0]
    return StableGraph(genera, legs, edges)


def aut_order(G: StableGraph) -> int:
    """Order of the automorphism group acting on vertices and half-edges."""
    _, vertex_autos = _canonical(G)
    mult = Counter(tuple(sorted(e)) for e in G.edges)
    out = vertex_autos
    for (a, b), m in mult.items():
        # parallel edges permute freely; each loop may also flip its two halves
        out *= factorial(m)
        if a == b:
            out *= 2 ** m
    return out


def _degenerations(G: StableGraph):
    n = G.n
    nv = G.num_vertices
    for v in range(nv):
        gv = G.genera[v]
        if gv >= 1:
            genera = G.genera[:v] + (gv - 1,) + G.genera[v + 1:]
            yield StableGraph(genera, G.legs, G.edges + ((v, v),))
        halves = G.half_edges_at(v)
        k = len(halves)
        for mask in range(1 << k):
            moved = {halves[i] for i in range(k) if mask >> i & 1}
            stay = k - len(moved)
            for g1 in range(gv + 1):
                g2 = gv - g1
                if 2 * g1 - 1 + stay <= 0 or 2 * g2 - 1 + len(moved) <= 0:
                    continue
                genera = G.genera[:v] + (g1,) + G.genera[v + 1:] + (g2,)
                legs = tuple(nv if i in moved else G.legs[i] for i in range(n))
                edges = []
                for e, (a, b) in enumerate(G.edges):
                    ha, hb = n + 2 * e, n + 2 * e + 1
                    edges.append((nv if ha in moved else a, nv if hb in moved else b))
                edges.append((v, nv))
                yield StableGraph(genera, legs, tuple(edges))


@lru_cache(maxsize=None)
def _enumerate(g: int, n: int, max_edges: int) -> tuple:
    layer = {graph_key(smooth_graph(g, n)): canonical_graph(smooth_graph(g, n))}
    out = []
    for _ in range(max_edges + 1):
        out.extend(layer[k] for k in sorted(layer, key=lambda k: _canonical(layer[k])[0]))
        nxt = {}
        for G in layer.values():
            for H in _degenerations(G):
                key = graph_key(H)
                if key not in nxt:
                    nxt[key] = canonical_graph(H)
        if not nxt:
            break
        layer = nxt
    return tuple(out)


def enumerate_graphs(g: int, n: int, max_edges: int | None = None) -> tuple:
    """One representative of every stable graph of genus g with n legs.

    Sorted by edge count, then by canonical encoding.  ``max_edges`` cuts off
    the degeneration early.
    """
    if g < 0 or n < 0:
        raise ValueError("g and n must be non-negative")
    if 2 * g - 2 + n <= 0:
        raise UnstableInput(f"(g, n) = ({g}, {n}) is unstable")
    top = 3 * g - 3 + n
    if max_edges is None or max_edges > top:
        max_edges = top
    return _enumerate(g, n, max_edges)


def enumerate_trees(g: int, n: int) -> tuple:
    return tuple(G for G in enumerate_graphs(g, n) if G.is_tree)


def pair_decorated(G: StableGraph, decorations: Mapping[int, int], ambient: Sequence[int]) -> Fraction:
    """Integral of psi_1^k_1...psi_n^k_n against the pushforward of prod psi_h^e_h.

    No automorphism factor is applied.
    """
    if len(ambient) != G.n:
        raise ValueError("ambient exponents must match the number of legs")
    per_vertex = [[] for _ in range(G.num_vertices)]
    for h in range(G.num_half_edges):
        e = decorations.get(h, 0)
        if h < G.n:
            e += ambient[h]
        per_vertex[G.vertex_of(h)].append(e)
    out = Fraction(1)
    for v, exps in enumerate(per_vertex):
        gv = G.genera[v]
        if sum(exps) != 3 * gv - 3 + len(exps):
            return Fraction(0)
        out *= psi_integral(gv, exps)
        if not out:
            return out
    return out


def count_weighted(graphs) -> Fraction:
    return sum((Fraction(1, aut_order(G)) for G in graphs), Fraction(0))

