"""Pixton's mod-r double ramification class paired against psi monomials.

For fixed r the class is a sum over stable graphs and weightings mod r;
legs carry exp(a_i^2 psi) and each edge carries

    (1 - exp(-w(h)w(h')(psi_h + psi_h'))) / (psi_h + psi_h')
        = sum_m (-1)^m x^(m+1) (psi_h + psi_h')^m / (m+1)!,   x = w(h) w(h').

The paired value is a polynomial in r for r large; its constant term is the
pairing with P_g^d(A).  Representatives of w lie in [0, r-1].
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import ConsistencyError, InvalidModulus, UnstableInput
from .exact import RPolynomial, constant_term, interpolate
from .graphs import StableGraph, aut_order, enumerate_graphs, pair_decorated
from .psi import psi_integral
from .table import TABLE, IntegralTable

__all__ = [
    "PixtonSettings",
    "dr_pairing",
    "graph_class_polynomial",
    "hodge_integral",
    "pixton_pairing",
    "pixton_polynomial",
    "weightings",
]


@dataclass(frozen=True)
class PixtonSettings:
    """r-sampling policy: degree bound 2d, start r0, 2d+3 samples plus extras."""

    extra_samples: int = 0
    max_escalations: int = 3
    r_start: int | None = None

    def first_r(self, d: int, A) -> int:
        if self.r_start is not None:
            return self.r_start
        return 2 * (d + 1) * (1 + max((abs(a) for a in A), default=0)) + 2

    def sample_count(self, d: int) -> int:
        return 2 * d + 3 + self.extra_samples


DEFAULT = PixtonSettings()


def _spanning_tree(G: StableGraph):
    """BFS order of vertices, parent edge of each non-root vertex, non-tree edges."""
    adj = [[] for _ in range(G.num_vertices)]
    for e, (a, b) in enumerate(G.edges):
        if a != b:
            adj[a].append((e, b))
            adj[b].append((e, a))
    order, parent = [0], {0: None}
    for v in order:
        for e, w in adj[v]:
            if w not in parent:
                parent[w] = e
                order.append(w)
    tree = {e for e in parent.values() if e is not None}
    free = [e for e in range(len(G.edges)) if e not in tree]
    return order, parent, free


def weightings(G: StableGraph, A: Sequence[int], r: int) -> list:
    """All weightings mod r, each a tuple indexed by half-edge.

    Weights on non-tree edges are free; the tree edges are then forced by the
    vertex condition, processed leaves first.  There are r^h1 of them.
    """
    if r < 1:
        raise InvalidModulus(f"modulus must be positive, got {r}")
    if len(A) != G.n:
        raise ValueError("A must have one entry per leg")
    n = G.n
    order, parent, free = _spanning_tree(G)
    out = []
    for choice in _grid(r, len(free)):
        w = [None] * G.num_half_edges
        for i, a in enumerate(A):
            w[i] = a % r
        for e, x in zip(free, choice):
            w[n + 2 * e] = x
            w[n + 2 * e + 1] = (-x) % r
        for v in reversed(order[1:]):
            e = parent[v]
            side0, side1 = n + 2 * e, n + 2 * e + 1
            here, there = (side0, side1) if G.edges[e][0] == v else (side1, side0)
            s = sum(w[h] for h in G.half_edges_at(v) if h != here)
            w[here] = (-s) % r
            w[there] = s % r
        if sum(w[h] for h in G.half_edges_at(order[0])) % r:
            raise ConsistencyError("weighting fails the vertex condition at the root")
        out.append(tuple(w))
    return out


def _grid(r: int, k: int):
    if k == 0:
        yield ()
        return
    for head in range(r):
        for tail in _grid(r, k - 1):
            yield (head,) + tail


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _graph_coefficients(G: StableGraph, d: int, A, ambient) -> dict:
    """Map edge-degree vector m -> weight-independent coefficient for one graph.

    The weight dependence of a term is prod_e x_e^(m_e + 1).
    """
    n, ne = G.n, len(G.edges)
    budget = d - ne
    out: dict = {}
    if budget < 0:
        return out
    vertex_of = [G.vertex_of(h) for h in range(G.num_half_edges)]
    for split in _compositions(budget, n + ne):
        legs, ms = split[:n], split[n:]
        c_legs = Fraction(1)
        for a, e in zip(A, legs):
            c_legs *= Fraction(a * a) ** e / factorial(e)
        if not c_legs:
            continue
        c_edges = Fraction(1)
        for m in ms:
            c_edges *= Fraction((-1) ** m, factorial(m + 1))
        for ps in _compositions_bounded(ms):
            # per-vertex dimension gate before touching the psi table
            deg = [0] * G.num_vertices
            val = [0] * G.num_vertices
            dec = {}
            for i in range(n):
                dec[i] = legs[i]
                deg[vertex_of[i]] += legs[i] + ambient[i]
                val[vertex_of[i]] += 1
            for e, (m, p) in enumerate(zip(ms, ps)):
                h0, h1 = n + 2 * e, n + 2 * e + 1
                dec[h0], dec[h1] = p, m - p
                deg[vertex_of[h0]] += p
                deg[vertex_of[h1]] += m - p
                val[vertex_of[h0]] += 1
                val[vertex_of[h1]] += 1
            if any(deg[v] != 3 * G.genera[v] - 3 + val[v] for v in range(G.num_vertices)):
                continue
            value = pair_decorated(G, dec, ambient)
            if not value:
                continue
            binoms = 1
            for m, p in zip(ms, ps):
                binoms *= comb(m, p)
            out[ms] = out.get(ms, Fraction(0)) + c_legs * c_edges * binoms * value
    return {k: v for k, v in out.items() if v}


def _compositions_bounded(ms):
    if not ms:
        yield ()
        return
    for p in range(ms[0] + 1):
        for rest in _compositions_bounded(ms[1:]):
            yield (p,) + rest


def _edge_products(G: StableGraph, w) -> list:
    n = G.n
    return [w[n + 2 * e] * w[n + 2 * e + 1] for e in range(len(G.edges))]


def _graph_value(G: StableGraph, coeffs: dict, A, r: int) -> Fraction:
    total = Fraction(0)
    sums = dict.fromkeys(coeffs, 0)
    for w in weightings(G, A, r):
        xs = _edge_products(G, w)
        for ms in sums:
            term = 1
            for x, m in zip(xs, ms):
                term *= x ** (m + 1)
            sums[ms] += term
    for ms, c in coeffs.items():
        total += c * sums[ms]
    return total / (aut_order(G) * r ** G.h1)


def _check_data(g, A, ambient):
    if len(A) != len(ambient):
        raise ValueError("A and ambient exponents must have equal length")
    if sum(A) != 0:
        raise ValueError("double ramification data must sum to zero")
    if any(k < 0 for k in ambient):
        raise ValueError("ambient exponents must be non-negative")
    if g < 0 or 2 * g - 2 + len(A) <= 0:
        raise UnstableInput(f"(g, n) = ({g}, {len(A)}) is unstable")


def pixton_polynomial(g: int, d: int, A: Sequence[int], ambient: Sequence[int],
                      settings: PixtonSettings = DEFAULT) -> RPolynomial:
    """The pairing with the mod-r class as a polynomial in r (degree <= 2d)."""
    A, ambient = tuple(A), tuple(ambient)
    _check_data(g, A, ambient)
    graphs = enumerate_graphs(g, len(A), max_edges=d)
    data = [(G, _graph_coefficients(G, d, A, ambient)) for G in graphs]
    data = [(G, c) for G, c in data if c]
    r0 = settings.first_r(d, A)
    for attempt in range(settings.max_escalations + 1):
        samples = []
        for r in range(r0, r0 + settings.sample_count(d)):
            samples.append((r, sum((_graph_value(G, c, A, r) for G, c in data), Fraction(0))))
        try:
            return interpolate(samples, 2 * d)
        except ConsistencyError:
            if attempt == settings.max_escalations:
                raise
            r0 *= 2
    raise AssertionError("unreachable")


def pixton_pairing(g: int, d: int, A: Sequence[int], ambient: Sequence[int],
                   settings: PixtonSettings = DEFAULT) -> Fraction:
    """Integral of prod psi_i^k_i against P_g^d(A) over M-bar_{g,n}."""
    A, ambient = tuple(A), tuple(ambient)
    _check_data(g, A, ambient)
    if sum(ambient) + d != 3 * g - 3 + len(A):
        return Fraction(0)
    if d == 0:
        return psi_integral(g, ambient)
    return constant_term(pixton_polynomial(g, d, A, ambient, settings))


def dr_pairing(g: int, A: Sequence[int], ambient: Sequence[int],
               settings: PixtonSettings = DEFAULT) -> Fraction:
    return pixton_pairing(g, g, A, ambient, settings) / 2 ** g


def hodge_integral(g: int, ambient: Sequence[int], table: IntegralTable | None = None,
                   settings: PixtonSettings = DEFAULT) -> Fraction:
    """Integral of prod psi_i^k_i lambda_g, via lambda_g = (-1)^g 2^-g P_g^g(0)."""
    table = TABLE if table is None else table
    exps = tuple(sorted((int(k) for k in ambient), reverse=True))
    if any(k < 0 for k in exps):
        raise ValueError("exponents must be non-negative")
    if g < 0 or 2 * g - 2 + len(exps) <= 0:
        raise UnstableInput(f"(g, n) = ({g}, {len(exps)}) is unstable")
    if g == 0:
        return psi_integral(0, exps, table)
    if sum(exps) != 2 * g - 3 + len(exps):
        return Fraction(0)
    key = ("HODGE", g, exps)
    hit = table.get(key)
    if hit is not None:
        return hit
    value = Fraction((-1) ** g, 2 ** g) * pixton_pairing(g, g, (0,) * len(exps), exps, settings)
    return table.put(key, value)


def graph_class_polynomial(G: StableGraph, d: int, A: Sequence[int] | None = None) -> dict:
    """Constant term of the graph's summand of P^d (with 1/|Aut|), as a psi polynomial.

    Returns ``{exponents per half-edge: coefficient}``; this is the class that
    is pushed forward from the boundary stratum of G.
    """
    A = tuple(A) if A is not None else (0,) * G.n
    n, ne = G.n, len(G.edges)
    out: dict = {}
    budget = d - ne
    if budget < 0:
        return out
    r0 = DEFAULT.first_r(d, A)
    rs = range(r0, r0 + DEFAULT.sample_count(d))
    moments: dict = {}
    for split in _compositions(budget, n + ne):
        legs, ms = split[:n], split[n:]
        if ms not in moments:
            samples = []
            for r in rs:
                total = 0
                for w in weightings(G, A, r):
                    term = 1
                    for x, m in zip(_edge_products(G, w), ms):
                        term *= x ** (m + 1)
                    total += term
                samples.append((r, Fraction(total, aut_order(G) * r ** G.h1)))
            moments[ms] = constant_term(interpolate(samples, 2 * d))
        base = moments[ms]
        for a, e in zip(A, legs):
            base *= Fraction(a * a) ** e / factorial(e)
        for m in ms:
            base *= Fraction((-1) ** m, factorial(m + 1))
        if not base:
            continue
        for ps in _compositions_bounded(ms):
            mono = list(legs)
            coef = base
            for m, p in zip(ms, ps):
                mono += [p, m - p]
                coef *= comb(m, p)
            key = tuple(mono)
            out[key] = out.get(key, Fraction(0)) + coef
    return {k: v for k, v in out.items() if v}
