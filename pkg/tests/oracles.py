"""Independent brute-force implementations used as test oracles."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product


def brute_graph_classes(g, n):
    """Isomorphism classes of stable graphs by exhaustive search.

    Every class is represented by its sorted encoding minimised over all
    vertex permutations; no refinement, no degeneration moves.
    """
    found = set()
    for nv in range(1, 2 * g - 2 + n + 1):
        for ne in range(nv - 1, nv - 1 + g + 1):
            h1 = ne - nv + 1
            slots = [(a, b) for a in range(nv) for b in range(a, nv)]
            for edges in combinations_with_replacement(slots, ne):
                for genera in product(range(g - h1 + 1), repeat=nv):
                    if sum(genera) != g - h1:
                        continue
                    for legs in product(range(nv), repeat=n):
                        if _stable_connected(genera, legs, edges):
                            found.add(_min_encoding(genera, legs, edges))
    return found


def _stable_connected(genera, legs, edges):
    nv = len(genera)
    val = [0] * nv
    for v in legs:
        val[v] += 1
    for a, b in edges:
        val[a] += 1
        val[b] += 1
    if any(2 * genera[v] - 2 + val[v] <= 0 for v in range(nv)):
        return False
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for a, b in edges:
            for u, w in ((a, b), (b, a)):
                if u == x and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return len(seen) == nv


def _min_encoding(genera, legs, edges):
    best = None
    for pos in permutations(range(len(genera))):
        gen = [0] * len(genera)
        for v, p in enumerate(pos):
            gen[p] = genera[v]
        enc = (tuple(gen), tuple(pos[v] for v in legs),
               tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in edges)))
        if best is None or enc < best:
            best = enc
    return best


def brute_aut_order(G):
    """Count permutations of vertices and half-edges preserving the graph data."""
    nh = G.num_half_edges
    n = G.n
    partner = {}
    for e in range(len(G.edges)):
        a, b = G.edge_half_edges(e)
        partner[a], partner[b] = b, a
    inner = list(range(n, nh))
    count = 0
    for vperm in permutations(range(G.num_vertices)):
        if any(G.genera[vperm[v]] != G.genera[v] for v in range(G.num_vertices)):
            continue
        if any(vperm[G.legs[i]] != G.legs[i] for i in range(n)):
            continue
        for hperm in permutations(inner):
            sigma = dict(zip(inner, hperm))
            if any(G.vertex_of(sigma[h]) != vperm[G.vertex_of(h)] for h in inner):
                continue
            if any(sigma[partner[h]] != partner[sigma[h]] for h in inner):
                continue
            count += 1
    return count


# --- closed forms --------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_bg(g):
    """b_g from sum b_g t^2g = (t/2)/sin(t/2)."""
    import sympy
    t = sympy.Symbol("t")
    series = sympy.series((t / 2) / sympy.sin(t / 2), t, 0, 2 * g + 2).removeO()
    c = sympy.Rational(series.coeff(t, 2 * g))
    return Fraction(int(c.p), int(c.q))


def lambda_closed_form(g, exps):
    """int_{M_{g,n}} lambda_g prod psi^a = multinomial * b_g, or 0 off-dimension."""
    from math import factorial
    n = len(exps)
    if sum(exps) != 2 * g - 3 + n:
        return Fraction(0)
    m = factorial(2 * g - 3 + n)
    for a in exps:
        m //= factorial(a)
    return m * bernoulli_bg(g)


def dr_two_point(g, a):
    """int DR_g(a, -a) psi_1^(2g-1) = [z^2g] S(az)/S(z), S(z) = sinh(z/2)/(z/2)."""
    import sympy
    z = sympy.Symbol("z")
    S = lambda x: sympy.sinh(x / 2) / (x / 2)
    c = sympy.Rational(sympy.series(S(a * z) / S(z), z, 0, 2 * g + 2).removeO().coeff(z, 2 * g))
    return Fraction(int(c.p), int(c.q))


# --- Givental trees by exhaustive enumeration ----------------------------------

def _series_data(data, Z):
    """Leg, edge and T coefficients recomputed with sympy."""
    import sympy
    N = data.rank
    z, w = sympy.symbols("z w")
    R = sympy.zeros(N, N)
    for k, M in enumerate(data.R[: Z + 1]):
        R += sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M]) * z ** k
    X = sympy.eye(N) - R
    inv = sympy.eye(N)
    term = sympy.eye(N)
    for _ in range(Z):
        term = (term * X).applyfunc(lambda e: sympy.expand(e))
        inv += term
    trunc = lambda e, var: sum(sympy.expand(e).coeff(var, k) * var ** k for k in range(Z + 1))
    inv = inv.applyfunc(lambda e: trunc(e, z))
    D = sympy.diag(*[sympy.Rational(d.numerator, d.denominator) for d in data.delta])
    inv_w = inv.subs(z, w)
    num = (D - inv * D * inv_w.T).applyfunc(sympy.expand)
    edge = {}
    for i in range(N):
        for j in range(N):
            poly = sympy.Poly(num[i, j], z, w)
            low = sympy.Poly(sum(c * z ** p * w ** q for (p, q), c in poly.terms() if p + q <= Z), z, w) \
                if poly.terms() else sympy.Poly(0, z, w)
            quo, rem = sympy.div(low, sympy.Poly(z + w, z, w))
            assert rem.is_zero
            for (p, q), c in quo.terms():
                edge[(p, q, i, j)] = Fraction(int(c.p), int(c.q))
    Tvec = (z * (sympy.eye(N) - inv) * sympy.ones(N, 1)).applyfunc(sympy.expand)
    T = {(b, i): Fraction(int(sympy.Rational(Tvec[i].coeff(z, b)).p), int(sympy.Rational(Tvec[i].coeff(z, b)).q))
         for b in range(Z + 2) for i in range(N)}
    R_inv = {(k, i, j): Fraction(int(sympy.Rational(inv[i, j].coeff(z, k)).p),
                                 int(sympy.Rational(inv[i, j].coeff(z, k)).q))
             for k in range(Z + 1) for i in range(N) for j in range(N)}
    return R_inv, edge, T


def brute_tree_sum(data, g, legs, Z, height_box, k_box, b_box):
    """Tree sum without dimension pruning: every height, k and b in the boxes."""
    from math import factorial
    from lambdag.graphs import StableGraph
    N = data.rank
    R_inv, edge, T = _series_data(data, Z)
    n = len(legs)
    total = Fraction(0)
    for genera, leg_v, edges in brute_graph_classes(g, n):
        if len(edges) != len(genera) - 1:
            continue
        G = StableGraph(genera, leg_v, edges)
        aut = brute_aut_order(G)
        nh = G.num_half_edges
        owner = [G.vertex_of(h) for h in range(nh)]
        acc = Fraction(0)
        for marks in product(range(N), repeat=len(genera)):
            for heights in product(range(height_box + 1), repeat=nh):
                c = Fraction(1)
                for l in range(n):
                    i = marks[owner[l]]
                    c *= sum((R_inv.get((heights[l] - s, i, j), 0) * vec[j]
                              for s, vec in legs[l].items() for j in range(N) if heights[l] - s >= 0),
                             Fraction(0))
                for e in range(len(edges)):
                    h0, h1 = n + 2 * e, n + 2 * e + 1
                    c *= edge.get((heights[h0], heights[h1], marks[owner[h0]], marks[owner[h1]]), 0)
                if not c:
                    continue
                for v in range(len(genera)):
                    hs = [heights[h] for h in range(nh) if owner[h] == v]
                    i = marks[v]
                    vf = Fraction(0)
                    for k in range(k_box + 1):
                        for bs in product(range(2, b_box + 1), repeat=k):
                            t = Fraction(1, factorial(k))
                            for b in bs:
                                t *= T[(b, i)]
                            vf += t * lambda_closed_form(genera[v], hs + list(bs))
                    c *= data.delta[i] ** (genera[v] - 1) * vf
                acc += c
        total += acc / aut
    return total
