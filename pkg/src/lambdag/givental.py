"""Stable-tree graph sum for lambda_g-weighted semisimple CohFTs.

Vectors live in the idempotent basis e_1..e_N with <e_i, e_j> = delta_ij / Delta_i,
so <v, e^i> is simply the i-th coordinate of v and the bivector eta^{-1} is
sum_i Delta_i e_i (x) e_i.  Without an explicit order R is an exact
polynomial.  With ``order = Z`` it is a series known through z^Z: every
evaluation records the highest order it used and refuses to go past Z.

The contribution of a tree with markings i: V -> {1..N} and heights a: H -> Z>=0:

* leg l:    [z^a] <R(z)^-1 t_l(z), e^i>
* edge:     [z^a w^b] (Delta_i delta_ij - (R^-1(z) D R^-1(w)^T)_ij) / (z + w)
* vertex v: Delta_i^(g-1) sum_k 1/k! sum_{b_j >= 2} prod_j T_{b_j, i}
            * int lambda_g prod psi^a prod psi^b,  T(z) = z (Id - R^-1(z)) 1
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from pathlib import Path

from .errors import ConsistencyError, TruncationError, ValidationError
from .exact import parse_rational
from .graphs import StableGraph, aut_order, enumerate_trees
from .pixton import hodge_integral

__all__ = [
    "SemisimpleData",
    "TreeQuery",
    "TreeResult",
    "Violation",
    "edge_quotient",
    "load_data",
    "random_symplectic",
    "tree_sum",
    "validate",
]


def _zeros(N):
    return [[Fraction(0)] * N for _ in range(N)]


def _eye(N):
    return [[Fraction(int(i == j)) for j in range(N)] for i in range(N)]


def _mul(a, b):
    N = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(N)), Fraction(0)) for j in range(N)] for i in range(N)]


def _add(a, b, s=1):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _scale(a, c):
    return [[c * x for x in row] for row in a]


def _transpose(a):
    return [list(col) for col in zip(*a)]


@dataclass(frozen=True)
class Violation:
    kind: str
    order: int
    detail: str = ""


@dataclass
class SemisimpleData:
    """Rank N, norms Delta_i (<e_i, e_i> = 1/Delta_i) and R_0, R_1, ... in the idempotent basis.

    ``order=None`` means R is exactly the given polynomial; an integer order
    marks it as a truncated series.
    """

    delta: list
    R: list
    order: int | None = None

    def __post_init__(self):
        self.delta = [Fraction(d) for d in self.delta]
        N = len(self.delta)
        self.R = [[[Fraction(x) for x in row] for row in M] for M in self.R]
        if not self.R:
            self.R = [_eye(N)]
        if any(len(M) != N or any(len(row) != N for row in M) for M in self.R):
            raise ValueError("R matrices must be N x N")
        if self.order is not None:
            if self.order < 0:
                raise ValueError("truncation order must be non-negative")
            self.R = self.R[: self.order + 1]
        self._degree = len(self.R) - 1
        self.R += [_zeros(N) for _ in range(self.horizon + 1 - len(self.R))]
        self._rinv = None

    @property
    def exact(self) -> bool:
        return self.order is None

    @property
    def horizon(self) -> int:
        """Last order at which coefficients are computed and checked."""
        if self.order is not None:
            return self.order
        return 2 * self._degree

    @property
    def rank(self) -> int:
        return len(self.delta)

    @property
    def pairing(self):
        return [[1 / d if i == j else Fraction(0) for j, _ in enumerate(self.delta)]
                for i, d in enumerate(self.delta)]

    @property
    def identity(self):
        return [Fraction(1)] * self.rank

    def adjoint(self, M):
        """M* with respect to the pairing: D M^T D^-1."""
        N = self.rank
        return [[self.delta[i] * M[j][i] / self.delta[j] for j in range(N)] for i in range(N)]

    def r_inverse(self) -> list:
        """Series coefficients of R(z)^-1 through order Z (needs R_0 = Id)."""
        if self._rinv is None:
            N = self.rank
            if self.R[0] != _eye(N):
                raise ValidationError("R_0 must be the identity")
            inv = [_eye(N)]
            for k in range(1, self.horizon + 1):
                acc = _zeros(N)
                for j in range(1, k + 1):
                    acc = _add(acc, _mul(self.R[j], inv[k - j]), -1)
                inv.append(acc)
            self._rinv = inv
        return self._rinv

    def r_inverse_at(self, k: int):
        inv = self.r_inverse()
        if k <= self.horizon:
            return inv[k]
        if self.exact:
            # symplectic: R^-1(z) = R*(-z) has the degree of R
            return _zeros(self.rank)
        raise TruncationError(f"needs R through order {k}, data has order {self.order}")

    def t_coefficient(self, b: int) -> list:
        """[z^b] of z (Id - R^-1(z)) 1, as idempotent coordinates."""
        N = self.rank
        if b < 1:
            return [Fraction(0)] * N
        M = self.r_inverse_at(b - 1)
        base = _eye(N) if b == 1 else _zeros(N)
        return [sum((base[i][j] - M[i][j] for j in range(N)), Fraction(0)) for i in range(N)]

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "delta": [str(d) for d in self.delta],
            "order": self.order,  # null: exact polynomial
            "R": [[[str(x) for x in row] for row in M] for M in self.R],
        }


def load_data(path) -> SemisimpleData:
    """Read the JSON layout produced by ``SemisimpleData.to_json``."""
    raw = json.loads(Path(path).read_text())
    if raw.get("rank") is not None and raw["rank"] != len(raw["delta"]):
        raise ValueError("rank disagrees with the number of norms")
    conv = lambda x: parse_rational(x) if isinstance(x, str) else Fraction(x)
    return SemisimpleData(
        [conv(d) for d in raw["delta"]],
        [[[conv(x) for x in row] for row in M] for M in raw.get("R", [])],
        raw.get("order"),
    )


def validate(data: SemisimpleData) -> list:
    """Violations of R_0 = Id, R(z) R*(-z) = Id and T = O(z^2) through the horizon.

    Returns an empty list when the data is usable; the symplectic entry gives
    the first order at which the product differs from Id.
    """
    N, Z = data.rank, data.horizon
    out = []
    if any(d == 0 for d in data.delta):
        out.append(Violation("pairing", 0, "some Delta_i is zero"))
        return out
    if data.R[0] != _eye(N):
        out.append(Violation("normalization", 0, "R_0 is not the identity"))
        return out
    for k in range(Z + 1):
        acc = _zeros(N)
        for j in range(k + 1):
            acc = _add(acc, _scale(_mul(data.R[j], data.adjoint(data.R[k - j])), (-1) ** (k - j)))
        if acc != (_eye(N) if k == 0 else _zeros(N)):
            out.append(Violation("symplectic", k, f"R(z)R*(-z) differs from Id at z^{k}"))
            break
    if any(data.t_coefficient(1)) or any(data.t_coefficient(0)):
        out.append(Violation("dilaton", 1, "T(z) is not O(z^2)"))
    return out


def edge_quotient(data: SemisimpleData) -> dict:
    """(Delta delta_ij - R^-1(z) D R^-1(w)^T) / (z + w) through total degree horizon - 1.

    Returns {(p, q): N x N matrix}; raises ConsistencyError when some
    homogeneous part leaves a remainder.
    """
    N, Z = data.rank, data.horizon
    inv = data.r_inverse()
    D = [[data.delta[i] if i == j else Fraction(0) for j in range(N)] for i in range(N)]
    num = {}
    for p in range(Z + 1):
        for q in range(Z + 1 - p):
            M = _mul(_mul(inv[p], D), _transpose(inv[q]))
            M = _scale(M, -1)
            if p == q == 0:
                M = _add(M, D)
            num[(p, q)] = M
    out = {}
    for d in range(1, Z + 1):
        prev = _zeros(N)
        for p in range(d):
            cur = _add(num[(p, d - p)], prev, -1)
            out[(p, d - 1 - p)] = cur
            prev = cur
        if num[(d, 0)] != prev:
            raise ConsistencyError(f"edge numerator not divisible by z + w in degree {d}")
    if any(any(row) for row in num[(0, 0)]):
        raise ConsistencyError("edge numerator has a constant term")
    return out


def random_symplectic(N: int, order: int, seed=0, delta=None, bound: int = 3) -> SemisimpleData:
    """R = exp(A(z)) with A(z) + A*(-z) = 0, with small random rational entries.

    A_k = D S_k with S_k symmetric for odd k, antisymmetric for even k.
    """
    rng = random.Random(seed)
    delta = [Fraction(d) for d in delta] if delta else [Fraction(rng.randint(1, 4)) for _ in range(N)]
    D = [[delta[i] if i == j else Fraction(0) for j in range(N)] for i in range(N)]
    A = [_zeros(N)]
    for k in range(1, order + 1):
        S = _zeros(N)
        for i in range(N):
            for j in range(i, N):
                x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
                if k % 2:
                    S[i][j] = S[j][i] = x
                elif i != j:
                    S[i][j], S[j][i] = x, -x
        A.append(_mul(D, S))
    # exp of a series without constant term, through z^order
    R = [_eye(N)] + [_zeros(N) for _ in range(order)]
    power = [_eye(N)] + [_zeros(N) for _ in range(order)]
    for j in range(1, order + 1):
        new = [_zeros(N) for _ in range(order + 1)]
        for a in range(order + 1):
            for b in range(1, order + 1 - a):
                new[a + b] = _add(new[a + b], _mul(power[a], A[b]))
        power = new
        for k in range(order + 1):
            R[k] = _add(R[k], _scale(power[k], Fraction(1, factorial(j))))
    return SemisimpleData(delta, R, order)


@dataclass(frozen=True)
class TreeQuery:
    """Genus, and per leg a series {height: idempotent coordinates}."""

    g: int
    legs: tuple = field(default=())

    def __post_init__(self):
        if self.g < 0 or 2 * self.g - 2 + len(self.legs) <= 0:
            raise ValueError(f"(g, n) = ({self.g}, {len(self.legs)}) is unstable")

    @property
    def n(self) -> int:
        return len(self.legs)

    @classmethod
    def unit_legs(cls, data: SemisimpleData, g: int, n: int) -> "TreeQuery":
        return cls(g, tuple({0: data.identity} for _ in range(n)))


@dataclass(frozen=True)
class TreeResult:
    value: Fraction
    required_order: int
    trees: int


def _compositions_min(total, parts, low):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(low, total - low * (parts - 1) + 1):
        for rest in _compositions_min(total - first, parts - 1, low):
            yield (first,) + rest


class _Evaluator:
    def __init__(self, data: SemisimpleData, q: TreeQuery):
        self.data, self.q = data, q
        self.quot = edge_quotient(data)
        self.required = 0
        self._vertex_cache = {}

    def need(self, k):
        if k > self.required:
            self.required = k
        if not self.data.exact and k > self.data.order:
            raise TruncationError(f"needs R through order {k}, data has order {self.data.order}")

    def leg(self, l, i, a):
        total = Fraction(0)
        for h, vec in self.q.legs[l].items():
            p = a - h
            if p < 0 or not any(vec):
                continue
            self.need(p)
            M = self.data.r_inverse_at(p)
            total += sum((M[i][j] * Fraction(vec[j]) for j in range(self.data.rank)), Fraction(0))
        return total

    def edge(self, i, j, a, b):
        self.need(a + b + 1)
        M = self.quot.get((a, b))
        return M[i][j] if M is not None else Fraction(0)

    def vertex(self, g, i, heights):
        key = (g, i, tuple(sorted(heights)))
        if key in self._vertex_cache:
            return self._vertex_cache[key]
        n = len(heights)
        budget = 2 * g - 3 + n - sum(heights)
        total = Fraction(0)
        for k in range(max(budget, 0) + 1):
            extra = budget + k
            for bs in _compositions_min(extra, k, 2):
                c = Fraction(1)
                for b in bs:
                    self.need(b - 1)
                    c *= self.data.t_coefficient(b)[i]
                    if not c:
                        break
                if not c:
                    continue
                total += c * hodge_integral(g, list(heights) + list(bs)) / factorial(k)
        value = self.data.delta[i] ** (g - 1) * total
        self._vertex_cache[key] = value
        return value

    def tree(self, G: StableGraph) -> Fraction:
        N = self.data.rank
        n, ne = G.n, len(G.edges)
        owner = [G.vertex_of(h) for h in range(G.num_half_edges)]
        at = [G.half_edges_at(v) for v in range(G.num_vertices)]
        bound = [2 * G.genera[v] - 3 + len(at[v]) for v in range(G.num_vertices)]
        total = Fraction(0)
        per_vertex = [[c for s in range(bound[v] + 1) for c in _compositions_min(s, len(at[v]), 0)]
                      for v in range(G.num_vertices)]
        for marks in product(range(N), repeat=G.num_vertices):
            for choice in product(*per_vertex):
                a = [0] * G.num_half_edges
                for v, hs in enumerate(at):
                    for h, x in zip(hs, choice[v]):
                        a[h] = x
                c = Fraction(1)
                for v in range(G.num_vertices):
                    c *= self.vertex(G.genera[v], marks[v], choice[v])
                    if not c:
                        break
                if not c:
                    continue
                for l in range(n):
                    c *= self.leg(l, marks[owner[l]], a[l])
                    if not c:
                        break
                if not c:
                    continue
                for e in range(ne):
                    h0, h1 = n + 2 * e, n + 2 * e + 1
                    c *= self.edge(marks[owner[h0]], marks[owner[h1]], a[h0], a[h1])
                    if not c:
                        break
                total += c
        return total / aut_order(G)


def tree_sum(data: SemisimpleData, q: TreeQuery) -> TreeResult:
    """Sum over stable trees of genus g with the query's legs."""
    bad = validate(data)
    if bad:
        raise ValidationError("; ".join(f"{v.kind} at order {v.order}" for v in bad))
    if any(len(vec) != data.rank for leg in q.legs for vec in leg.values()):
        raise ValueError("leg vectors must have one coordinate per idempotent")
    ev = _Evaluator(data, q)
    trees = enumerate_trees(q.g, q.n)
    value = sum((ev.tree(G) for G in trees), Fraction(0))
    return TreeResult(value, ev.required, len(trees))
