"""Genus-0 descendant Gromov-Witten invariants of the point, P^1 and P^2.

Basis ``phi_a = H^a`` (``a = 0..N``, ``phi_0`` the identity), degrees are
multiples of the line class.  Reduction of a correlator of degree D > 0:

* an identity primary is removed by the string equation;
* tau_1(1) is removed by the dilaton equation;
* with three or more points and some descendant, the genus-0 TRR lowers the
  highest level;
* with fewer than three points and some descendant, a hyperplane point is
  added by running the divisor equation backwards;
* all-primary correlators use the divisor equation and the seeds
  <>_{0,1} = 1 on P^1 and Kontsevich's numbers N_D on P^2.

Degree-0 correlators are psi integrals on M-bar_{0,n} times a triple product
on X; with fewer than three points they are 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from .errors import UnsupportedTarget
from .psi import psi_integral
from .table import TABLE, IntegralTable

__all__ = [
    "NovikovSeries",
    "TargetModel",
    "descendant",
    "double_bracket0",
    "get_target",
    "kontsevich_number",
    "primary_invariant",
    "T_apply",
]


def _mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@dataclass(frozen=True)
class TargetModel:
    """Cohomology data of a projective space P^N (N = 0 is the point)."""

    name: str
    dim: int
    holo: tuple = field(repr=False)

    @property
    def rank(self) -> int:
        return self.dim + 1

    @property
    def c1_degree(self) -> int:
        """<c_1, line class>."""
        return self.dim + 1

    def p(self, a: int) -> int:
        return self.holo[a]

    def b(self, a: int) -> Fraction:
        return self.p(a) - Fraction(self.dim - 1, 2)

    def b_up(self, a: int) -> Fraction:
        return 1 - self.b(a)

    def eta(self, a: int, b: int) -> Fraction:
        return Fraction(1 if a + b == self.dim else 0)

    def eta_inv(self, a: int, b: int) -> Fraction:
        return self.eta(a, b)

    def cup(self, a: int, b: int):
        """Index of phi_a cup phi_b, or None when it vanishes."""
        return a + b if a + b <= self.dim else None

    def c1_matrix(self):
        """C[a][b]: c_1 cup phi_a = sum_b C[a][b] phi_b."""
        N = self.rank
        return [[Fraction(self.dim + 1) if b == a + 1 else Fraction(0) for b in range(N)] for a in range(N)]

    def c1_power(self, j: int):
        N = self.rank
        out = [[Fraction(int(a == b)) for b in range(N)] for a in range(N)]
        C = self.c1_matrix()
        for _ in range(j):
            out = _mat_mul(out, C)
        return out

    def integral(self, indices) -> Fraction:
        """Integral over X of the product of the basis classes."""
        return Fraction(1 if sum(indices) == self.dim else 0)

    def virtual_dim(self, n: int, degree: int) -> int:
        return self.dim - 3 + n + self.c1_degree * degree

    def chern_constant(self) -> Fraction:
        """Integral over X of (-d) c_d - 2 c_1 c_{d-1}."""
        d = self.dim
        if d == 0:
            return Fraction(0)
        c = [comb(d + 1, k) for k in range(d + 1)]
        return Fraction(-d * c[d] - 2 * c[1] * c[d - 1])


POINT = TargetModel("point", 0, (0,))
P1 = TargetModel("P1", 1, (0, 1))
P2 = TargetModel("P2", 2, (0, 1, 2))
TARGETS = {"point": POINT, "P1": P1, "P2": P2}


def get_target(name) -> TargetModel:
    if isinstance(name, TargetModel):
        if name.name not in TARGETS:
            raise UnsupportedTarget(name.name)
        return name
    key = {"p1": "P1", "p2": "P2", "pt": "point"}.get(str(name).lower(), str(name))
    if key not in TARGETS:
        raise UnsupportedTarget(f"no built-in target {name!r}")
    return TARGETS[key]


@dataclass(frozen=True)
class NovikovSeries:
    """Truncated power series in q; coefficients[k] multiplies q^k, k <= D."""

    truncation: int
    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients][: self.truncation + 1]
        coeffs += [Fraction(0)] * (self.truncation + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def __getitem__(self, k):
        return self.coefficients[k] if 0 <= k <= self.truncation else Fraction(0)

    def __add__(self, other):
        D = min(self.truncation, other.truncation)
        return NovikovSeries(D, tuple(self[k] + other[k] for k in range(D + 1)))

    def __neg__(self):
        return NovikovSeries(self.truncation, tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, NovikovSeries):
            return NovikovSeries(self.truncation, tuple(c * other for c in self.coefficients))
        D = min(self.truncation, other.truncation)
        return NovikovSeries(D, tuple(sum(self[i] * other[k - i] for i in range(k + 1)) for k in range(D + 1)))

    def is_zero(self) -> bool:
        return not any(self.coefficients)


@lru_cache(maxsize=None)
def kontsevich_number(D: int) -> int:
    """Number of rational plane curves of degree D through 3D - 1 points."""
    if D < 1:
        raise ValueError("degree must be positive")
    if D == 1:
        return 1
    total = 0
    for d1 in range(1, D):
        d2 = D - d1
        total += kontsevich_number(d1) * kontsevich_number(d2) * d1 * d1 * d2 * (
            d2 * comb(3 * D - 4, 3 * d1 - 2) - d1 * comb(3 * D - 4, 3 * d1 - 1)
        )
    return total


def _canon(insertions) -> tuple:
    return tuple(sorted(((int(k), int(a)) for k, a in insertions), reverse=True))


def _selection_ok(X: TargetModel, degree: int, ins) -> bool:
    return sum(k + X.p(a) for k, a in ins) == X.virtual_dim(len(ins), degree)


def primary_invariant(target, degree: int, insertions) -> Fraction:
    """Genus-0 primary invariant <phi_a1 ... phi_an>_{0,degree}."""
    return descendant(target, degree, [(0, a) for a in insertions])


def descendant(target, degree: int, insertions, table: IntegralTable | None = None) -> Fraction:
    """Genus-0 invariant <tau_k1(phi_a1) ... tau_kn(phi_an)>_{0,degree}."""
    X = get_target(target)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    ins = _canon(insertions)
    if any(not 0 <= a < X.rank for _, a in ins):
        raise ValueError(f"basis index out of range for {X.name}")
    return _desc(X, degree, ins, TABLE if table is None else table)


def _desc(X, D, ins, table) -> Fraction:
    if any(k < 0 for k, _ in ins):
        return Fraction(0)
    if not _selection_ok(X, D, ins):
        return Fraction(0)
    n = len(ins)
    if D == 0:
        if n < 3:
            return Fraction(0)
        return X.integral([a for _, a in ins]) * psi_integral(0, [k for k, _ in ins], table)
    if X.dim == 0:
        return Fraction(0)

    key = ("GW0", X.name, D, ins)
    hit = table.get(key)
    if hit is not None:
        return hit
    return table.put(key, _reduce(X, D, ins, table))


def _sub(X, D, items, table):
    return _desc(X, D, _canon(items), table)


def _reduce(X, D, ins, table) -> Fraction:
    n = len(ins)
    rest_of = lambda i: ins[:i] + ins[i + 1:]

    if (0, 0) in ins:
        i = ins.index((0, 0))
        rest = rest_of(i)
        return sum((_sub(X, D, rest[:j] + ((k - 1, a),) + rest[j + 1:], table)
                    for j, (k, a) in enumerate(rest) if k > 0), Fraction(0))
    if (1, 0) in ins:
        rest = rest_of(ins.index((1, 0)))
        return (len(rest) - 2) * _sub(X, D, rest, table)

    top = max((k for k, _ in ins), default=0)
    if top == 0:
        return _primary(X, D, ins, table)

    if n >= 3:
        i = next(i for i, (k, _) in enumerate(ins) if k == top)
        k, a = ins[i]
        others = rest_of(i)
        (l1, b1), (l2, b2), rest = others[0], others[1], others[2:]
        total = Fraction(0)
        idx = range(len(rest))
        for size in range(len(rest) + 1):
            for chosen in combinations(idx, size):
                left = [rest[t] for t in chosen]
                right = [rest[t] for t in idx if t not in chosen]
                for D1 in range(D + 1):
                    D2 = D - D1
                    for sigma in range(X.rank):
                        for dual in range(X.rank):
                            e = X.eta_inv(sigma, dual)
                            if not e:
                                continue
                            lhs = _sub(X, D1, [(k - 1, a), (0, sigma)] + left, table)
                            if not lhs:
                                continue
                            total += e * lhs * _sub(X, D2, [(0, dual), (l1, b1), (l2, b2)] + right, table)
        return total

    # raise the point count: D <ins> = <tau_0(H) ins> - sum_j <.. tau_{k_j-1}(phi_{a_j} H) ..>
    total = _sub(X, D, ins + ((0, 1),), table)
    for j, (k, a) in enumerate(ins):
        c = X.cup(a, 1)
        if k > 0 and c is not None:
            total -= _sub(X, D, ins[:j] + ((k - 1, c),) + ins[j + 1:], table)
    return total / D


def _primary(X, D, ins, table) -> Fraction:
    if (0, 1) in ins:
        i = ins.index((0, 1))
        return D * _sub(X, D, ins[:i] + ins[i + 1:], table)
    if X.name == "P1":
        return Fraction(1 if D == 1 and not ins else 0)
    if X.name == "P2":
        if all(a == 2 for _, a in ins) and len(ins) == 3 * D - 1:
            return Fraction(kontsevich_number(D))
        return Fraction(0)
    raise UnsupportedTarget(X.name)


def double_bracket0(target, args, derivs=(), degree: int = 0) -> Fraction:
    """q^degree coefficient of <<args>>_0 differentiated along derivs, at t = 0."""
    return descendant(target, degree, list(args) + list(derivs))


def T_apply(target, W: dict, degree: int) -> dict:
    """T(W) = tau_+(W) - sum_a <<W phi^a>>_0 phi_a at t = 0, through q^degree.

    ``W`` maps (level, basis index) to a coefficient; the result maps
    (level, basis index) to a NovikovSeries.
    """
    X = get_target(target)
    out: dict = {}

    def add(key, series):
        out[key] = out[key] + series if key in out else series

    for (k, a), c in W.items():
        add((k + 1, a), NovikovSeries(degree, (Fraction(c),)))
        for alpha in range(X.rank):
            coeffs = []
            for D in range(degree + 1):
                v = Fraction(0)
                for dual in range(X.rank):
                    e = X.eta_inv(alpha, dual)
                    if e:
                        v += e * descendant(X, D, [(k, a), (0, dual)])
                coeffs.append(-c * v)
            add((0, alpha), NovikovSeries(degree, tuple(coeffs)))
    return {k: v for k, v in out.items() if not v.is_zero()}
