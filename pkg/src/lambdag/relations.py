"""Term tables of the lambda_g constraints.

Every builder returns a list of ``Term``; the evaluator in ``correlators``
extracts coefficients.  Shifted coordinates ``t~_r^a`` only survive at t = 0
for (r, a) = (1, identity) or when (r, a) is a differentiation direction, so
the sums over (r, a) are restricted to those pairs.

Conventions shared by all builders: basis indices are 0-based with index 0
the identity, ``b(a) = p_a - (d - 1)/2`` and ``b_up(a) = 1 - b(a)``, and the
coefficient lists are ``e_{n+1-j}(x, x + 1, ..., x + n)``.
"""
from __future__ import annotations

from fractions import Fraction

from .correlators import PLAIN, SHIFTED, expand
from .errors import UnsupportedGenus
from .exact import elem_sym
from .targets import TargetModel

__all__ = [
    "e_coeff",
    "psi_terms",
    "six_form_terms",
    "theta_terms",
    "theta1_pixton_terms",
]

HALF = Fraction(1, 2)


def e_coeff(k: int, start, n: int) -> Fraction:
    """e_k(start, start + 1, ..., start + n)."""
    return elem_sym(k, [start + i for i in range(n + 1)])


def _basis(a):
    return {a: Fraction(1)}


def _c1(X: TargetModel, j: int, a: int) -> dict:
    row = X.c1_power(j)[a]
    return {g: c for g, c in enumerate(row) if c}


def _dual(X: TargetModel, a: int) -> dict:
    return {d: X.eta_inv(a, d) for d in range(X.rank) if X.eta_inv(a, d)}


def _c1_dual(X: TargetModel, j: int, a: int) -> dict:
    power = X.c1_power(j)
    out: dict = {}
    for d, e in _dual(X, a).items():
        for g, c in enumerate(power[d]):
            if c:
                out[g] = out.get(g, Fraction(0)) + e * c
    return {g: c for g, c in out.items() if c}


def _directions(X: TargetModel, derivs) -> list:
    dirs = {(1, 0)} | {tuple(d) for d in derivs}
    return sorted((r, a) for r, a in dirs if 0 <= a < X.rank)


def _pair_sum(X: TargetModel):
    """The insertions phi_s, phi^s for every s."""
    return [[(0, _basis(s)), (0, _dual(X, s))] for s in range(X.rank)]


def third_sum_coefficient(X: TargetModel, n: int, j: int, s: int, a: int) -> Fraction:
    return (-1) ** (s + 1) * e_coeff(n + 1 - j, -s + X.b_up(a) - 3 * HALF, n)


def theta_terms(X: TargetModel, g: int, n: int, m: int, beta: int, derivs=()) -> list:
    """Theta_{g,n,m,beta} with lambda_g in every genus-g bracket."""
    if n < -1 or m < 0 or not 0 <= beta < X.rank:
        raise ValueError("need n >= -1, m >= 0 and a valid basis index")
    out = []
    for j in range(n + 2):
        for r, a in _directions(X, derivs):
            c = e_coeff(n + 1 - j, r + X.b(a) - HALF, n)
            out += expand(c, [(SHIFTED, r, a)], [(g, g, [(r + n - j, _c1(X, j, a)), (m, _basis(beta))])])
        c = e_coeff(n + 1 - j, m + X.b(beta) + HALF, n)
        out += expand(c, [], [(g, g, [(m + n - j, _c1(X, j, beta))])])
        for a in range(X.rank):
            for s in range(n - j):
                c = third_sum_coefficient(X, n, j, s, a)
                for g1 in range(g + 1):
                    out += expand(c, [], [
                        (g1, g1, [(m, _basis(beta)), (-s - 1 + n - j, _c1_dual(X, j, a))]),
                        (g - g1, g - g1, [(s, _basis(a))]),
                    ])
    if g == 0 and m == 0:
        top = X.c1_power(n + 1)
        for r, a in _directions(X, derivs):
            if r != 0:
                continue
            c = sum((top[a][k] * X.eta(k, beta) for k in range(X.rank)), Fraction(0))
            if c:
                out.append(expand(c, [(PLAIN, 0, a)], [])[0])
    return out


def psi_terms(X: TargetModel, g: int, n: int, derivs=()) -> list:
    """Psi_{g,n}; a genus-g bracket with lam = g - 1 carries lambda_{g-1}.

    Only genus 0 and 1 are supported, where lambda_{g-1} is 0 or 1.
    """
    if g >= 2:
        raise UnsupportedGenus("Psi needs lambda_{g-1} integrals, available only for g <= 1")
    if n < -1:
        raise ValueError("need n >= -1")
    out = []
    for j in range(n + 2):
        for r, a in _directions(X, derivs):
            c = e_coeff(n + 1 - j, r + X.b(a) - HALF, n)
            out += expand(c, [(SHIFTED, r, a)], [(g, g - 1, [(r + n - j, _c1(X, j, a))])])
            if j >= 1:
                out += expand(-j * c, [(SHIFTED, r, a)], [(g, g, [(r + n - j, _c1(X, j - 1, a))])])
        for a in range(X.rank):
            for s in range(n - j):
                c = third_sum_coefficient(X, n, j, s, a)
                for g1 in range(g + 1):
                    out += expand(c, [], [
                        (g1, g1 - 1, [(-s - 1 + n - j, _c1_dual(X, j, a))]),
                        (g - g1, g - g1, [(s, _basis(a))]),
                    ])
                if g >= 1:
                    out += expand(HALF * c, [], [
                        (g - 1, g - 1, [(-s - 1 + n - j, _c1_dual(X, j, a)), (s, _basis(a))]),
                    ])
                if j >= 1:
                    for g1 in range(g + 1):
                        out += expand(-HALF * j * c, [], [
                            (g1, g1, [(s, _basis(a))]),
                            (g - g1, g - g1, [(-s - 1 + n - j, _c1_dual(X, j - 1, a))]),
                        ])
    if g == 0 and n >= 0:
        power = X.c1_power(n)
        dirs = [a for r, a in _directions(X, derivs) if r == 0]
        for a in dirs:
            for b in dirs:
                c = sum((power[a][k] * X.eta(k, b) for k in range(X.rank)), Fraction(0))
                if c:
                    out.append(expand(-Fraction(n + 1, 2) * c, [(PLAIN, 0, a), (PLAIN, 0, b)], [])[0])
    if g == 1 and n == 0:
        c = Fraction(1, 48) * X.chern_constant()
        if c:
            out.append(expand(c, [], [])[0])
    return out


def theta1_pixton_terms(X: TargetModel, n: int, m: int, beta: int, derivs=()) -> list:
    """-12 times the genus-1 constraint with P_1^1 in place of lambda_1.

    P_1^1(0) is -1/12 times the pushforward from the loop graph, so each
    genus-1 bracket becomes a genus-0 bracket with an extra pair phi_s, phi^s.
    """
    if n < -1 or m < 0 or not 0 <= beta < X.rank:
        raise ValueError("need n >= -1, m >= 0 and a valid basis index")
    out = []
    for pair in _pair_sum(X):
        for j in range(n + 2):
            for r, a in _directions(X, derivs):
                c = e_coeff(n + 1 - j, r + X.b(a) - HALF, n)
                out += expand(c, [(SHIFTED, r, a)],
                              [(0, 0, [(r + n - j, _c1(X, j, a)), (m, _basis(beta))] + pair)])
            c = e_coeff(n + 1 - j, m + X.b(beta) + HALF, n)
            out += expand(c, [], [(0, 0, [(m + n - j, _c1(X, j, beta))] + pair)])
            for a in range(X.rank):
                for s in range(n - j):
                    c = third_sum_coefficient(X, n, j, s, a)
                    inner = [(m, _basis(beta)), (-s - 1 + n - j, _c1_dual(X, j, a))]
                    out += expand(c, [], [(0, 0, inner), (0, 0, [(s, _basis(a))] + pair)])
                    out += expand(c, [], [(0, 0, inner + pair), (0, 0, [(s, _basis(a))])])
    return out


def six_form_terms(X: TargetModel, n: int, m: int, beta: int, derivs=()) -> list:
    """Six times the genus-1 Pixton constraint, after eliminating genus 0.

    Subtracting the contracted second derivative of the genus-0 constraint
    from the -12 form leaves two sums; the -12 form equals -2 times this.
    """
    out = []
    for j in range(n + 2):
        for sig in range(X.rank):
            c = e_coeff(n + 1 - j, X.b(sig) - HALF, n)
            out += expand(c, [], [(0, 0, [(m, _basis(beta)), (n - j, _c1(X, j, sig)), (0, _dual(X, sig))])])
        for a in range(X.rank):
            for s in range(n - j):
                c = third_sum_coefficient(X, n, j, s, a)
                for sig in range(X.rank):
                    out += expand(c, [], [
                        (0, 0, [(m, _basis(beta)), (-s - 1 + n - j, _c1_dual(X, j, a)), (0, _basis(sig))]),
                        (0, 0, [(0, _dual(X, sig)), (s, _basis(a))]),
                    ])
    return out
