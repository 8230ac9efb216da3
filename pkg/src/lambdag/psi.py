"""Pure psi-class intersection numbers on the moduli space of stable curves.

Values come from the Dijkgraaf-Verlinde-Verlinde form of the Virasoro
constraints for the point,

    (2k+1)!! <tau_k tau_D>_g = sum_j (2k+2d_j-1)!!/(2d_j-1)!! <tau_{D, d_j -> d_j+k-1}>_g
        + 1/2 sum_{a+b=k-2} (2a+1)!!(2b+1)!! [<tau_a tau_b tau_D>_{g-1}
                                              + sum <tau_a tau_I>_{g1} <tau_b tau_J>_{g2}],

seeded by <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24.  Unstable correlators inside
the recursion are zero.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import UnstableInput
from .table import TABLE, IntegralTable

__all__ = ["canonical", "check_table", "dim_matches", "psi_integral"]


def _dfact(n: int) -> int:
    """Odd double factorial with (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def canonical(exponents) -> tuple:
    exps = tuple(int(a) for a in exponents)
    if any(a < 0 for a in exps):
        raise ValueError("exponents must be non-negative")
    return tuple(sorted(exps, reverse=True))


def dim_matches(g: int, exps) -> bool:
    return sum(exps) == 3 * g - 3 + len(exps)


def psi_integral(g: int, exponents, table: IntegralTable | None = None) -> Fraction:
    """Integral of psi_1^{a_1} ... psi_n^{a_n} over M-bar_{g,n}."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    exps = canonical(exponents)
    if 2 * g - 2 + len(exps) <= 0:
        raise UnstableInput(f"(g, n) = ({g}, {len(exps)}) is unstable")
    if not dim_matches(g, exps):
        return Fraction(0)
    return _psi(g, exps, TABLE if table is None else table)


def _psi_or_zero(g, exps, table):
    if g < 0 or 2 * g - 2 + len(exps) <= 0:
        return Fraction(0)
    exps = tuple(sorted(exps, reverse=True))
    if not dim_matches(g, exps):
        return Fraction(0)
    return _psi(g, exps, table)


def _psi(g, exps, table):
    key = ("PSI", g, exps)
    hit = table.get(key)
    if hit is not None:
        return hit
    if g == 0 and exps == (0, 0, 0):
        return table.put(key, 1)
    if g == 1 and exps == (1,):
        return table.put(key, Fraction(1, 24))

    k, rest = exps[0], exps[1:]
    total = Fraction(0)
    for j, dj in enumerate(rest):
        shifted = rest[:j] + (dj + k - 1,) + rest[j + 1:]
        total += Fraction(_dfact(2 * k + 2 * dj - 1), _dfact(2 * dj - 1)) * _psi_or_zero(g, shifted, table)

    idx = range(len(rest))
    for a in range(k - 1):
        b = k - 2 - a
        weight = Fraction(_dfact(2 * a + 1) * _dfact(2 * b + 1), 2)
        acc = _psi_or_zero(g - 1, (a, b) + rest, table)
        for size in range(len(rest) + 1):
            for chosen in combinations(idx, size):
                left = tuple(rest[i] for i in chosen)
                right = tuple(rest[i] for i in idx if i not in chosen)
                for g1 in range(g + 1):
                    lhs = _psi_or_zero(g1, (a,) + left, table)
                    if lhs:
                        acc += lhs * _psi_or_zero(g - g1, (b,) + right, table)
        total += weight * acc

    return table.put(key, total / _dfact(2 * k + 1))


def check_table(table: IntegralTable | None = None, max_genus: int = 3, max_points: int = 6) -> list:
    """String, dilaton and dimension violations among the PSI keys of a table.

    Each violation is ``(key, rule)``.  The right-hand sides are recomputed
    through the same table, so a corrupt record shows up as a violation.
    """
    table = TABLE if table is None else table
    bad = []
    for key, value in sorted(table.items()):
        if key[0] != "PSI":
            continue
        _, g, exps = key
        n = len(exps)
        if g > max_genus or n > max_points:
            continue
        if not dim_matches(g, exps) and value:
            bad.append((key, "dimension"))
            continue
        if 0 in exps and n >= 2 and (g, n) != (0, 3):
            i = exps.index(0)
            rest = exps[:i] + exps[i + 1:]
            rhs = sum((_psi_or_zero(g, rest[:j] + (a - 1,) + rest[j + 1:], table)
                       for j, a in enumerate(rest) if a >= 1), Fraction(0))
            if rhs != value:
                bad.append((key, "string"))
        if 1 in exps and 2 * g - 2 + n - 1 > 0:
            i = exps.index(1)
            rest = exps[:i] + exps[i + 1:]
            if (2 * g - 2 + n - 1) * _psi_or_zero(g, rest, table) != value:
                bad.append((key, "dilaton"))
    return bad
