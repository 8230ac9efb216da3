"""Symbolic products of correlators and their Taylor coefficients at t = 0.

A constraint is a finite list of ``Term`` objects: a rational coefficient, a
product of linear coordinate factors (``t_r^a`` or the shifted ``t~_r^a =
t_r^a - delta_{r,1} delta_{a,0}``) and a product of double brackets.
Differentiating along ``tau_r(phi_a)`` distributes over the factors by the
product rule; a bracket absorbs a derivative as an extra insertion.  At
t = 0 a shifted coordinate is -1 on (1, identity) and 0 elsewhere, and the
Novikov degree being extracted is split over the brackets in every way.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import UnsupportedGenus, UnsupportedTarget
from .pixton import hodge_integral
from .psi import psi_integral
from .targets import descendant, get_target

__all__ = [
    "Bracket",
    "Evaluation",
    "PointBackend",
    "TargetBackend",
    "Term",
    "backend_for",
    "evaluate",
    "expand",
]

SHIFTED = "t~"
PLAIN = "t"


@dataclass(frozen=True)
class Bracket:
    """<<tau_k1(phi_a1) ... ; lambda_lam>>_genus; lam = 0 means no Hodge class."""

    genus: int
    insertions: tuple
    lam: int = 0

    def with_insertions(self, extra) -> "Bracket":
        return Bracket(self.genus, tuple(sorted(self.insertions + tuple(extra))), self.lam)


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple = ()
    brackets: tuple = ()


@dataclass(frozen=True)
class Evaluation:
    value: Fraction
    nontrivial: int


class PointBackend:
    """Correlators of the point with an optional lambda_g or lambda_0."""

    target = get_target("point")

    def __call__(self, br: Bracket, degree: int) -> Fraction:
        if degree:
            return Fraction(0)
        g, levels = br.genus, [k for k, _ in br.insertions]
        if br.lam < 0 or 2 * g - 2 + len(levels) <= 0:
            return Fraction(0)
        if br.lam == 0:
            return psi_integral(g, levels)
        if br.lam == g:
            return hodge_integral(g, levels)
        raise UnsupportedGenus(f"lambda_{br.lam} in genus {g} is not available")


class TargetBackend:
    """Genus-0 correlators of a built-in target."""

    def __init__(self, target):
        self.target = get_target(target)

    def __call__(self, br: Bracket, degree: int) -> Fraction:
        if br.lam < 0:
            return Fraction(0)
        if br.genus != 0:
            if self.target.dim == 0:
                return PointBackend()(br, degree)
            raise UnsupportedTarget(f"genus-{br.genus} invariants of {self.target.name} are not available")
        return descendant(self.target, degree, br.insertions)


def backend_for(target):
    X = get_target(target)
    return PointBackend() if X.dim == 0 else TargetBackend(X)


def expand(coeff, factors, brackets) -> list:
    """Multilinear expansion of brackets whose insertions are vectors.

    ``brackets`` is a list of ``(genus, lam, [(level, {basis: coeff}), ...])``.
    Negative levels are the zero vector field.
    """
    coeff = Fraction(coeff)
    if not coeff:
        return []
    if any(level < 0 for _, _, args in brackets for level, _ in args):
        return []
    slots = list(brackets)
    flat = [[(level, a, c) for a, c in vec.items() if c] for _, _, args in slots for level, vec in args]
    out = []
    for pick in product(*flat):
        c = coeff
        brs = []
        pos = 0
        for genus, lam, args in slots:
            ins = []
            for _ in args:
                level, a, ca = pick[pos]
                pos += 1
                c *= ca
                ins.append((level, a))
            brs.append(Bracket(genus, tuple(sorted(ins)), lam))
        out.append(Term(c, tuple(factors), tuple(brs)))
    return out


def _factor_value(factor, received) -> Fraction:
    kind, r, a = factor
    if not received:
        return Fraction(-1) if kind == SHIFTED and (r, a) == (1, 0) else Fraction(0)
    if len(received) == 1:
        return Fraction(1) if received[0] == (r, a) else Fraction(0)
    return Fraction(0)


def _degree_splits(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _degree_splits(total - first, parts - 1):
            yield (first,) + rest


def evaluate(terms: Sequence[Term], derivs: Sequence = (), degree: int = 0, backend=None) -> Evaluation:
    """q^degree coefficient of (prod of derivs) applied to the sum of terms, at t = 0."""
    backend = PointBackend() if backend is None else backend
    derivs = [tuple(d) for d in derivs]
    total = Fraction(0)
    nontrivial = 0
    for term in terms:
        nf, nb = len(term.factors), len(term.brackets)
        for assign in product(range(nf + nb), repeat=len(derivs)):
            got = [[] for _ in range(nf + nb)]
            for d, slot in zip(derivs, assign):
                got[slot].append(d)
            c = term.coeff
            for i, f in enumerate(term.factors):
                c *= _factor_value(f, got[i])
                if not c:
                    break
            if not c:
                continue
            brs = [br.with_insertions(got[nf + i]) for i, br in enumerate(term.brackets)]
            for split in _degree_splits(degree, nb):
                v = c
                for br, D in zip(brs, split):
                    v *= backend(br, D)
                    if not v:
                        break
                if v:
                    total += v
                    nontrivial += 1
    return Evaluation(total, nontrivial)

