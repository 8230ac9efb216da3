"""Exact rational helpers: symmetric functions, multinomials, interpolation.

``fractions.Fraction`` is the value type everywhere; it is always reduced
with a positive denominator, and its ``str`` is the ``p/q`` (or ``p``) text
form used by the cache file and the CLI.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .errors import ConsistencyError

Rational = Fraction

__all__ = [
    "Rational",
    "RPolynomial",
    "constant_term",
    "elem_sym",
    "format_rational",
    "interpolate",
    "multinomial",
    "parse_rational",
]


def format_rational(x) -> str:
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(c not in "0123456789-/" for c in text):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def elem_sym(k: int, values: Sequence) -> Fraction:
    """k-th elementary symmetric function of ``values``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > len(values):
        return Fraction(0)
    # e[i] holds e_i of the prefix seen so far
    e = [Fraction(1)] + [Fraction(0)] * k
    for x in values:
        for i in range(k, 0, -1):
            e[i] += e[i - 1] * x
    return e[k]


def multinomial(parts: Iterable[int]) -> Fraction:
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise ValueError("parts must be non-negative")
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return Fraction(out)


@dataclass(frozen=True)
class RPolynomial:
    """Univariate polynomial in r; ``coefficients[i]`` multiplies r**i."""

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def __call__(self, r) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * r + c
        return acc

    def __add__(self, other: "RPolynomial") -> "RPolynomial":
        a, b = self.coefficients, other.coefficients
        m = max(len(a), len(b))
        return RPolynomial(tuple(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(m)
        ))

    def __mul__(self, other: "RPolynomial") -> "RPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return RPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return RPolynomial(tuple(out))

    def scale(self, c) -> "RPolynomial":
        return RPolynomial(tuple(c * x for x in self.coefficients))

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono:
                terms.append(f"({c})*{mono}")
            else:
                terms.append(str(c))
        return " + ".join(terms)


def interpolate(samples: Sequence[tuple[int, Fraction]], degree_bound: int) -> RPolynomial:
    """Lagrange interpolation through the first ``degree_bound + 1`` samples.

    Every further sample must lie on the result exactly; otherwise
    ``ConsistencyError`` is raised (the bound or the r threshold was too small).
    """
    samples = [(int(r), Fraction(v)) for r, v in samples]
    need = degree_bound + 1
    if len(samples) < need:
        raise ValueError(f"need at least {need} samples, got {len(samples)}")
    xs = [r for r, _ in samples]
    if len(set(xs)) != len(xs):
        raise ValueError("sample abscissae must be distinct")

    basis_pts = samples[:need]
    result = RPolynomial()
    for i, (xi, yi) in enumerate(basis_pts):
        if yi == 0:
            continue
        num = RPolynomial((1,))
        denom = Fraction(1)
        for j, (xj, _) in enumerate(basis_pts):
            if j != i:
                num = num * RPolynomial((-xj, 1))
                denom *= xi - xj
        result = result + num.scale(yi / denom)

    for r, v in samples[need:]:
        if result(r) != v:
            raise ConsistencyError(
                f"sample at r={r} deviates from the degree-{degree_bound} fit"
            )
    return result


def constant_term(p: RPolynomial) -> Fraction:
    return p.coefficients[0] if p.coefficients else Fraction(0)
