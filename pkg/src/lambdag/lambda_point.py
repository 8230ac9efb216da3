"""The lambda_g theorem and the lambda_g constraints for the point target."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .correlators import Evaluation, PointBackend, evaluate
from .errors import UnsupportedGenus
from .exact import multinomial
from .pixton import hodge_integral
from .relations import psi_terms, theta_terms
from .targets import get_target

__all__ = [
    "PointThetaQuery",
    "b_g",
    "lambda_theorem_value",
    "psi_point",
    "theta_point",
    "theta_point_eval",
]

POINT = get_target("point")


def b_g(g: int) -> Fraction:
    """<tau_{2g-2} lambda_g>_g, with b_0 = 1."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    if g == 0:
        return Fraction(1)
    return hodge_integral(g, (2 * g - 2,))


def lambda_theorem_value(g: int, exponents: Sequence[int]) -> Fraction:
    """Closed form multinomial(2g-3+n; a) * b_g, or 0 off the dimension."""
    exps = list(exponents)
    if any(a < 0 for a in exps):
        raise ValueError("exponents must be non-negative")
    if sum(exps) != 2 * g - 3 + len(exps):
        return Fraction(0)
    return multinomial(exps) * b_g(g)


@dataclass(frozen=True)
class PointThetaQuery:
    g: int
    n: int
    m: int
    derivs: tuple = field(default=())

    def __post_init__(self):
        if self.g < 0 or self.n < -1 or self.m < 0:
            raise ValueError("need g >= 0, n >= -1, m >= 0")
        object.__setattr__(self, "derivs", tuple(sorted(int(r) for r in self.derivs)))

    @property
    def directions(self) -> list:
        return [(r, 0) for r in self.derivs]

    def admissible(self) -> bool:
        """Degree count: sum over derivs of (r - 1) must equal 2g - 2 - m - n."""
        return sum(r - 1 for r in self.derivs) == 2 * self.g - 2 - self.m - self.n


def theta_point_eval(q: PointThetaQuery) -> Evaluation:
    terms = theta_terms(POINT, q.g, q.n, q.m, 0, q.directions)
    return evaluate(terms, q.directions, 0, PointBackend())


def theta_point(q: PointThetaQuery | int, n: int | None = None, m: int | None = None, derivs=()) -> Fraction:
    """Derivative of Theta_{g,n,m} along derivs at t = 0, for the point.

    Accepts a query object or ``theta_point(g, n, m, derivs)``.
    """
    if not isinstance(q, PointThetaQuery):
        q = PointThetaQuery(q, n, m, tuple(derivs))
    return theta_point_eval(q).value


def psi_point(g: int, n: int, derivs=()) -> Fraction:
    """Derivative of Psi_{g,n} along derivs at t = 0, for the point (g <= 1)."""
    if g >= 2:
        raise UnsupportedGenus("Psi_{g,n} is only available for g <= 1")
    dirs = [(int(r), 0) for r in derivs]
    return evaluate(psi_terms(POINT, g, n, dirs), dirs, 0, PointBackend()).value
