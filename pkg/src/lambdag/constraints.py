"""Genus-0 lambda_g constraints for built-in targets, and the genus-1 Pixton form.

Three routes to the genus-1 constraint with P_1^1(0) in place of lambda_1:

* ``theta1_pixton``: the -12 form, genus-0 brackets with a phi_s phi^s pair;
* ``six_form``: the same after eliminating the genus-0 constraint, which
  must equal -1/2 of the -12 form;
* ``theta1_contracted``: each genus-1 bracket of the lambda_1 constraint is
  rewritten as a sum over stable graphs with their P_Gamma decorations and
  contracted by ``contract_graph``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .correlators import Bracket, Evaluation, Term, backend_for, evaluate
from .errors import UnsupportedTarget
from .graphs import StableGraph, enumerate_graphs
from .lambda_point import PointThetaQuery, theta_point
from .pixton import graph_class_polynomial
from .relations import e_coeff, six_form_terms, theta1_pixton_terms, theta_terms
from .targets import TargetModel, get_target

__all__ = [
    "ContractionSpec",
    "ThetaQuery",
    "contract_graph",
    "contraction_terms",
    "pixton_translate",
    "point_pixton_consistent",
    "six_form",
    "t_operator",
    "theta0",
    "theta0_eval",
    "theta1_contracted",
    "theta1_pixton",
    "theta1_report",
    "theta_pixton",
]


@dataclass(frozen=True)
class ThetaQuery:
    target: str
    n: int
    m: int
    beta: int = 0
    derivs: tuple = field(default=())
    degree: int = 0

    def __post_init__(self):
        X = get_target(self.target)
        if self.n < -1 or self.m < 0 or self.degree < 0:
            raise ValueError("need n >= -1, m >= 0, degree >= 0")
        if not 0 <= self.beta < X.rank:
            raise ValueError(f"beta out of range for {X.name}")
        derivs = tuple(sorted((int(r), int(a)) for r, a in self.derivs))
        if any(r < 0 or not 0 <= a < X.rank for r, a in derivs):
            raise ValueError("derivative directions out of range")
        object.__setattr__(self, "target", X.name)
        object.__setattr__(self, "derivs", derivs)

    @property
    def X(self) -> TargetModel:
        return get_target(self.target)

    def admissible(self, g: int = 0) -> bool:
        """Grading count for the genus-g constraint; False means identically 0."""
        X = self.X
        lhs = self.m + self.n + X.p(self.beta) + sum(r + X.p(a) - 1 for r, a in self.derivs)
        return lhs == (1 - g) * (X.dim - 3) + 1 - g + X.c1_degree * self.degree


def theta0_eval(q: ThetaQuery) -> Evaluation:
    terms = theta_terms(q.X, 0, q.n, q.m, q.beta, q.derivs)
    return evaluate(terms, q.derivs, q.degree, backend_for(q.X))


def theta0(q: ThetaQuery) -> Fraction:
    """Coefficient of q^degree and of the derivs in Theta_{0,n,m,beta} at t = 0."""
    return theta0_eval(q).value


# --- symbolic T operator and graph contraction ------------------------------

def t_operator(X: TargetModel, vec: list, power: int = 1) -> list:
    """Apply T `power` times to a vector expression.

    A vector expression is a list of ``(coeff, scalars, level, basis)`` where
    ``scalars`` is a tuple of genus-0 brackets multiplying the vector; this
    keeps the t-dependence of T visible to differentiation.
    T(tau_k(phi_b)) = tau_{k+1}(phi_b) - sum eta^{al,de} <<tau_k(phi_b) phi_de>>_0 phi_al.
    """
    for _ in range(power):
        out = []
        for c, scal, k, b in vec:
            out.append((c, scal, k + 1, b))
            for alpha in range(X.rank):
                for delta in range(X.rank):
                    e = X.eta_inv(alpha, delta)
                    if e:
                        br = Bracket(0, tuple(sorted([(k, b), (0, delta)])))
                        out.append((-c * e, scal + (br,), 0, alpha))
        vec = out
    return vec


def _vector(arg) -> list:
    """Accept {(level, basis): coeff}, a single (level, basis), or an expression list."""
    if isinstance(arg, dict):
        return [(Fraction(c), (), k, a) for (k, a), c in sorted(arg.items()) if c]
    if isinstance(arg, tuple) and len(arg) == 2:
        return [(Fraction(1), (), arg[0], arg[1])]
    return list(arg)


@dataclass(frozen=True)
class ContractionSpec:
    graph: StableGraph
    legs: tuple

    def __post_init__(self):
        if len(self.legs) != self.graph.n:
            raise ValueError(f"graph has {self.graph.n} legs, got {len(self.legs)} arguments")


def contraction_terms(spec: ContractionSpec, P: dict, target, coeff=1) -> list:
    """Terms of the contraction of a psi polynomial on the half-edges of a graph.

    ``P`` maps exponent tuples (legs, then both halves of each edge in order)
    to coefficients.  A leg with exponent a receives T^a of its argument; an
    edge with exponents (a, a') receives T^a(phi_al) (x) T^a'(phi^al).
    """
    X = get_target(target)
    G = spec.graph
    n, ne = G.n, len(G.edges)
    legs = [_vector(w) for w in spec.legs]
    owner = [G.vertex_of(h) for h in range(G.num_half_edges)]
    out = []
    for mono, c in sorted(P.items()):
        if len(mono) != G.num_half_edges:
            raise ValueError("monomial length must equal the number of half-edges")
        c = Fraction(coeff) * c
        if not c:
            continue
        slots = [t_operator(X, legs[i], mono[i]) for i in range(n)]
        edge_options = []
        for e in range(ne):
            h0, h1 = n + 2 * e, n + 2 * e + 1
            pairs = []
            for alpha in range(X.rank):
                left = t_operator(X, [(Fraction(1), (), 0, alpha)], mono[h0])
                right = t_operator(X, [(X.eta_inv(alpha, d), (), 0, d) for d in range(X.rank)
                                       if X.eta_inv(alpha, d)], mono[h1])
                pairs += list(product(left, right))
            edge_options.append(pairs)
        for picks in product(*slots, *edge_options):
            leg_picks, edge_picks = picks[:n], picks[n:]
            value = c
            scalars: list = []
            ins = [[] for _ in range(G.num_vertices)]
            for h, (ci, sc, k, a) in enumerate(leg_picks):
                value *= ci
                scalars += sc
                ins[owner[h]].append((k, a))
            for e, (l, r) in enumerate(edge_picks):
                for h, (ci, sc, k, a) in zip((n + 2 * e, n + 2 * e + 1), (l, r)):
                    value *= ci
                    scalars += sc
                    ins[owner[h]].append((k, a))
            if not value or any(k < 0 for v in ins for k, _ in v):
                continue
            brs = tuple(Bracket(G.genera[v], tuple(sorted(ins[v]))) for v in range(G.num_vertices))
            out.append(Term(value, (), brs + tuple(scalars)))
    return out


def contract_graph(spec: ContractionSpec, P: dict, target, degree: int = 0, derivs=()) -> Fraction:
    """Taylor coefficient at t = 0 of the contraction of P on spec.graph."""
    X = get_target(target)
    terms = contraction_terms(spec, P, X)
    return evaluate(terms, derivs, degree, backend_for(X)).value


# --- genus-1 Pixton constraint -----------------------------------------------

def pixton_translate(terms: list, target) -> list:
    """Replace every lambda_g bracket (g >= 1) by its P_g^g(0) graph expansion.

    Only products with one such bracket occur at genus 1; the remaining
    brackets ride along as scalar factors.
    """
    X = get_target(target)
    out = []
    for term in terms:
        hodge = [i for i, br in enumerate(term.brackets) if br.genus >= 1 and br.lam == br.genus]
        if not hodge:
            if any(br.lam > 0 for br in term.brackets):
                continue
            out.append(term)
            continue
        if len(hodge) > 1:
            raise UnsupportedTarget("products of several positive-genus brackets")
        i = hodge[0]
        br = term.brackets[i]
        rest = term.brackets[:i] + term.brackets[i + 1:]
        k = len(br.insertions)
        if 2 * br.genus - 2 + k <= 0:
            continue
        for G in enumerate_graphs(br.genus, k, max_edges=br.genus):
            P = graph_class_polynomial(G, br.genus)
            if not P:
                continue
            spec = ContractionSpec(G, tuple(br.insertions))
            for t in contraction_terms(spec, P, X, term.coeff):
                out.append(Term(t.coeff, term.factors, t.brackets + rest))
    return out


def _theta1_terms(q: ThetaQuery):
    return theta1_pixton_terms(q.X, q.n, q.m, q.beta, q.derivs)


def theta1_pixton(q: ThetaQuery) -> Fraction:
    """Theta^P_{1,n,m,beta} from its expression through genus-0 brackets."""
    return evaluate(_theta1_terms(q), q.derivs, q.degree, backend_for(q.X)).value / -12


def six_form(q: ThetaQuery) -> Fraction:
    """The two-sum form; equals 6 * Theta^P_{1,n,m,beta}."""
    terms = six_form_terms(q.X, q.n, q.m, q.beta, q.derivs)
    return evaluate(terms, q.derivs, q.degree, backend_for(q.X)).value


def theta1_contracted(q: ThetaQuery) -> Fraction:
    """Theta^P_{1,n,m,beta} by graph contraction of the lambda_1 constraint."""
    terms = pixton_translate(theta_terms(q.X, 1, q.n, q.m, q.beta, q.derivs), q.X)
    return evaluate(terms, q.derivs, q.degree, backend_for(q.X)).value


@dataclass(frozen=True)
class Theta1Report:
    minus12: Fraction
    six: Fraction
    nontrivial: int

    @property
    def ratio_ok(self) -> bool:
        return self.minus12 == -2 * self.six

    @property
    def value(self) -> Fraction:
        return self.minus12 / -12


def theta1_report(q: ThetaQuery) -> Theta1Report:
    """Both forms of the genus-1 constraint; check ``ratio_ok`` before ``value``."""
    backend = backend_for(q.X)
    big = evaluate(_theta1_terms(q), q.derivs, q.degree, backend)
    six = evaluate(six_form_terms(q.X, q.n, q.m, q.beta, q.derivs), q.derivs, q.degree, backend)
    return Theta1Report(big.value, six.value, big.nontrivial)


def theta_pixton(target, g: int, n: int, m: int, beta: int = 0, derivs=(), degree: int = 0) -> Fraction:
    """Theta^P_g for g <= 1 on any built-in target, any g for the point.

    For the point each bracket picks up (-2)^g_i from lambda = (-1/2)^g P,
    so Theta^P_g = (-2)^g Theta_g.
    """
    X = get_target(target)
    if g == 0:
        return theta0(ThetaQuery(X.name, n, m, beta, derivs, degree))
    if g == 1:
        return theta1_pixton(ThetaQuery(X.name, n, m, beta, derivs, degree))
    if X.dim != 0:
        raise UnsupportedTarget(f"genus-{g} constraint for {X.name} needs higher-genus invariants")
    return (-2) ** g * theta_point(g, n, m, [r for r, _ in derivs])


def point_pixton_consistent(n: int, m: int, derivs=()) -> bool:
    """Genus-1 check at the point: the graph routes agree with -2 * theta_point."""
    q = ThetaQuery("point", n, m, 0, tuple((r, 0) for r in derivs), 0)
    expected = -2 * theta_point(PointThetaQuery(1, n, m, tuple(derivs)))
    return theta1_pixton(q) == expected and theta1_contracted(q) == expected


def third_sum_zero_violations(X: TargetModel, n: int) -> list:
    """(j, s, alpha) where the argument list contains 0 but e_{n+1-j} does not vanish.

    Only the full product j = 0 is forced to vanish by a zero argument.
    """
    bad = []
    for alpha in range(X.rank):
        for s in range(n):
            start = -s + X.b_up(alpha) - Fraction(3, 2)
            if 0 in [start + i for i in range(n + 1)] and e_coeff(n + 1, start, n):
                bad.append((0, s, alpha))
    return bad
