"""Exact psi and lambda_g intersection numbers, Pixton's DR formula and lambda_g constraints."""
from .exact import Rational, format_rational, parse_rational
from .psi import psi_integral
from .pixton import dr_pairing, hodge_integral, pixton_pairing
from .graphs import StableGraph, aut_order, enumerate_graphs, enumerate_trees
from .lambda_point import b_g, lambda_theorem_value, psi_point, theta_point
from .constraints import ThetaQuery, theta0, theta1_pixton
from .table import TABLE

__version__ = "0.1.0"
